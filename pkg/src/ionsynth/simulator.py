"""
Pulse-sequence execution at three levels of modelling.

IDEAL      closed-form rotation of the |g2,0,0> <-> |g1,m,n> pair; valid only
           while the protocol invariant holds (no |g2> population off |0,0>).
RESONANT   exact evolution under the resonant (m, n) sideband Hamiltonian.  It
           is block diagonal in pairs |g2,k,l> <-> |g1,k+m,l+n>, so each pulse
           is a set of independent 2x2 rotations.
FULL       every sideband of the drive.  In the frame co-rotating with the
           laser the generator is constant.  Fixed-step RK4 applied to a
           constant linear system multiplies the state by the same matrix
           polynomial every step, so N steps are done by binary powering of
           that matrix.  The step is halved until two successive step sizes
           agree in fidelity (``tol``) and in amplitude (``atol``).

All states are in the interaction picture of the bare ion + trap Hamiltonian;
free evolution between pulses is the identity there.
"""

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .coupling import TrapConfig, caps_for, coupling_table, build_full_interaction, rabi_exact
from .errors import (InputError, ProtocolViolation, SimulationError, SynthesisError,
                     TruncationLeakWarning)
from .fock import ElectronicLevel, StateVector, TargetSpec, basis_state, target_state
from .planner import Pulse, PulseSequence

G1, G2 = ElectronicLevel.G1, ElectronicLevel.G2

#: |g2> population tolerated outside |0,0> before the closed-form relations are refused
INVARIANT_TOL = 1e-24
_EPS = float(np.finfo(float).eps)


class SimTier(str, Enum):
    IDEAL = "ideal"
    RESONANT = "resonant"
    FULL = "full"


@dataclass
class IntegratorOptions:
    tol: float = 1e-8             # accepted fidelity change between h and h/2
    atol: float = 1e-9            # accepted Richardson amplitude error estimate
    initial_phase_step: float = 0.5  # first step times spectral radius of the generator
    min_step: float = 1e-12
    max_halvings: int = 40
    diverge_tol: float = 1e-6     # norm drift that aborts a pulse


@dataclass
class IntegratorStats:
    steps: int = 0
    step: float = 0.0
    error_estimate: float = 0.0   # Richardson estimate ||psi_h - psi_h/2|| / 15
    fidelity_delta: float = 0.0
    halvings: int = 0
    norm_drift: float = 0.0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SimResult:
    final_state: StateVector
    fidelity: float
    tier: SimTier
    trace: List[Tuple[int, float, float]] = field(default_factory=list)
    invariant_violations: int = 0
    integrator_stats: Optional[List[IntegratorStats]] = None

    def summary(self) -> dict:
        out = {"tier": self.tier.value, "fidelity": self.fidelity,
               "invariant_violations": self.invariant_violations,
               "trace": [{"pulse": i, "norm": nrm, "overlap": ov} for i, nrm, ov in self.trace]}
        if self.integrator_stats is not None:
            out["integrator"] = {
                "steps": sum(s.steps for s in self.integrator_stats),
                "max_error_estimate": max((s.error_estimate for s in self.integrator_stats), default=0.0),
                "pulses": [s.to_dict() for s in self.integrator_stats],
            }
        return out

    def to_dict(self) -> dict:
        out = self.summary()
        out["final_state"] = self.final_state.to_dict()
        return out


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.caps != b.caps:
        raise InputError(f"cap mismatch: {a.caps} vs {b.caps}")
    return float(abs(np.vdot(a.flat, b.flat)) ** 2)


def _check_fits(pulse, state):
    if pulse.m > state.cap_x or pulse.n > state.cap_y:
        raise SimulationError(
            f"sideband ({pulse.m}, {pulse.n}) exceeds truncation caps {state.caps}")


def g2_leak(state: StateVector) -> float:
    """|g2> population outside |g2, 0, 0>."""
    g2 = state.amp[G2]
    return float(np.sum(np.abs(g2) ** 2) - abs(g2[0, 0]) ** 2)


def _rotate(a, b, coupling, duration):
    """exp(-i t [[0, c], [c*, 0]]) applied to (a, b), elementwise over arrays."""
    mag = np.abs(coupling)
    unit = np.divide(coupling, mag, out=np.zeros_like(coupling), where=mag > 0)
    cos, sin = np.cos(mag * duration), np.sin(mag * duration)
    return cos * a - 1j * unit * sin * b, -1j * np.conj(unit) * sin * a + cos * b


def apply_ideal(state: StateVector, pulse: Pulse, cfg: TrapConfig) -> StateVector:
    _check_fits(pulse, state)
    m, n = pulse.m, pulse.n
    leak = g2_leak(state)
    if leak > INVARIANT_TOL:
        raise ProtocolViolation(
            f"protocol-invariant-violation: |g2> population {leak:.3e} outside |0,0>")
    g1 = state.amp[G1]
    coupled = np.sum(np.abs(g1[m:, n:]) ** 2) - abs(g1[m, n]) ** 2
    if coupled > INVARIANT_TOL:
        raise ProtocolViolation(
            f"protocol-invariant-violation: |g1> population {coupled:.3e} on levels "
            f"reachable by the ({m}, {n}) sideband")
    c = rabi_exact(m, n, 0, 0, cfg, pulse.laser_phase).value
    out = state.copy()
    out.amp[G2, 0, 0], out.amp[G1, m, n] = _rotate(
        state.amp[G2, 0, 0], state.amp[G1, m, n], np.complex128(c), pulse.duration)
    return out


def apply_resonant(state: StateVector, pulse: Pulse, cfg: TrapConfig) -> StateVector:
    _check_fits(pulse, state)
    m, n = pulse.m, pulse.n
    table = coupling_table(m, n, cfg, pulse.laser_phase, state.caps)
    rows, cols = table.shape
    g2 = state.amp[G2]
    stranded = np.sum(np.abs(g2) ** 2) - np.sum(np.abs(g2[:rows, :cols]) ** 2)
    if stranded > INVARIANT_TOL:
        warnings.warn(
            f"truncation leak: |g2> population {stranded:.3e} couples above caps {state.caps} "
            f"on the ({m}, {n}) sideband", TruncationLeakWarning, stacklevel=2)
    out = state.copy()
    out.amp[G2, :rows, :cols], out.amp[G1, m:, n:] = _rotate(
        state.amp[G2, :rows, :cols], state.amp[G1, m:, n:], table, pulse.duration)
    return out


def rk4_step_matrix(H, h) -> np.ndarray:
    """Matrix that one classical RK4 step of  dpsi/dt = -i H psi  applies."""
    z = -1j * h * H
    eye = np.eye(len(H), dtype=complex)
    return eye + z @ (eye + z @ (eye + z @ (eye + z / 4) / 3) / 2)


def _state_fidelity(u, v) -> float:
    return float(abs(np.vdot(u, v)) ** 2 / (np.vdot(u, u).real * np.vdot(v, v).real))


def propagate_full(state: StateVector, pulse: Pulse, cfg: TrapConfig,
                   opts: Optional[IntegratorOptions] = None, t_start=0.0):
    """Run one pulse with the full drive; returns (state, IntegratorStats).

    ``t_start`` is the global clock at the start of the pulse; it fixes the
    phases of the off-resonant terms relative to the laser.
    """
    opts = opts or IntegratorOptions()
    _check_fits(pulse, state)
    stats = IntegratorStats()
    if pulse.duration == 0:
        return state.copy(), stats
    inter = build_full_interaction(cfg, pulse.detuning, pulse.laser_phase, state.caps)
    H = inter.rotating_hamiltonian()
    energies = inter.frame_diagonal
    psi = np.exp(-1j * energies * t_start) * state.flat
    # a multiple of the identity only adds a global phase; centring the spectrum halves the radius
    spread = np.linalg.eigvalsh(H)
    shift = 0.5 * (spread[0] + spread[-1])
    H = H - shift * np.eye(len(H))
    radius = 0.5 * float(spread[-1] - spread[0])
    steps = max(1, math.ceil(pulse.duration * radius / opts.initial_phase_step))

    def advance(count):
        P = rk4_step_matrix(H, pulse.duration / count)
        return np.linalg.matrix_power(P, count) @ psi

    previous = advance(steps)
    for halving in range(1, opts.max_halvings + 1):
        steps *= 2
        h = pulse.duration / steps
        if h < opts.min_step:
            raise SimulationError(f"step-floor: step {h:.3e} below minimum {opts.min_step:.3e}")
        current = advance(steps)
        delta = abs(_state_fidelity(previous, current) - 1.0)
        estimate = float(np.linalg.norm(current - previous)) / 15
        drift = abs(np.linalg.norm(current) - np.linalg.norm(psi))
        # rounding in P**steps grows like steps * eps; no step size can beat that floor
        floor = max(opts.atol, steps * _EPS)
        if delta < opts.tol and estimate <= floor and drift <= opts.diverge_tol:
            break
        previous = current
    else:
        raise SimulationError(
            f"integrator-diverged: no convergence after {opts.max_halvings} halvings")
    stats = IntegratorStats(steps=steps, step=h, halvings=halving, fidelity_delta=delta,
                            error_estimate=estimate,
                            norm_drift=drift)
    current = np.exp(1j * (energies * (t_start + pulse.duration) - shift * pulse.duration)) * current
    current /= np.linalg.norm(current)
    return StateVector.from_flat(current, *state.caps), stats


def apply_full(state: StateVector, pulse: Pulse, cfg: TrapConfig,
               opts: Optional[IntegratorOptions] = None, t_start=0.0) -> StateVector:
    return propagate_full(state, pulse, cfg, opts, t_start)[0]


def free_evolution(state: StateVector, cfg: TrapConfig, duration) -> StateVector:
    """Motional phases exp(-i (nu_x n_x + nu_y n_y) t) of undriven evolution.

    Converts an interaction-picture state to the lab frame (up to the
    electronic phase, which does not affect motional overlaps).
    """
    kk, ll = np.meshgrid(np.arange(state.cap_x + 1), np.arange(state.cap_y + 1), indexing="ij")
    phase = np.exp(-1j * (cfg.nu_x * kk + cfg.nu_y * ll) * duration)
    return StateVector(state.cap_x, state.cap_y, state.amp * phase[None, :, :])


def default_caps(target: TargetSpec, cfg: TrapConfig, tier: SimTier):
    return caps_for(target.M, target.N, cfg, padded=(tier == SimTier.FULL))


def run_sequence(seq: PulseSequence, target: TargetSpec, cfg: TrapConfig, tier=SimTier.IDEAL,
                 caps=None, gap=0.0, opts: Optional[IntegratorOptions] = None,
                 check_invariant=True) -> SimResult:
    """Start from |g2, 0, 0>, apply ``seq`` and score against target x |g1>.

    ``gap`` is idle time between pulses.  It only advances the clock that
    phases the FULL-tier off-resonant terms.  With ``check_invariant`` the
    IDEAL/RESONANT runs raise as soon as |g2> population leaves |0,0>.
    """
    tier = SimTier(tier)
    caps = tuple(caps) if caps else default_caps(target, cfg, tier)
    goal = target_state(target, caps)
    psi = basis_state(G2, (0, 0), caps)
    trace, all_stats, violations = [], [], 0
    clock = 0.0
    for i, pulse in enumerate(seq.pulses):
        try:
            if tier == SimTier.IDEAL:
                psi = apply_ideal(psi, pulse, cfg)
            elif tier == SimTier.RESONANT:
                psi = apply_resonant(psi, pulse, cfg)
            else:
                psi, stats = propagate_full(psi, pulse, cfg, opts, t_start=clock)
                all_stats.append(stats)
        except SynthesisError as exc:
            cls = type(exc) if isinstance(exc, SimulationError) else SimulationError
            raise cls(f"pulse {i} ({pulse.m},{pulse.n}): {exc}", pulse_index=i) from exc
        clock += pulse.duration + gap
        if tier != SimTier.FULL:
            leak = g2_leak(psi)
            if leak > INVARIANT_TOL:
                violations += 1
                if check_invariant:
                    raise ProtocolViolation(
                        f"pulse {i} ({pulse.m},{pulse.n}): protocol-invariant-violation, "
                        f"|g2> population {leak:.3e} outside |0,0>", pulse_index=i)
        trace.append((i, psi.norm(), fidelity(goal, psi)))
    return SimResult(
        final_state=psi,
        fidelity=fidelity(goal, psi),
        tier=tier,
        trace=trace,
        invariant_violations=violations,
        integrator_stats=all_stats if tier == SimTier.FULL else None,
    )
