"""
Pulse-sequence compiler.

Every nonzero coefficient C[m, n] costs exactly one resonant (m, n) sideband
pulse.  Pulses are applied along anti-diagonals of increasing m + n, and
within an anti-diagonal in order of increasing m.  With this order, the
|g1> amplitudes deposited earlier never couple to a later sideband.  Before
each pulse all the |g2> population sits in |g2, 0, 0> with amplitude R (the
residual).  The pulse rotates the fraction |c| / R of it into |g1, m, n>.
"""

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .coupling import TrapConfig, rabi_exact, sideband_detuning, wrap_phase
from .errors import InputError, PlannerError
from .fock import ModeIndex, TargetSpec

DEFAULT_ZERO_TOL = 1e-12
RESIDUAL_TOL = 1e-9
_MIN_COUPLING = 1e-300


@dataclass
class Pulse:
    m: int
    n: int
    detuning: float
    laser_phase: float
    duration: float
    target_coeff: complex = 0j

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "detuning": self.detuning,
                "laser_phase": self.laser_phase, "duration": self.duration,
                "coeff_re": float(self.target_coeff.real),
                "coeff_im": float(self.target_coeff.imag)}

    @classmethod
    def from_dict(cls, d) -> "Pulse":
        try:
            return cls(int(d["m"]), int(d["n"]), float(d["detuning"]),
                       float(d["laser_phase"]), float(d["duration"]),
                       complex(float(d["coeff_re"]), float(d["coeff_im"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed pulse record: {exc}") from None


@dataclass
class PulseSequence:
    pulses: List[Pulse] = field(default_factory=list)
    skipped: List[ModeIndex] = field(default_factory=list)
    #: residual amplitude left in |g2, 0, 0> after each pulse
    residuals: List[float] = field(default_factory=list)

    def __len__(self):
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    @property
    def total_duration(self) -> float:
        return float(sum(p.duration for p in self.pulses))

    @property
    def longest_pulse(self) -> Optional[Pulse]:
        return max(self.pulses, key=lambda p: p.duration, default=None)

    def over_budget(self, budget) -> List[int]:
        """Indices of pulses longer than ``budget`` (time units of 1/omega)."""
        return [i for i, p in enumerate(self.pulses) if p.duration > budget]

    def to_list(self) -> list:
        return [p.to_dict() for p in self.pulses]

    def to_json(self) -> str:
        # json writes floats with repr(), the shortest string that round-trips exactly
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text, skipped=()) -> "PulseSequence":
        data = json.loads(text)
        if not isinstance(data, list):
            raise InputError("pulse sequence JSON must be an array")
        return cls([Pulse.from_dict(d) for d in data], [ModeIndex(*s) for s in skipped])


def diagonal_position(m, n) -> int:
    """1-based slot of (m, n) in the pulse order."""
    s = m + n
    return s * (s + 1) // 2 + m + 1


def diagonal_order(total) -> List[ModeIndex]:
    """All (m, n) with m + n <= total, in pulse order."""
    if total < 0:
        raise InputError("total must be non-negative")
    return [ModeIndex(m, s - m) for s in range(total + 1) for m in range(s + 1)]


def plan(spec: TargetSpec, cfg: TrapConfig, zero_tol=DEFAULT_ZERO_TOL) -> PulseSequence:
    """Compile ``spec`` into the pulse sequence that prepares it from |g2, 0, 0>.

    Durations use the principal branch of arcsin; laser phases are wrapped
    to (-pi, pi].
    """
    seq = PulseSequence()
    order = diagonal_order(spec.M + spec.N)
    weights = [abs(spec.coeffs[m, n]) ** 2 if m <= spec.M and n <= spec.N else 0.0
               for m, n in order]
    # amplitude still in |g2, 0, 0>: summing the tail avoids sqrt(1 - sum) cancellation
    tails = np.cumsum(weights[::-1])[::-1].tolist() + [0.0]
    placed = 0.0
    for pos, (m, n) in enumerate(order):
        if m > spec.M or n > spec.N:
            seq.skipped.append(ModeIndex(m, n))
            continue
        c = complex(spec.coeffs[m, n])
        size = abs(c)
        if size <= zero_tol:
            seq.skipped.append(ModeIndex(m, n))
            continue
        if size > math.sqrt(max(1.0 - placed, 0.0)) * (1 + RESIDUAL_TOL):
            raise PlannerError(
                f"unnormalized-residual: |C[{m},{n}]| = {size!r} exceeds remaining amplitude "
                f"{math.sqrt(max(1.0 - placed, 0.0))!r}", mode=(m, n))
        bare = rabi_exact(m, n, 0, 0, cfg)
        if bare.magnitude < _MIN_COUPLING:
            raise PlannerError(f"zero-coupling: sideband ({m},{n}) has vanishing Rabi frequency",
                               mode=(m, n))
        residual = math.sqrt(tails[pos])
        angle = math.asin(min(size / residual, 1.0))
        # transferred amplitude is -i exp(-i phi_mn) sin(angle) R; its phase must equal arg(c)
        laser_phase = wrap_phase(-np.angle(c) - math.pi / 2 - bare.phase)
        seq.pulses.append(Pulse(m, n, sideband_detuning(m, n, cfg), laser_phase,
                                angle / bare.magnitude, c))
        placed += size * size
        seq.residuals.append(math.sqrt(tails[pos + 1]))
    return seq


def scheme_comparison(M, N) -> dict:
    """Operation counts of published two-mode synthesis schemes next to this one."""
    if M < 0 or N < 0:
        raise InputError("M and N must be non-negative")
    return {
        "gardiner": "exponential",
        "kneer_law": (2 * M + 1) * (N + 1) + 2 * N,
        "drobny": 2 * (M + N) ** 2,
        "zheng": (M + 2) * (N + 1),
        "this_work": (M + 1) * (N + 1),
    }


def pulse_bound(M, N) -> int:
    return (M + 1) * (N + 1)


def deposited_modes(seq: PulseSequence) -> List[Tuple[int, int]]:
    return [(p.m, p.n) for p in seq.pulses]
