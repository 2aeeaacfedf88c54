"""
Raman sideband couplings of a single ion in a two-dimensional trap.

Units: hbar = 1 and, by default, the bare Raman coupling omega = 1 fixes the
time unit.  The laser drives |g1> <-> |g2> through the motional operator

    D = exp(i eta_x (a + a^dag)) exp(i eta_y (b + b^dag))

so the coupling between |g2, k, l> and |g1, k + m, l + n> is
omega * exp(i phi) * <k|D_x|k + m> <l|D_y|l + n>.  The single-mode matrix
elements are evaluated from the finite normal-ordered series (equivalently a
generalized Laguerre polynomial) without truncating any sum.
"""

import math
from dataclasses import asdict, dataclass
from typing import Tuple

import numpy as np

from .errors import InputError
from .fock import ElectronicLevel

GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass
class TrapConfig:
    """Trap, laser and truncation parameters.

    The default trap has nu_x / nu_y = 6 * golden ratio (irrational, > 9), which
    separates every sideband line with m, n <= 3 by at least nu_y = 100 omega.
    """

    nu_x: float = 600 * GOLDEN
    nu_y: float = 100.0
    eta_x: float = 0.1
    eta_y: float = 0.1
    omega: float = 1.0
    omega_0: float = 0.0
    cap_margin: int = 4

    def __post_init__(self):
        if not (self.nu_x > 0 and self.nu_y > 0):
            raise InputError("trap frequencies must be positive")
        if self.eta_x < 0 or self.eta_y < 0:
            raise InputError("Lamb-Dicke parameters must be non-negative")
        if not self.omega > 0:
            raise InputError("omega must be positive")
        if int(self.cap_margin) != self.cap_margin or self.cap_margin < 0:
            raise InputError("cap_margin must be a non-negative integer")
        self.cap_margin = int(self.cap_margin)

    @classmethod
    def from_dict(cls, d) -> "TrapConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise InputError(f"unknown trap config keys: {sorted(unknown)}")
        try:
            kwargs = {k: (int(v) if k == "cap_margin" else float(v)) for k, v in d.items()}
        except (TypeError, ValueError) as exc:
            raise InputError(f"trap config value is malformed: {exc}") from None
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return asdict(self)

    def scaled(self, factor) -> "TrapConfig":
        """Same trap with both frequencies multiplied by ``factor``."""
        d = self.to_dict()
        d["nu_x"] *= factor
        d["nu_y"] *= factor
        return TrapConfig(**d)


@dataclass(frozen=True)
class SidebandCoupling:
    m: int
    n: int
    magnitude: float
    phase: float

    @classmethod
    def from_complex(cls, m, n, value) -> "SidebandCoupling":
        return cls(m, n, abs(value), wrap_phase(np.angle(value)) if value != 0 else 0.0)

    @property
    def value(self) -> complex:
        return self.magnitude * np.exp(1j * self.phase)


def wrap_phase(phi) -> float:
    """Map an angle to (-pi, pi]."""
    wrapped = math.remainder(float(phi), 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def displacement_element(eta, row, col) -> complex:
    """<row| exp(i eta (a + a^dag)) |col>.

    With p = min(row, col), d = |row - col| the element is

        e^{-eta^2/2} (i eta)^d sqrt(p!/(p+d)!) L_p^{(d)}(eta^2)

    summed here term by term (p + 1 terms, no truncation).
    """
    p, d = min(row, col), abs(row - col)
    x = eta * eta
    total = 0.0
    for s in range(p + 1):
        total += math.comb(p + d, p - s) * (-x) ** s / math.factorial(s)
    prefactor = math.exp(-x / 2 - 0.5 * (math.lgamma(p + d + 1) - math.lgamma(p + 1)))
    return prefactor * eta ** d * total * 1j ** d


def displacement_matrix(eta, cap) -> np.ndarray:
    """Exact elements of exp(i eta (a + a^dag)) restricted to n <= cap.

    This is a block of the infinite operator, not the exponential of a
    truncated generator.
    """
    D = np.empty((cap + 1, cap + 1), dtype=complex)
    for r in range(cap + 1):
        for c in range(r, cap + 1):
            D[r, c] = D[c, r] = displacement_element(eta, r, c)
    return D


def sideband_diagonal(eta, order, count) -> np.ndarray:
    """[<k|D|k + order> for k in range(count)]."""
    return np.array([displacement_element(eta, k, k + order) for k in range(count)])


def rabi_paper(m, n, cfg: TrapConfig, laser_phase=0.0) -> SidebandCoupling:
    """Coupling as written in the closed-form Lamb-Dicke expression.

    Lacks the sqrt(m! n!) Fock matrix element, so
    ``rabi_exact(m, n, 0, 0).magnitude == sqrt(m! n!) * rabi_paper(m, n).magnitude``.
    Kept for diagnostics only; nothing in planning or simulation uses it.
    """
    magnitude = (cfg.omega * math.exp(-(cfg.eta_x ** 2 + cfg.eta_y ** 2) / 2)
                 * cfg.eta_x ** m * cfg.eta_y ** n / (math.factorial(m) * math.factorial(n)))
    return SidebandCoupling(m, n, magnitude, wrap_phase(laser_phase + (m + n) * math.pi / 2))


def rabi_exact(m, n, k, l, cfg: TrapConfig, laser_phase=0.0) -> SidebandCoupling:
    """Coupling <g2, k, l| H |g1, k + m, l + n> of the resonant (m, n) sideband."""
    if min(m, n, k, l) < 0:
        raise InputError("sideband orders and Fock indices must be non-negative")
    value = (cfg.omega * np.exp(1j * laser_phase)
             * displacement_element(cfg.eta_x, k, k + m)
             * displacement_element(cfg.eta_y, l, l + n))
    return SidebandCoupling.from_complex(m, n, value)


def coupling_table(m, n, cfg: TrapConfig, laser_phase, caps) -> np.ndarray:
    """Couplings of every pair |g2, k, l> <-> |g1, k + m, l + n> inside ``caps``.

    Entry [k, l] belongs to the pair rooted at |g2, k, l>; shape
    (cap_x + 1 - m, cap_y + 1 - n), empty when the sideband does not fit.
    """
    cx, cy = caps
    rows, cols = max(cx + 1 - m, 0), max(cy + 1 - n, 0)
    dx = sideband_diagonal(cfg.eta_x, m, rows)
    dy = sideband_diagonal(cfg.eta_y, n, cols)
    return cfg.omega * np.exp(1j * laser_phase) * np.outer(dx, dy)


def build_resonant_hamiltonian(m, n, cfg: TrapConfig, laser_phase, caps) -> np.ndarray:
    """Dense resonant (m, n) sideband Hamiltonian on the truncated space.

    Basis ordering is the StateVector flat index; the |g1><g2| entries carry
    the conjugated couplings, so the matrix is Hermitian by construction.
    """
    cx, cy = caps
    if m > cx or n > cy:
        raise InputError(f"sideband ({m}, {n}) does not fit in caps {caps}")
    block = (cx + 1) * (cy + 1)
    H = np.zeros((2 * block, 2 * block), dtype=complex)
    table = coupling_table(m, n, cfg, laser_phase, caps)
    for (k, l), value in np.ndenumerate(table):
        g2 = block * ElectronicLevel.G2 + k * (cy + 1) + l
        g1 = block * ElectronicLevel.G1 + (k + m) * (cy + 1) + (l + n)
        H[g2, g1] = value
        H[g1, g2] = np.conj(value)
    return H


class FullInteraction:
    """Interaction-picture generator of one rectangular laser pulse.

    Keeps every sideband of the drive, not only the resonant one:

        <g2, k', l'| H(t) |g1, k, l>
            = omega e^{i phi} <k'|D_x|k> <l'|D_y|l> e^{-i((k - k') nu_x + (l - l') nu_y + detuning) t}

    ``detuning`` is the two-photon laser detuning from the carrier.  Entries of
    the (m, n) sideband with detuning = -m nu_x - n nu_y are static.

    Equivalently H(t) = exp(i H_d t) V exp(-i H_d t) with the constant
    ``frame_diagonal`` H_d and ``coupling`` V; H_d + V is the time-independent
    generator in the frame co-rotating with the laser.
    """

    def __init__(self, cfg: TrapConfig, detuning, laser_phase, caps):
        self.cfg = cfg
        self.detuning = float(detuning)
        self.laser_phase = float(laser_phase)
        self.caps = tuple(caps)
        cx, cy = self.caps
        self.block = (cx + 1) * (cy + 1)
        Dx = displacement_matrix(cfg.eta_x, cx)
        Dy = displacement_matrix(cfg.eta_y, cy)
        # rows: g2 (k', l'), columns: g1 (k, l)
        self.upper = cfg.omega * np.exp(1j * laser_phase) * np.kron(Dx, Dy)
        kk, ll = np.meshgrid(np.arange(cx + 1), np.arange(cy + 1), indexing="ij")
        kk, ll = kk.reshape(-1), ll.reshape(-1)
        motional = cfg.nu_x * kk + cfg.nu_y * ll
        # E_g2 - E_g1 with E_g2 = -detuning/2 + motional, E_g1 = +detuning/2 + motional;
        # integer differences first so resonant entries cancel exactly
        dk = kk[None, :] - kk[:, None]
        dl = ll[None, :] - ll[:, None]
        self.upper_freq = -(dk * cfg.nu_x + dl * cfg.nu_y + self.detuning)
        g1 = ElectronicLevel.G1 * self.block
        self.energies = np.empty(2 * self.block)
        self.energies[g1:g1 + self.block] = self.detuning / 2 + motional
        g2 = ElectronicLevel.G2 * self.block
        self.energies[g2:g2 + self.block] = -self.detuning / 2 + motional

    @property
    def dim(self) -> int:
        return 2 * self.block

    def _assemble(self, upper) -> np.ndarray:
        H = np.zeros((self.dim, self.dim), dtype=complex)
        g1 = slice(ElectronicLevel.G1 * self.block, (ElectronicLevel.G1 + 1) * self.block)
        g2 = slice(ElectronicLevel.G2 * self.block, (ElectronicLevel.G2 + 1) * self.block)
        H[g2, g1] = upper
        H[g1, g2] = upper.conj().T
        return H

    def __call__(self, t) -> np.ndarray:
        return self._assemble(self.upper * np.exp(1j * self.upper_freq * t))

    @property
    def coupling(self) -> np.ndarray:
        return self._assemble(self.upper)

    @property
    def frame_diagonal(self) -> np.ndarray:
        return self.energies

    def rotating_hamiltonian(self) -> np.ndarray:
        """Constant generator H_d + V in the laser-co-rotating frame."""
        return np.diag(self.energies).astype(complex) + self.coupling

    def time_average(self, period) -> np.ndarray:
        """Exact average of H(t) over [0, period]."""
        w = self.upper_freq * period
        with np.errstate(invalid="ignore", divide="ignore"):
            factor = np.where(np.abs(w) < 1e-12, 1.0, (np.exp(1j * w) - 1) / (1j * w))
        return self._assemble(self.upper * factor)

    def resonant_entries(self, m, n) -> np.ndarray:
        """Boolean mask over ``upper``: entries linking |g2,k,l> and |g1,k+m,l+n>."""
        cx, cy = self.caps
        kk, ll = np.meshgrid(np.arange(cx + 1), np.arange(cy + 1), indexing="ij")
        kk, ll = kk.reshape(-1), ll.reshape(-1)
        return (kk[None, :] - kk[:, None] == m) & (ll[None, :] - ll[:, None] == n)


def build_full_interaction(cfg: TrapConfig, laser_detuning, laser_phase, caps) -> FullInteraction:
    return FullInteraction(cfg, laser_detuning, laser_phase, caps)


def sideband_detuning(m, n, cfg: TrapConfig) -> float:
    """Two-photon detuning from the carrier that makes the (m, n) sideband resonant."""
    return -(m * cfg.nu_x + n * cfg.nu_y)


def caps_for(M, N, cfg: TrapConfig, padded=False) -> Tuple[int, int]:
    pad = cfg.cap_margin if padded else 0
    return M + pad, N + pad
