"""
Two-mode Fock space bookkeeping.

States of the ion live on  {|g1>, |g2>} x |n_x> x |n_y>  truncated at
n_x <= cap_x, n_y <= cap_y.  Amplitudes are stored as a dense array of shape
(2, cap_x + 1, cap_y + 1); the flat (C-order) index is

    level * (cap_x + 1) * (cap_y + 1) + n_x * (cap_y + 1) + n_y

Targets are tables C[m, n] over 0 <= m <= M, 0 <= n <= N.  The same table can
be read along anti-diagonals with the labels |J, L> = |J + L>_x |J - L>_y;
J and L may be half-integers, so they are carried doubled (two_J, two_L).
"""

import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from .errors import InputError, TruncationError

#: Targets whose norm is off by less than this are silently renormalized.
NORM_TOLERANCE = 1e-9


class ElectronicLevel(IntEnum):
    G1 = 0
    G2 = 1


class ModeIndex(NamedTuple):
    m: int
    n: int


class JLIndex(NamedTuple):
    two_J: int
    two_L: int

    @property
    def J(self) -> float:
        return self.two_J / 2

    @property
    def L(self) -> float:
        return self.two_L / 2


def mn_to_jl(idx) -> JLIndex:
    m, n = idx
    if m < 0 or n < 0:
        raise InputError(f"phonon numbers must be non-negative, got ({m}, {n})")
    return JLIndex(m + n, m - n)


def jl_to_mn(idx) -> ModeIndex:
    two_J, two_L = idx
    if abs(two_L) > two_J or (two_J - two_L) % 2:
        raise InputError(f"invalid doubled labels (2J={two_J}, 2L={two_L})")
    return ModeIndex((two_J + two_L) // 2, (two_J - two_L) // 2)


@dataclass
class StateVector:
    """Pure state on the truncated two-level x two-mode space."""

    cap_x: int
    cap_y: int
    amp: np.ndarray = None

    def __post_init__(self):
        shape = (2, self.cap_x + 1, self.cap_y + 1)
        if self.cap_x < 0 or self.cap_y < 0:
            raise InputError("truncation caps must be non-negative")
        if self.amp is None:
            self.amp = np.zeros(shape, dtype=complex)
        else:
            self.amp = np.asarray(self.amp, dtype=complex).reshape(shape)

    @property
    def caps(self) -> Tuple[int, int]:
        return self.cap_x, self.cap_y

    @property
    def dim(self) -> int:
        return 2 * (self.cap_x + 1) * (self.cap_y + 1)

    def flat_index(self, level, m, n) -> int:
        if not (0 <= m <= self.cap_x and 0 <= n <= self.cap_y):
            raise TruncationError(
                f"truncation exceeded: ({m}, {n}) outside caps {self.caps}")
        return (int(level) * (self.cap_x + 1) + m) * (self.cap_y + 1) + n

    def unflatten(self, index: int) -> Tuple[ElectronicLevel, int, int]:
        level, rest = divmod(index, (self.cap_x + 1) * (self.cap_y + 1))
        m, n = divmod(rest, self.cap_y + 1)
        return ElectronicLevel(level), m, n

    @property
    def flat(self) -> np.ndarray:
        return self.amp.reshape(-1)

    @classmethod
    def from_flat(cls, vec, cap_x, cap_y) -> "StateVector":
        return cls(cap_x, cap_y, np.array(vec, dtype=complex))

    def copy(self) -> "StateVector":
        return StateVector(self.cap_x, self.cap_y, self.amp.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def amplitude(self, level, m, n) -> complex:
        return complex(self.amp.reshape(-1)[self.flat_index(level, m, n)])

    def population(self, level) -> float:
        return float(np.sum(np.abs(self.amp[int(level)]) ** 2))

    def to_dict(self) -> dict:
        flat = self.flat
        return {"cap_x": self.cap_x, "cap_y": self.cap_y,
                "re": flat.real.tolist(), "im": flat.imag.tolist()}

    @classmethod
    def from_dict(cls, d) -> "StateVector":
        vec = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
        return cls.from_flat(vec, d["cap_x"], d["cap_y"])


def basis_state(level, idx, caps) -> StateVector:
    """Unit vector |level, m, n> on a space truncated at ``caps``."""
    psi = StateVector(*caps)
    psi.amp.reshape(-1)[psi.flat_index(level, *idx)] = 1.0
    return psi


@dataclass
class TargetSpec:
    """Coefficient table C[m, n] of the motional state to prepare.

    Input whose l2 norm is within ``NORM_TOLERANCE`` of one is renormalized;
    anything farther off is rejected.
    """

    M: int
    N: int
    coeffs: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if not (isinstance(self.M, (int, np.integer)) and isinstance(self.N, (int, np.integer))):
            raise InputError("M and N must be integers")
        if self.M < 0 or self.N < 0:
            raise InputError(f"phonon caps must be non-negative, got M={self.M}, N={self.N}")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.M + 1, self.N + 1):
            raise InputError(
                f"coefficient table has shape {c.shape}, expected {(self.M + 1, self.N + 1)}")
        if not np.all(np.isfinite(c)):
            raise InputError("coefficients must be finite")
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InputError(f"target is not normalized: |C| = {norm!r}")
        self.coeffs = c / norm

    @classmethod
    def from_entries(cls, M, N, entries: Dict[Tuple[int, int], complex]) -> "TargetSpec":
        c = np.zeros((M + 1, N + 1), dtype=complex)
        for (m, n), value in entries.items():
            if not (0 <= m <= M and 0 <= n <= N):
                raise InputError(f"coefficient ({m}, {n}) outside M={M}, N={N}")
            c[m, n] = value
        return cls(M, N, c)

    @classmethod
    def from_dict(cls, d) -> "TargetSpec":
        for key in ("M", "N", "coeffs"):
            if key not in d:
                raise InputError(f"target file is missing field '{key}'")
        entries = {}
        for i, entry in enumerate(d["coeffs"]):
            try:
                m, n = int(entry["m"]), int(entry["n"])
                value = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"coeffs[{i}] is malformed: {exc}") from None
            if (m, n) in entries:
                raise InputError(f"coeffs[{i}] repeats entry ({m}, {n})")
            entries[(m, n)] = value
        return cls.from_entries(int(d["M"]), int(d["N"]), entries)

    @classmethod
    def from_json(cls, text) -> "TargetSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"target file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("target file must hold a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        coeffs = [{"m": m, "n": n, "re": float(c.real), "im": float(c.imag)}
                  for (m, n), c in np.ndenumerate(self.coeffs) if c != 0]
        return {"M": self.M, "N": self.N, "coeffs": coeffs}

    def nonzero_count(self, zero_tol=0.0) -> int:
        return int(np.count_nonzero(np.abs(self.coeffs) > zero_tol))


def random_target(M, N, rng=None) -> TargetSpec:
    """Haar-random target: i.i.d. complex Gaussian entries, normalized."""
    rng = np.random.default_rng(rng)
    c = rng.standard_normal((M + 1, N + 1)) + 1j * rng.standard_normal((M + 1, N + 1))
    return TargetSpec(M, N, c / np.linalg.norm(c))


def coeffs_to_d(spec: TargetSpec) -> Dict[JLIndex, complex]:
    """Relabel C[m, n] as d[J, L]; zero entries are omitted."""
    return {mn_to_jl((m, n)): complex(c)
            for (m, n), c in np.ndenumerate(spec.coeffs) if c != 0}


def target_state(spec: TargetSpec, caps: Optional[Tuple[int, int]] = None) -> StateVector:
    """The motional target tensored with |g1>, embedded at ``caps``."""
    caps = caps or (spec.M, spec.N)
    if caps[0] < spec.M or caps[1] < spec.N:
        raise TruncationError(f"truncation exceeded: caps {caps} below target ({spec.M}, {spec.N})")
    psi = StateVector(*caps)
    psi.amp[ElectronicLevel.G1, :spec.M + 1, :spec.N + 1] = spec.coeffs
    return psi
