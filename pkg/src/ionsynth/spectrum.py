"""Sideband line positions and trap-anisotropy feasibility checks."""

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Tuple

from .coupling import TrapConfig


@dataclass(frozen=True)
class SidebandLine:
    m: int
    n: int
    frequency: float  # required omega_x - omega_y

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "frequency": self.frequency}


def line_frequency(m, n, cfg: TrapConfig) -> float:
    return cfg.omega_0 - m * cfg.nu_x - n * cfg.nu_y


def enumerate_lines(cfg: TrapConfig, M, N, margin=2) -> List[SidebandLine]:
    """Every line with m <= M + margin, n <= N + margin, sorted by frequency."""
    if margin < 0:
        raise ValueError("margin must be non-negative")
    lines = [SidebandLine(m, n, line_frequency(m, n, cfg))
             for m in range(M + margin + 1) for n in range(N + margin + 1)]
    return sorted(lines, key=lambda line: (line.frequency, line.m, line.n))


@dataclass
class SeparationReport:
    ratio: float
    required_ratio: int
    ratio_ok: bool
    min_gap: float
    threshold: float
    closest_pair: Optional[Tuple[Tuple[int, int], Tuple[int, int]]]
    collisions: List[Tuple[Tuple[int, int], Tuple[int, int], float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ratio_ok and not self.collisions

    def to_dict(self) -> dict:
        return {
            "ratio": self.ratio,
            "required_ratio": self.required_ratio,
            "ratio_ok": self.ratio_ok,
            "min_gap": self.min_gap if math.isfinite(self.min_gap) else None,
            "threshold": self.threshold,
            "closest_pair": [list(p) for p in self.closest_pair] if self.closest_pair else None,
            "collisions": [{"a": list(a), "b": list(b), "gap": gap} for a, b, gap in self.collisions],
        }


def check_separation(cfg: TrapConfig, M, N, min_gap=None, margin=0) -> SeparationReport:
    """Test the anisotropy condition nu_x / nu_y > M + 2N and list close lines.

    ``min_gap`` (default 10 omega) stands in for the usable laser linewidth;
    any two lines with m <= M + margin, n <= N + margin closer than that are
    reported as colliding.
    """
    threshold = 10 * cfg.omega if min_gap is None else float(min_gap)
    if threshold <= 0:
        raise ValueError("min_gap must be positive")
    lines = enumerate_lines(cfg, M, N, margin)
    best, closest, collisions = float("inf"), None, []
    for a, b in combinations(lines, 2):
        gap = abs(a.frequency - b.frequency)
        if gap < best:
            best, closest = gap, ((a.m, a.n), (b.m, b.n))
        if gap < threshold:
            collisions.append(((a.m, a.n), (b.m, b.n), gap))
    ratio = cfg.nu_x / cfg.nu_y
    return SeparationReport(
        ratio=ratio,
        required_ratio=M + 2 * N,
        ratio_ok=ratio > M + 2 * N,
        min_gap=best if closest else float("inf"),
        threshold=threshold,
        closest_pair=closest,
        collisions=collisions,
    )
