import itertools

import pytest

from ionsynth.coupling import GOLDEN, TrapConfig
from ionsynth.spectrum import check_separation, enumerate_lines


def test_carrier_and_first_sidebands():
    cfg = TrapConfig(omega_0=1000.0)
    lines = {(l.m, l.n): l.frequency for l in enumerate_lines(cfg, 1, 1)}
    assert lines[(0, 0)] == 1000.0
    assert abs(lines[(1, 0)] - lines[(0, 1)]) == pytest.approx(abs(cfg.nu_x - cfg.nu_y))
    assert len(lines) == 4 * 4  # margin 2 on each mode


def test_lines_sorted():
    freqs = [l.frequency for l in enumerate_lines(TrapConfig(), 3, 2)]
    assert freqs == sorted(freqs)


def test_commensurate_collision():
    cfg = TrapConfig(nu_x=200.0, nu_y=100.0)
    report = check_separation(cfg, 2, 2)
    pairs = {frozenset((a, b)) for a, b, _ in report.collisions}
    assert frozenset(((0, 2), (1, 0))) in pairs
    assert report.min_gap == 0


def test_symmetric_trap_degenerate():
    cfg = TrapConfig(nu_x=100.0, nu_y=100.0)
    report = check_separation(cfg, 3, 3)
    pairs = {frozenset((a, b)) for a, b, gap in report.collisions if gap == 0}
    for m, n in itertools.product(range(3), repeat=2):
        assert frozenset(((m + 1, n), (m, n + 1))) in pairs
    assert not report.ratio_ok


def test_ratio_condition():
    for M, N in [(1, 1), (3, 2)]:
        cfg = TrapConfig(nu_x=100.0 * (M + 2 * N + 1), nu_y=100.0)
        assert check_separation(cfg, M, N).ratio_ok
        cfg = TrapConfig(nu_x=100.0 * (M + 2 * N), nu_y=100.0)
        assert not check_separation(cfg, M, N).ratio_ok


def test_golden_ratio_lines_distinct():
    cfg = TrapConfig(nu_x=100.0 * GOLDEN * 6, nu_y=100.0)
    lines = enumerate_lines(cfg, 8, 8, margin=0)
    for a, b in zip(lines, lines[1:]):
        assert b.frequency - a.frequency > 1e-12 * cfg.nu_y


def test_default_config_separates_planner_lines():
    cfg = TrapConfig()
    for M, N in itertools.product(range(4), repeat=2):
        report = check_separation(cfg, M, N)
        assert report.ratio_ok and report.ok
        if M + N:
            assert report.min_gap >= 0.99 * cfg.nu_y


def test_report_serializes():
    d = check_separation(TrapConfig(), 0, 0).to_dict()
    assert d["min_gap"] is None and d["collisions"] == []
