import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ionsynth.coupling import TrapConfig
from ionsynth.errors import PlannerError
from ionsynth.fock import TargetSpec, random_target
from ionsynth.planner import (PulseSequence, diagonal_order, diagonal_position, plan,
                              scheme_comparison)

CFG = TrapConfig()  # eta_x = eta_y = 0.1
W00 = math.exp(-0.01)
W01 = W10 = 0.1 * math.exp(-0.01)
W11 = 0.01 * math.exp(-0.01)


def test_diagonal_order_examples():
    assert diagonal_order(0) == [(0, 0)]
    assert diagonal_order(1) == [(0, 0), (0, 1), (1, 0)]
    assert diagonal_order(2) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert diagonal_position(1, 1) == 5


def test_diagonal_position_formula():
    for pos, (m, n) in enumerate(diagonal_order(9), start=1):
        assert diagonal_position(m, n) == pos
        two_J, two_L = m + n, m - n
        # 2J^2 + 2J + L + 1 written with doubled labels
        assert pos == (two_J * two_J + 2 * two_J + two_L) // 2 + 1


def test_successor_rules():
    order = diagonal_order(6)
    for (i, j), nxt in zip(order, order[1:]):
        assert nxt == ((0, i + 1) if j == 0 else (i + 1, j - 1))


def test_plan_ground_state():
    seq = plan(TargetSpec.from_entries(0, 0, {(0, 0): 1}), CFG)
    assert len(seq) == 1
    p = seq.pulses[0]
    assert (p.m, p.n, p.detuning) == (0, 0, 0)
    assert p.duration == pytest.approx(math.pi / 2 / W00, rel=1e-14)
    assert p.laser_phase == pytest.approx(-math.pi / 2)


def test_plan_two_phonon_superposition():
    s = 2 ** -0.5
    seq = plan(TargetSpec.from_entries(1, 1, {(0, 1): s, (1, 0): s}), CFG)
    assert [(p.m, p.n) for p in seq] == [(0, 1), (1, 0)]
    assert seq.pulses[0].duration == pytest.approx(math.asin(s) / W01, rel=1e-12)
    assert seq.pulses[1].duration == pytest.approx(math.pi / 2 / W10, rel=1e-6)
    assert (0, 0) in seq.skipped and (1, 1) in seq.skipped
    assert seq.pulses[0].detuning == -CFG.nu_y
    assert seq.pulses[1].detuning == -CFG.nu_x


def test_plan_uniform_table():
    seq = plan(TargetSpec(1, 1, np.full((2, 2), 0.5)), CFG)
    assert len(seq) == 4
    angles = [math.asin(0.5), math.asin(1 / math.sqrt(3)), math.pi / 4, math.pi / 2]
    rates = [W00, W01, W10, W11]
    for p, angle, rate in zip(seq, angles, rates):
        assert p.duration == pytest.approx(angle / rate, rel=1e-7)
    assert seq.residuals[-1] == pytest.approx(0, abs=1e-9)


def test_laser_phase_formula():
    spec = random_target(2, 2, 11)
    for p in plan(spec, CFG):
        c = spec.coeffs[p.m, p.n]
        expected = -np.angle(c) - math.pi / 2 - (p.m + p.n) * math.pi / 2
        assert np.isclose(np.exp(1j * p.laser_phase), np.exp(1j * expected))
        assert -math.pi < p.laser_phase <= math.pi


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2 ** 31))
def test_residual_telescopes(M, N, seed):
    spec = random_target(M, N, seed)
    seq = plan(spec, CFG)
    placed = 0.0
    last = 1.0
    for p, r in zip(seq, seq.residuals):
        placed += abs(spec.coeffs[p.m, p.n]) ** 2
        assert r ** 2 == pytest.approx(1 - placed, abs=1e-12)
        assert r <= last + 1e-15
        last = r
    assert seq.residuals[-1] == pytest.approx(0, abs=1e-9)
    assert len(seq) == (M + 1) * (N + 1)


def test_order_never_revisits_deposited_levels():
    seq = plan(random_target(3, 3, 5), CFG)
    modes = [(p.m, p.n) for p in seq]
    for k, (m, n) in enumerate(modes):
        for m2, n2 in modes[k + 1:]:
            assert m2 + n2 > m + n or (m2 + n2 == m + n and m2 != m)
            # later sideband cannot reach (m, n) from |g2, 0, 0> or lower it to any |g2, k, l>
            assert not (m >= m2 and n >= n2)


def test_zero_coefficients_skipped():
    c = random_target(2, 2, 1).coeffs
    c[1, 1] = 0
    c[2, 0] = 1e-14
    seq = plan(TargetSpec(2, 2, c / np.linalg.norm(c)), CFG)
    assert len(seq) == 7
    assert {(1, 1), (2, 0)} <= set(seq.skipped)


def test_positions_outside_caps_are_skipped():
    seq = plan(random_target(0, 2, 2), CFG)
    assert len(seq) == 3
    assert all(p.m == 0 for p in seq)
    assert (1, 0) in seq.skipped and (2, 0) in seq.skipped


def test_unnormalized_residual_error():
    spec = random_target(1, 1, 0)
    spec.coeffs = spec.coeffs * 1.1  # bypasses validation on purpose
    with pytest.raises(PlannerError, match="unnormalized-residual"):
        plan(spec, CFG)


def test_zero_coupling_error():
    cfg = TrapConfig(eta_x=0.0)
    with pytest.raises(PlannerError, match="zero-coupling") as info:
        plan(TargetSpec.from_entries(1, 0, {(1, 0): 1}), cfg)
    assert info.value.mode == (1, 0)


def test_sequence_json_round_trip_is_exact():
    seq = plan(random_target(3, 2, 9), CFG)
    text = seq.to_json()
    again = PulseSequence.from_json(text)
    assert again.to_json() == text
    for a, b in zip(seq, again):
        assert a == b


def test_duration_budget_flags():
    seq = plan(TargetSpec(1, 1, np.full((2, 2), 0.5)), CFG)
    assert seq.over_budget(100.0) == [3]
    assert seq.longest_pulse is seq.pulses[3]
    assert seq.total_duration == pytest.approx(sum(p.duration for p in seq))


@pytest.mark.parametrize("M, N, expected", [
    (1, 1, dict(kneer_law=8, drobny=8, zheng=6, this_work=4)),
    (0, 0, dict(this_work=1)),
    (2, 1, dict(kneer_law=12, drobny=18, zheng=8, this_work=6)),
    (3, 3, dict(kneer_law=34, drobny=72, zheng=20, this_work=16)),
])
def test_scheme_comparison(M, N, expected):
    table = scheme_comparison(M, N)
    assert table["gardiner"] == "exponential"
    for key, value in expected.items():
        assert table[key] == value


def test_pulse_count_never_exceeds_bound():
    rng = np.random.default_rng(0)
    for M, N in itertools.product(range(4), repeat=2):
        c = random_target(M, N, rng).coeffs
        c[rng.random(c.shape) < 0.3] = 0
        if not np.any(c):
            continue
        spec = TargetSpec(M, N, c / np.linalg.norm(c))
        assert len(plan(spec, CFG)) == np.count_nonzero(c) <= (M + 1) * (N + 1)
