"""
Exact synthesis of random targets
=================================

Draw random two-mode states, compile them and check that the closed-form
and resonant simulations both reproduce the target.  The pulse count equals
the number of nonzero coefficients, never more than (M + 1)(N + 1).
"""

import numpy as np

from ionsynth import SimTier, TrapConfig, plan, random_target, run_sequence

cfg = TrapConfig()
rng = np.random.default_rng(7)

for M, N in [(1, 1), (2, 2), (3, 2), (3, 3)]:
    worst = 0.0
    for _ in range(25):
        spec = random_target(M, N, rng)
        seq = plan(spec, cfg)
        assert len(seq) == (M + 1) * (N + 1)
        for tier in (SimTier.IDEAL, SimTier.RESONANT):
            worst = max(worst, 1 - run_sequence(seq, spec, cfg, tier).fidelity)
    print("M=%d N=%d  pulses %2d  worst infidelity %.1e" % (M, N, (M + 1) * (N + 1), worst))

##############################################################################
# Weak high-order sidebands make for long pulses.  The total duration
# grows quickly with M + N because the coupling scales like eta^(m + n).

spec = random_target(3, 3, 1)
seq = plan(spec, cfg)
print("total duration %.1f, longest pulse (%d, %d) lasts %.1f"
      % (seq.total_duration, seq.longest_pulse.m, seq.longest_pulse.n,
         seq.longest_pulse.duration))
