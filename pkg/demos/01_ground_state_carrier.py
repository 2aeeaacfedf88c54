"""
Preparing |g1, 0, 0> with a single carrier pulse
================================================

The simplest target has one nonzero coefficient, C[0, 0] = 1.  The compiler
emits one carrier pulse whose area moves the whole ion from |g2> to |g1>
without touching the motion.
"""

import math

from ionsynth import SimTier, TargetSpec, TrapConfig, plan, run_sequence

cfg = TrapConfig()
spec = TargetSpec.from_entries(0, 0, {(0, 0): 1.0})
seq = plan(spec, cfg)

##############################################################################
# The carrier coupling is reduced by the Debye-Waller factor exp(-eta^2 / 2)
# on each mode, so the pulse is slightly longer than pi / (2 Omega).

pulse = seq.pulses[0]
print("pulses:", len(seq))
print("duration %.6f vs bare pi/2 %.6f" % (pulse.duration, math.pi / 2 / cfg.omega))
print("laser phase %.4f rad" % pulse.laser_phase)

##############################################################################
# All three simulation tiers agree to within the off-resonant corrections.

for tier in SimTier:
    result = run_sequence(seq, spec, cfg, tier)
    print("%-9s fidelity %.12f" % (tier.value, result.fidelity))
