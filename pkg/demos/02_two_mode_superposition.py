"""
A one-phonon superposition shared between two modes
===================================================

The target (|1, 0> + |0, 1>) / sqrt(2) needs two pulses: first the (0, 1)
sideband moves half of the population, then the (1, 0) sideband moves the
rest.  The pulse order follows anti-diagonals of increasing m + n.
"""

from ionsynth import SimTier, TargetSpec, TrapConfig, plan, run_sequence

cfg = TrapConfig()
s = 2 ** -0.5
spec = TargetSpec.from_entries(1, 1, {(0, 1): s, (1, 0): s})
seq = plan(spec, cfg)

for i, p in enumerate(seq):
    print("pulse %d  sideband (%d, %d)  detuning %9.3f  phase %+.4f  duration %9.3f"
          % (i, p.m, p.n, p.detuning, p.laser_phase, p.duration))
print("skipped slots (zero or outside the table):", [tuple(m) for m in seq.skipped])

##############################################################################
# After every pulse the |g2> population still sits entirely in |g2, 0, 0>.
# The trace lists (pulse, norm, overlap with the target so far).

result = run_sequence(seq, spec, cfg, SimTier.RESONANT)
for i, norm, overlap in result.trace:
    print("after pulse %d: norm %.12f  overlap %.6f" % (i, norm, overlap))
print("final fidelity %.12f" % result.fidelity)
