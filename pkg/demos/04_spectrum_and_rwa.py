"""
Sideband spectrum and the rotating-wave approximation
=====================================================

Each pulse is tuned to one sideband line omega_0 - m nu_x - n nu_y.  When two
lines coincide the drive excites both, which the resonant model ignores.
The full model keeps every line and shows how the error shrinks as the trap
frequencies grow relative to the Rabi frequency.
"""

from ionsynth import (SimTier, TargetSpec, TrapConfig, check_separation, enumerate_lines, plan,
                      run_sequence)

##############################################################################
# An isotropic trap puts (m + 1, n) and (m, n + 1) on the same frequency.

report = check_separation(TrapConfig(nu_x=100.0, nu_y=100.0), 2, 2)
print("isotropic trap: ratio ok %s, %d collisions" % (report.ratio_ok, len(report.collisions)))

cfg = TrapConfig()
report = check_separation(cfg, 3, 3)
print("default trap:   ratio %.3f > %d, min gap %.1f" % (report.ratio, report.required_ratio,
                                                          report.min_gap))
for line in enumerate_lines(cfg, 1, 1, margin=0):
    print("  line (%d, %d) at %9.3f" % (line.m, line.n, line.frequency))

##############################################################################
# Scaling both trap frequencies up at fixed Omega suppresses the
# off-resonant terms; the infidelity falls roughly as (Omega / nu)^2.

s = 2 ** -0.5
spec = TargetSpec.from_entries(1, 1, {(0, 1): s, (1, 0): s})
for factor in (1, 2, 4):
    trap = cfg.scaled(factor)
    result = run_sequence(plan(spec, trap), spec, trap, SimTier.FULL)
    print("Omega/nu_y = %.2e   infidelity %.3e" % (trap.omega / trap.nu_y, 1 - result.fidelity))
