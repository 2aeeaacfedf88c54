"""Command line front-end.

Exit codes: 0 success, 1 self-test failure, 2 invalid input, 3 planner error,
4 simulator error.  Summaries go to stdout, diagnostics to stderr.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .coupling import TrapConfig
from .errors import InputError, PlannerError, SimulationError
from .fock import StateVector, TargetSpec, random_target, target_state
from .planner import DEFAULT_ZERO_TOL, plan, pulse_bound, scheme_comparison
from .simulator import SimTier, fidelity, run_sequence
from .spectrum import check_separation

EXIT_OK, EXIT_SELFTEST, EXIT_INPUT, EXIT_PLANNER, EXIT_SIMULATOR = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    target_path: Optional[str] = None
    trap: TrapConfig = field(default_factory=TrapConfig)
    tiers: List[SimTier] = field(default_factory=lambda: [SimTier.IDEAL])
    zero_tol: float = DEFAULT_ZERO_TOL
    min_gap: Optional[float] = None
    output_path: Optional[str] = None
    seed: int = 0
    budget: Optional[float] = None

    def __post_init__(self):
        if not self.tiers:
            raise InputError("at least one tier is required")
        self.tiers = [SimTier(t) for t in self.tiers]


def load_target(path) -> TargetSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read target file: {exc}") from None
    return TargetSpec.from_json(text)


def load_trap(path) -> TrapConfig:
    if path is None:
        return TrapConfig()
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read trap file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"trap file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("trap file must hold a JSON object")
    return TrapConfig.from_dict(data)


def dumps(report) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def synthesize(spec: TargetSpec, run_cfg: RunConfig) -> dict:
    """Plan, simulate every requested tier and assemble the report dictionary."""
    trap = run_cfg.trap
    seq = plan(spec, trap, run_cfg.zero_tol)
    longest = seq.longest_pulse
    report = {
        "target": dict(spec.to_dict(), nonzero=spec.nonzero_count(run_cfg.zero_tol)),
        "trap": trap.to_dict(),
        "pulse_count": len(seq),
        "pulse_bound": pulse_bound(spec.M, spec.N),
        "pulses": seq.to_list(),
        "skipped": [list(s) for s in seq.skipped],
        "total_duration": seq.total_duration,
        "longest_pulse": longest.to_dict() if longest else None,
        "over_budget": seq.over_budget(run_cfg.budget) if run_cfg.budget else [],
        "tiers": {},
        "scheme_comparison": scheme_comparison(spec.M, spec.N),
        "spectrum": check_separation(trap, spec.M, spec.N, run_cfg.min_gap).to_dict(),
    }
    for tier in run_cfg.tiers:
        report["tiers"][tier.value] = run_sequence(seq, spec, trap, tier).to_dict()
    return report


def run(run_cfg: RunConfig) -> dict:
    spec = load_target(run_cfg.target_path)
    report = synthesize(spec, run_cfg)
    if run_cfg.output_path:
        Path(run_cfg.output_path).write_text(dumps(report))
    return report


def recheck_fidelity(report: dict, tier: str) -> float:
    """Recompute a tier's fidelity from the final state stored in ``report``."""
    entry = report["tiers"][tier]
    state = StateVector.from_dict(entry["final_state"])
    spec = TargetSpec.from_dict(report["target"])
    return fidelity(target_state(spec, state.caps), state)


def format_summary(report: dict) -> str:
    lines = [
        f"target M={report['target']['M']} N={report['target']['N']}  "
        f"pulses {report['pulse_count']} / bound {report['pulse_bound']}",
        f"total duration {report['total_duration']:.6g}",
    ]
    if report["longest_pulse"]:
        lp = report["longest_pulse"]
        lines.append(f"longest pulse ({lp['m']},{lp['n']}) duration {lp['duration']:.6g}")
    spec = report["spectrum"]
    gap = spec["min_gap"]
    lines.append(f"spectrum ratio {spec['ratio']:.6g} (need > {spec['required_ratio']}): "
                 f"{'ok' if spec['ratio_ok'] else 'VIOLATED'}; worst gap "
                 f"{'n/a' if gap is None else format(gap, '.6g')}; collisions {len(spec['collisions'])}")
    lines.append(f"{'tier':<10}{'fidelity':>22}")
    for tier, entry in report["tiers"].items():
        lines.append(f"{tier:<10}{entry['fidelity']:>22.16f}")
    return "\n".join(lines)


def format_pulses(pulses) -> str:
    lines = [f"{'#':>3} {'m':>2} {'n':>2} {'detuning':>14} {'phase':>10} {'duration':>12}"]
    for i, p in enumerate(pulses):
        lines.append(f"{i:>3} {p['m']:>2} {p['n']:>2} {p['detuning']:>14.6g} "
                     f"{p['laser_phase']:>10.6f} {p['duration']:>12.6g}")
    return "\n".join(lines)


def selftest(M, N, trials, seed=0, tiers=(SimTier.IDEAL, SimTier.RESONANT),
             trap: Optional[TrapConfig] = None, max_modes=4, out=None) -> bool:
    """Plan and simulate random targets; True when every trial passes."""
    out = out or sys.stdout
    if M > max_modes or N > max_modes:
        raise InputError(f"selftest supports M, N <= {max_modes}")
    if trials < 1:
        raise InputError("trials must be at least 1")
    trap = trap or TrapConfig()
    rng = np.random.default_rng(seed)
    failures = 0
    for trial in range(trials):
        spec = random_target(M, N, rng)
        problems = []
        try:
            seq = plan(spec, trap)
            if len(seq) > pulse_bound(M, N):
                problems.append(f"{len(seq)} pulses exceed bound {pulse_bound(M, N)}")
            results = {t: run_sequence(seq, spec, trap, t) for t in tiers}
        except (PlannerError, SimulationError) as exc:
            problems.append(str(exc))
            results = {}
        ideal = results.get(SimTier.IDEAL)
        if ideal is not None and abs(ideal.fidelity - 1) > 1e-12:
            problems.append(f"ideal fidelity {ideal.fidelity!r}")
        resonant = results.get(SimTier.RESONANT)
        if ideal is not None and resonant is not None and abs(resonant.fidelity - ideal.fidelity) > 1e-10:
            problems.append(f"resonant fidelity {resonant.fidelity!r} vs ideal {ideal.fidelity!r}")
        full = results.get(SimTier.FULL)
        if full is not None:
            print(f"trial {trial}: full-tier fidelity {full.fidelity:.10f}", file=out)
        if problems:
            failures += 1
            print(f"trial {trial} FAILED: " + "; ".join(problems), file=sys.stderr)
    print(f"selftest M={M} N={N}: {trials - failures}/{trials} passed", file=out)
    return failures == 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ionsynth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, target=True):
        if target:
            p.add_argument("--target", required=True, help="target-state JSON file")
        p.add_argument("--trap", help="trap config JSON file (defaults built in)")
        p.add_argument("--out", help="write JSON output here")

    p = sub.add_parser("plan", help="compile a target into a pulse sequence")
    common(p)
    p.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)

    p = sub.add_parser("simulate", help="plan, simulate and report")
    common(p)
    p.add_argument("--tier", action="append", choices=[t.value for t in SimTier])
    p.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)
    p.add_argument("--min-gap", type=float)
    p.add_argument("--budget", type=float, help="flag pulses longer than this")

    p = sub.add_parser("selftest", help="random-target exactness check")
    common(p, target=False)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tier", action="append", choices=[t.value for t in SimTier])

    p = sub.add_parser("spectrum", help="sideband line separation check")
    common(p, target=False)
    p.add_argument("--target", help="take M, N from this target file")
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--min-gap", type=float)

    p = sub.add_parser("compare", help="operation counts of synthesis schemes")
    common(p, target=False)
    p.add_argument("--target", help="take M, N from this target file")
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--N", type=int, default=1)
    return parser


def _dims(args):
    if args.target:
        spec = load_target(args.target)
        return spec.M, spec.N
    return args.M, args.N


def _emit(args, payload):
    if args.out:
        Path(args.out).write_text(dumps(payload))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        trap = load_trap(args.trap)
        if args.verb == "plan":
            spec = load_target(args.target)
            seq = plan(spec, trap, args.zero_tol)
            _emit(args, seq.to_list())
            print(format_pulses(seq.to_list()))
            print(f"{len(seq)} pulses (bound {pulse_bound(spec.M, spec.N)}), "
                  f"total duration {seq.total_duration:.6g}")
        elif args.verb == "simulate":
            run_cfg = RunConfig(args.target, trap, args.tier or [SimTier.IDEAL], args.zero_tol,
                                args.min_gap, args.out, budget=args.budget)
            report = run(run_cfg)
            print(format_summary(report))
            for i in report["over_budget"]:
                print(f"warning: pulse {i} exceeds duration budget {args.budget}", file=sys.stderr)
        elif args.verb == "selftest":
            tiers = [SimTier(t) for t in (args.tier or ["ideal", "resonant"])]
            if SimTier.IDEAL not in tiers:
                tiers.insert(0, SimTier.IDEAL)
            ok = selftest(args.M, args.N, args.trials, args.seed, tiers, trap)
            return EXIT_OK if ok else EXIT_SELFTEST
        elif args.verb == "spectrum":
            M, N = _dims(args)
            report = check_separation(trap, M, N, args.min_gap).to_dict()
            _emit(args, report)
            print(f"nu_x/nu_y = {report['ratio']:.6g}, required > {report['required_ratio']}: "
                  f"{'ok' if report['ratio_ok'] else 'VIOLATED'}")
            print(f"minimum line gap {report['min_gap']} between {report['closest_pair']}")
            for c in report["collisions"]:
                print(f"collision {tuple(c['a'])} ~ {tuple(c['b'])}: gap {c['gap']:.6g}")
        elif args.verb == "compare":
            M, N = _dims(args)
            table = scheme_comparison(M, N)
            _emit(args, table)
            for name, count in table.items():
                print(f"{name:<12}{count}")
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PlannerError as exc:
        print(f"planner error: {exc}", file=sys.stderr)
        return EXIT_PLANNER
    except SimulationError as exc:
        print(f"simulator error: {exc}", file=sys.stderr)
        return EXIT_SIMULATOR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
