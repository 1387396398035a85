"""Command-line interface.

Exit codes: 0 success, 1 usage or precondition violation, 2 the parameter
regime forbids the request (inadmissible coupling, or no nontrivial pair).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hardysob import approx, cones, fiber, groundstate, regime
from hardysob.coupling import CouplingParams
from hardysob.exponents import Exponents, two_star
from hardysob.radial import DEFAULT_M, DEFAULT_R_MAX, DEFAULT_R_MIN, RadialGrid

EXIT_OK, EXIT_USAGE, EXIT_FORBIDDEN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    exps: Exponents
    params: CouplingParams
    r_min: float = DEFAULT_R_MIN
    r_max: float = DEFAULT_R_MAX
    M: int = DEFAULT_M
    seed: int = 0
    jobs: int = 1
    output_dir: Path | None = None

    def __post_init__(self):
        self.params.check_critical(self.exps.two_star_s2)
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")
        self.grid  # validates the truncation and node count

    @property
    def grid(self) -> RadialGrid:
        return RadialGrid.logspaced(self.exps.N, self.r_min, self.r_max, self.M)

    @classmethod
    def from_args(cls, a) -> "RunConfig":
        if a.s is not None and (a.s1 is not None or a.s2 is not None):
            raise ValueError("give either --s or --s1/--s2, not both")
        if a.s is not None:
            exps = Exponents.single(a.N, a.s)
        elif a.s1 is not None and a.s2 is not None:
            exps = Exponents(a.N, a.s1, a.s2)
        else:
            raise ValueError("missing singularity order: give --s, or --s1 and --s2")
        params = CouplingParams(a.lam, a.mu, a.kappa, a.alpha, a.beta)
        out = Path(a.out_dir) if getattr(a, "out_dir", None) else None
        return cls(exps, params, a.r_min, a.r_max, a.M, a.seed, a.jobs, out)


def _add_system_args(p, kappa_required=True):
    p.add_argument("--N", type=int, required=True, help="dimension")
    p.add_argument("--s", type=float, help="common singularity order")
    p.add_argument("--s1", type=float)
    p.add_argument("--s2", type=float)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--kappa", type=float, required=kappa_required, default=None)
    p.add_argument("--r-min", type=float, default=DEFAULT_R_MIN)
    p.add_argument("--r-max", type=float, default=DEFAULT_R_MAX)
    p.add_argument("--M", type=int, default=DEFAULT_M, help="grid nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ------------------------------------------------------------------ commands


def cmd_regime(a) -> int:
    cfg = RunConfig.from_args(a)
    rep = regime.classify(cfg.exps, cfg.params)
    _emit(_json(rep.to_dict()), a.out)
    return EXIT_FORBIDDEN if rep.classification is regime.Classification.INADMISSIBLE else EXIT_OK


def cmd_sharp_constant(a) -> int:
    cfg = RunConfig.from_args(a)
    rep = regime.classify(cfg.exps, cfg.params)
    if rep.classification is regime.Classification.INADMISSIBLE:
        print(f"inadmissible coupling ({rep.rule_fired})", file=sys.stderr)
        return EXIT_FORBIDDEN
    summary = groundstate.sharp_constant_summary(cfg.exps, cfg.params, cfg.grid)
    if a.format == "csv":
        keys = list(summary)
        _emit(_csv(keys, [[summary[k] for k in keys]]), a.out)
    else:
        _emit(_json(summary), a.out)
    return EXIT_OK


def cmd_ground_state(a) -> int:
    cfg = RunConfig.from_args(a)
    rep = regime.classify(cfg.exps, cfg.params)
    if rep.classification not in (
        regime.Classification.NONTRIVIAL,
        regime.Classification.DEGENERATE,
    ):
        print(
            f"no nontrivial ground state: {rep.classification.value} ({rep.rule_fired})",
            file=sys.stderr,
        )
        return EXIT_FORBIDDEN
    if rep.classification is regime.Classification.NONTRIVIAL and rep.t0 is None:
        print("nontrivial regime but no interior fiber minimizer was found", file=sys.stderr)
        return EXIT_FORBIDDEN
    grid = cfg.grid
    mu_s = groundstate.mu_s_quadrature(grid, cfg.exps.s)
    pair = groundstate.build_ground_state(rep, mu_s, grid, cfg.exps.s, cfg.params, t0=a.t0)
    out = Path(a.out_dir)
    pair.write(out)
    checks = groundstate.verify_pair(pair, cfg.exps, cfg.params)
    (out / "checks.json").write_text(_json(checks))
    all_pass = all(c["pass"] for c in checks.values())
    sys.stdout.write(_json({"report": rep.to_dict(), **pair.meta(), "all_pass": all_pass}))
    return EXIT_OK


def cmd_sweep(a) -> int:
    a.kappa = a.kappa_min
    cfg = RunConfig.from_args(a)
    kappas = np.linspace(a.kappa_min, a.kappa_max, a.num)
    plist = [
        CouplingParams(cfg.params.lam, cfg.params.mu, float(k), cfg.params.alpha, cfg.params.beta)
        for k in kappas
    ]
    reports = regime.classify_many(cfg.exps, plist, jobs=cfg.jobs)
    rows = [
        [float(k), r.classification.value, r.sharp_ratio, r.t0, r.rule_fired, r.numeric_agrees]
        for k, r in zip(kappas, reports)
    ]
    header = ["kappa", "classification", "sharp_ratio", "t0", "rule_fired", "numeric_agrees"]
    _emit(_csv(header, rows), a.out)
    return EXIT_OK


def cmd_approx(a) -> int:
    cfg = RunConfig.from_args(a)
    rows = approx.S_eps_monotonicity_sweep(
        cfg.grid, cfg.exps, cfg.params, a.eps, jobs=cfg.jobs
    )
    _emit(approx.sweep_csv(rows), a.out)
    return EXIT_OK


def cmd_fiber(a) -> int:
    cfg = RunConfig.from_args(a)
    fm = fiber.FiberMap(cfg.params, cfg.exps.two_star_s)
    ts = np.geomspace(a.t_min, a.t_max, a.num)
    _emit(fiber.fiber_csv(fm, ts), a.out)
    return EXIT_OK


def cmd_cones(a) -> int:
    if a.action == "validate":
        table = cones.ConeConstantTable.read_csv(a.table)
        bad = cones.validate_table(table)
        _emit(_json({"violations": [list(b) for b in bad], "consistent": not bad}), a.out)
        return EXIT_OK
    if a.action == "locate":
        table = cones.ConeConstantTable.read_csv(a.table)
        lo, hi = cones.intermediate_value_locate(table, a.tau)
        _emit(_json({"tau": a.tau, "theta_low": lo, "theta_high": hi}), a.out)
        return EXIT_OK
    if a.action == "gluing":
        p = two_star(a.N, a.s)
        rows = [[k, cones.gluing_energy(k, a.N, p, a.S_subcone)] for k in range(1, a.k_max + 1)]
        _emit(_csv(["k", "c_k"], rows), a.out)
        return EXIT_OK
    if a.action == "attain":
        verdict = cones.attainment_calculus(a.S_omega, a.S0, a.Sinf)
        _emit(_json({"verdict": verdict.value}), a.out)
        return EXIT_OK
    raise UsageError(f"unknown cones action {a.action}")


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hardysob", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("regime", help="classify extremals, JSON report")
    _add_system_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("sharp-constant", help="t0, g_min, mu_s, S and c0")
    _add_system_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sharp_constant)

    p = sub.add_parser("ground-state", help="write profile.csv, meta.json, checks.json")
    _add_system_args(p)
    p.add_argument("--t0", type=float, help="member of a degenerate family (default 1)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_ground_state)

    p = sub.add_parser("sweep", help="classify over a kappa range, CSV")
    _add_system_args(p, kappa_required=False)
    p.add_argument("--kappa-min", type=float, required=True)
    p.add_argument("--kappa-max", type=float, required=True)
    p.add_argument("--num", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("approx", help="S_eps for a list of eps, CSV eps,S_eps")
    _add_system_args(p)
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("fiber", help="sample t,g,h as CSV")
    _add_system_args(p)
    p.add_argument("--t-min", type=float, default=1e-3)
    p.add_argument("--t-max", type=float, default=1e3)
    p.add_argument("--num", type=int, default=256)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("cones", help="cone-constant calculus")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = csub.add_parser("validate")
    q.add_argument("--table", required=True, help="CSV theta,S,provenance")
    q.add_argument("--out")
    q = csub.add_parser("locate")
    q.add_argument("--table", required=True)
    q.add_argument("--tau", type=float, required=True)
    q.add_argument("--out")
    q = csub.add_parser("gluing")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--S-subcone", dest="S_subcone", type=float, required=True)
    q.add_argument("--k-max", type=int, default=5)
    q.add_argument("--out")
    q = csub.add_parser("attain")
    q.add_argument("--S-omega", dest="S_omega", type=float, required=True)
    q.add_argument("--S0", type=float, required=True)
    q.add_argument("--Sinf", type=float, required=True)
    q.add_argument("--out")
    p.set_defaults(func=cmd_cones)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError, ArithmeticError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
