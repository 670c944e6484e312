"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
Reports are JSON with sorted keys, so a fixed seed gives byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._exact import fmt, to_fraction
from .errors import LiequotError
from .implosion import strata_table
from .io import ParseError, dumps, load, matrix_to_json, parse_region, vector_to_json, weight_config_from_json
from .lie_core import build_root_system, coroot, decomposition_dims, faces
from .master_space import (
    EpsilonShift,
    boundary_nonvanishing_check,
    phi_map,
    rescale_identity_check,
    scale_bound,
)
from .verification import QUICK, SUITES, rescale_grid
from .vgit import chambers, fingerprint, stable_fingerprint

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None
    output_path: str | None
    mode: str
    seed: int
    tolerance: float

    def __post_init__(self):
        if self.mode not in ("exact", "float", "both"):
            raise LiequotError(f"unknown mode {self.mode!r}")
        if not self.tolerance > 0:
            raise LiequotError("tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise LiequotError("seed must be a 64-bit unsigned integer")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["exact", "float", "both"], default="both",
                        help="arithmetic for suites that have both routes (default: both)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json")

    p = _Parser(prog="liequot", description="Exact root data, semistability chambers and identity checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("roots", parents=[common], help="root-system report")
    r.add_argument("series")
    r.add_argument("rank", type=int)
    r.add_argument("--experimental", action="store_true", help="allow series B, C, D")

    c = sub.add_parser("chambers", parents=[common], help="walls and chambers of a weight configuration")
    c.add_argument("config", help="WeightConfig JSON file")
    c.add_argument("--region", help="box lo:hi,lo:hi,... (default: padded bounding box)")
    c.add_argument("--verify", action="store_true", help="resample each chamber and check constancy")
    c.add_argument("--samples", type=int, default=20)
    c.add_argument("--full", action="store_true", help="include full support lists")

    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("--suite", action="append", choices=sorted(SUITES) + ["all"],
                   help="repeatable; default: the six identity suites; 'all' adds chambers, finiteness, local-invariance")
    v.add_argument("--rank", type=int, help="restrict rank-indexed suites to this rank")
    v.add_argument("--full", action="store_true", help="run at full size instead of the quick defaults")
    v.add_argument("--timing", action="store_true", help="include wall-clock times (not byte-stable)")
    v.add_argument("--mutate", choices=["sign-flip"], help=argparse.SUPPRESS)

    m = sub.add_parser("master-check", parents=[common], help="master-space identities for {r, eps, s-grid}")
    m.add_argument("config", help="JSON file with keys r, eps, and optional s_grid {max_den, random}")
    return p


# ---------------------------------------------------------------------------
# commands


def cmd_roots(args) -> tuple[dict, int]:
    rs = build_root_system(args.series.upper(), args.rank, experimental=args.experimental)
    face_rows = []
    for f in faces(rs):
        semisimple, rest = decomposition_dims(rs, f)
        face_rows.append({"vanishing_set": f.sorted_set(), "dim": f.dim,
                          "semisimple_dim": semisimple, "quotient_dim": rest})
    report = {
        "type": rs.type_label,
        "rank": rs.rank,
        "gram": matrix_to_json(rs.gram),
        "simple_roots": [vector_to_json(a) for a in rs.simple_roots],
        "coroots": [vector_to_json(coroot(rs, a)) for a in rs.simple_roots],
        "fundamental_weights": [vector_to_json(w) for w in rs.fundamental_weights],
        "cartan_matrix": [list(row) for row in rs.cartan_matrix],
        "positive_roots": [vector_to_json(a) for a in rs.positive_roots],
        "n_positive_roots": len(rs.positive_roots),
        "weyl_order": len(rs.weyl_group.elements),
        "faces": face_rows,
    }
    if rs.series == "A":
        report["strata"] = strata_table(rs)
    return report, EXIT_OK


def cmd_chambers(args, run: RunConfig) -> tuple[dict, int]:
    cfg = weight_config_from_json(load(args.config))
    region = parse_region(args.region, cfg.rank) if args.region else None
    dec = chambers(cfg, region)
    report = dec.to_json(full=args.full)
    report["n_walls"] = len(dec.walls)
    report["n_chambers"] = len(dec.chambers)
    code = EXIT_OK
    if args.verify:
        rng = np.random.default_rng(run.seed)
        supports = cfg.supports()
        failures = []
        for idx, ch in enumerate(dec.chambers):
            for _ in range(args.samples):
                lam = dec.sample_chamber(idx, rng)
                fp = fingerprint(cfg, lam, supports)
                if fp != ch.fingerprint or stable_fingerprint(cfg, lam, supports) != fp:
                    failures.append({"chamber": idx, "lambda": vector_to_json(lam)})
                    break
        report["verify"] = {"samples_per_chamber": args.samples, "passed": not failures, "failures": failures}
        code = EXIT_OK if not failures else EXIT_FAIL
    return report, code


_RANKED = {"orbit-metric", "moment-recovery"}
DEFAULT_SUITES = ("orbit-metric", "moment-recovery", "projection-lemma", "m-oracle", "convexity", "rescale-identity")


def cmd_verify(args, run: RunConfig) -> tuple[dict, int]:
    if not args.suite:
        names = list(DEFAULT_SUITES)
    elif "all" in args.suite:
        names = list(SUITES)
    else:
        names = [n for n in SUITES if n in args.suite]
    results = []
    for name in names:
        kwargs = {} if args.full else dict(QUICK.get(name, {}))
        if args.rank is not None and name in _RANKED:
            kwargs["ranks"] = (args.rank,)
        if name == "m-oracle" and args.mutate == "sign-flip":
            kwargs["mutate"] = True
        if name in ("moment-recovery",):
            kwargs["tolerance"] = run.tolerance
            if run.mode == "exact":
                kwargs["samples"] = 0
                kwargs.setdefault("exact_samples", 5)
            elif run.mode == "float":
                kwargs["exact_samples"] = 0
        if name == "projection-lemma":
            if run.mode == "exact":
                kwargs["float_instances"] = 0
            elif run.mode == "float":
                kwargs["exact_instances"] = 0
        res = SUITES[name](run.seed, **kwargs)
        results.append(res.to_json(timing=args.timing))
    ok = all(r["passed"] for r in results)
    report = {"seed": run.seed, "mode": run.mode, "full": bool(args.full), "passed": ok, "suites": results}
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_master_check(args, run: RunConfig) -> tuple[dict, int]:
    data = load(args.config)
    if not isinstance(data, dict) or "r" not in data or "eps" not in data:
        raise ParseError("expected an object with keys 'r' and 'eps'", args.config)
    r = data["r"]
    if not isinstance(r, int) or r < 1:
        raise LiequotError("'r' must be a positive integer")
    eps = tuple(to_fraction(x) for x in data["eps"])
    grid = data.get("s_grid", {}) or {}
    max_den = int(grid.get("max_den", 16))
    n_random = int(grid.get("random", 1000))
    EpsilonShift(eps)  # validates strict dominance
    if len(eps) != r:
        raise LiequotError(f"'eps' has {len(eps)} entries, expected {r}")
    rng = np.random.default_rng(run.seed)

    counterexample = None
    checked = 0
    for s in rescale_grid(max_den, r):
        if len(s) != r:
            continue
        checked += 1
        if not rescale_identity_check(s):
            counterexample = [fmt(x) for x in s]
            break
    if counterexample is None:
        for _ in range(n_random):
            den = int(rng.integers(2, 1000))
            raw = sorted(int(x) for x in rng.integers(0, den, size=r))
            parts = [b - a for a, b in zip([0] + raw[:-1], raw)]
            s = tuple(Fraction(p, den) for p in parts)
            checked += 1
            if not rescale_identity_check(s):
                counterexample = [fmt(x) for x in s]
                break
    phi = phi_map(r)
    phi_ok = all(sum(row[j] for row in phi) == 0 for j in range(r))
    boundary = boundary_nonvanishing_check(r, eps)
    ok = counterexample is None and phi_ok and boundary
    report = {
        "r": r,
        "eps": [fmt(x) for x in eps],
        "rescale_identity": {"checked": checked, "passed": counterexample is None, "counterexample": counterexample},
        "phi_map": {"rows": matrix_to_json(phi), "column_sums_vanish": phi_ok},
        "boundary": {"scale_bound": fmt(scale_bound(r)), "nonvanishing": boundary},
        "passed": ok,
    }
    return report, EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# rendering


def render_text(report: dict) -> str:
    """Aligned ``key  value`` lines for the top-level scalar fields and suite rows."""
    lines = []
    scalars = {k: v for k, v in report.items() if not isinstance(v, (list, dict))}
    width = max((len(k) for k in scalars), default=0)
    for k in sorted(scalars):
        lines.append(f"{k.ljust(width)}  {scalars[k]}")
    for suite in report.get("suites", []):
        status = "PASS" if suite["passed"] else "FAIL"
        lines.append(f"{status}  {suite['suite']:<18} checked={suite['checked']} failures={suite['failures']}")
    for i, ch in enumerate(report.get("chambers", [])):
        rep = ",".join(ch["representative"])
        lines.append(f"chamber {i:<3} rep=({rep}) fingerprint={ch['fingerprint']} n_ss={ch['n_semistable']}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, run: RunConfig, fmt_name: str) -> None:
    text = dumps(report) if fmt_name == "json" else render_text(report)
    if run.output_path:
        with open(run.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        run = RunConfig(args.command, getattr(args, "config", None), args.out, args.mode, args.seed, args.tolerance)
        if args.command == "roots":
            report, code = cmd_roots(args)
        elif args.command == "chambers":
            report, code = cmd_chambers(args, run)
        elif args.command == "verify":
            report, code = cmd_verify(args, run)
        else:
            report, code = cmd_master_check(args, run)
    except LiequotError as exc:
        print(f"liequot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, run, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
