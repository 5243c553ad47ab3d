"""``sudoq`` command line.

Exit codes: 0 success (valid / Unique / audit passed), 1 check failed,
2 Stalled, 3 Unsolvable, 4 NotUnique, 64 malformed input, 65 numeric failure.
Paths may be ``-`` for stdin/stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analysis, audits, constructions, gridio, param4x4
from .linalg import Tolerances
from .model import SudoQGrid, cardinality, classify, validate
from .solver import SolveStatus, solve_unique

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_STALLED = 2
EXIT_UNSOLVABLE = 3
EXIT_NOT_UNIQUE = 4
EXIT_MALFORMED = 64
EXIT_NUMERIC = 65

SOLVE_EXIT = {
    SolveStatus.UNIQUE: EXIT_OK,
    SolveStatus.STALLED: EXIT_STALLED,
    SolveStatus.UNSOLVABLE: EXIT_UNSOLVABLE,
    SolveStatus.NOT_UNIQUE: EXIT_NOT_UNIQUE,
}


class MalformedInput(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(args):
    try:
        return gridio.loads(_read_text(args.grid), normalize=args.normalize)
    except (gridio.GridFormatError, ValueError) as exc:
        raise MalformedInput(str(exc)) from exc


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _family(kind: str, n: int, seed: int) -> np.ndarray:
    if kind == "identity":
        return constructions.identity_family(n)
    if kind == "hw":
        return constructions.hw_family(n)
    if kind == "haar":
        return constructions.haar_family(n, seed)
    raise MalformedInput(f"unknown family kind {kind!r}")


def _family_seeds(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def cmd_construct(args, tol: Tolerances) -> int:
    kind = args.kind
    if kind == "cyclic":
        design = constructions.classical_cyclic_grid(args.n)
    elif kind == "hw":
        design = constructions.hw_sudoq(args.n)
    elif kind == "families":
        s1, s2 = _family_seeds(args.seed, 2)
        design = constructions.grid_from_unitary_families(
            _family(args.us, args.n, s1), _family(args.vs, args.n, s2), tol)
    elif kind == "param4x4-c16":
        design = param4x4.solution_c16(param4x4.C16Params(
            args.alpha, args.gamma, args.phi, args.varphi, args.eta))
    elif kind == "param4x4-c8":
        design = param4x4.solution_c8(param4x4.C8Params(
            args.family, args.alpha, args.beta, args.phi, args.varphi))
    elif kind == "cube":
        fams = [_family(args.families, args.n, s) for s in _family_seeds(args.seed, 3)]
        design = constructions.cube_from_families(*fams, variant=args.variant, tol=tol)
    else:  # hypercube
        fams = [_family(args.families, args.n, s) for s in _family_seeds(args.seed, args.d_sides)]
        design = constructions.hypercube_from_families(args.d_sides, fams, tol)
    _write_text(args.out, gridio.dumps(design))
    return EXIT_OK


def cmd_validate(args, tol: Tolerances) -> int:
    report = validate(_load(args), tol)
    _write_text(args.out, _dump_json(report.to_dict()))
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_cardinality(args, tol: Tolerances) -> int:
    design = _load(args)
    if not design.is_complete:
        raise MalformedInput("cardinality needs a complete grid (blank cells present)")
    shape = (design.dim, design.dim) if isinstance(design, SudoQGrid) else None
    _write_text(args.out, _dump_json(cardinality(design, tol).to_dict(shape)))
    return EXIT_OK


def cmd_classify(args, tol: Tolerances) -> int:
    design = _load(args)
    if not design.is_complete:
        raise MalformedInput("classify needs a complete grid (blank cells present)")
    report = validate(design, tol)
    if not report.valid:
        _write_text(args.out, _dump_json({"valid": False, "class": None,
                                          "max_residual": report.max_residual}))
        return EXIT_FAIL
    c = cardinality(design, tol).c
    out = {"valid": True, "class": classify(design, tol).value, "c": c, "anomaly": None}
    if isinstance(design, SudoQGrid) and design.n == 2:
        out["anomaly"] = c not in param4x4.ADMISSIBLE_4X4
    _write_text(args.out, _dump_json(out))
    return EXIT_OK


def cmd_solve(args, tol: Tolerances) -> int:
    grid = _load(args)
    if not isinstance(grid, SudoQGrid):
        raise MalformedInput("solve works on grids, not hypercubes")
    outcome = solve_unique(grid, tol)
    doc = {
        "status": outcome.status.value,
        "solution": gridio.design_to_dict(outcome.solution) if outcome.solution else None,
        "witness": gridio.design_to_dict(outcome.witness) if outcome.witness else None,
        "partial": gridio.design_to_dict(outcome.partial) if outcome.partial else None,
        "trace": [{"row": s.row, "col": s.col, "sweep": s.sweep, "candidates": s.candidates}
                  for s in outcome.trace],
        "forcedness": outcome.forcedness(grid),
        "violation": outcome.violation,
    }
    _write_text(args.out, _dump_json(doc))
    return SOLVE_EXIT[outcome.status]


def cmd_audit(args, tol: Tolerances) -> int:
    if args.which == "theorem2":
        report = audits.four_clue_audit(args.draws, args.seed, tol)
        summary = f"theorem2: {report.unique}/{report.draws} Unique"
    elif args.which == "theorem1-sample":
        report = audits.cardinality_sample(args.draws, args.seed, tol)
        summary = (f"theorem1-sample: {report.draws} draws, cardinalities "
                   f"{sorted(report.observed)}, anomalies {len(report.anomalies)}")
    else:
        report = audits.classical_uniqueness_audit(args.patterns, args.restarts, args.seed, args.workers, tol)
        summary = (f"prop5: {report.witnesses_on_unique}/{report.patterns} patterns with a "
                   f"witness, two-row control witness {report.two_row_witness}")
    doc = report.to_dict()
    doc["summary"] = summary
    _write_text(args.out, _dump_json(doc))
    print(("PASS " if report.passed else "FAIL ") + summary, file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_analyze(args, tol: Tolerances) -> int:
    if args.what == "welch":
        designs = [d.strip() for d in args.designs.split(",") if d.strip()]
        for d in designs:
            if d not in analysis.DESIGNS:
                raise MalformedInput(f"unknown design {d!r}; choose from {analysis.DESIGNS}")
        _write_text(args.out, analysis.export_curves(designs, args.d, args.tmax))
    elif args.what == "angles":
        if args.grid is not None:
            vecs = _load(args).flat_vectors()
        else:
            vecs = analysis.design_vectors(args.design, args.d)
            if vecs is None:
                raise MalformedInput(f"no explicit vectors for {args.design} in d={args.d}")
        metrics = analysis.design_metrics(vecs, args.tmax, tol.eq_tol)
        _write_text(args.out, _dump_json(metrics.to_dict()))
    elif args.what == "local-compare":
        rows = [analysis.local_design_comparison(n).to_dict() for n in _int_list(args.n)]
        _write_text(args.out, _dump_json(rows))
    else:  # table1
        rows = analysis.closed_form_audit(tuple(_int_list(args.d_list)), tuple(_int_list(args.t_list)))
        _write_text(args.out, analysis.closed_form_csv(rows))
        bad = sum(not r.match for r in rows)
        print(f"table1: {bad}/{len(rows)} printed values differ from the reference", file=sys.stderr)
    return EXIT_OK


def cmd_entropy(args, tol: Tolerances) -> int:
    if args.sweep:
        lines = ["p,q,S_closed,S_direct_total"]
        for p, q, closed, total in param4x4.entropy_sweep(args.steps):
            lines.append(f"{p:.17g},{q:.17g},{closed:.17g},{total:.17g}")
        _write_text(args.out, "\n".join(lines))
        return EXIT_OK
    if args.grid is None:
        raise MalformedInput("entropy needs a grid path or --sweep")
    grid = _load(args)
    if not isinstance(grid, SudoQGrid) or not grid.is_complete:
        raise MalformedInput("entropy needs a complete grid")
    report = param4x4.entropy(grid, args.p, args.q)
    _write_text(args.out, _dump_json(report.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sudoq", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=float, default=None,
                        help="equality/orthonormality tolerance (solver uses 10x); "
                             "falls back to $SUDOQ_TOL")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_out(p):
        p.add_argument("--out", "-o", default="-", help="output path or - for stdout")
        return p

    def with_grid(p, optional=False):
        if optional:
            p.add_argument("grid", nargs="?", default=None, help="grid JSON path or -")
        else:
            p.add_argument("grid", help="grid JSON path or -")
        p.add_argument("--normalize", action="store_true",
                       help="divide each cell by its norm on load")
        return p

    c = with_out(sub.add_parser("construct", help="emit a generated grid or hypercube"))
    c.add_argument("kind", choices=["cyclic", "families", "hw", "param4x4-c16", "param4x4-c8",
                                    "cube", "hypercube"])
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--us", default="haar", choices=["haar", "identity", "hw"])
    c.add_argument("--vs", default="haar", choices=["haar", "identity", "hw"])
    c.add_argument("--families", default="haar", choices=["haar", "identity", "hw"])
    c.add_argument("--variant", default="standard", choices=["standard", "even_modified"])
    c.add_argument("--d-sides", type=int, default=3)
    c.add_argument("--family", type=int, default=1)
    for name, default in (("alpha", np.pi / 2), ("beta", np.pi / 2), ("gamma", np.pi / 2),
                          ("phi", 0.0), ("varphi", 0.0), ("eta", 0.0)):
        c.add_argument(f"--{name}", type=float, default=default)
    c.set_defaults(func=cmd_construct)

    for name, func, text in (("validate", cmd_validate, "check every constraint group"),
                             ("cardinality", cmd_cardinality, "count phase-distinct vectors"),
                             ("classify", cmd_classify, "classical / apparently / genuinely quantum"),
                             ("solve", cmd_solve, "complete a partial grid by forced moves")):
        p = with_out(with_grid(sub.add_parser(name, help=text)))
        p.set_defaults(func=func)

    a = with_out(sub.add_parser("audit", help="seeded sampling audits"))
    a.add_argument("which", choices=["theorem2", "prop5", "theorem1-sample"])
    a.add_argument("--draws", type=int, default=None)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--patterns", type=int, default=10)
    a.add_argument("--restarts", type=int, default=200)
    a.add_argument("--workers", type=int, default=None)
    a.set_defaults(func=cmd_audit)

    z = sub.add_parser("analyze", help="design metrics")
    z.add_argument("what", choices=["welch", "angles", "local-compare", "table1"])
    with_out(with_grid(z, optional=True))
    z.add_argument("--designs", default="sudoq,mub,sic")
    z.add_argument("--d", type=int, default=4)
    z.add_argument("--tmax", type=int, default=6)
    z.add_argument("--design", default="sudoq")
    z.add_argument("--n", default="2,3,5")
    z.add_argument("--d-list", default="4,9")
    z.add_argument("--t-list", default="1,2,3")
    z.set_defaults(func=cmd_analyze)

    e = with_out(with_grid(sub.add_parser("entropy", help="Shannon entropy of a 4x4 grid"),
                           optional=True))
    e.add_argument("--p", type=float, default=None)
    e.add_argument("--q", type=float, default=None)
    e.add_argument("--sweep", action="store_true", help="CSV over a (p, q) lattice")
    e.add_argument("--steps", type=int, default=101)
    e.set_defaults(func=cmd_entropy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "audit" and args.draws is None:
        args.draws = 100 if args.which == "theorem2" else 1000
    try:
        tol = Tolerances.uniform(args.tol) if args.tol is not None else Tolerances.from_env()
    except ValueError as exc:
        print(f"sudoq: bad tolerance: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        return args.func(args, tol)
    except MalformedInput as exc:
        print(f"sudoq: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"sudoq: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"sudoq: invalid argument: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except RuntimeError as exc:
        print(f"sudoq: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
