"""Command-line front end.

Exit codes: 0 success, 1 the check ran and found violations, 2 bad input or
an impossible request (unreadable file, schema error, capacity shortfall).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInputError, TrialgError
from .generators import random_nest_operator
from .nestlab import (
    ModelSpace,
    build_fixture,
    cell_profile,
    liminal,
    membership,
    product_inequality_check,
)
from .serialize import InputError, dumps, load_operator, load_system
from .tsys import check_extended, check_triangular, complete_to_maximal, induced_cut_at, is_maximal
from .tsys.examples import build_example
from .tsys.order import default_mode

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    m: int = 16
    k: int = 6
    c: int = 4
    tol: float = 1e-9
    eta: str = "0"
    w_floor: int = 1
    format: str = "json"
    seed: int = 0


def _config(args, command: str, inputs=()) -> RunConfig:
    return RunConfig(
        command=command,
        inputs=[str(p) for p in inputs],
        m=args.m,
        k=args.k,
        c=args.c,
        tol=args.tol,
        eta=str(Fraction(args.eta)),
        w_floor=args.wfloor,
        format=args.format,
        seed=args.seed,
    )


def _report(cfg: RunConfig, body: dict) -> dict:
    return {"config": asdict(cfg), "version": __version__, **body}


def _emit(text: str, out: Path | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


# -- commands -------------------------------------------------------------------


def cmd_check(args) -> int:
    system = load_system(args.system)
    if args.mode == "triangular":
        rep = check_triangular(system, verbose=args.verbose)
    else:
        rep = check_extended(system, args.mode, verbose=args.verbose)
    body = {"report": rep.to_json()}
    if args.maximal and rep.passed and args.mode == "extended":
        body["maximality"] = is_maximal(system, args.maximal, verbose=args.verbose).to_json()
    _emit(dumps(_report(_config(args, "check", [args.system]), body)))
    ok = rep.passed and body.get("maximality", {"passed": True})["passed"]
    return EXIT_OK if ok else EXIT_FAIL


def cmd_complete(args) -> int:
    system = load_system(args.system)
    cfg = _config(args, "complete", [args.system])
    pre = check_extended(system)
    if not pre.passed:
        _emit(dumps(_report(cfg, {"report": pre.to_json(), "error": "input is not an extended triangular system"})))
        return EXIT_FAIL
    mode = args.mode or default_mode(system)
    done, rounds = complete_to_maximal(system, mode, return_rounds=True)
    rep = is_maximal(done, mode)
    body = {"maximality": rep.to_json(), "rounds": rounds, "changed": done is not system, "mode": mode}
    if args.out:
        _emit(dumps(done.to_json()), Path(args.out))
    else:
        body["system"] = done.to_json()
    _emit(dumps(_report(cfg, body)))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _space(args, k=None, c=None) -> ModelSpace:
    return ModelSpace(args.m, args.k if k is None else k, args.c if c is None else c)


def cmd_lab_seminorm(args) -> int:
    if args.op:
        X = load_operator(args.op)
        inputs = [args.op]
    else:
        X = random_nest_operator(np.random.default_rng(args.seed), _space(args))
        inputs = []
    prof = liminal(X, args.axis, args.index, args.cell, args.wfloor)
    cfg = _config(args, "lab seminorm", inputs)
    if args.format == "csv":
        _emit(prof.to_csv())
    else:
        _emit(dumps(_report(cfg, {"profile": prof.to_json(), "nonincreasing": prof.is_nonincreasing()})))
    return EXIT_OK


def cmd_lab_membership(args) -> int:
    system = load_system(args.system)
    X = load_operator(args.op)
    rep = membership(X, system, args.tol, Fraction(args.eta), args.wfloor)
    _emit(dumps(_report(_config(args, "lab membership", [args.system, args.op]), {"membership": rep.to_json()})))
    return EXIT_OK if rep.member else EXIT_FAIL


def cmd_lab_witness(args) -> int:
    out = _out_dir(args)
    cfg = _config(args, f"lab witness {args.kind}")
    if args.kind == "nonclosure":
        c = max(args.c, args.m - 2)
        X, Y = build_fixture("nonclosure", ModelSpace(args.m, max(2, args.k), c), i=1, j=2)
        prof = cell_profile(X @ Y, 3, [1], [2])
        low = float(prof.min())
        factors = max(cell_profile(X, 1).max(), cell_profile(Y, 1).max())
        body = {"min_cell_seminorm_w3": low, "max_factor_cell_seminorm_w1": float(factors)}
        if out:
            _emit(dumps(X.to_json()), out / "X.json")
            _emit(dumps(Y.to_json()), out / "Y.json")
            rows = ["cell_lo,cell_hi,value,w_floor"] + [f"{q}/{args.m},{q + 1}/{args.m},{v!r},3" for q, v in enumerate(prof.tolist())]
            _emit("\n".join(rows) + "\n", out / "profile.csv")
            _emit(dumps(_report(cfg, body)), out / "report.json")
        print(f"min over cells of i(E1 XY E2, w=3) = {low}")
        return EXIT_OK if low >= 1 - 1e-9 and factors == 0 else EXIT_FAIL
    if args.kind == "rinf":
        from .borel import BorelSet
        from .nestlab import rinf_seminorm

        space = ModelSpace(args.m, args.k, max(args.c, args.k))
        K = BorelSet.interval(Fraction(1, 4), Fraction(1, 2))
        T = build_fixture("rinf_witness", space, K=K, j=1)
        w = max(2, args.wfloor)
        s_min = max(1, args.k // 2)
        vals = [rinf_seminorm(T, "col", 1, q, s_min, w) for q in range(1, args.m + 1)]
        body = {"s_min": s_min, "w_floor": w, "values": vals}
        if out:
            _emit(dumps(T.to_json()), out / "T.json")
        _emit(dumps(_report(cfg, body)), None)
        return EXIT_OK
    if args.kind == "nonsimple":
        X = build_fixture("nonsimple", _space(args, c=1))
        if out:
            _emit(dumps(X.to_json()), out / "X.json")
        _emit(dumps(_report(cfg, {"links": len(X.links)})))
        return EXIT_OK
    raise InputError(f"unknown witness {args.kind!r}")


def cmd_lab_inequality(args) -> int:
    rng = np.random.default_rng(args.seed)
    space = _space(args)
    if not 0 <= args.r < space.k:
        raise InputError(f"--r must satisfy 0 <= r < k={space.k}")
    X = random_nest_operator(rng, space)
    Y = random_nest_operator(rng, space)
    failures, total, worst = [], 0, -math.inf
    for i in range(1, space.k + 1):
        for j in range(1, space.k + 1):
            for q in range(1, space.m + 1):
                rec = product_inequality_check(X, Y, i, j, q, args.r, args.wfloor)
                total += 1
                worst = max(worst, rec.left - rec.right)
                if not rec.holds:
                    failures.append(rec.to_json())
    body = {"checked": total, "failures": failures, "max_left_minus_right": worst, "r": args.r}
    _emit(dumps(_report(_config(args, "lab inequality"), body)))
    return EXIT_OK if not failures else EXIT_FAIL


def _grid_for(system, base: int) -> int:
    dens = [base]
    for s in system.sets():
        for p in s.endpoints():
            dens.append(p.denominator)
    return math.lcm(*dens)


def cmd_demo(args) -> int:
    system = build_example(args.example)
    ext = check_extended(system)
    maxi = is_maximal(system, "truncated")
    part = system.refinement()
    sample = part.cells[: min(len(part.cells), 8)]
    labels = system.template.labels

    def lab(v):
        v = labels[v - 1]
        return list(v) if isinstance(v, tuple) else (str(v) if isinstance(v, Fraction) else v)

    cuts = []
    for cell in sample:
        cut = induced_cut_at(system, cell.lo)
        cuts.append(
            {
                "cell": cell.to_json(),
                "A": [lab(i) for i in sorted(cut.A)],
                "B": [lab(i) for i in sorted(cut.B)],
                "virtual": cut.virtual,
                "kind": cut.kind,
                "order": [lab(i) for i in cut.order()],
            }
        )
    m = _grid_for(system, args.m)
    space = ModelSpace(m, system.size, 1)
    X = build_fixture("member", space, system=system)
    mem = membership(X, system, args.tol, Fraction(args.eta), 1)
    body = {
        "example": args.example,
        "extended": ext.to_json(),
        "maximal_truncated": maxi.to_json(),
        "cuts": cuts,
        "distinct_orders": len({c.relation.tobytes() for c in (induced_cut_at(system, x.lo) for x in part.cells)}),
        "member_fixture": {"m": m, "member": mem.member},
    }
    out = _out_dir(args)
    if out:
        _emit(dumps(system.to_json()), out / "system.json")
        _emit(dumps(X.to_json()), out / "member.json")
        _emit(dumps(_report(_config(args, f"demo {args.example}"), body)), out / "report.json")
    _emit(dumps(_report(_config(args, f"demo {args.example}"), body)))
    return EXIT_OK if ext.passed and maxi.passed and mem.member else EXIT_FAIL


# -- parser -----------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model and reporting")
    g.add_argument("--m", type=int, default=16, help="grid cells (default 16)")
    g.add_argument("--k", type=int, default=6, help="blocks (default 6)")
    g.add_argument("--c", type=int, default=4, help="channels per cell and block (default 4)")
    g.add_argument("--tol", type=float, default=1e-9, help="seminorm tolerance (default 1e-9)")
    g.add_argument("--eta", default="0", help="exceptional measure budget, exact rational (default 0)")
    g.add_argument("--wfloor", type=int, default=1, help="window floor in cells (default 1)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--seed", type=int, default=0, help="seed for random operators (default 0)")
    g.add_argument("--out", help="output file or directory")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="trialg",
        description="Check, complete and probe extended triangular systems and their model operators.",
        epilog="Exit codes: 0 pass, 1 violations found, 2 input error. "
        "Set TRIALG_THREADS to evaluate window norms on that many threads.",
    )
    parser.add_argument("--version", action="version", version=f"trialg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check the system axioms")
    p.add_argument("system")
    p.add_argument("--mode", choices=("extended", "nearly", "triangular"), default="extended")
    p.add_argument("--maximal", choices=("finite", "truncated"), help="also check maximality")
    p.add_argument("--verbose", action="store_true", help="report every violating cell")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("complete", parents=[common], help="enlarge a system to a maximal one")
    p.add_argument("system")
    p.add_argument("--mode", choices=("finite", "truncated"))
    p.set_defaults(func=cmd_complete)

    lab = sub.add_parser("lab", help="seminorm and operator experiments")
    labsub = lab.add_subparsers(dest="lab_command", required=True)

    p = labsub.add_parser("seminorm", parents=[common], help="liminal profile of an operator")
    p.add_argument("--op", help="operator JSON (default: random nest operator from --seed)")
    p.add_argument("--axis", choices=("row", "col"), default="row")
    p.add_argument("--index", type=int, default=1)
    p.add_argument("--cell", type=int)
    p.set_defaults(func=cmd_lab_seminorm)

    p = labsub.add_parser("membership", parents=[common], help="membership of an operator in a system's algebra")
    p.add_argument("--system", required=True)
    p.add_argument("--op", required=True)
    p.set_defaults(func=cmd_lab_membership)

    p = labsub.add_parser("witness", parents=[common], help="build and verify a witness fixture")
    p.add_argument("kind", choices=("nonclosure", "rinf", "nonsimple"))
    p.set_defaults(func=cmd_lab_witness)

    p = labsub.add_parser("inequality", parents=[common], help="product inequality on a random pair")
    p.add_argument("--r", type=int, default=1)
    p.set_defaults(func=cmd_lab_inequality)

    p = sub.add_parser("demo", parents=[common], help="build and verify an example system")
    p.add_argument("example", choices=("nat", "int", "wo", "cantor", "mixed"))
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        Fraction(args.eta)
    except (ValueError, ZeroDivisionError):
        parser.error(f"--eta must be an exact rational, got {args.eta!r}")
    try:
        return args.func(args)
    except InvalidInputError as exc:
        report = exc.report.to_json() if exc.report is not None else None
        sys.stderr.write(f"trialg: {exc}\n")
        if report:
            sys.stderr.write(dumps(report))
        return EXIT_FAIL
    except (InputError, TrialgError) as exc:
        sys.stderr.write(f"trialg: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
