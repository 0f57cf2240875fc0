"""Command-line front end.

Exit codes: 0 success, 2 domain error (bad input), 3 internal-consistency
failure (including a failed verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from . import gluing, index, invariants, pants, strata
from .surface_types import ConsistencyError, DomainError, MarkedTopType, TopType, classify_symmetric, quotient_type

EXIT_OK, EXIT_DOMAIN, EXIT_CONSISTENCY = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "--table -2..3" through as a value rather than an option
        self._negative_number_matcher = re.compile(r"^-\d+$|^-\d*\.\d+$|^-\d+\.\.-?\d+$")

    def error(self, message):
        raise DomainError(message)


def _int_list(text: str) -> tuple[int, ...]:
    if text.strip() == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _a_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return range(int(lo), int(hi) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--table expects AMIN..AMAX, got {text!r}") from None


def _marked(args) -> MarkedTopType:
    m = args.m if args.m is not None else (0,) * args.h
    return MarkedTopType.of(args.g, args.h, args.n, m)


def _add_type(p, need_n=True):
    p.add_argument("--g", type=int, required=True, help="genus")
    p.add_argument("--h", type=int, required=True, help="number of boundary circles")
    if need_n:
        p.add_argument("--n", type=int, default=0, help="interior marked points")
        p.add_argument("--m", type=_int_list, default=None, help="boundary marked points per circle, e.g. 1,0")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", help="write the report here instead of stdout")
    ap = _Parser(prog="bordered-moduli", description="Moduli of bordered Riemann surfaces: strata, indices, invariants, gluing checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("classify", help="topological types of symmetric surfaces of genus gtilde")
    p.add_argument("--gtilde", type=int, required=True)

    p = sub.add_parser("strata", help="boundary strata of a moduli space")
    _add_type(p)
    p.add_argument("--graphs", action="store_true", help="include every stratum")
    p.add_argument("--poset", action="store_true", help="include the covering relation")
    p.add_argument("--dot", help="write the degeneration poset in DOT format to this path")

    p = sub.add_parser("dim", help="real dimension of the moduli space")
    _add_type(p)

    p = sub.add_parser("index", help="Fredholm index of the linearized operator")
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=int, help="genus (smooth domain)")
    p.add_argument("--h", type=int, help="boundary circles (smooth domain)")
    p.add_argument("--gtilde", type=int, help="arithmetic genus of the double (nodal domain)")

    p = sub.add_parser("vdim", help="virtual dimension of the moduli of stable maps")
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_type(p)

    p = sub.add_parser("pants", help="pants counts and associahedron identification")
    p.add_argument("--check-k5", action="store_true")
    p.add_argument("--gtilde", type=int)
    p.add_argument("--ntilde", type=int, default=0)
    p.add_argument("--dot", help="write the K5 face lattice in DOT format to this path")

    p = sub.add_parser("invariant", help="conjectural multiple-cover invariant C(g;h|d;n|a)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=_int_list, required=True, help="winding numbers n_1,...,n_h")
    p.add_argument("--a", type=int, help="torus weight")
    p.add_argument("--table", type=_a_range, help="tabulate over AMIN..AMAX")
    p.add_argument("--oracle", choices=("builtin", "genus01"), default="builtin")

    p = sub.add_parser("verify-gluing", help="numerical checks of the pregluing estimates")
    p.add_argument("--r-list", type=_float_list, default=gluing.DEFAULT_R_LIST)
    p.add_argument("--p", type=float, action="append", help="L^p exponent (repeatable; default 2 and 4)")
    return ap


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(report: dict, fmt: str, rows_key: str | None = None) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv" and rows_key and report.get(rows_key):
        rows = report[rows_key]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        return buf.getvalue()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in report.items():
            w.writerow([k, json.dumps(v) if isinstance(v, (list, dict)) else v])
        return buf.getvalue()
    lines = []
    for k, v in report.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            lines.extend(f"  {json.dumps(x, sort_keys=True)}" for x in v)
        else:
            lines.append(f"{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}")
    return "\n".join(lines) + "\n"


def _cmd_classify(args) -> tuple[dict, str | None, int]:
    rows = []
    for s in classify_symmetric(args.gtilde):
        q = quotient_type(s)
        rows.append({"g_tilde": s.g_tilde, "h": s.h, "k": s.k, "quotient_orientable": q.orientable, "quotient_genus": q.g})
    return {"g_tilde": args.gtilde, "count": len(rows), "types": rows}, "types", EXIT_OK


def _cmd_strata(args):
    t = _marked(args)
    en = strata.enumerate_strata(t)
    report = {
        "type": {"g": t.g, "h": t.h, "n": t.n, "m": list(t.m)},
        "moduli_dim": index.moduli_dim(t),
        "counts": en.counts(),
        "total": len(en),
    }
    if args.graphs or args.format == "csv":
        report["strata"] = [dict(s.to_dict(), id=i) for i, s in enumerate(en.strata)]
    if args.poset or args.dot:
        poset = strata.degeneration_poset(t)
        ids = {s.key: i for i, s in enumerate(en.strata)}
        if args.poset:
            report["covers"] = sorted([ids[a], ids[b]] for a, b in poset.covers)
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(pants.to_dot(poset, "strata", lambda k: f"#{ids[k]}"))
    return report, "strata", EXIT_OK


def _cmd_dim(args):
    t = _marked(args)
    return {"type": str(t), "moduli_dim": index.moduli_dim(t)}, None, EXIT_OK


def _cmd_index(args):
    if args.gtilde is not None:
        if args.g is not None or args.h is not None:
            raise DomainError("give either --gtilde or --g/--h, not both")
        value = index.fredholm_index_nodal(args.mu, args.N, args.gtilde)
        return {"mu": args.mu, "N": args.N, "g_tilde": args.gtilde, "fredholm_index": value}, None, EXIT_OK
    if args.g is None or args.h is None:
        raise DomainError("index needs --g and --h (or --gtilde)")
    t = TopType(args.g, args.h)
    value = index.fredholm_index_smooth(args.mu, args.N, t.g, t.h)
    return {"mu": args.mu, "N": args.N, "g": t.g, "h": t.h, "fredholm_index": value}, None, EXIT_OK


def _cmd_vdim(args):
    t = _marked(args)
    rep = index.index_report(args.mu, args.N, t)
    out = {"type": str(t), "mu": args.mu, "N": args.N, "virtual_dim": rep.virtual_dim,
           "fredholm_index": rep.fredholm_index, "moduli_dim": rep.moduli_dim}
    return out, None, EXIT_OK


def _cmd_pants(args):
    report: dict = {}
    code = EXIT_OK
    if args.gtilde is not None:
        curves, pp = pants.pants_counts(args.gtilde, args.ntilde)
        report.update(g_tilde=args.gtilde, n_tilde=args.ntilde, curves=curves, pants=pp)
    if args.check_k5 or args.gtilde is None:
        k5 = pants.associahedron(3)
        res = pants.check_k5_identification(target=k5)
        report.update(k5_f_vector=list(k5.f_vector), isomorphic=res.isomorphic)
        if not res.isomorphic:
            report.update(reason=res.reason, witness=repr(res.witness))
            code = EXIT_CONSISTENCY
        if args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(pants.to_dot(k5, "K5"))
    return report, None, code


def _cmd_invariant(args):
    oracle = invariants.builtin_oracle_g1() if args.oracle == "builtin" else invariants.genus_le1_oracle()
    if args.table is None and args.a is None:
        raise DomainError("invariant needs --a or --table")
    a_values = args.table if args.table is not None else [args.a]
    rows = invariants.invariant_table(args.g, args.h, args.d, args.n, a_values, oracle)
    if args.table is None:
        r = rows[0]
        return {"g": r.g, "h": r.h, "d": r.d, "n": list(r.n), "a": r.a, "value": invariants.rational_str(r.value)}, None, EXIT_OK
    symmetric = all(invariants.sign_symmetry_check(args.g, args.h, args.d, args.n, a, oracle) for a in a_values)
    return {"rows": [r.to_dict() for r in rows], "sign_symmetry": symmetric}, "rows", EXIT_OK


def _cmd_verify_gluing(args):
    p_list = tuple(args.p) if args.p else (2.0, 4.0)
    report = gluing.verify_gluing(r_list=args.r_list, p_list=p_list)
    return report, "scaling", EXIT_OK if report["passed"] else EXIT_CONSISTENCY


COMMANDS = {
    "classify": _cmd_classify,
    "strata": _cmd_strata,
    "dim": _cmd_dim,
    "index": _cmd_index,
    "vdim": _cmd_vdim,
    "pants": _cmd_pants,
    "invariant": _cmd_invariant,
    "verify-gluing": _cmd_verify_gluing,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report, rows_key, code = COMMANDS[args.command](args)
        _emit(_render(report, args.format, rows_key), args)
        return code
    except (DomainError, strata.StructuralError, invariants.UnsupportedHodgeIntegral) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
