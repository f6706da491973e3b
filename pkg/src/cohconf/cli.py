"""Command line interface.

Every report is printed as one JSON object per line with fixed keys.
Exit codes: 0 certified or valid, 1 inconclusive or invalid, 2 usage error,
3 budget exceeded.  Files named ``-`` are read from standard input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import builders, ccf, closure, couples, iso, separability
from .budget import BudgetExceeded
from .gf import build_field, prime_power

OK, NOT_OK, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj: dict, out) -> None:
    out.write(json.dumps(obj, separators=(", ", ": ")) + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="ascii", errors="surrogateescape", newline="") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _load(path: str):
    text = _read(path)
    return ccf.parse_ccf(text.encode("ascii", errors="surrogateescape"))


def _field(p: int, d: int):
    if prime_power(p) != (p, 1):
        raise UsageError(f"{p} is not prime")
    if d < 1:
        raise UsageError("degree must be positive")
    return build_field(p, d)


def _summary(X) -> dict:
    return {"n": X.n, "rank": X.rank, "homogeneous": X.is_homogeneous, "valencies": X.valency.tolist()}


# -- subcommands ---------------------------------------------------------------

def cmd_field_info(a, out) -> int:
    F = _field(a.p, a.d)
    _emit({
        "report": "field",
        "p": F.p,
        "d": F.d,
        "q": F.q,
        "modulus": list(F.modulus),
        "primitive": list(F.primitive.rep),
    }, out)
    return OK


def cmd_build(a, out) -> int:
    if a.family == "cyclotomic":
        if a.index is None:
            raise UsageError("cyclotomic needs p d index")
        X = builders.cyclotomic_scheme(_field(a.p, a.d), a.index)
    elif a.family == "cscheme":
        X = builders.c_scheme(_field(a.p, a.d))
    else:
        kind = a.kind or ("graph" if a.p % 4 == 1 else "tournament")
        X = builders.paley(a.p, kind).scheme
    out.write(ccf.write_ccf(X))
    return OK


def cmd_validate(a, out) -> int:
    X = _load(a.file)
    _emit({"report": "validate", "valid": True, **_summary(X)}, out)
    return OK


def cmd_analyze(a, out) -> int:
    X = _load(a.file)
    rep = separability.analyze(X, deep=a.deep)
    _emit({"report": "analysis", **rep.as_dict()}, out)
    return OK if rep.conclusion != separability.INCONCLUSIVE else NOT_OK


def _read_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    """``n`` on the first line, then one directed arc ``a b`` per line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise UsageError("empty graph file")
    try:
        n = int(lines[0])
        arcs = []
        for ln in lines[1:]:
            a, b = ln.split()
            arcs.append((int(a), int(b)))
    except ValueError as e:
        raise UsageError(f"graph file: expected 'n' then one 'a b' arc per line ({e})") from e
    return n, arcs


def cmd_closure(a, out) -> int:
    n, arcs = _read_graph(_read(a.file))
    try:
        X = closure.graph_closure(arcs, n)
    except ValueError as e:
        raise UsageError(str(e)) from e
    out.write(ccf.write_ccf(X))
    return OK


def cmd_extend(a, out) -> int:
    X = _load(a.file)
    if (a.point is None) == (a.m is None):
        raise UsageError("give exactly one of --point or --m")
    if a.point is not None:
        if not 0 <= a.point < X.n:
            raise UsageError(f"point {a.point} out of range")
        Y = closure.point_extension(X, a.point)
    else:
        if a.m != 2:
            raise UsageError("only --m 2 is supported")
        Y = closure.m_extension(X, 2)
    out.write(ccf.write_ccf(Y))
    return OK


def cmd_couples(a, out) -> int:
    X = _load(a.file)
    if not 0 <= a.mu < X.n:
        raise UsageError(f"point {a.mu} out of range")
    rep = couples.check_theorem_conditions(X, a.mu, delta_size=a.delta_size, seed=a.seed)
    _emit({"report": "conditions", **rep.as_dict()}, out)
    return OK if rep.fully_holds else NOT_OK


def cmd_exceptional(a, out) -> int:
    for e in separability.exceptional_pairs():
        _emit({"report": "exceptional-pair", **e.as_dict()}, out)
    for row in separability.table_inconsistencies():
        _emit({"report": "table-inconsistency", **row}, out)
    return OK


def cmd_two_sep(a, out) -> int:
    rep = separability.two_separability_report(_field(a.p, a.d), a.index)
    _emit({"report": "two-separability", **rep.as_dict()}, out)
    return OK if rep.conclusion == separability.TWO_SEPARABLE else NOT_OK


def cmd_paley_bound(a, out) -> int:
    try:
        rep = separability.paley_wl_bound(a.q, a.kind)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit({"report": "paley-bound", **rep.as_dict()}, out)
    return OK if rep.bound == 3 else NOT_OK


def cmd_aut(a, out) -> int:
    X = _load(a.file)
    G = iso.automorphism_group(X)
    _emit({"report": "automorphisms", "n": X.n, "order": G.order, "generators": [list(g) for g in G.generators]}, out)
    return OK


def cmd_aiso(a, out) -> int:
    X, Y = _load(a.file_a), _load(a.file_b)
    maps = iso.algebraic_isomorphisms(X, Y)
    _emit({"report": "algebraic-isomorphisms", "count": len(maps), "maps": [list(m.phi) for m in maps]}, out)
    return OK if maps else NOT_OK


def cmd_witness(a, out) -> int:
    X = _load(a.file)
    w = iso.separability_witness(X)
    _emit({"report": "witness", "n": X.n, **w.as_dict()}, out)
    return OK if w.holds else NOT_OK


def cmd_ingest(a, out) -> int:
    errors: list = []
    configs = ccf.ingest_catalog(_read(a.catalog), a.format, strict=a.strict, errors=errors)
    target = _load(a.locate) if a.locate else None
    hits = set(ccf.locate(configs, target)) if target is not None else set()
    for i, X in enumerate(configs):
        row = {"report": "catalog-entry", "index": i, **_summary(X)}
        if target is not None:
            row["matches"] = i in hits
        _emit(row, out)
    for e in errors:
        _emit(e.as_dict(), out)
    return NOT_OK if errors else OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cohconf", description="Coherent configurations and separability checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("field-info", help="modulus and primitive element of GF(p^d)")
    s.add_argument("p", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_field_info)

    s = sub.add_parser("build", help="write a scheme as CCF")
    s.add_argument("family", choices=["cyclotomic", "cscheme", "paley"])
    s.add_argument("p", type=int, help="prime, or q for paley")
    s.add_argument("d", type=int, nargs="?", default=1)
    s.add_argument("index", type=int, nargs="?")
    s.add_argument("--kind", choices=["graph", "tournament"], default=None)
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("validate", help="check the axioms of a CCF file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("analyze", help="evaluate the separability inequality")
    s.add_argument("file")
    s.add_argument("--deep", action="store_true", help="also check the point conditions at point 0")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("closure", help="WL closure of a graph ('n' then 'a b' arcs)")
    s.add_argument("file")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("extend", help="point extension or 2-extension")
    s.add_argument("file")
    s.add_argument("--point", type=int)
    s.add_argument("--m", type=int)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("couples-check", help="conditions (i) and (ii) at a base point")
    s.add_argument("file")
    s.add_argument("--mu", type=int, required=True)
    s.add_argument("--delta-size", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_couples)

    s = sub.add_parser("exceptional-table", help="(p, d) pairs left open by the inequality")
    s.set_defaults(func=cmd_exceptional)

    s = sub.add_parser("two-sep", help="2-separability report for a cyclotomic scheme")
    s.add_argument("p", type=int)
    s.add_argument("d", type=int)
    s.add_argument("index", type=int, help="index of the subgroup M in F^x")
    s.set_defaults(func=cmd_two_sep)

    s = sub.add_parser("paley-bound", help="WL-dimension bound for Paley graphs and tournaments")
    s.add_argument("q", type=int)
    s.add_argument("--kind", choices=["graph", "tournament"], default=None)
    s.set_defaults(func=cmd_paley_bound)

    s = sub.add_parser("aut", help="automorphism group")
    s.add_argument("file")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("aiso", help="algebraic isomorphisms between two configurations")
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.set_defaults(func=cmd_aiso)

    s = sub.add_parser("witness", help="compare |iso|/|aut| with |Aiso|")
    s.add_argument("file")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("ingest", help="validate every block of a catalog")
    s.add_argument("catalog")
    s.add_argument("--format", choices=list(ccf.FORMATS), default="ccf-multi")
    s.add_argument("--lenient", dest="strict", action="store_false", help="skip bad blocks instead of stopping")
    s.add_argument("--locate", metavar="FILE", help="mark entries algebraically isomorphic to this CCF file")
    s.set_defaults(func=cmd_ingest)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return a.func(a, out)
    except UsageError as e:
        print(f"cohconf: {e}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as e:
        _emit({"report": "error", "error": "budget", "message": str(e)}, out)
        return BUDGET
    except ccf.CCFError as e:
        _emit({"report": "error", **e.as_dict()}, out)
        return NOT_OK
    except ccf.CatalogError as e:
        _emit({"report": "error", **e.as_dict()}, out)
        return NOT_OK
    except ValueError as e:
        print(f"cohconf: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
