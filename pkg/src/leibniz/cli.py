"""Command-line interface: ``leibniz <command> ALGEBRA [options]``.

Exit codes: 0 success, 1 the checked property fails, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus
from .algebra import (
    SERIES_KINDS,
    check_leibniz_identity,
    check_n_algebra_identity,
    is_nilpotent,
    is_solvable,
    series,
)
from .derivations import (
    classify,
    construct_moens_derivation,
    derivation_space,
    exists_invertible,
    invariance_check,
    theorem_check,
)
from .errors import (
    CorpusFormatError,
    IdentityViolation,
    LeibnizError,
    NonSplitSpectrum,
    NotAnIdeal,
    NotNilpotent,
    OrderOutOfRange,
    ShapeError,
)
from .exactmath import format_rational
from .linalg import decompose
from .verify import verify_paper

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _load(arg, unchecked=None):
    return corpus.load(corpus.resolve_path(arg), unchecked=unchecked)


def _rows(space):
    return space.to_strings()


def _subspace_text(space, indent="  "):
    if space.is_zero():
        return [f"{indent}(zero subspace)"]
    return [indent + "(" + ", ".join(r) + ")" for r in space.to_strings()]


def _matrix_text(m, indent="  "):
    return [indent + line for line in m.pretty().splitlines()]


def _ideal(L, spec: str):
    if spec.startswith("meta:"):
        key = spec[5:]
        if key not in L.meta:
            raise UsageError(f"{L.name or 'algebra'} has no annotation {key!r}")
        return L.meta[key], spec
    if spec == "L":
        return L.full(), "L"
    if spec == "L2":
        from .algebra import product_subspace

        return product_subspace(L, L.full(), L.full()), "L^2"
    return corpus.load_subspace(spec, L.dim), spec


# ---------------------------------------------------------------------------
# Commands; each returns (exit code, text lines, json payload)
# ---------------------------------------------------------------------------

def cmd_check(a):
    L = _load(a.algebra, unchecked=True)
    rep = check_leibniz_identity(L)
    payload = {"algebra": L.name, "dim": L.dim, "ok": rep.ok}
    if rep.ok:
        return OK, [f"{L.name}: Leibniz identity holds on all {L.dim ** 3} basis triples"], payload
    i, j, k = rep.triple
    payload.update(triple=[i + 1, j + 1, k + 1],
                   lhs=[format_rational(x) for x in rep.lhs], rhs=[format_rational(x) for x in rep.rhs])
    return FAIL, [f"{L.name}: {rep.describe()}"], payload


def cmd_series(a):
    L = _load(a.algebra)
    kind = {"lower": "lower_central", "n-lower": "n_lower", "n-derived": "n_derived"}.get(a.kind, a.kind)
    if kind not in SERIES_KINDS:
        raise UsageError(f"unknown series kind {a.kind!r}")
    if kind in ("lower_central", "derived") and a.ary != 2:
        kind = {"lower_central": "n_lower", "derived": "n_derived"}[kind]
    rep = series(L, None, kind, a.ary)
    lines = [f"{kind} series (arity {rep.arity}) of {L.name}: dims {rep.dims()}"]
    for k, term in enumerate(rep.terms, 1):
        lines.append(f" term {k}: dim {term.dim}")
        lines.extend(_subspace_text(term, "   "))
    if rep.reaches_zero:
        lines.append("reaches zero")
    else:
        lines.append(f"stabilizes at dim {rep.terminal_dim}")
    payload = {
        "algebra": L.name, "kind": kind, "arity": rep.arity, "dims": rep.dims(),
        "terms": [_rows(t) for t in rep.terms], "reaches_zero": rep.reaches_zero,
        "stabilized": rep.stabilized, "terminal_dim": rep.terminal_dim,
    }
    return OK, lines, payload


def cmd_nilpotency(a):
    L = _load(a.algebra)
    flag, s = is_nilpotent(L)
    text = f"nilpotent, nilindex {s}" if flag else "not nilpotent"
    return OK, [text], {"algebra": L.name, "nilpotent": flag, "nilindex": s}


def cmd_solvability(a):
    L = _load(a.algebra)
    flag = is_solvable(L)
    rep = series(L, None, "derived")
    text = f"solvable, derived series dims {rep.dims()}" if flag else f"not solvable, derived series dims {rep.dims()}"
    return OK, [text], {"algebra": L.name, "solvable": flag, "dims": rep.dims()}


def cmd_derivations(a):
    L = _load(a.algebra)
    space = derivation_space(L, _order(a.order), a.side)
    lines = [f"{a.side} Leibniz-derivations of order {a.order} of {L.name}: dim {space.dim}"]
    for n, b in enumerate(space.basis, 1):
        lines.append(f" basis {n}:")
        lines.extend(_matrix_text(b, "   "))
    payload = {"algebra": L.name, "order": a.order, "side": a.side, "dim": space.dim,
               "basis": [b.to_strings() for b in space.basis]}
    return OK, lines, payload


def cmd_classify(a):
    L = _load(a.algebra)
    rep = classify(L, a.max_order)
    lines = [
        f"{L.name}: " + (f"nilpotent, nilindex {rep.nilindex}" if rep.nilpotent else "not nilpotent"),
        f"  dim Der = {rep.der_dim}, dim LDer3 = {rep.preder_dim}",
        f"  characteristically nilpotent: {'yes' if rep.char_nilpotent else 'no'}",
        f"  strongly nilpotent: {'yes' if rep.strongly_nilpotent else 'no'}",
    ]
    orders = []
    for order, witness in rep.invertible_orders:
        lines.append(f"  order {order}: " + ("invertible element exists" if witness else "no invertible element"))
        orders.append({"order": order, "invertible": witness is not None,
                       "witness": witness.to_strings() if witness else None})
    payload = {"algebra": L.name, "nilpotent": rep.nilpotent, "nilindex": rep.nilindex,
               "char_nilpotent": rep.char_nilpotent, "strongly_nilpotent": rep.strongly_nilpotent,
               "der_dim": rep.der_dim, "preder_dim": rep.preder_dim, "invertible_orders": orders}
    return OK, lines, payload


def cmd_invertible(a):
    L = _load(a.algebra)
    space = derivation_space(L, _order(a.order), a.side)
    has, witness = exists_invertible(space)
    lines = [f"{a.side} order {a.order} (dim {space.dim}): "
             + ("contains an invertible map" if has else "no invertible map")]
    if witness:
        lines.append(" first grid witness:")
        lines.extend(_matrix_text(witness, "   "))
    payload = {"algebra": L.name, "order": a.order, "side": a.side, "dim": space.dim,
               "invertible": has, "witness": witness.to_strings() if witness else None}
    return OK, lines, payload


def cmd_prop_derivation(a):
    L = _load(a.algebra)
    try:
        P, q = construct_moens_derivation(L)
    except NotNilpotent as exc:
        return FAIL, [f"{exc}; no construction"], {"algebra": L.name, "nilpotent": False}
    lines = [f"invertible right Leibniz-derivation of order {q}, det {format_rational(P.det())}:"]
    lines.extend(_matrix_text(P))
    return OK, lines, {"algebra": L.name, "order": q, "matrix": P.to_strings(), "det": format_rational(P.det())}


def cmd_decompose(a):
    if a.map == "prop":
        if not a.algebra:
            raise UsageError("--map prop needs an algebra")
        m, _ = construct_moens_derivation(_load(a.algebra))
    else:
        m = corpus.load_matrix(a.map)
        if a.algebra:
            L = _load(a.algebra)
            if L.dim != m.nrows:
                raise UsageError(f"map is {m.nrows}x{m.nrows} but the algebra has dim {L.dim}")
    try:
        dec = decompose(m)
    except NonSplitSpectrum as exc:
        return FAIL, [str(exc)], {"split": False, "remainder": str(exc.remainder)}
    lines = []
    pairs = []
    for lam, space in dec.pairs:
        lines.append(f"eigenvalue {format_rational(lam)}: dim {space.dim}")
        lines.extend(_subspace_text(space))
        pairs.append({"eigenvalue": format_rational(lam), "dim": space.dim, "basis": _rows(space)})
    return OK, lines, {"split": True, "pairs": pairs}


def cmd_identity_n(a):
    L = _load(a.algebra)
    if a.ary < 2:
        raise UsageError("--ary must be at least 2")
    rep = check_n_algebra_identity(L, a.ary, a.product)
    payload = {"algebra": L.name, "arity": a.ary, "product": a.product, "ok": rep.ok}
    if not rep.ok:
        payload.update(xs=[i + 1 for i in rep.xs], ys=[i + 1 for i in rep.ys],
                       lhs=[format_rational(x) for x in rep.lhs], rhs=[format_rational(x) for x in rep.rhs])
    return (OK if rep.ok else FAIL), [rep.describe()], payload


def cmd_invariance(a):
    L = _load(a.algebra)
    I, label = _ideal(L, a.ideal)
    try:
        ok = invariance_check(L, I, _order(a.order), a.side)
    except NotAnIdeal:
        return FAIL, [f"{label} (dim {I.dim}) is not an ideal"], {"ideal": label, "is_ideal": False}
    text = (f"{label} (dim {I.dim}) is " + ("" if ok else "not ")
            + f"invariant under {a.side} Leibniz-derivations of order {a.order}")
    return (OK if ok else FAIL), [text], {"algebra": L.name, "ideal": label, "dim": I.dim,
                                          "order": a.order, "side": a.side, "invariant": ok}


def cmd_theorem_check(a):
    L = _load(a.algebra)
    if a.max_order is not None and a.max_order < 2:
        raise UsageError("--max-order must be at least 2")
    rep = theorem_check(L, a.max_order)
    lines = [rep.summary()]
    for order, has, _ in rep.verdicts:
        lines.append(f"  order {order}: " + ("invertible element exists" if has else "no invertible element"))
    if rep.note:
        lines.append(f"  ({rep.note})")
    payload = {
        "algebra": L.name, "nilpotent": rep.nilpotent, "nilindex": rep.nilindex, "max_order": rep.max_order,
        "verdicts": [{"order": o, "invertible": h, "witness": w.to_strings() if w else None}
                     for o, h, w in rep.verdicts],
        "passed": rep.passed, "summary": rep.summary(), "note": rep.note,
    }
    return (OK if rep.passed else FAIL), lines, payload


def cmd_verify_paper(a):
    only = set(a.only) if a.only else None
    rep = verify_paper(a.corpus, seed=a.seed, only=only)
    lines = rep.text(verbose=a.verbose).splitlines()
    lines.append(f"({rep.seconds:.1f}s)")
    payload = json.loads(rep.to_json())
    return (OK if rep.ok else FAIL), lines, payload


def cmd_generate(a):
    args = []
    for x in a.args:
        try:
            args.append(int(x))
        except ValueError:
            raise UsageError(f"generator arguments must be integers, got {x!r}") from None
    try:
        L = corpus.corpus_generate(a.family, *args)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    text = corpus.dumps(L)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return OK, [f"wrote {a.output}"], {"path": a.output, "name": L.name, "dim": L.dim}
    return OK, text.rstrip("\n").splitlines(), corpus.to_dict(L)


def _order(n):
    if n < 2:
        raise UsageError("--order must be at least 2")
    return n


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    parser = argparse.ArgumentParser(prog="leibniz", description="Exact computations in Leibniz algebras.",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help_, algebra=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if algebra:
            p.add_argument("algebra", help="algebra file (or name of a bundled corpus file)")
        p.set_defaults(fn=fn)
        return p

    add("check", cmd_check, "check the Leibniz identity on all basis triples")
    p = add("series", cmd_series, "lower central / derived series and their n-ary versions")
    p.add_argument("--kind", default="lower_central",
                   help="lower_central, derived, n_lower or n_derived (default lower_central)")
    p.add_argument("--ary", type=int, default=2, help="arity of the product (default 2)")
    add("nilpotency", cmd_nilpotency, "nilpotency and nilindex")
    add("solvability", cmd_solvability, "solvability")
    for name, fn, help_ in (
        ("derivations", cmd_derivations, "basis of the Leibniz-derivations of a given order"),
        ("invertible", cmd_invertible, "does the derivation space contain an invertible map"),
    ):
        p = add(name, fn, help_)
        p.add_argument("--order", type=int, default=2)
        p.add_argument("--side", choices=("right", "left"), default="right")
    p = add("classify", cmd_classify, "characteristic and strong nilpotency, invertible orders")
    p.add_argument("--max-order", type=int, default=4)
    add("prop-derivation", cmd_prop_derivation, "construct an invertible Leibniz-derivation of a nilpotent algebra")
    p = add("decompose", cmd_decompose, "weight-space decomposition of a linear map", algebra=False)
    p.add_argument("algebra", nargs="?", help="algebra (checks the map size; needed for --map prop)")
    p.add_argument("--map", required=True, help="matrix file {\"matrix\": [...]}, or 'prop'")
    p = add("identity-n", cmd_identity_n, "check the Leibniz n-algebra identity")
    p.add_argument("--ary", type=int, default=3)
    p.add_argument("--product", choices=("right", "left"), default="right")
    p = add("invariance", cmd_invariance, "is an ideal invariant under all derivations of an order")
    p.add_argument("--ideal", required=True, help="subspace file {\"basis\": [...]}, meta:<name>, L or L2")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--side", choices=("right", "left"), default="right")
    p = add("theorem-check", cmd_theorem_check, "nilpotent iff an invertible Leibniz-derivation exists")
    p.add_argument("--max-order", type=int, default=None,
                   help="orders scanned for non-nilpotent input (default LEIBNIZ_MAX_ORDER or 4)")
    p = add("verify-paper", cmd_verify_paper, "run the full verification suite", algebra=False)
    p.add_argument("--corpus", default=None, help="corpus directory (default: bundled)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=int, nargs="+", help="run only these check ids")
    p.add_argument("-v", "--verbose", action="store_true")
    p = add("generate", cmd_generate, "write a generated algebra", algebra=False)
    p.add_argument("family", choices=sorted(corpus.FAMILIES))
    p.add_argument("args", nargs="*")
    p.add_argument("-o", "--output")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(a, "json", False)
    try:
        code, lines, payload = a.fn(a)
    except (UsageError, CorpusFormatError, IdentityViolation, OrderOutOfRange, ShapeError, OSError) as exc:
        if as_json:
            print(json.dumps({"error": str(exc)}), file=out)
        print(f"leibniz {a.command}: {exc}", file=err)
        return USAGE
    except LeibnizError as exc:
        if as_json:
            print(json.dumps({"error": str(exc)}), file=out)
        print(f"leibniz {a.command}: {exc}", file=err)
        return FAIL
    if as_json:
        print(json.dumps({"command": a.command, "exit": code, "result": payload}, indent=2), file=out)
    else:
        print("\n".join(lines), file=out)
    return code


def main_entry():  # pragma: no cover - console script
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
