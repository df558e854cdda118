"""Algebra file format and generators for the bundled example algebras.

Files are JSON documents::

    {
      "name": "charnil6",
      "dim": 6,
      "brackets": [
        {"left": 1, "right": 1, "result": [[3, "1"]]},
        ...
      ],
      "meta": {"nilradical": [["1", "0", ...], ...]}
    }

Indices are 1-based, unlisted products are zero, rationals are strings
``"p/q"``. ``"unchecked": true`` skips the identity check at load time.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Sequence

from .algebra import LeibnizAlgebra, direct_sum
from .errors import CorpusFormatError, IdentityViolation, ShapeError
from .exactmath import as_rational, format_rational, parse_rational
from .linalg import Subspace

META_SUBSPACES = ("solvable_radical", "nilradical")


def _table(dim, entries, name, **kw) -> LeibnizAlgebra:
    """Build from 1-based ``{(i, j): {k: c}}``."""
    products = {}
    for (i, j), res in entries.items():
        products[(i - 1, j - 1)] = {k - 1: c for k, c in res.items()}
    return LeibnizAlgebra(dim, products, name=name, **kw)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def charnil(n: int) -> LeibnizAlgebra:
    """n-dimensional algebra all of whose derivations are nilpotent (n >= 4)."""
    if n < 4:
        raise ValueError("charnil(n) needs n >= 4")
    t = {(1, 1): {3: 1}, (1, 2): {4: 1}}
    for i in range(2, n):
        t[(i, 1)] = {i + 1: 1}
    for i in range(2, n - 1):
        t[(i, 2)] = {i + 2: 1}
    return _table(n, t, f"charnil{n}")


def solvable_ex31(n: int, alphas: Sequence = ()) -> LeibnizAlgebra:
    """(n+1)-dimensional solvable, non-nilpotent algebra with [R,[R,R]] = 0.

    ``alphas`` lists alpha_4, ..., alpha_{n-1} (missing values are 0). The
    last product family reads [e_i, e_{n+1}] = e_i + sum_{j>=i+2} alpha_{j-i+2} e_j.
    """
    if n < 4:
        raise ValueError("solvable_ex31(n) needs n >= 4")
    alphas = list(alphas)
    if len(alphas) > n - 4:
        raise ValueError(f"at most {n - 4} alpha values for n = {n}")
    alpha = {i + 4: as_rational(a) for i, a in enumerate(alphas)}

    def a(i):
        return alpha.get(i, 0)

    t = {(1, 1): {3: 1}}
    for i in range(2, n):
        t[(i, 1)] = {i + 1: 1}
    head = {2: 1}
    for i in range(4, n):
        head[i] = a(i)
    t[(1, n + 1)] = dict(head)
    t[(2, n + 1)] = dict(head)
    for i in range(3, n + 1):
        res = {i: 1}
        for j in range(i + 2, n + 1):
            res[j] = res.get(j, 0) + a(j - i + 2)
        t[(i, n + 1)] = res
    suffix = "" if not any(alpha.values()) else "_alpha"
    return _table(n + 1, t, f"solvable_ex31_n{n}{suffix}")


def cas_ex33(n: int) -> LeibnizAlgebra:
    """Solvable algebra on e_1..e_n, x (dim n+1): [e_i,e_1]=e_{i+1}, [x,e_1]=e_1, [e_i,x]=-i e_i."""
    if n < 2:
        raise ValueError("cas_ex33(n) needs n >= 2")
    x = n + 1
    t = {(x, 1): {1: 1}}
    for i in range(1, n):
        t[(i, 1)] = {i + 1: 1}
    for i in range(1, n + 1):
        t[(i, x)] = {i: -i}
    return _table(n + 1, t, f"cas_ex33_n{n}")


def ex7() -> LeibnizAlgebra:
    t = {(1, 1): {3: 1}, (1, 2): {4: 1, 5: -2}, (5, 2): {7: 1}}
    for i in range(2, 7):
        t[(i, 1)] = {i + 1: 1}
    for i in range(2, 5):
        t[(i, 2)] = {i + 2: 1, i + 3: -2}
    return _table(7, t, "ex7")


def ex8(printed: bool = False) -> LeibnizAlgebra:
    """8-dimensional filiform algebra.

    The printed table stops the chain [e_i, e_1] = e_{i+1} at i = 6, which
    breaks the Leibniz identity; the default continues it to i = 7.
    ``printed=True`` returns the table as printed, unchecked.
    """
    last = 6 if printed else 7
    t = {(1, 1): {3: 1}, (1, 2): {4: 1, 5: -2, 6: 5}, (5, 2): {7: 1, 8: -2}, (6, 2): {8: 1}}
    for i in range(2, last + 1):
        t[(i, 1)] = {i + 1: 1}
    for i in range(2, 5):
        t[(i, 2)] = {i + 2: 1, i + 3: -2, i + 4: 5}
    name = "ex8_printed" if printed else "ex8"
    return _table(8, t, name, unchecked=printed)


def abelian(n: int) -> LeibnizAlgebra:
    if n < 1:
        raise ValueError("abelian(n) needs n >= 1")
    return LeibnizAlgebra(n, {}, name=f"abelian{n}", meta={"is_lie": True})


def lie_heisenberg() -> LeibnizAlgebra:
    return _table(3, {(1, 2): {3: 1}, (2, 1): {3: -1}}, "heisenberg3", meta={"is_lie": True})


def sl2() -> LeibnizAlgebra:
    """Basis h, e, f: [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    t = {
        (1, 2): {2: 2}, (2, 1): {2: -2},
        (1, 3): {3: -2}, (3, 1): {3: 2},
        (2, 3): {1: 1}, (3, 2): {1: -1},
    }
    return _table(3, t, "sl2", meta={"is_lie": True})


FAMILIES = {
    "charnil": charnil,
    "solvable_ex31": solvable_ex31,
    "cas_ex33": cas_ex33,
    "ex7": ex7,
    "ex8": ex8,
    "abelian": abelian,
    "lie_heisenberg": lie_heisenberg,
    "sl2": sl2,
}


def corpus_generate(family: str, *args, **kwargs) -> LeibnizAlgebra:
    try:
        gen = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; known: {sorted(FAMILIES)}") from None
    return gen(*args, **kwargs)


def _with_meta(L: LeibnizAlgebra, name=None, **meta) -> LeibnizAlgebra:
    merged = dict(L.meta)
    merged.update(meta)
    return LeibnizAlgebra(L.dim, L.products, name=name or L.name, meta=merged, unchecked=L.unchecked)


def _coords(dim, indices):
    return Subspace.coordinate([i - 1 for i in indices], dim)


def bundled_algebras() -> list[LeibnizAlgebra]:
    """Every algebra shipped in the corpus directory, with annotations."""
    ex31 = solvable_ex31(6)
    ex31a = solvable_ex31(6, [1, 2])
    cas = cas_ex33(4)
    s = sl2()
    mixed = direct_sum(s, cas_ex33(3), name="sl2_plus_cas33")
    both = direct_sum(charnil(6), cas_ex33(4), name="charnil6_plus_cas33")
    return [
        charnil(6),
        charnil(7),
        charnil(8),
        ex7(),
        ex8(),
        _with_meta(ex31, solvable_radical=Subspace.full(7), nilradical=_coords(7, range(1, 7))),
        _with_meta(ex31a, solvable_radical=Subspace.full(7), nilradical=_coords(7, range(1, 7))),
        _with_meta(cas, solvable_radical=Subspace.full(5), nilradical=_coords(5, range(1, 5))),
        abelian(3),
        lie_heisenberg(),
        _with_meta(s, solvable_radical=Subspace.zero(3), nilradical=Subspace.zero(3)),
        _with_meta(mixed, solvable_radical=_coords(7, range(4, 8)), nilradical=_coords(7, range(4, 7))),
        _with_meta(both, solvable_radical=Subspace.full(11), nilradical=_coords(11, range(1, 11))),
    ]


def bad_table() -> LeibnizAlgebra:
    """One-dimensional table [e1, e1] = e1, which violates the identity."""
    return LeibnizAlgebra(1, {(0, 0): {0: 1}}, name="bad_table", unchecked=True)


def fixtures() -> list[LeibnizAlgebra]:
    return [bad_table(), ex8(printed=True)]


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

def to_dict(L: LeibnizAlgebra) -> dict:
    brackets = []
    for (i, j) in sorted(L.products):
        res = L.products[(i, j)]
        brackets.append({
            "left": i + 1,
            "right": j + 1,
            "result": [[k + 1, format_rational(res[k])] for k in sorted(res)],
        })
    doc = {"name": L.name, "dim": L.dim}
    if L.unchecked:
        doc["unchecked"] = True
    doc["brackets"] = brackets
    meta = {}
    for key in sorted(L.meta):
        val = L.meta[key]
        if isinstance(val, Subspace):
            meta[key] = val.to_strings()
        else:
            meta[key] = val
    if meta:
        doc["meta"] = meta
    return doc


def dumps(L: LeibnizAlgebra) -> str:
    """Canonical text: fixed key order, one bracket record per line."""
    doc = to_dict(L)
    lines = ["{"]
    lines.append(f'  "name": {json.dumps(doc["name"])},')
    lines.append(f'  "dim": {doc["dim"]},')
    if doc.get("unchecked"):
        lines.append('  "unchecked": true,')
    tail = "," if "meta" in doc else ""
    if doc["brackets"]:
        lines.append('  "brackets": [')
        recs = [json.dumps(b) for b in doc["brackets"]]
        lines.extend(f"    {r}," for r in recs[:-1])
        lines.append(f"    {recs[-1]}")
        lines.append(f"  ]{tail}")
    else:
        lines.append(f'  "brackets": []{tail}')
    if "meta" in doc:
        lines.append('  "meta": {')
        items = list(doc["meta"].items())
        for n, (key, val) in enumerate(items):
            comma = "," if n < len(items) - 1 else ""
            lines.append(f"    {json.dumps(key)}: {json.dumps(val)}{comma}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _int_field(value, where, lo=1, hi=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise CorpusFormatError(f"expected an integer, got {value!r}", where)
    if value < lo or (hi is not None and value > hi):
        raise CorpusFormatError(f"index {value} outside {lo}..{hi}", where)
    return value


def _rational_field(value, where):
    if isinstance(value, bool):
        raise CorpusFormatError(f"expected a rational, got {value!r}", where)
    if isinstance(value, int):
        return as_rational(value)
    if not isinstance(value, str):
        raise CorpusFormatError(f"expected a rational string, got {value!r}", where)
    try:
        return parse_rational(value)
    except CorpusFormatError as exc:
        raise CorpusFormatError(str(exc), where) from None


def _rows_field(value, dim, where) -> Subspace:
    if not isinstance(value, list):
        raise CorpusFormatError("expected a list of basis rows", where)
    rows = []
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise CorpusFormatError(f"expected a row of {dim} rationals", f"{where}[{r}]")
        rows.append([_rational_field(x, f"{where}[{r}][{c}]") for c, x in enumerate(row)])
    return Subspace.span(rows, dim)


def from_dict(doc, unchecked: bool | None = None) -> LeibnizAlgebra:
    if not isinstance(doc, dict):
        raise CorpusFormatError("top level must be an object")
    for key in ("dim", "brackets"):
        if key not in doc:
            raise CorpusFormatError("missing field", key)
    dim = _int_field(doc["dim"], "dim")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise CorpusFormatError("expected a string", "name")
    if not isinstance(doc["brackets"], list):
        raise CorpusFormatError("expected a list", "brackets")
    products = {}
    for n, rec in enumerate(doc["brackets"]):
        where = f"brackets[{n}]"
        if not isinstance(rec, dict):
            raise CorpusFormatError("expected an object", where)
        for key in ("left", "right", "result"):
            if key not in rec:
                raise CorpusFormatError(f"missing field {key!r}", where)
        i = _int_field(rec["left"], f"{where}.left", 1, dim)
        j = _int_field(rec["right"], f"{where}.right", 1, dim)
        if (i - 1, j - 1) in products:
            raise CorpusFormatError(f"duplicate bracket ({i}, {j})", where)
        if not isinstance(rec["result"], list):
            raise CorpusFormatError("expected a list of [index, rational] pairs", f"{where}.result")
        res = {}
        for m, pair in enumerate(rec["result"]):
            pw = f"{where}.result[{m}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise CorpusFormatError("expected [index, rational]", pw)
            k = _int_field(pair[0], pw, 1, dim)
            if k - 1 in res:
                raise CorpusFormatError(f"duplicate result index {k}", pw)
            res[k - 1] = _rational_field(pair[1], pw)
        products[(i - 1, j - 1)] = res
    meta = {}
    raw_meta = doc.get("meta") or {}
    if not isinstance(raw_meta, dict):
        raise CorpusFormatError("expected an object", "meta")
    for key, val in raw_meta.items():
        if key in META_SUBSPACES:
            meta[key] = _rows_field(val, dim, f"meta.{key}")
        elif key == "is_lie":
            if not isinstance(val, bool):
                raise CorpusFormatError("expected true or false", "meta.is_lie")
            meta[key] = val
        else:
            meta[key] = val
    flag = doc.get("unchecked", False)
    if not isinstance(flag, bool):
        raise CorpusFormatError("expected true or false", "unchecked")
    if unchecked is not None:
        flag = unchecked
    try:
        return LeibnizAlgebra(dim, products, name=name, meta=meta, unchecked=flag)
    except ShapeError as exc:  # pragma: no cover - indices are validated above
        raise CorpusFormatError(str(exc)) from exc


def loads(text: str, unchecked: bool | None = None) -> LeibnizAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_dict(doc, unchecked=unchecked)


def load(path, unchecked: bool | None = None) -> LeibnizAlgebra:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return loads(text, unchecked=unchecked)
    except CorpusFormatError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from None
    except IdentityViolation as exc:
        raise IdentityViolation(f"{path}: {exc}", exc.report) from None


def save(L: LeibnizAlgebra, path) -> None:
    Path(path).write_text(dumps(L), encoding="utf-8")


def load_subspace(path, dim: int) -> Subspace:
    """Subspace file: ``{"basis": [[rationals], ...]}``."""
    doc = _read_json(path)
    if not isinstance(doc, dict) or "basis" not in doc:
        raise CorpusFormatError("expected an object with a 'basis' field", str(path))
    return _rows_field(doc["basis"], dim, "basis")


def load_matrix(path):
    """Map file: ``{"matrix": [[rationals], ...]}`` acting on column vectors."""
    from .linalg import Matrix

    doc = _read_json(path)
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise CorpusFormatError("expected an object with a 'matrix' field", str(path))
    rows = doc["matrix"]
    if not isinstance(rows, list) or not rows:
        raise CorpusFormatError("expected a non-empty list of rows", "matrix")
    n = len(rows)
    parsed = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise CorpusFormatError("expected a square matrix; row has wrong length", f"matrix[{r}]")
        parsed.append([_rational_field(x, f"matrix[{r}][{c}]") for c, x in enumerate(row)])
    return Matrix(parsed, n)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from None


# ---------------------------------------------------------------------------
# Bundled corpus directory
# ---------------------------------------------------------------------------

def corpus_dir() -> Path:
    return Path(str(resources.files("leibniz") / "corpus"))


def corpus_files(directory=None) -> list[Path]:
    directory = Path(directory) if directory else corpus_dir()
    return sorted(directory.glob("*.json"))


def load_corpus(directory=None, include_fixtures: bool = False) -> dict[str, LeibnizAlgebra]:
    """Load every algebra file; unchecked files are fixtures and skipped by default."""
    out = {}
    for path in corpus_files(directory):
        raw = _read_json(path)
        if raw.get("unchecked") and not include_fixtures:
            continue
        L = load(path)
        out[L.name or path.stem] = L
    return out


def resolve_path(arg: str) -> Path:
    """A path as given, or else a bundled corpus file by name or 'corpus/<name>'."""
    p = Path(arg)
    if p.exists():
        return p
    name = p.name if p.suffix else p.name + ".json"
    bundled = corpus_dir() / name
    if bundled.exists():
        return bundled
    return p


def write_corpus(directory=None) -> list[Path]:
    directory = Path(directory) if directory else corpus_dir()
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for L in bundled_algebras() + fixtures():
        path = directory / f"{L.name}.json"
        save(L, path)
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# Random small algebras (for oracle tests)
# ---------------------------------------------------------------------------

def change_basis(L: LeibnizAlgebra, P, name: str = "") -> LeibnizAlgebra:
    """Same algebra in the basis f_i = sum_a P[a][i] e_a."""
    from .linalg import Matrix

    P = P if isinstance(P, Matrix) else Matrix(P)
    Pinv = P.inverse()
    d = L.dim
    cols = [P.column(i) for i in range(d)]
    products = {}
    for i in range(d):
        for j in range(d):
            img = Pinv.apply(L.bracket(cols[i], cols[j]))
            res = {k: c for k, c in enumerate(img) if c}
            if res:
                products[(i, j)] = res
    return LeibnizAlgebra(d, products, name=name or L.name)


def random_algebra(rng, max_dim: int = 3, tries: int = 10_000) -> LeibnizAlgebra:
    """A random valid algebra of dimension <= max_dim.

    Sparse random tables with small coefficients are drawn until one passes
    the identity, then moved to a random unitriangular basis so the result
    is usually dense.
    """
    from .linalg import Matrix

    coeffs = (-2, -1, 1, 2)
    for _ in range(tries):
        d = rng.randint(1, max_dim)
        products = {}
        for _ in range(rng.randint(0, d + 1)):
            key = (rng.randrange(d), rng.randrange(d))
            res = {rng.randrange(d): rng.choice(coeffs) for _ in range(rng.randint(1, 2))}
            products[key] = res
        L = LeibnizAlgebra(d, products, unchecked=True)
        if not L.products or not _identity_ok(L):
            continue
        P = [[1 if a == b else (rng.choice((-1, 0, 1, 2)) if a < b else 0) for b in range(d)]
             for a in range(d)]
        perm = list(range(d))
        rng.shuffle(perm)
        P = [P[p] for p in perm]
        return change_basis(LeibnizAlgebra(d, L.products), Matrix(P), name=f"random_dim{d}")
    raise RuntimeError("no valid random algebra found")  # pragma: no cover


def _identity_ok(L) -> bool:
    from .algebra import check_leibniz_identity

    return check_leibniz_identity(L).ok
