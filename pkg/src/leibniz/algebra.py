"""Leibniz algebras given by structure constants, and their series.

An algebra is a right Leibniz algebra: ``[x,[y,z]] = [[x,y],z] - [[x,z],y]``.
Basis indices are 0-based in this module; files and CLI output use 1-based
indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ArityError, IdentityViolation, ShapeError
from .exactmath import ZERO, as_rational, format_rational
from .linalg import (
    Matrix,
    RowReducer,
    Subspace,
    generic_combination,
    symbolic_char_poly,
    unit,
)

SERIES_KINDS = ("lower_central", "derived", "n_lower", "n_derived")


def _acc(out: dict, k, v):
    s = out.get(k, ZERO) + v
    if s:
        out[k] = s
    else:
        out.pop(k, None)


def sparse(v: Sequence) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def dense(d: Mapping, dim: int) -> tuple:
    return tuple(d.get(i, ZERO) for i in range(dim))


def format_vector(v: Sequence) -> str:
    """Render coordinates as a combination of e_1..e_n, e.g. ``9*e3``."""
    parts = []
    for i, c in enumerate(v):
        if not c:
            continue
        mag = abs(c)
        body = f"e{i + 1}" if mag == 1 else f"{format_rational(mag)}*e{i + 1}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class IdentityReport:
    ok: bool
    triple: tuple | None = None  # 0-based basis indices
    lhs: tuple | None = None
    rhs: tuple | None = None

    def describe(self) -> str:
        if self.ok:
            return "Leibniz identity holds on all basis triples"
        i, j, k = (t + 1 for t in self.triple)
        return (
            f"violation at (e{i}, e{j}, e{k}): [x,[y,z]] = {format_vector(self.lhs)}, "
            f"[[x,y],z] - [[x,z],y] = {format_vector(self.rhs)}"
        )


class LeibnizAlgebra:
    """Finite-dimensional algebra with rational structure constants.

    ``products`` maps 0-based pairs ``(i, j)`` to ``{k: c}``, meaning
    ``[e_i, e_j] = sum_k c e_k``; absent pairs multiply to zero.
    """

    def __init__(
        self,
        dim: int,
        products: Mapping[tuple, Mapping[int, object]] | None = None,
        name: str = "",
        meta: Mapping | None = None,
        unchecked: bool = False,
    ):
        if dim < 0:
            raise ShapeError("negative dimension")
        self.dim = dim
        self.name = name
        self.unchecked = unchecked
        table: dict = {}
        for (i, j), result in (products or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ShapeError(f"product index ({i}, {j}) outside 0..{dim - 1}")
            res = {}
            for k, c in result.items():
                if not 0 <= k < dim:
                    raise ShapeError(f"result index {k} outside 0..{dim - 1}")
                c = as_rational(c)
                if c:
                    res[k] = c
            if res:
                table[(i, j)] = res
        self.products = table
        self._prod = [[table.get((i, j), {}) for j in range(dim)] for i in range(dim)]
        self.meta = dict(meta or {})
        self._rmats = None
        if not unchecked:
            report = check_leibniz_identity(self)
            if not report.ok:
                raise IdentityViolation(f"{name or 'algebra'}: {report.describe()}", report)

    @classmethod
    def from_structure_constants(cls, c, name="", **kw) -> "LeibnizAlgebra":
        dim = len(c)
        products = {}
        for i in range(dim):
            for j in range(dim):
                res = {k: c[i][j][k] for k in range(dim) if c[i][j][k]}
                if res:
                    products[(i, j)] = res
        return cls(dim, products, name=name, **kw)

    def structure_constants(self):
        return [[[self._prod[i][j].get(k, ZERO) for k in range(self.dim)]
                 for j in range(self.dim)] for i in range(self.dim)]

    def basis_product(self, i: int, j: int) -> dict:
        return self._prod[i][j]

    def sbracket(self, x: Mapping, y: Mapping) -> dict:
        """Bracket of sparse vectors."""
        out: dict = {}
        prod = self._prod
        for i, a in x.items():
            row = prod[i]
            for j, b in y.items():
                res = row[j]
                if res:
                    ab = a * b
                    for k, c in res.items():
                        _acc(out, k, ab * c)
        return out

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        if len(x) != self.dim or len(y) != self.dim:
            raise ShapeError(f"elements must have {self.dim} coordinates")
        return dense(self.sbracket(sparse(x), sparse(y)), self.dim)

    def basis(self, i: int) -> tuple:
        return unit(self.dim, i)

    def element(self, coords) -> tuple:
        coords = tuple(as_rational(c) for c in coords)
        if len(coords) != self.dim:
            raise ShapeError(f"elements must have {self.dim} coordinates")
        return coords

    def right_mult(self, x: Sequence) -> Matrix:
        """Matrix of z -> [z, x]."""
        xs = sparse(x)
        if len(x) != self.dim:
            raise ShapeError(f"elements must have {self.dim} coordinates")
        cols = [dense(self.sbracket({j: 1}, xs), self.dim) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim) if cols else Matrix.zeros(0)

    def right_mult_basis(self) -> list[Matrix]:
        if self._rmats is None:
            self._rmats = [self.right_mult(self.basis(i)) for i in range(self.dim)]
        return self._rmats

    def is_antisymmetric(self) -> bool:
        for (i, j), res in self.products.items():
            other = self._prod[j][i]
            if set(res) != set(other) or any(other[k] != -c for k, c in res.items()):
                return False
        return all(not self._prod[i][i] for i in range(self.dim))

    def full(self) -> Subspace:
        return Subspace.full(self.dim)

    def __eq__(self, other):
        if not isinstance(other, LeibnizAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.products == other.products

    __hash__ = None

    def __repr__(self):
        return f"LeibnizAlgebra({self.name or '?'}, dim={self.dim})"


def bracket(L: LeibnizAlgebra, x, y) -> tuple:
    return L.bracket(x, y)


def direct_sum(A: LeibnizAlgebra, B: LeibnizAlgebra, name: str = "") -> LeibnizAlgebra:
    off = A.dim
    products = dict(A.products)
    for (i, j), res in B.products.items():
        products[(i + off, j + off)] = {k + off: c for k, c in res.items()}
    return LeibnizAlgebra(A.dim + B.dim, products, name=name or f"{A.name}+{B.name}")


def check_leibniz_identity(L: LeibnizAlgebra) -> IdentityReport:
    d = L.dim
    for i, j, k in itertools.product(range(d), repeat=3):
        lhs = L.sbracket({i: 1}, L.basis_product(j, k))
        rhs = dict(L.sbracket(L.basis_product(i, j), {k: 1}))
        for m, c in L.sbracket(L.basis_product(i, k), {j: 1}).items():
            _acc(rhs, m, -c)
        if lhs != rhs:
            return IdentityReport(False, (i, j, k), dense(lhs, d), dense(rhs, d))
    return IdentityReport(True)


# ---------------------------------------------------------------------------
# n-ary products
# ---------------------------------------------------------------------------

def _check_args(L, xs):
    if len(xs) < 2:
        raise ArityError(f"an n-ary product needs at least 2 arguments, got {len(xs)}")
    for x in xs:
        if len(x) != L.dim:
            raise ShapeError(f"elements must have {L.dim} coordinates")


def n_ary_right(L: LeibnizAlgebra, xs: Sequence[Sequence]) -> tuple:
    """[x_1, ..., x_n]_r = [[[x_1, x_2], x_3], ..., x_n]."""
    _check_args(L, xs)
    acc = sparse(xs[0])
    for x in xs[1:]:
        if not acc:
            break
        acc = L.sbracket(acc, sparse(x))
    return dense(acc, L.dim)


def n_ary_left(L: LeibnizAlgebra, xs: Sequence[Sequence]) -> tuple:
    """[x_1, [x_2, ..., [x_{n-1}, x_n]]]."""
    _check_args(L, xs)
    acc = sparse(xs[-1])
    for x in reversed(xs[:-1]):
        if not acc:
            break
        acc = L.sbracket(sparse(x), acc)
    return dense(acc, L.dim)


def sfold_right(L, xs: Sequence[Mapping]) -> dict:
    acc = xs[0]
    for x in xs[1:]:
        if not acc:
            return {}
        acc = L.sbracket(acc, x)
    return dict(acc)


def sfold_left(L, xs: Sequence[Mapping]) -> dict:
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        if not acc:
            return {}
        acc = L.sbracket(x, acc)
    return dict(acc)


def apply_sparse(m: Matrix, x: Mapping) -> dict:
    out: dict = {}
    for j, a in x.items():
        for i in range(m.nrows):
            c = m.rows[i][j]
            if c:
                _acc(out, i, c * a)
    return out


def leibniz_rule_violation(L: LeibnizAlgebra, D: Matrix, n: int, side: str = "right"):
    """First basis tuple where D fails the n-ary Leibniz rule, or None.

    Walks tuples depth first carrying the partial product and the partial
    sum of terms with D applied in one slot; a branch where both vanish is
    pruned since every extension vanishes too. Returns
    ``(indices, D(product), sum of terms)`` with 0-based indices.
    """
    d = L.dim
    cols = [apply_sparse(D, {i: 1}) for i in range(d)]
    units = [{i: 1} for i in range(d)]

    if side == "right":
        def step(base, partial, i):
            nb = L.sbracket(base, units[i])
            npart = L.sbracket(partial, units[i])
            for k, v in L.sbracket(base, cols[i]).items():
                _acc(npart, k, v)
            return nb, npart
    elif side == "left":
        def step(base, partial, i):
            nb = L.sbracket(units[i], base)
            npart = L.sbracket(units[i], partial)
            for k, v in L.sbracket(cols[i], base).items():
                _acc(npart, k, v)
            return nb, npart
    else:
        raise ValueError(f"side must be 'right' or 'left', not {side!r}")

    def walk(prefix, base, partial):
        if len(prefix) == n:
            image = apply_sparse(D, base)
            if image != partial:
                return prefix, image, partial
            return None
        for i in range(d):
            nb, npart = step(base, partial, i)
            if not nb and not npart:
                continue
            found = walk(prefix + (i,), nb, npart)
            if found:
                return found
        return None

    for i in range(d):
        found = walk((i,), dict(units[i]), dict(cols[i]))
        if found:
            idx, image, partial = found
            if side == "left":
                idx = tuple(reversed(idx))
            return idx, dense(image, d), dense(partial, d)
    return None


def nary_identity_sides(L: LeibnizAlgebra, xs, ys, product: str = "right") -> tuple[tuple, tuple]:
    """Both sides of the n-algebra identity for explicit elements x_1..x_n, y_2..y_n."""
    if len(ys) != len(xs) - 1:
        raise ArityError("need n elements x and n-1 elements y")
    fold = n_ary_right if product == "right" else n_ary_left

    def with_ys(z):
        return fold(L, [z, *ys])

    lhs = with_ys(fold(L, xs))
    rhs = [ZERO] * L.dim
    for i in range(len(xs)):
        args = list(xs)
        args[i] = with_ys(xs[i])
        rhs = [a + b for a, b in zip(rhs, fold(L, args))]
    return lhs, tuple(rhs)


@dataclass(frozen=True)
class NaryIdentityReport:
    ok: bool
    arity: int
    product: str
    xs: tuple | None = None  # 0-based indices x_1..x_n
    ys: tuple | None = None  # 0-based indices y_2..y_n
    lhs: tuple | None = None
    rhs: tuple | None = None

    def describe(self) -> str:
        if self.ok:
            return f"n-algebra identity holds for the {self.product} {self.arity}-ary product"
        xs = ", ".join(f"e{i + 1}" for i in self.xs)
        ys = ", ".join(f"e{i + 1}" for i in self.ys)
        return (
            f"violation at x=({xs}), y=({ys}): LHS = {format_vector(self.lhs)}, "
            f"RHS = {format_vector(self.rhs)}"
        )


def check_n_algebra_identity(L: LeibnizAlgebra, n: int, product: str = "right") -> NaryIdentityReport:
    """Check [[x_1..x_n], y_2..y_n] = sum_i [x_1, .., [x_i, y_2..y_n], .., x_n].

    For fixed y the map z -> [z, y_2, .., y_n] must act on the n-ary
    product by the Leibniz rule, so each y-tuple reduces to a derivation
    test of that operator.
    """
    if n < 2:
        raise ArityError("arity must be at least 2")
    if product not in ("right", "left"):
        raise ValueError("product must be 'right' or 'left'")
    d = L.dim
    for ys in itertools.product(range(d), repeat=n - 1):
        if product == "right":
            op = Matrix.identity(d)
            for y in ys:
                op = L.right_mult_basis()[y] @ op
        else:
            w = sfold_left(L, [{y: 1} for y in ys])
            op = L.right_mult(dense(w, d))
        found = leibniz_rule_violation(L, op, n, side=product)
        if found:
            xs, lhs, rhs = found
            return NaryIdentityReport(False, n, product, xs, ys, lhs, rhs)
    return NaryIdentityReport(True, n, product)


# ---------------------------------------------------------------------------
# Subspace products and series
# ---------------------------------------------------------------------------

def product_subspace(L: LeibnizAlgebra, A: Subspace, B: Subspace) -> Subspace:
    if A.ambient_dim != L.dim or B.ambient_dim != L.dim:
        raise ShapeError("subspace ambient dimension differs from the algebra dimension")
    red = RowReducer(L.dim)
    bs = [sparse(b) for b in B.basis]
    for a in A.basis:
        sa = sparse(a)
        for b in bs:
            red.add(L.sbracket(sa, b))
            if red.is_full():
                return Subspace.full(L.dim)
    return Subspace(L.dim, red.dense_rows())


def n_product_subspace(L: LeibnizAlgebra, spaces: Sequence[Subspace]) -> Subspace:
    """Span of [a_1, ..., a_n]_r over all tuples of basis vectors."""
    if len(spaces) < 2:
        raise ArityError("an n-ary product needs at least 2 factors")
    for s in spaces:
        if s.ambient_dim != L.dim:
            raise ShapeError("subspace ambient dimension differs from the algebra dimension")
    bases = [[sparse(b) for b in s.basis] for s in spaces]
    red = RowReducer(L.dim)

    def walk(depth, acc):
        if depth == len(bases):
            red.add(acc)
            return
        for b in bases[depth]:
            nxt = L.sbracket(acc, b)
            if nxt:
                walk(depth + 1, nxt)

    for a in bases[0]:
        walk(1, a)
    return Subspace(L.dim, red.dense_rows())


@dataclass
class SeriesReport:
    kind: str
    arity: int
    terms: list = field(default_factory=list)
    stabilized: bool = False
    terminal_dim: int = 0
    # index where a repeating tail starts, when stabilized
    cycle_start: int | None = None

    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]

    def term(self, k: int) -> Subspace:
        """k-th term (1-based), extended past the computed range."""
        if k < 1:
            raise ValueError("series terms are indexed from 1")
        if k <= len(self.terms):
            return self.terms[k - 1]
        last = self.terms[-1]
        if self.stabilized and self.cycle_start is not None:
            period = len(self.terms) - self.cycle_start
            return self.terms[self.cycle_start + (k - 1 - self.cycle_start) % period]
        return last

    @property
    def reaches_zero(self) -> bool:
        return bool(self.terms) and self.terms[-1].is_zero()


def series(L: LeibnizAlgebra, M: Subspace | None = None, kind: str = "lower_central", n: int = 2,
           max_terms: int | None = None) -> SeriesReport:
    """Lower central, derived, or their n-ary analogues starting from M."""
    if kind not in SERIES_KINDS:
        raise ValueError(f"kind must be one of {SERIES_KINDS}")
    if n < 2:
        raise ArityError("arity must be at least 2")
    if kind in ("lower_central", "derived"):
        n = 2
    M = L.full() if M is None else M
    if M.ambient_dim != L.dim:
        raise ShapeError("subspace ambient dimension differs from the algebra dimension")
    terms = [M]
    seen = {M: 0}
    report = SeriesReport(kind, n, terms)
    while True:
        cur = terms[-1]
        if cur.is_zero():
            report.terminal_dim = 0
            return report
        if kind == "lower_central":
            nxt = product_subspace(L, cur, M)
        elif kind == "derived":
            nxt = product_subspace(L, cur, cur)
        elif kind == "n_lower":
            nxt = n_product_subspace(L, [cur] + [M] * (n - 1))
        else:
            nxt = n_product_subspace(L, [cur] * n)
        if nxt in seen:
            # the sequence repeats from here on
            report.stabilized = True
            report.cycle_start = seen[nxt]
            report.terminal_dim = nxt.dim
            return report
        seen[nxt] = len(terms)
        terms.append(nxt)
        if max_terms is not None and len(terms) >= max_terms:
            report.terminal_dim = nxt.dim
            return report


def lower_central(L, M=None) -> SeriesReport:
    return series(L, M, "lower_central")


def derived(L, M=None) -> SeriesReport:
    return series(L, M, "derived")


def is_nilpotent(L: LeibnizAlgebra, M: Subspace | None = None) -> tuple[bool, int | None]:
    """(flag, nilindex); nilindex is the least p with L^p = 0."""
    rep = series(L, M, "lower_central")
    if rep.reaches_zero:
        return True, len(rep.terms)
    return False, None


def is_solvable(L: LeibnizAlgebra, M: Subspace | None = None) -> bool:
    return series(L, M, "derived").reaches_zero


def is_n_nilpotent(L: LeibnizAlgebra, n: int, M: Subspace | None = None) -> bool:
    return series(L, M, "n_lower", n).reaches_zero


def is_n_solvable(L: LeibnizAlgebra, n: int, M: Subspace | None = None) -> bool:
    return series(L, M, "n_derived", n).reaches_zero


def is_subalgebra(L: LeibnizAlgebra, M: Subspace) -> bool:
    return product_subspace(L, M, M).issubset(M)


def is_ideal(L: LeibnizAlgebra, I: Subspace) -> bool:
    full = L.full()
    return product_subspace(L, I, full).issubset(I) and product_subspace(L, full, I).issubset(I)


def is_n_ideal(L: LeibnizAlgebra, I: Subspace, n: int) -> bool:
    full = L.full()
    for pos in range(n):
        factors = [full] * n
        factors[pos] = I
        if not n_product_subspace(L, factors).issubset(I):
            return False
    return True


def right_mult(L: LeibnizAlgebra, x) -> Matrix:
    return L.right_mult(x)


def engel_check(L: LeibnizAlgebra) -> bool:
    """Every right multiplication is nilpotent.

    Basis operators are tested directly; the general element
    sum_i x_i R_{e_i} is tested through its symbolic characteristic
    polynomial, which must be t^dim.
    """
    mats = L.right_mult_basis()
    if not all(m.is_nilpotent() for m in mats):
        return False
    generic = generic_combination(mats, L.dim)
    return all(c.is_zero() for c in symbolic_char_poly(generic))


# ---------------------------------------------------------------------------
# Relations between binary and n-ary series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesRelation:
    """One instance of a series relation: the subspaces compared and the verdict."""

    name: str
    n: int
    k: int
    left: Subspace
    right: Subspace
    relation: str  # "subset" or "equal"
    holds: bool
    asserted: bool = True  # False when only reported

    def describe(self) -> str:
        rel = "=" if self.relation == "equal" else "<="
        verdict = "ok" if self.holds else ("FAILED" if self.asserted else "does not hold (not asserted)")
        return f"{self.name} n={self.n} k={self.k}: dim {self.left.dim} {rel} dim {self.right.dim}: {verdict}"


def _power_of_two_exponent(n: int) -> int:
    t = 0
    while 2 ** t < n:
        t += 1
    return t


def n_series_relations(L: LeibnizAlgebra, M: Subspace, n: int, k: int) -> list[SeriesRelation]:
    """Compare binary and n-ary series of M.

    * n-derived term k lies in the derived term k, and n-lower term k in
      the lower central term k;
    * with 2^t >= n minimal, derived term tk+1 lies in n-derived term k+1;
    * lower central term nk-k+1 equals n-lower term k+1 when M is a
      subalgebra (otherwise the relation is only reported).
    """
    low = series(L, M, "lower_central")
    der = series(L, M, "derived")
    nlow = series(L, M, "n_lower", n)
    nder = series(L, M, "n_derived", n)
    out = []
    a, b = nder.term(k), der.term(k)
    out.append(SeriesRelation("n-derived in derived", n, k, a, b, "subset", a.issubset(b)))
    a, b = nlow.term(k), low.term(k)
    out.append(SeriesRelation("n-lower in lower", n, k, a, b, "subset", a.issubset(b)))
    t = _power_of_two_exponent(n)
    a, b = der.term(t * k + 1), nder.term(k + 1)
    out.append(SeriesRelation("derived in n-derived", n, k, a, b, "subset", a.issubset(b)))
    a, b = low.term(n * k - k + 1), nlow.term(k + 1)
    sub = is_subalgebra(L, M)
    out.append(SeriesRelation("lower equals n-lower", n, k, a, b, "equal", a == b, asserted=sub))
    return out
