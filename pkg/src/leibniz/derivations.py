"""Leibniz-derivations of arbitrary order and the certificates built on them.

A Leibniz-derivation of order n (right-sided) is a linear map d with

    d([x_1, ..., x_n]_r) = sum_i [x_1, ..., d(x_i), ..., x_n]_r,

where the n-ary product folds from the left. ``side="left"`` uses the nested
product [x_1, [x_2, ..., [x_{n-1}, x_n]]] instead. Order 2 is an ordinary
derivation, order 3 a pre-derivation.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    LeibnizAlgebra,
    _acc,
    apply_sparse,
    is_ideal,
    is_nilpotent,
    leibniz_rule_violation,
    n_product_subspace,
    series,
    sfold_right,
)
from .errors import NotADerivation, NotAnIdeal, NotNilpotent, OrderOutOfRange, ShapeError
from .exactmath import ONE, ZERO
from .linalg import (
    MapSpace,
    Matrix,
    RowReducer,
    Subspace,
    decompose,
    generic_combination,
    generic_element,
    symbolic_char_poly,
    symbolic_det,
)

DEFAULT_ENVELOPE = 5
DEFAULT_NONNILPOTENT_SCAN = 4


@dataclass(frozen=True)
class DerivationQuery:
    order: int
    side: str = "right"
    envelope: int = DEFAULT_ENVELOPE

    def __post_init__(self):
        if self.side not in ("right", "left"):
            raise ValueError(f"side must be 'right' or 'left', not {self.side!r}")
        if not 2 <= self.order <= self.envelope:
            raise OrderOutOfRange(f"order {self.order} outside 2..{self.envelope}")


def _query(q, side="right") -> DerivationQuery:
    if isinstance(q, DerivationQuery):
        return q
    # plain orders are held to the default envelope; pass a DerivationQuery to go further
    return DerivationQuery(int(q), side)


def product_tensor(L: LeibnizAlgebra, n: int, side: str = "right") -> dict:
    """Nonzero n-ary products of basis tuples: {index tuple: sparse vector}."""
    level = {(i,): {i: ONE} for i in range(L.dim)}
    for _ in range(n - 1):
        nxt = {}
        for idx, v in level.items():
            for j in range(L.dim):
                if side == "right":
                    w = L.sbracket(v, {j: ONE})
                    key = idx + (j,)
                else:
                    w = L.sbracket({j: ONE}, v)
                    key = (j,) + idx
                if w:
                    nxt[key] = w
        level = nxt
    return level


def constraint_rows(L: LeibnizAlgebra, n: int, side: str = "right") -> list[dict]:
    """Linear constraints on the entries of D, one per (basis tuple, output coordinate).

    Unknown ``a * dim + b`` is D[a][b], the e_a coordinate of D(e_b). Rows
    come out in lexicographic (tuple, coordinate) order; zero rows are dropped.
    """
    d = L.dim
    tensor = product_tensor(L, n, side)
    rows: dict = {}

    def row(key):
        r = rows.get(key)
        if r is None:
            r = rows[key] = {}
        return r

    for J, v in tensor.items():
        # D applied to the product
        for q, val in v.items():
            for out in range(d):
                _acc(row((J, out)), out * d + q, val)
        # D applied in slot j: T[I with slot j -> a] * D[a][I_j]
        for j, a in enumerate(J):
            for b in range(d):
                I = J[:j] + (b,) + J[j + 1:]
                for out, val in v.items():
                    _acc(row((I, out)), a * d + b, -val)
    return [rows[k] for k in sorted(rows) if rows[k]]


def derivation_space(L: LeibnizAlgebra, q, side: str = "right") -> MapSpace:
    """All Leibniz-derivations of the given order, as a canonical basis of matrices."""
    q = _query(q, side)
    d = L.dim
    red = RowReducer(d * d)
    for r in constraint_rows(L, q.order, q.side):
        red.add(r)
        if red.is_full():
            break
    return MapSpace.from_subspace(Subspace.span(red.kernel_vectors(), d * d), d)


def _check_map(L, D):
    if D.shape != (L.dim, L.dim):
        raise ShapeError(f"map of shape {D.shape} on a {L.dim}-dimensional algebra")


def is_derivation(L: LeibnizAlgebra, D: Matrix, q, side: str = "right") -> bool:
    """Membership by direct evaluation of the rule on every basis tuple."""
    q = _query(q, side)
    _check_map(L, D)
    return leibniz_rule_violation(L, D, q.order, q.side) is None


def _lenient(order, side="right") -> DerivationQuery:
    return DerivationQuery(order, side, envelope=max(DEFAULT_ENVELOPE, order))


def ldr(L, order, side="right") -> MapSpace:
    """derivation_space without the envelope limit, for internally chosen orders."""
    return derivation_space(L, _lenient(order, side))


def order_inclusion_check(L: LeibnizAlgebra, s: int, t: int) -> bool:
    """LDer_{s+1} inside LDer_{t+1} (expected whenever s divides t)."""
    if s < 1 or t % s:
        raise ValueError(f"{s} does not divide {t}")
    return ldr(L, s + 1).issubset(ldr(L, t + 1))


def intersection_law_check(L: LeibnizAlgebra, k: int, l: int) -> bool:
    """LDer_k and LDer_l intersect inside LDer_{k+l-1}."""
    meet = ldr(L, k).intersection(ldr(L, l))
    return meet.issubset(ldr(L, k + l - 1))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def power_rule_check(L: LeibnizAlgebra, D: Matrix, n: int, k: int) -> bool:
    """d^k of an n-ary product equals the multinomial expansion, on every basis tuple."""
    _check_map(L, D)
    if k < 1:
        raise ValueError("k must be at least 1")
    if not is_derivation(L, D, _lenient(n)):
        raise NotADerivation(f"map is not a Leibniz-derivation of order {n}")
    d = L.dim
    powers = [[{i: ONE} for i in range(d)]]
    for _ in range(k):
        powers.append([apply_sparse(D, x) for x in powers[-1]])
    Dk = D ** k
    comps = [(c, Fraction(math.factorial(k), math.prod(math.factorial(x) for x in c)))
             for c in _compositions(k, n)]
    for idx in itertools.product(range(d), repeat=n):
        lhs = apply_sparse(Dk, sfold_right(L, [{i: ONE} for i in idx]))
        rhs: dict = {}
        for comp, coeff in comps:
            args = [powers[m][i] for m, i in zip(comp, idx)]
            if not all(args):
                continue
            for key, v in sfold_right(L, args).items():
                _acc(rhs, key, coeff * v)
        if lhs != rhs:
            return False
    return True


# Numeric probes for the map-space certificates. A probe can only refute
# (a non-nilpotent or an invertible element is its own proof); inconclusive
# probes fall through to the symbolic computation, so the count affects speed only.
PROBES = 3
_PROBE_RANGE = 1 << 20


def all_nilpotent(space: MapSpace) -> bool:
    """Every element of the space is nilpotent (char poly of the generic element is t^n)."""
    # one non-nilpotent element refutes; only a pass needs the symbolic certificate
    if any(not b.is_nilpotent() for b in space.basis):
        return False
    for t in range(PROBES):
        rnd = random.Random(t)
        m = Matrix.zeros(space.ambient_dim)
        for b in space.basis:
            m = m + b * rnd.randint(1, _PROBE_RANGE)
        if not m.is_nilpotent():
            return False
    return all(c.is_zero() for c in symbolic_char_poly(generic_element(space)))


def _has_perfect_matching(pattern) -> bool:
    """Structural rank test: some permutation avoids every forced-zero entry."""
    n = len(pattern)
    match = [-1] * n  # column -> row

    def augment(r, seen):
        for c in range(n):
            if pattern[r][c] and not seen[c]:
                seen[c] = True
                if match[c] < 0 or augment(match[c], seen):
                    match[c] = r
                    return True
        return False

    return all(augment(r, [False] * n) for r in range(n))


class _Completions:
    """Exact test of "det(fixed + sum of the remaining basis) is still a nonzero
    polynomial" while the basis variables are fixed one at a time.

    Probe sums and the structural support of the remaining basis are kept
    incrementally, so each test costs a few numeric determinants.
    """

    def __init__(self, basis: list, n: int):
        self.basis, self.n, self.start = basis, n, 0
        self.support = [[sum(1 for b in basis if b.rows[i][j]) for j in range(n)] for i in range(n)]
        self.weights = []
        self.sums = []
        for t in range(PROBES):
            rnd = random.Random(t)
            w = [rnd.randint(1, _PROBE_RANGE) for _ in basis]
            acc = Matrix.zeros(n)
            for c, b in zip(w, basis):
                acc = acc + b * c
            self.weights.append(w)
            self.sums.append(acc)

    def advance(self):
        """Drop the first remaining basis element from the free part."""
        b = self.basis[self.start]
        for i in range(self.n):
            for j in range(self.n):
                if b.rows[i][j]:
                    self.support[i][j] -= 1
        for t in range(PROBES):
            self.sums[t] = self.sums[t] - b * self.weights[t][self.start]
        self.start += 1

    def completes(self, fixed: Matrix) -> bool:
        n, free = self.n, self.basis[self.start:]
        if not free:
            return fixed.det() != 0
        pattern = [[bool(fixed.rows[i][j]) or self.support[i][j] > 0 for j in range(n)] for i in range(n)]
        if not _has_perfect_matching(pattern):
            return False
        if any((fixed + acc).det() != 0 for acc in self.sums):
            return True
        det = symbolic_det(generic_combination(list(free) + [fixed], n))
        return not det.substitute(len(free), 1).is_zero()


def exists_invertible(space: MapSpace) -> tuple[bool, Matrix | None]:
    """Decide whether the space holds an invertible map; return the first grid witness.

    The determinant of the generic element decides the question. The witness
    is the lexicographically first point of {0..n}^b where it is nonzero,
    found variable by variable: the first value keeping the partially
    substituted determinant nonzero always extends to a full witness.
    Each "still nonzero" test is exact: a nonzero evaluation or a deficient
    structural rank settles it, otherwise the symbolic determinant does.
    """
    n = space.ambient_dim
    basis = list(space.basis)
    tests = _Completions(basis, n)
    fixed = Matrix.zeros(n)
    if not tests.completes(fixed):
        return False, None
    for idx in range(len(basis)):
        tests.advance()
        for value in range(n + 1):
            trial = fixed + basis[idx] * value if value else fixed
            if tests.completes(trial):
                fixed = trial
                break
        else:  # pragma: no cover - excluded by the degree bound
            raise AssertionError("grid exhausted although the determinant is nonzero")
    assert fixed.det() != 0
    return True, fixed


@dataclass
class ClassificationReport:
    nilpotent: bool
    char_nilpotent: bool
    strongly_nilpotent: bool
    der_dim: int
    preder_dim: int
    invertible_orders: list = field(default_factory=list)  # [(order, witness or None)]
    nilindex: int | None = None


def classify(L: LeibnizAlgebra, max_order: int = DEFAULT_NONNILPOTENT_SCAN) -> ClassificationReport:
    nilpotent, s = is_nilpotent(L)
    der = ldr(L, 2)
    pre = ldr(L, 3)
    report = ClassificationReport(
        nilpotent=nilpotent,
        char_nilpotent=nilpotent and all_nilpotent(der),
        strongly_nilpotent=nilpotent and all_nilpotent(pre),
        der_dim=der.dim,
        preder_dim=pre.dim,
        nilindex=s,
    )
    for order in range(2, max_order + 1):
        space = {2: der, 3: pre}.get(order) or ldr(L, order)
        ok, witness = exists_invertible(space)
        report.invertible_orders.append((order, witness if ok else None))
    return report


def construct_moens_derivation(L: LeibnizAlgebra) -> tuple[Matrix, int]:
    """Invertible Leibniz-derivation of order floor(s/2)+1 for nilindex s.

    Identity on a coordinate complement W of L^q and multiplication by q on
    L^q; W is spanned by the unit vectors at the non-pivot columns of the
    echelon basis of L^q.
    """
    nilpotent, s = is_nilpotent(L)
    if not nilpotent:
        raise NotNilpotent(f"{L.name or 'algebra'} is not nilpotent")
    q = s // 2 + 1
    Lq = series(L, None, "lower_central").term(q)
    d = L.dim
    W = Lq.complement_indices()
    cols: list = [None] * d
    for i in W:
        cols[i] = tuple(ONE if k == i else ZERO for k in range(d))
    for p, r in zip(Lq.pivots(), Lq.basis):
        # e_p = r - sum_{k in W} r_k e_k
        col = [q * x for x in r]
        for k in W:
            if r[k]:
                col[k] -= r[k]
        cols[p] = tuple(col)
    P = Matrix.from_columns(cols, d)
    if not is_derivation(L, P, _lenient(q)) or P.det() == 0:  # pragma: no cover - guaranteed by construction
        raise AssertionError("constructed map is not an invertible Leibniz-derivation")
    return P, q


@dataclass(frozen=True)
class WeightEntry:
    weights: tuple
    total: Fraction
    is_root: bool
    product_dim: int
    contained: bool
    equal: bool


@dataclass
class WeightProductReport:
    eigenvalues: list
    entries: list

    @property
    def ok(self) -> bool:
        return all(e.contained for e in self.entries)

    @property
    def all_equal(self) -> bool:
        return all(e.equal for e in self.entries if e.is_root)


def weight_product_check(L: LeibnizAlgebra, D: Matrix, n: int) -> WeightProductReport:
    """n-ary products of weight spaces land in the weight space of the summed weight.

    Sums outside the spectrum must give a zero product. Equality with the
    target weight space is recorded but not required.
    """
    _check_map(L, D)
    if not is_derivation(L, D, _lenient(n)):
        raise NotADerivation(f"map is not a Leibniz-derivation of order {n}")
    dec = decompose(D)
    spaces = dict(dec.pairs)
    entries = []
    for weights in itertools.product(dec.eigenvalues, repeat=n):
        prod = n_product_subspace(L, [spaces[w] for w in weights])
        total = sum(weights, ZERO)
        if total in spaces:
            target = spaces[total]
            contained = prod.issubset(target)
            entries.append(WeightEntry(weights, total, True, prod.dim, contained, prod == target))
        else:
            entries.append(WeightEntry(weights, total, False, prod.dim, prod.is_zero(), prod.is_zero()))
    return WeightProductReport(dec.eigenvalues, entries)


def invariance_check(L: LeibnizAlgebra, I: Subspace, q, side: str = "right") -> bool:
    """Every Leibniz-derivation of the given order maps the ideal I into itself."""
    if not is_ideal(L, I):
        raise NotAnIdeal("subspace is not a two-sided ideal")
    space = derivation_space(L, q, side)
    return all(I.is_invariant(D) for D in space.basis)


def default_scan_bound() -> int:
    value = os.environ.get("LEIBNIZ_MAX_ORDER")
    return int(value) if value else DEFAULT_NONNILPOTENT_SCAN


@dataclass
class TheoremReport:
    name: str
    nilpotent: bool
    nilindex: int | None
    max_order: int
    verdicts: list = field(default_factory=list)  # [(order, has_invertible, witness)]
    construction: tuple | None = None  # (P, q) in the nilpotent branch
    violation: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.violation

    def summary(self) -> str:
        if self.nilpotent:
            q = self.construction[1] if self.construction else None
            head = f"nilpotent (nilindex {self.nilindex}); invertible right Leibniz-derivation of order {q}"
        else:
            orders = [o for o, has, _ in self.verdicts if has]
            if orders:
                head = f"not nilpotent; invertible right Leibniz-derivation found at order {orders[0]}"
            else:
                head = f"not nilpotent; no invertible right Leibniz-derivation of order ≤ {self.max_order}"
        return head + (" -- THEOREM VIOLATED" if self.violation else "")


def theorem_check(L: LeibnizAlgebra, max_order: int | None = None) -> TheoremReport:
    """Nilpotent iff some right Leibniz-derivation is invertible, up to a scanned order."""
    nilpotent, s = is_nilpotent(L)
    if nilpotent:
        q = s // 2 + 1
        bound = max_order if max_order is not None else q
        report = TheoremReport(L.name, True, s, bound)
        try:
            P, q = construct_moens_derivation(L)
        except (NotNilpotent, AssertionError) as exc:  # pragma: no cover
            report.violation = True
            report.note = f"construction failed: {exc}"
            return report
        report.construction = (P, q)
        has, witness = exists_invertible(ldr(L, q))
        report.verdicts.append((q, has, witness))
        if not has or not is_derivation(L, P, _lenient(q)):
            report.violation = True
        report.note = f"checked order {q} = floor({s}/2)+1 from the nilindex"
        return report
    bound = max_order if max_order is not None else default_scan_bound()
    report = TheoremReport(L.name, False, None, bound)
    for order in range(2, bound + 1):
        has, witness = exists_invertible(ldr(L, order))
        report.verdicts.append((order, has, witness))
        if has:
            report.violation = True
    report.note = f"scan truncated at order {bound}"
    return report
