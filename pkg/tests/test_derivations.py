import itertools
import random
from fractions import Fraction

import pytest
import sympy

from leibniz.algebra import is_nilpotent, product_subspace
from leibniz.corpus import abelian, cas_ex33, charnil, ex7, lie_heisenberg, random_algebra, sl2, solvable_ex31
from leibniz.derivations import (
    DerivationQuery,
    all_nilpotent,
    classify,
    construct_moens_derivation,
    default_scan_bound,
    derivation_space,
    exists_invertible,
    intersection_law_check,
    invariance_check,
    is_derivation,
    order_inclusion_check,
    power_rule_check,
    theorem_check,
    weight_product_check,
)
from leibniz.errors import NotADerivation, NotAnIdeal, NotNilpotent, OrderOutOfRange, ShapeError
from leibniz.linalg import MapSpace, Matrix, Subspace, generic_element, symbolic_char_poly, symbolic_det
from leibniz.verify import charnil6_der_reference, charnil6_preder_reference


def E(n, i, j):
    rows = [[0] * n for _ in range(n)]
    rows[i][j] = 1
    return Matrix(rows)


# --- independent oracle ------------------------------------------------------

def sympy_derivation_space(L, n, side):
    """Solve the rule with sympy on a fully symbolic D; shares nothing with the solver."""
    d = L.dim
    c = L.structure_constants()
    syms = sympy.symbols(f"d0:{d * d}")
    D = sympy.Matrix(d, d, syms)

    def br(x, y):
        return sympy.Matrix([sum(x[i] * y[j] * c[i][j][k] for i in range(d) for j in range(d)) for k in range(d)])

    def prod(xs):
        if side == "right":
            acc = xs[0]
            for x in xs[1:]:
                acc = br(acc, x)
            return acc
        acc = xs[-1]
        for x in reversed(xs[:-1]):
            acc = br(x, acc)
        return acc

    basis = [sympy.Matrix([1 if k == i else 0 for k in range(d)]) for i in range(d)]
    eqs = []
    for idx in itertools.product(range(d), repeat=n):
        xs = [basis[i] for i in idx]
        lhs = D * prod(xs)
        rhs = sympy.zeros(d, 1)
        for j in range(n):
            ys = list(xs)
            ys[j] = D * xs[j]
            rhs += prod(ys)
        eqs.extend(sympy.expand(e) for e in (lhs - rhs))
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return Subspace.full(d * d)
    A, _ = sympy.linear_eq_to_matrix(eqs, syms)
    vecs = [[Fraction(int(x.p), int(x.q)) for x in v] for v in A.nullspace()]
    return Subspace.span(vecs, d * d)


@pytest.mark.parametrize("seed", range(50))
def test_order2_matches_sympy_oracle(seed):
    L = random_algebra(random.Random(seed), 3)
    assert derivation_space(L, 2).flattened() == sympy_derivation_space(L, 2, "right")


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("side", ["right", "left"])
def test_order3_matches_sympy_oracle(seed, side):
    L = random_algebra(random.Random(1000 + seed), 3)
    assert derivation_space(L, 3, side).flattened() == sympy_derivation_space(L, 3, side)


@pytest.mark.parametrize("L", [cas_ex33(2), lie_heisenberg()], ids=lambda L: L.name)
def test_order4_matches_sympy_oracle(L):
    for side in ("right", "left"):
        assert derivation_space(L, 4, side).flattened() == sympy_derivation_space(L, 4, side)


# --- derivation spaces --------------------------------------------------------

def test_charnil6_derivations(charnil6):
    der = derivation_space(charnil6, 2)
    assert der.dim == 5
    assert der == charnil6_der_reference()
    # strictly lower triangular in the column convention: d(e_i) only involves e_j, j > i
    for b in der.basis:
        assert all(b[i, j] == 0 for i in range(6) for j in range(6) if i <= j)


def test_charnil6_prederivations(charnil6):
    pre = derivation_space(charnil6, 3)
    assert pre.dim == 9
    assert pre == MapSpace(6, charnil6_preder_reference())


def test_identity_is_left_but_not_right_prederivation():
    S = solvable_ex31(6)
    eye = Matrix.identity(7)
    assert derivation_space(S, 3, "left").contains(eye)
    assert is_derivation(S, eye, 3, "left")
    assert not is_derivation(S, eye, 3, "right")


@pytest.mark.parametrize("order", [2, 3, 4, 5])
def test_abelian_everything_is_a_derivation(order):
    assert derivation_space(abelian(3), order).dim == 9


def test_is_derivation_examples(charnil6):
    assert is_derivation(abelian(3), Matrix.identity(3), 2)
    assert not is_derivation(charnil6, Matrix.identity(6), 2)
    P, q = construct_moens_derivation(charnil6)
    assert is_derivation(charnil6, P, q)
    with pytest.raises(ShapeError):
        is_derivation(charnil6, Matrix.identity(5), 2)


def test_order_envelope():
    with pytest.raises(OrderOutOfRange):
        derivation_space(abelian(2), 6)
    with pytest.raises(OrderOutOfRange):
        DerivationQuery(1)
    with pytest.raises(ValueError):
        DerivationQuery(2, side="middle")
    assert derivation_space(abelian(2), DerivationQuery(6, envelope=6)).dim == 4


def test_solver_and_membership_agree(bundled):
    for name, L in bundled.items():
        for order in (2, 3, 4):
            for b in derivation_space(L, order).basis:
                assert is_derivation(L, b, order), (name, order)


@pytest.mark.parametrize("L", [sl2(), lie_heisenberg(), abelian(3)], ids=lambda L: L.name)
@pytest.mark.parametrize("order", [2, 3, 4])
def test_left_and_right_agree_on_lie_tables(L, order):
    assert L.is_antisymmetric()
    assert derivation_space(L, order, "left") == derivation_space(L, order, "right")


def test_left_and_right_differ_in_general():
    S = solvable_ex31(6)
    assert derivation_space(S, 3, "left") != derivation_space(S, 3, "right")


# --- order relations -----------------------------------------------------------

@pytest.mark.parametrize("L", [charnil(6), ex7(), cas_ex33(4), solvable_ex31(6)], ids=lambda L: L.name)
def test_order_inclusions(L):
    assert order_inclusion_check(L, 1, 2)
    assert order_inclusion_check(L, 1, 3)
    assert order_inclusion_check(L, 2, 4)
    assert intersection_law_check(L, 2, 3)
    assert intersection_law_check(L, 3, 3)


def test_order_inclusion_needs_divisibility(charnil6):
    with pytest.raises(ValueError):
        order_inclusion_check(charnil6, 2, 3)


# --- power rule ----------------------------------------------------------------

def test_power_rule_examples(charnil6, rng):
    der = derivation_space(charnil6, 2)
    D = Matrix.zeros(6)
    for b in der.basis:
        D = D + b * rng.randint(-3, 3)
    assert power_rule_check(charnil6, D, 2, 1)
    assert power_rule_check(charnil6, D, 2, 3)
    P, q = construct_moens_derivation(charnil6)
    assert power_rule_check(charnil6, P, 4, 2)
    with pytest.raises(NotADerivation):
        power_rule_check(charnil6, Matrix.identity(6), 2, 2)


def test_power_rule_on_corpus(bundled):
    for name, L in bundled.items():
        for n in (2, 3):
            for D in derivation_space(L, n).basis:
                for k in (1, 2, 3):
                    assert power_rule_check(L, D, n, k), (name, n, k)


# --- certificates ----------------------------------------------------------------

def test_all_nilpotent_examples(charnil6):
    assert all_nilpotent(derivation_space(charnil6, 2))
    assert not all_nilpotent(derivation_space(charnil6, 3))
    assert all_nilpotent(MapSpace(2, [E(2, 0, 1)]))


def test_exists_invertible_examples(charnil6):
    ok, w = exists_invertible(derivation_space(charnil6, 3))
    assert ok and w.det() != 0
    assert [w[i, i] for i in range(6)] == [1, 2, 3, 4, 5, 6]
    assert exists_invertible(derivation_space(charnil6, 2)) == (False, None)
    assert exists_invertible(MapSpace(3, [Matrix.identity(3)])) == (True, Matrix.identity(3))


def test_witness_is_first_grid_point():
    rnd = random.Random(3)
    for _ in range(10):
        mats = [Matrix([[rnd.randint(-1, 1) for _ in range(3)] for _ in range(3)]) for _ in range(3)]
        space = MapSpace.spanned_by(mats, 3)
        ok, w = exists_invertible(space)
        first = None
        for point in itertools.product(range(4), repeat=space.dim):
            m = Matrix.zeros(3)
            for c, b in zip(point, space.basis):
                m = m + b * c
            if m.det() != 0:
                first = m
                break
        assert ok == (first is not None)
        assert w == first


def test_invertibility_matches_symbolic_determinant(bundled, monkeypatch):
    # probes only shortcut the symbolic determinant, never change the answer
    import leibniz.derivations as D
    spaces = [derivation_space(L, order, side)
              for L in bundled.values() for order in (2, 3) for side in ("right", "left")]
    spaces = [s for s in spaces if s.dim <= 13]
    fast = [exists_invertible(s) for s in spaces]
    nil = [all_nilpotent(s) for s in spaces]
    monkeypatch.setattr(D, "PROBES", 0)
    for s, got, n in zip(spaces, fast, nil):
        assert n == all(c.is_zero() for c in symbolic_char_poly(generic_element(s)))
        assert got == exists_invertible(s)
        assert got[0] == (not symbolic_det(generic_element(s)).is_zero())


def test_invertibility_on_large_full_space():
    # left order 5 of a 12-dimensional filiform table is all of gl(12)
    space = derivation_space(charnil(12), 5, "left")
    assert space.dim == 144
    # the lexicographically first invertible 0/1 point avoids the leading entries
    assert exists_invertible(space) == (True, Matrix([[int(i + j == 11) for j in range(12)] for i in range(12)]))
    assert not all_nilpotent(space)
    assert not exists_invertible(derivation_space(charnil(12), 5, "right"))[0]


def test_structural_rank_shortcut():
    space = MapSpace.spanned_by([E(3, 0, 0), E(3, 1, 1), E(3, 2, 1)], 3)
    assert exists_invertible(space) == (False, None)


def test_nilpotent_spaces_have_no_invertible_element(bundled):
    for name, L in bundled.items():
        for order in (2, 3):
            space = derivation_space(L, order)
            if all_nilpotent(space):
                assert not exists_invertible(space)[0], name


@pytest.mark.parametrize("L,char,strong", [
    (charnil(6), True, False),
    (charnil(7), True, True),
    (charnil(8), True, True),
    (ex7(), True, False),
])
def test_classify(L, char, strong):
    rep = classify(L, 3)
    assert (rep.char_nilpotent, rep.strongly_nilpotent) == (char, strong)
    assert [o for o, _ in rep.invertible_orders] == [2, 3]


def test_strong_implies_characteristic(bundled):
    for L in bundled.values():
        rep = classify(L, 2)
        assert not rep.strongly_nilpotent or rep.char_nilpotent


# --- construction, weights, invariance, theorem -------------------------------

def test_construction_examples(charnil6):
    P, q = construct_moens_derivation(abelian(3))
    assert (P, q) == (Matrix.identity(3), 2)
    P, q = construct_moens_derivation(charnil6)
    assert (P, q) == (Matrix.diag([1, 1, 1, 1, 4, 4]), 4)
    with pytest.raises(NotNilpotent):
        construct_moens_derivation(solvable_ex31(6))


def test_construction_on_nilpotent_corpus(bundled):
    for name, L in bundled.items():
        nilpotent, s = is_nilpotent(L)
        if nilpotent:
            P, q = construct_moens_derivation(L)
            assert q == s // 2 + 1 and P.det() != 0, name


def test_weight_products(charnil6):
    P, q = construct_moens_derivation(charnil6)
    rep = weight_product_check(charnil6, P, q)
    assert rep.ok and rep.eigenvalues == [1, 4]
    entry = next(e for e in rep.entries if e.weights == (1, 1, 1, 1))
    assert entry.is_root and entry.contained and entry.total == 4
    for e in rep.entries:
        if not e.is_root:
            assert e.product_dim == 0
    rep = weight_product_check(abelian(2), Matrix.identity(2), 2)
    assert rep.ok and all(e.product_dim == 0 for e in rep.entries)
    with pytest.raises(NotADerivation):
        weight_product_check(charnil6, Matrix.identity(6), 2)


def test_invariance_examples(charnil6, bundled):
    S = solvable_ex31(6)
    assert invariance_check(S, S.full(), 3)
    L = bundled["charnil6_plus_cas33"]
    for order in (2, 3):
        assert invariance_check(L, L.meta["solvable_radical"], order)
        assert invariance_check(L, L.meta["nilradical"], order)
    L2 = product_subspace(charnil6, charnil6.full(), charnil6.full())
    assert invariance_check(charnil6, L2, 2)
    with pytest.raises(NotAnIdeal):
        invariance_check(charnil6, Subspace.coordinate([0], 6), 2)


def test_theorem_check_examples(charnil6):
    rep = theorem_check(charnil6)
    assert rep.passed and rep.construction[1] == 4
    rep = theorem_check(solvable_ex31(6), 4)
    assert rep.passed
    assert rep.summary() == "not nilpotent; no invertible right Leibniz-derivation of order ≤ 4"
    assert [o for o, _, _ in rep.verdicts] == [2, 3, 4]
    assert theorem_check(cas_ex33(4), 4).passed


def test_scan_bound_from_environment(monkeypatch):
    monkeypatch.setenv("LEIBNIZ_MAX_ORDER", "3")
    assert default_scan_bound() == 3
    assert theorem_check(sl2()).max_order == 3
    monkeypatch.delenv("LEIBNIZ_MAX_ORDER")
    assert default_scan_bound() == 4
