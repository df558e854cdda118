"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The checks here call the library directly rather than going through the
verify-paper runner, which is tested separately at the end.
"""

import random
from fractions import Fraction

import pytest

from leibniz.algebra import (
    check_leibniz_identity,
    check_n_algebra_identity,
    engel_check,
    is_nilpotent,
    is_solvable,
    n_series_relations,
    nary_identity_sides,
    product_subspace,
)
from leibniz.corpus import load_corpus, random_algebra
from leibniz.derivations import (
    DerivationQuery,
    all_nilpotent,
    classify,
    construct_moens_derivation,
    derivation_space,
    exists_invertible,
    invariance_check,
    is_derivation,
    power_rule_check,
    theorem_check,
)
from leibniz.linalg import MapSpace, Matrix, generic_combination, symbolic_det
from leibniz.verify import charnil6_der_reference, charnil6_preder_reference, naive_derivation_space, verify_paper

CORPUS = load_corpus()
ANNOTATED = ("solvable_radical", "nilradical")


@pytest.fixture
def criterion(capsys):
    """Record a criterion verdict and print it past pytest's capture."""

    def report(number, text, ok):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {text}")
        assert ok, f"criterion {number} failed: {text}"

    return report


def test_01_identity_suite(criterion):
    bad = [n for n, L in CORPUS.items() if not check_leibniz_identity(L).ok]
    criterion(1, f"{len(CORPUS)} corpus algebras satisfy the Leibniz identity on all basis triples", not bad)


def test_02_nary_counterexample(criterion):
    L = CORPUS["cas_ex33_n4"]
    e1, x = L.basis(0), L.basis(4)
    lhs, rhs = nary_identity_sides(L, [e1] * 3, [x] * 2)
    e3 = L.basis(2)
    ok = lhs == tuple(9 * c for c in e3) and rhs == tuple(3 * c for c in e3)
    ok = ok and not check_n_algebra_identity(L, 3).ok
    criterion(2, "k=3: LHS = 9e3, RHS = 3e3; ternary right product violates the n-algebra identity", ok)


def test_03_left_definition_counterexample(criterion):
    L = CORPUS["solvable_ex31_n6"]
    eye = Matrix.identity(L.dim)
    ok = is_solvable(L) and not is_nilpotent(L)[0]
    ok = ok and derivation_space(L, 3, "left").contains(eye)
    ok = ok and all(not exists_invertible(derivation_space(L, n, "right"))[0] for n in (2, 3, 4))
    criterion(3, "solvable non-nilpotent; identity in left order-3 space; right orders 2..4 all singular", ok)


def test_04_characteristically_nilpotent(criterion):
    L = CORPUS["charnil6"]
    der = derivation_space(L, 2)
    ok = der == charnil6_der_reference() and all_nilpotent(der) and not exists_invertible(der)[0]
    criterion(4, f"charnil6: Der has the displayed 5-parameter pattern (dim {der.dim}), all nilpotent", ok)


def test_05_strong_nilpotency_boundary(criterion):
    want = {"charnil6": (True, False), "charnil7": (True, True), "charnil8": (True, True),
            "ex7": (True, False), "ex8": (True, False)}
    got = {}
    for name in want:
        rep = classify(CORPUS[name], 3)
        got[name] = (rep.char_nilpotent, rep.strongly_nilpotent)
    ref = charnil6_preder_reference()
    det = symbolic_det(generic_combination(ref, 6))
    det_ok = det.sorted_terms() == [((6,) + (0,) * 8, Fraction(720))]
    pre_ok = derivation_space(CORPUS["charnil6"], 3) == MapSpace(6, ref)
    criterion(5, f"(char, strong) = {got}; LDer3(charnil6) as displayed, det = 720*a1^6",
              got == want and det_ok and pre_ok)


def test_06_series_relations(criterion):
    failures, count = [], 0
    for name, L in CORPUS.items():
        spaces = [("L", L.full()), ("L^2", product_subspace(L, L.full(), L.full()))]
        spaces += [(k, L.meta[k]) for k in ANNOTATED if k in L.meta]
        for label, M in spaces:
            for n in (3, 4):
                for k in (1, 2, 3):
                    for rel in n_series_relations(L, M, n, k):
                        count += 1
                        if rel.asserted and not rel.holds:
                            failures.append(f"{name}/{label}: {rel.describe()}")
    criterion(6, f"{count} series relation instances (n in 3,4; k in 1..3); failures: {failures[:3]}", not failures)


def test_07_power_rule(criterion):
    failures, count = [], 0
    for name, L in CORPUS.items():
        for n in (2, 3):
            for D in derivation_space(L, n).basis:
                for k in (1, 2, 3):
                    count += 1
                    if not power_rule_check(L, D, n, k):
                        failures.append((name, n, k))
    criterion(7, f"power rule on {count} (basis map, k) pairs of Der and LDer3", not failures)


def test_08_construction(criterion):
    ok = True
    for name, L in CORPUS.items():
        nilpotent, s = is_nilpotent(L)
        if nilpotent:
            P, q = construct_moens_derivation(L)
            ok = ok and q == s // 2 + 1 and P.det() != 0
            ok = ok and is_derivation(L, P, DerivationQuery(q, envelope=max(q, 5)))
    P, q = construct_moens_derivation(CORPUS["charnil6"])
    ok = ok and P == Matrix.diag([1, 1, 1, 1, 4, 4]) and q == 4
    criterion(8, "constructed maps are invertible of order floor(s/2)+1; charnil6 gives diag(1,1,1,1,4,4), q=4", ok)


def test_09_main_theorem(criterion):
    verdicts = {}
    for name, L in CORPUS.items():
        rep = theorem_check(L, None if is_nilpotent(L)[0] else 4)
        verdicts[name] = rep.passed
    required = {"solvable_ex31_n6", "cas_ex33_n4"} <= set(CORPUS)
    criterion(9, f"theorem check passes on all {len(verdicts)} corpus algebras", required and all(verdicts.values()))


def test_10_engel(criterion):
    rng = random.Random(10)
    ok = True
    for L in CORPUS.values():
        ok = ok and engel_check(L) == is_nilpotent(L)[0]
        for _ in range(100):
            x = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(L.dim)]
            y = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(L.dim)]
            Rx, Ry = L.right_mult(x), L.right_mult(y)
            ok = ok and Rx @ Ry - Ry @ Rx == L.right_mult(L.bracket(y, x))
    criterion(10, "Engel criterion equals nilpotency; R_xR_y - R_yR_x = R_[y,x] on 100 random pairs each", ok)


def test_11_radical_invariance(criterion):
    checked = []
    ok = True
    for name, L in CORPUS.items():
        for key in ANNOTATED:
            if key in L.meta:
                checked.append(f"{name}:{key}")
                ok = ok and all(invariance_check(L, L.meta[key], n) for n in (2, 3))
    criterion(11, f"{len(checked)} annotated radicals invariant under orders 2 and 3", ok and bool(checked))


def test_12_oracle_equivalence(criterion):
    rng = random.Random(12)
    mismatches = 0
    for _ in range(50):
        L = random_algebra(rng, 3)
        if derivation_space(L, 2) != naive_derivation_space(L):
            mismatches += 1
    criterion(12, f"50 random algebras of dim <= 3: {mismatches} mismatches with the naive solver", mismatches == 0)


def test_verify_paper_runner(criterion):
    rep = verify_paper()
    criterion("runner", f"verify-paper: {sum(c.status == 'pass' for c in rep.checks)}/12 checks, "
                        f"{rep.seconds:.1f}s", rep.ok and rep.seconds < 60)
