"""Exact arithmetic toolkit for finite-dimensional Leibniz algebras."""

from .algebra import (
    LeibnizAlgebra,
    bracket,
    check_leibniz_identity,
    check_n_algebra_identity,
    derived,
    direct_sum,
    engel_check,
    is_ideal,
    is_n_ideal,
    is_n_nilpotent,
    is_n_solvable,
    is_nilpotent,
    is_solvable,
    is_subalgebra,
    lower_central,
    n_ary_left,
    n_ary_right,
    n_product_subspace,
    n_series_relations,
    product_subspace,
    right_mult,
    series,
)
from .corpus import corpus_generate, load, load_corpus, loads, save, dumps
from .derivations import (
    DerivationQuery,
    all_nilpotent,
    classify,
    construct_moens_derivation,
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
from .errors import (
    ArityError,
    CorpusFormatError,
    DivisionByZero,
    IdentityViolation,
    LeibnizError,
    NonSplitSpectrum,
    NotADerivation,
    NotAnIdeal,
    NotNilpotent,
    OrderOutOfRange,
    ShapeError,
    ZeroPolynomial,
)
from .exactmath import MultiPoly, Rational, UniPoly, poly_arith, poly_eval, rational_arith, rational_roots
from .linalg import (
    MapSpace,
    Matrix,
    Subspace,
    WeightDecomposition,
    char_poly,
    decompose,
    generalized_eigenspace,
    generic_element,
    nullspace,
    rref,
    symbolic_char_poly,
    symbolic_det,
)
from .verify import verify_paper

__version__ = "0.1.0"
