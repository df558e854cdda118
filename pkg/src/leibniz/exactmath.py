"""Exact rationals, sparse multivariate polynomials and univariate polynomials over Q.

Rationals are :class:`fractions.Fraction`; this module adds the canonical
string form used in files and CLI output, plus the polynomial types used by
the symbolic determinant machinery.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityError, CorpusFormatError, DivisionByZero, ZeroPolynomial

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use a 'p/q' string or an int")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; whitespace is not allowed inside."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise CorpusFormatError(f"not a rational: {text!r}") from exc
    return value


def format_rational(value: Fraction) -> str:
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_arith(a, b, op: str) -> Fraction:
    a, b = as_rational(a), as_rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZero(f"{format_rational(a)} / 0")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Multivariate polynomials
# ---------------------------------------------------------------------------

def _grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    coefficients. Instances are treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        if terms:
            n = len(self.variables)
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise ArityError(f"exponent vector {exps} for {n} variables")
                coeff = as_rational(coeff)
                if coeff:
                    clean[exps] = clean.get(exps, ZERO) + coeff
                    if not clean[exps]:
                        del clean[exps]
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        # terms already clean: no zero coefficients, correct arity
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, variables=()):
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, value, variables=()):
        variables = tuple(variables)
        value = as_rational(value)
        return cls._raw(variables, {(0,) * len(variables): value} if value else {})

    @classmethod
    def variable(cls, index: int, variables):
        variables = tuple(variables)
        exps = [0] * len(variables)
        exps[index] = 1
        return cls._raw(variables, {tuple(exps): ONE})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=-1)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                if other.is_constant():
                    return MultiPoly.constant(other.terms.get((0,) * other.nvars, ZERO), self.variables)
                raise ArityError("polynomials over different variable orderings")
            return other
        return MultiPoly.constant(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, factor) -> "MultiPoly":
        factor = as_rational(factor)
        if not factor:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(self.variables, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.variables)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, ZERO) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return MultiPoly._raw(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self.terms == MultiPoly.constant(other, self.variables).terms
        except TypeError:
            return NotImplemented

    __hash__ = None

    def leading_term(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ValueError if there is a remainder."""
        other = self._coerce(other)
        if not other.terms:
            raise DivisionByZero("division by the zero polynomial")
        lt_e, lt_c = other.leading_term()
        if len(other.terms) == 1:
            terms = {}
            for e, c in self.terms.items():
                q = tuple(a - b for a, b in zip(e, lt_e))
                if min(q, default=0) < 0:
                    raise ValueError("division is not exact")
                terms[q] = c / lt_c
            return MultiPoly._raw(self.variables, terms)
        remainder = self
        quotient = {}
        while remainder.terms:
            e, c = remainder.leading_term()
            q = tuple(a - b for a, b in zip(e, lt_e))
            if min(q, default=0) < 0:
                raise ValueError("division is not exact")
            qc = c / lt_c
            quotient[q] = qc
            remainder = remainder - other * MultiPoly._raw(self.variables, {q: qc})
        return MultiPoly._raw(self.variables, quotient)

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != len(self.variables):
            raise ArityError(f"expected {len(self.variables)} values, got {len(point)}")
        point = [as_rational(v) for v in point]
        total = ZERO
        for exps, coeff in self.terms.items():
            term = coeff
            for v, k in zip(point, exps):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, index: int, value) -> "MultiPoly":
        """Fix one variable; the variable ordering is kept (its exponent becomes 0)."""
        value = as_rational(value)
        terms: dict = {}
        for exps, coeff in self.terms.items():
            k = exps[index]
            c = coeff * value ** k if k else coeff
            if not c:
                continue
            e = exps[:index] + (0,) + exps[index + 1:]
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                del terms[e]
        return MultiPoly._raw(self.variables, terms)

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(self.variables, exps) if k
            )
            if not mono:
                body = format_rational(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{format_rational(abs(coeff))}*{mono}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, variables={self.variables})"


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if p.variables != q.variables:
        raise ArityError("polynomials over different variable orderings")
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    return p.eval(point)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------

class UniPoly:
    """Polynomial in one variable ``t``, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def linear_factor(cls, root) -> "UniPoly":
        return cls([-as_rational(root), 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, x) -> Fraction:
        x = as_rational(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(c * as_rational(other) for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [ZERO] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1 - dq, -1, -1):
            q = rem[i + dq] / lead
            quot[i] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[i + j] -= q * c
        return UniPoly(quot), UniPoly(rem[:dq] if dq > 0 else [])

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"UniPoly({str(self)!r})"


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n > 10**12:
        from sympy import divisors

        return [int(d) for d in divisors(n)]
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: UniPoly) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, ascending."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has every number as a root")
    coeffs = list(p.coeffs)
    zero_mult = 0
    while not coeffs[0]:
        coeffs.pop(0)
        zero_mult += 1
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    content = 0
    for c in ints:
        content = math.gcd(content, c)
    ints = [c // content for c in ints]
    current = UniPoly(ints)
    candidates = set()
    if current.degree > 0:
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                candidates.add(Fraction(num, den))
                candidates.add(Fraction(-num, den))
    found = []
    for r in sorted(candidates):
        if current.degree < 1:
            break
        factor = UniPoly.linear_factor(r)
        mult = 0
        while current.degree >= 1:
            q, rem = divmod(current, factor)
            if not rem.is_zero():
                break
            current = q
            mult += 1
        if mult:
            found.append((r, mult))
    if zero_mult:
        found.append((ZERO, zero_mult))
    return sorted(found)


def split_off_roots(p: UniPoly, roots) -> UniPoly:
    """Divide out prod (t - r)^m; what remains has no rational roots."""
    rest = p
    for r, m in roots:
        rest, rem = divmod(rest, UniPoly.linear_factor(r) ** m)
        assert rem.is_zero()
    return rest
