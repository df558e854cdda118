"""Exact dense linear algebra over Q and over the polynomial ring Q[x_1..x_b].

Conventions: vectors are tuples of Fractions; a matrix acts on column
vectors, so column ``j`` of the matrix of a map holds the coordinates of the
image of ``e_j``. Subspaces are stored by the reduced row echelon form of a
basis, which makes equality of subspaces equality of tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivisionByZero, NonSplitSpectrum, ShapeError
from .exactmath import (
    ONE,
    ZERO,
    MultiPoly,
    UniPoly,
    as_rational,
    format_rational,
    rational_roots,
    split_off_roots,
)

Vector = tuple  # tuple[Fraction, ...]


def vec(values) -> Vector:
    return tuple(as_rational(v) for v in values)


def unit(dim: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(dim))


def zero_vector(dim: int) -> Vector:
    return (ZERO,) * dim


# ---------------------------------------------------------------------------
# Row reduction engine (sparse rows: dict column -> nonzero Fraction)
# ---------------------------------------------------------------------------

class RowReducer:
    """Incrementally maintained reduced row echelon form.

    Rows are added one at a time; after every insertion the stored rows are
    fully reduced (pivot 1, zeros above and below each pivot), so the final
    result does not depend on insertion order.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def is_full(self) -> bool:
        return len(self.pivot_rows) == self.ncols

    def reduce(self, row: dict) -> dict:
        row = {c: v for c, v in row.items() if v}
        hits = [c for c in row if c in self.pivot_rows]
        for c in hits:
            f = row.get(c)
            if not f:
                continue
            for k, v in self.pivot_rows[c].items():
                s = row.get(k, ZERO) - f * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True if the rank grew."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = ONE / row[p]
        if inv != 1:
            row = {k: v * inv for k, v in row.items()}
        for prow in self.pivot_rows.values():
            f = prow.get(p)
            if f:
                for k, v in row.items():
                    s = prow.get(k, ZERO) - f * v
                    if s:
                        prow[k] = s
                    else:
                        prow.pop(k, None)
        self.pivot_rows[p] = row
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def dense_rows(self) -> tuple:
        out = []
        for p in sorted(self.pivot_rows):
            r = self.pivot_rows[p]
            out.append(tuple(r.get(k, ZERO) for k in range(self.ncols)))
        return tuple(out)

    def kernel_vectors(self) -> list[Vector]:
        """Basis of {v : row . v = 0 for every stored row}."""
        free = [c for c in range(self.ncols) if c not in self.pivot_rows]
        out = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for p, r in self.pivot_rows.items():
                x = r.get(f)
                if x:
                    v[p] = -x
            out.append(tuple(v))
        return out


def _sparse(v: Sequence) -> dict:
    return {i: x for i, x in enumerate(v) if x}


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols: int | None = None):
        rows = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ShapeError("ragged matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows, ncols):
        obj = cls.__new__(cls)
        obj.rows = rows
        obj.nrows = len(rows)
        obj.ncols = ncols
        return obj

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        return cls._raw(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(unit(n, i) for i in range(n)), n)

    @classmethod
    def diag(cls, values) -> "Matrix":
        values = [as_rational(v) for v in values]
        n = len(values)
        return cls._raw(tuple(tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns, nrows: int | None = None) -> "Matrix":
        columns = [vec(c) for c in columns]
        if not columns:
            return cls.zeros(nrows or 0, 0)
        n = len(columns[0])
        return cls._raw(tuple(tuple(c[i] for c in columns) for i in range(n)), len(columns))

    @classmethod
    def from_flat(cls, values, n: int) -> "Matrix":
        values = list(values)
        if len(values) != n * n:
            raise ShapeError(f"{len(values)} entries cannot form a {n}x{n} matrix")
        return cls(tuple(tuple(values[i * n:(i + 1) * n]) for i in range(n)), n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def flatten(self) -> Vector:
        return tuple(x for r in self.rows for x in r)

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    @property
    def T(self):
        return self.transpose()

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def __sub__(self, other):
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            raise TypeError("use @ for matrix products")
        s = as_rational(scalar)
        return Matrix._raw(tuple(tuple(a * s for a in r) for r in self.rows), self.ncols)

    __rmul__ = __mul__

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} for {self.nrows}x{self.ncols} matrix")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz), ZERO) for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix.from_columns([self.apply(c) for c in cols]) if cols else Matrix.zeros(self.nrows, 0)
        return self.apply(other)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ShapeError("power of a non-square matrix")
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.nrows, self.ncols))), ZERO)

    def is_nilpotent(self) -> bool:
        return (self ** self.nrows).is_zero()

    def det(self) -> Fraction:
        if not self.is_square():
            raise ShapeError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        det = ONE
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                return ZERO
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            inv = ONE / a[c][c]
            for i in range(c + 1, n):
                f = a[i][c] * inv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ShapeError("inverse of a non-square matrix")
        n = self.nrows
        aug = Matrix([list(r) + [ONE if i == j else ZERO for j in range(n)]
                      for i, r in enumerate(self.rows)], 2 * n)
        red, rank = rref(aug)
        if rank < n or any(red.rows[i][i] != ONE for i in range(n)):
            raise DivisionByZero("matrix is singular")
        return Matrix._raw(tuple(r[n:] for r in red.rows), n)

    def __repr__(self):
        return f"Matrix({self.to_strings()})"

    def to_strings(self):
        return [[format_rational(x) for x in r] for r in self.rows]

    def pretty(self) -> str:
        cells = self.to_strings()
        if not cells:
            return "[]"
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)


def rref(m: Matrix) -> tuple[Matrix, int]:
    red = RowReducer(m.ncols)
    for r in m.rows:
        red.add(_sparse(r))
    rows = red.dense_rows()
    rank = len(rows)
    rows = rows + tuple((ZERO,) * m.ncols for _ in range(m.nrows - rank))
    return Matrix._raw(rows, m.ncols), rank


def nullspace(m: Matrix) -> "Subspace":
    red = RowReducer(m.ncols)
    for r in m.rows:
        red.add(_sparse(r))
    return Subspace.span(red.kernel_vectors(), m.ncols)


# ---------------------------------------------------------------------------
# Subspaces and spaces of maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim given by the RREF of a basis (rows)."""

    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        red = RowReducer(ambient_dim)
        for v in vectors:
            if len(v) != ambient_dim:
                raise ShapeError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            red.add(_sparse(vec(v)))
            if red.is_full():
                break
        return cls(ambient_dim, red.dense_rows())

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(unit(ambient_dim, i) for i in range(ambient_dim)))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient_dim: int) -> "Subspace":
        """Span of the standard basis vectors e_i (0-based ``indices``)."""
        return cls.span([unit(ambient_dim, i) for i in indices], ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(r) if x) for r in self.basis]

    def _reducer(self) -> RowReducer:
        red = RowReducer(self.ambient_dim)
        for p, r in zip(self.pivots(), self.basis):
            red.pivot_rows[p] = _sparse(r)
        return red

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise ShapeError("vector length does not match ambient dimension")
        return self._reducer().contains(_sparse(vec(v)))

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        if self.dim > other.dim:
            return False
        red = other._reducer()
        return all(red.contains(_sparse(r)) for r in self.basis)

    __le__ = issubset

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        # solve sum a_i u_i = sum b_j w_j
        n = self.ambient_dim
        cols = list(self.basis) + [tuple(-x for x in w) for w in other.basis]
        if not cols:
            return Subspace.zero(n)
        sys_rows = [tuple(c[i] for c in cols) for i in range(n)]
        kernel = nullspace(Matrix(sys_rows, len(cols)))
        vectors = []
        for coeffs in kernel.basis:
            v = [ZERO] * n
            for a, u in zip(coeffs[: self.dim], self.basis):
                if a:
                    for i, x in enumerate(u):
                        v[i] += a * x
            vectors.append(v)
        return Subspace.span(vectors, n)

    def image(self, m: Matrix) -> "Subspace":
        return Subspace.span([m.apply(b) for b in self.basis], m.nrows)

    def is_invariant(self, m: Matrix) -> bool:
        return self.image(m).issubset(self)

    def complement_indices(self) -> list[int]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        piv = set(self.pivots())
        return [i for i in range(self.ambient_dim) if i not in piv]

    def to_strings(self):
        return [[format_rational(x) for x in r] for r in self.basis]

    def __str__(self):
        rows = "; ".join("(" + ", ".join(r) + ")" for r in self.to_strings())
        return f"<dim {self.dim}: {rows}>" if rows else "<dim 0>"


class MapSpace:
    """Linear space of n x n matrices with a linearly independent basis."""

    __slots__ = ("ambient_dim", "basis", "_flat")

    def __init__(self, ambient_dim: int, basis: Iterable[Matrix] = (), check: bool = True):
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)
        for b in self.basis:
            if b.shape != (ambient_dim, ambient_dim):
                raise ShapeError(f"basis matrix of shape {b.shape} in End(Q^{ambient_dim})")
        self._flat = None
        if check and self.flattened().dim != len(self.basis):
            raise ValueError("basis matrices are linearly dependent")

    @classmethod
    def from_subspace(cls, flat: Subspace, n: int) -> "MapSpace":
        space = cls(n, [Matrix.from_flat(r, n) for r in flat.basis], check=False)
        space._flat = flat
        return space

    @classmethod
    def spanned_by(cls, matrices: Iterable[Matrix], n: int) -> "MapSpace":
        return cls.from_subspace(Subspace.span([m.flatten() for m in matrices], n * n), n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def flattened(self) -> Subspace:
        if self._flat is None:
            self._flat = Subspace.span([b.flatten() for b in self.basis], self.ambient_dim ** 2)
        return self._flat

    def contains(self, m: Matrix) -> bool:
        return self.flattened().contains(m.flatten())

    def issubset(self, other: "MapSpace") -> bool:
        return self.flattened().issubset(other.flattened())

    def intersection(self, other: "MapSpace") -> "MapSpace":
        return MapSpace.from_subspace(self.flattened().intersection(other.flattened()), self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, MapSpace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.flattened() == other.flattened()

    __hash__ = None

    def __repr__(self):
        return f"MapSpace(ambient_dim={self.ambient_dim}, dim={self.dim})"


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------

def char_poly(m: Matrix) -> UniPoly:
    """det(tI - m) by the Faddeev-LeVerrier recurrence."""
    if not m.is_square():
        raise ShapeError("characteristic polynomial of a non-square matrix")
    n = m.nrows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    aux = Matrix.zeros(n)
    eye = Matrix.identity(n)
    for k in range(1, n + 1):
        aux = m @ aux + eye * coeffs[n - k + 1]
        coeffs[n - k] = -(m @ aux).trace() / k
    return UniPoly(coeffs)


def generalized_eigenspace(m: Matrix, lam) -> Subspace:
    if not m.is_square():
        raise ShapeError("generalized eigenspace of a non-square matrix")
    shifted = m - Matrix.identity(m.nrows) * as_rational(lam)
    return nullspace(shifted ** m.nrows)


@dataclass(frozen=True)
class WeightDecomposition:
    """Generalized eigenspaces of an operator, eigenvalues ascending."""

    pairs: tuple  # tuple[(Fraction, Subspace), ...]

    @property
    def eigenvalues(self):
        return [lam for lam, _ in self.pairs]

    def space(self, lam) -> Subspace:
        lam = as_rational(lam)
        for mu, space in self.pairs:
            if mu == lam:
                return space
        raise KeyError(lam)

    def is_direct_sum(self, ambient_dim: int) -> bool:
        stacked = Subspace.span([r for _, s in self.pairs for r in s.basis], ambient_dim)
        return stacked.dim == ambient_dim == sum(s.dim for _, s in self.pairs)


def decompose(m: Matrix) -> WeightDecomposition:
    if not m.is_square():
        raise ShapeError("decomposition of a non-square matrix")
    cp = char_poly(m)
    roots = rational_roots(cp)
    rest = split_off_roots(cp, roots)
    if rest.degree > 0:
        raise NonSplitSpectrum(
            f"characteristic polynomial {cp} does not split over Q; unfactored part {rest}",
            remainder=rest,
        )
    pairs = tuple((lam, generalized_eigenspace(m, lam)) for lam, _ in roots)
    if sum(s.dim for _, s in pairs) != m.nrows:
        raise NonSplitSpectrum("generalized eigenspaces do not fill the space", remainder=rest)
    return WeightDecomposition(pairs)


# ---------------------------------------------------------------------------
# Matrices over Q[x_1..x_b]
# ---------------------------------------------------------------------------

def generic_element(space: MapSpace):
    """sum_i x_i B_i as a square tuple-of-tuples of MultiPoly."""
    return generic_combination(space.basis, space.ambient_dim)


def generic_combination(matrices: Sequence[Matrix], n: int):
    """sum_i x_i M_i with one fresh variable per matrix (independence not required)."""
    names = tuple(f"x{i + 1}" for i in range(len(matrices)))
    entries = [[MultiPoly.zero(names) for _ in range(n)] for _ in range(n)]
    for k, b in enumerate(matrices):
        exps = tuple(1 if i == k else 0 for i in range(len(names)))
        for i in range(n):
            for j in range(n):
                c = b.rows[i][j]
                if c:
                    entries[i][j] = entries[i][j] + MultiPoly._raw(names, {exps: c})
    return tuple(tuple(r) for r in entries)


def poly_matrix_eval(pm, point) -> Matrix:
    return Matrix([[p.eval(point) for p in r] for r in pm])


def _check_square(pm):
    n = len(pm)
    if any(len(r) != n for r in pm):
        raise ShapeError("matrix over the polynomial ring is not square")
    return n


def _variables_of(pm):
    for r in pm:
        for p in r:
            return p.variables
    return ()


def _diagonal_blocks(pm) -> list[list[int]]:
    """Strongly connected components of the sparsity graph.

    After a simultaneous row/column permutation the matrix is block
    triangular with these components as diagonal blocks.
    """
    n = len(pm)
    reach = [[i == j or not pm[i][j].is_zero() for j in range(n)] for i in range(n)]
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            if reach[i][k]:
                ri = reach[i]
                for j in range(n):
                    if rk[j]:
                        ri[j] = True
    seen = set()
    blocks = []
    for i in range(n):
        if i in seen:
            continue
        block = [j for j in range(n) if reach[i][j] and reach[j][i]]
        seen.update(block)
        blocks.append(block)
    return blocks


def _det_cofactor(pm, variables):
    n = len(pm)
    memo = {}

    def minor(row, cols):
        # determinant of rows row..n-1 with the columns in bitmask ``cols``
        if row == n:
            return MultiPoly.constant(1, variables)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = MultiPoly.zero(variables)
        sign = 1
        for j in range(n):
            if cols >> j & 1:
                entry = pm[row][j]
                if not entry.is_zero():
                    sub = minor(row + 1, cols & ~(1 << j))
                    if not sub.is_zero():
                        term = entry * sub
                        total = total + term if sign > 0 else total - term
                sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


def _det_bareiss(pm, variables):
    a = [list(r) for r in pm]
    n = len(a)
    sign = 1
    prev = MultiPoly.constant(1, variables)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(variables)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev) if not num.is_zero() else num
            a[i][k] = MultiPoly.zero(variables)
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


CofactorLimit = 6


def symbolic_det(pm) -> MultiPoly:
    n = _check_square(pm)
    variables = _variables_of(pm)
    if n == 0:
        return MultiPoly.constant(1, variables)
    result = MultiPoly.constant(1, variables)
    for block in _diagonal_blocks(pm):
        sub = tuple(tuple(pm[i][j] for j in block) for i in block)
        if len(block) <= CofactorLimit:
            d = _det_cofactor(sub, variables)
        else:
            d = _det_bareiss(sub, variables)
        if d.is_zero():
            return d
        result = result * d
    return result


def _berkowitz(pm, variables) -> list:
    """Coefficients of det(tI - pm), highest degree first."""
    n = len(pm)
    one = MultiPoly.constant(1, variables)
    if n == 0:
        return [one]
    if n == 1:
        return [one, -pm[0][0]]
    a = pm[0][0]
    row = pm[0][1:]
    col = [pm[i][0] for i in range(1, n)]
    sub = [list(r[1:]) for r in pm[1:]]
    diags = []
    v = col
    for _ in range(n - 1):
        if all(x.is_zero() for x in v):
            diags.append(MultiPoly.zero(variables))
            v_next = v
        else:
            s = MultiPoly.zero(variables)
            for r, x in zip(row, v):
                if not r.is_zero() and not x.is_zero():
                    s = s + r * x
            diags.append(-s)
            v_next = [
                sum((sub[i][j] * v[j] for j in range(n - 1) if not v[j].is_zero() and not sub[i][j].is_zero()),
                    MultiPoly.zero(variables))
                for i in range(n - 1)
            ]
        v = v_next
    diags = [one, -a] + diags
    lower = _berkowitz(sub, variables)
    # (n+1) x n lower-triangular Toeplitz times ``lower``
    out = []
    for i in range(n + 1):
        s = MultiPoly.zero(variables)
        for j in range(n):
            if j > i:
                break
            d = diags[i - j]
            if not d.is_zero() and not lower[j].is_zero():
                s = s + d * lower[j]
        out.append(s)
    return out


def symbolic_char_poly(pm) -> list:
    """Non-leading coefficients of det(tI - pm): entry k multiplies t^k."""
    n = _check_square(pm)
    variables = _variables_of(pm)
    # product of the block characteristic polynomials, lowest degree first
    total = [MultiPoly.constant(1, variables)]
    for block in _diagonal_blocks(pm):
        sub = tuple(tuple(pm[i][j] for j in block) for i in block)
        cp = list(reversed(_berkowitz(sub, variables)))
        prod = [MultiPoly.zero(variables) for _ in range(len(total) + len(cp) - 1)]
        for i, x in enumerate(total):
            if x.is_zero():
                continue
            for j, y in enumerate(cp):
                if not y.is_zero():
                    prod[i + j] = prod[i + j] + x * y
        total = prod
    return total[:n]
