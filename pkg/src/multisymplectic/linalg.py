"""Exact rational linear algebra.

Every decision made elsewhere in the package (inclusion of subspaces,
triviality of kernels, definiteness of a quadratic form) reduces to a rank
computation here.  Scalars are :class:`fractions.Fraction`; nothing is ever
rounded.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]
Vector = tuple[Fraction, ...]

__all__ = [
    "Matrix",
    "Subspace",
    "Vector",
    "as_vector",
    "dot",
    "format_rational",
    "inertia",
    "intersect",
    "null_space",
    "orthogonal_complement",
    "parse_rational",
    "random_subspace",
    "rank",
    "rref",
    "subspace_sum",
    "symmetric_diagonalize",
]


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or an integer string into an exact rational.

    Floats are rejected outright; they would smuggle rounding into exact code.
    """
    if isinstance(text, bool) or isinstance(text, float):
        raise TypeError(f"refusing non-exact scalar {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {type(text).__name__} as a rational")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def as_vector(values: Iterable[Scalar]) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix; ``entries`` is a tuple of row tuples."""

    nrows: int
    ncols: int
    entries: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise ValueError("entry count does not match rows x cols")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Scalar]], ncols: int | None = None) -> "Matrix":
        rows = tuple(as_vector(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence[Scalar]) -> "Matrix":
        n = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n
        )

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, tuple(zip(*self.entries)) if self.nrows else
                      tuple(() for _ in range(self.ncols)))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = other.T.entries
            return Matrix(self.nrows, other.ncols,
                          tuple(tuple(dot(r, c) for c in cols) for r in self.entries))
        v = as_vector(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(dot(r, v) for r in self.entries)

    def __mul__(self, scalar: Scalar) -> "Matrix":
        s = Fraction(scalar)
        return Matrix(self.nrows, self.ncols, tuple(tuple(s * x for x in r) for r in self.entries))

    __rmul__ = __mul__

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.nrows) for j in range(i)
        )


MatrixLike = Union[Matrix, Sequence[Sequence[Scalar]]]


def _rows_of(m: MatrixLike, ncols: int | None = None) -> tuple[list[list[Fraction]], int]:
    if isinstance(m, Matrix):
        return [list(r) for r in m.entries], m.ncols
    rows = [[Fraction(x) for x in r] for r in m]
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for a matrix without rows")
        ncols = len(rows[0])
    return rows, ncols


def _rref_in_place(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """Gauss-Jordan elimination; returns pivot columns and drops zero rows."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p if x else x for x in rows[r]]
        prow = rows[r]
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    del rows[r:]
    return pivots


def rref(m: MatrixLike, ncols: int | None = None) -> Matrix:
    """Reduced row echelon form, zero rows kept at the bottom."""
    rows, ncols = _rows_of(m, ncols)
    nrows = len(rows)
    _rref_in_place(rows, ncols)
    zero = [Fraction(0)] * ncols
    rows += [list(zero) for _ in range(nrows - len(rows))]
    return Matrix.from_rows(rows, ncols)


def rank(m: MatrixLike, ncols: int | None = None) -> int:
    rows, ncols = _rows_of(m, ncols)
    return len(_rref_in_place(rows, ncols))


def _null_basis(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    pivots = _rref_in_place(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def null_space(m: MatrixLike, ncols: int | None = None) -> "Subspace":
    """The subspace ``{x : m x = 0}`` of Q^ncols in canonical form."""
    rows, ncols = _rows_of(m, ncols)
    return Subspace.span(_null_basis(rows, ncols), ncols)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n held as the nonzero rows of an RREF basis.

    The representation is canonical, so ``==`` is subspace equality.
    Build instances with :meth:`span`, :meth:`zero` or :meth:`full`.
    """

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Iterable[Scalar]], ambient_dim: int) -> "Subspace":
        rows = [[Fraction(x) for x in v] for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError(f"vectors must have length {ambient_dim}")
        _rref_in_place(rows, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in rows))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.span(Matrix.identity(n).entries, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} != {other.ambient_dim}"
            )

    def residual(self, v: Sequence[Scalar]) -> list[Fraction]:
        """``v`` minus its component along the pivot coordinates of the basis."""
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector must have length {self.ambient_dim}")
        r = [Fraction(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            f = r[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        r[j] -= f * row[j]
        return r

    def contains(self, v: Sequence[Scalar]) -> bool:
        return not any(self.residual(v))

    def coordinates(self, v: Sequence[Scalar]) -> Vector:
        """Coefficients of ``v`` in :attr:`basis`; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(Fraction(v[p]) for p in self.pivots)

    def combination(self, coeffs: Sequence[Scalar]) -> Vector:
        out = [Fraction(0)] * self.ambient_dim
        for c, row in zip(coeffs, self.basis):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] += c * x
        return tuple(out)

    def includes(self, other: "Subspace") -> bool:
        self._check(other)
        return other.dim <= self.dim and all(self.contains(b) for b in other.basis)

    def equals(self, other: "Subspace") -> bool:
        self._check(other)
        return self == other

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        constraints = self.annihilator().basis + other.annihilator().basis
        return null_space([list(c) for c in constraints], self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """Coefficient vectors ``a`` with ``a . b = 0`` for every basis row ``b``."""
        return null_space([list(b) for b in self.basis], self.ambient_dim)

    def complement_basis(self) -> tuple[Vector, ...]:
        """Standard basis vectors on the non-pivot columns (a complement)."""
        piv = set(self.pivots)
        return tuple(
            tuple(Fraction(int(i == j)) for i in range(self.ambient_dim))
            for j in range(self.ambient_dim) if j not in piv
        )

    def __repr__(self) -> str:
        rows = ", ".join("[" + " ".join(format_rational(x) for x in r) + "]" for r in self.basis)
        return f"Subspace(n={self.ambient_dim}, dim={self.dim}, basis=[{rows}])"


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a & b


def orthogonal_complement(w: Subspace, metric: Matrix) -> Subspace:
    """``{x : g(b, x) = 0 for all b in w}`` for a bilinear form ``g``."""
    if metric.nrows != w.ambient_dim or metric.ncols != w.ambient_dim:
        raise ValueError("metric shape does not match ambient dimension")
    rows = [list(metric.T @ b) for b in w.basis]
    return null_space(rows, w.ambient_dim)


def symmetric_diagonalize(s: Matrix) -> tuple[Matrix, Vector]:
    """Congruence diagonalization ``Q^T s Q = diag(d)`` over Q.

    Returns ``(Q, d)``; the columns of ``Q`` form the new basis.
    """
    if not s.is_symmetric():
        raise ValueError("matrix is not symmetric")
    n = s.nrows
    S = [list(r) for r in s.entries]
    Q = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]  # rows of Q^T

    def swap(i, j):
        S[i], S[j] = S[j], S[i]
        for row in S:
            row[i], row[j] = row[j], row[i]
        Q[i], Q[j] = Q[j], Q[i]

    def add(i, j, f):
        # basis vector i += f * basis vector j
        for c in range(n):
            S[i][c] += f * S[j][c]
        for r in range(n):
            S[r][i] += f * S[r][j]
        Q[i] = [a + f * b for a, b in zip(Q[i], Q[j])]

    d: list[Fraction] = []
    for t in range(n):
        piv = next((i for i in range(t, n) if S[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(t, n) for j in range(i + 1, n) if S[i][j]), None)
            if pair is None:
                d.extend(Fraction(0) for _ in range(t, n))
                break
            add(pair[0], pair[1], Fraction(1))
            piv = pair[0]
        if piv != t:
            swap(piv, t)
        p = S[t][t]
        for r in range(t + 1, n):
            if S[r][t]:
                add(r, t, -S[r][t] / p)
        d.append(p)
    return Matrix.from_rows(Q, n).T, tuple(d)


def inertia(s: Matrix) -> tuple[int, int, int]:
    """Sylvester inertia ``(n_plus, n_minus, n_zero)`` of a symmetric matrix."""
    _, d = symmetric_diagonalize(s)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0))


def _rng(seed: int | str | random.Random | None) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_vector(n: int, coeff_bound: int, rng: random.Random) -> Vector:
    return tuple(Fraction(rng.randint(-coeff_bound, coeff_bound)) for _ in range(n))


def random_subspace(ambient_dim: int, dim: int, coeff_bound: int = 9,
                    seed: int | str | random.Random | None = None) -> Subspace:
    """Span of ``dim`` random integer vectors, re-drawn until independent."""
    if not 0 <= dim <= ambient_dim:
        raise ValueError(f"cannot draw a {dim}-dimensional subspace of Q^{ambient_dim}")
    rng = _rng(seed)
    while True:
        vecs = [random_vector(ambient_dim, coeff_bound, rng) for _ in range(dim)]
        w = Subspace.span(vecs, ambient_dim)
        if w.dim == dim:
            return w
