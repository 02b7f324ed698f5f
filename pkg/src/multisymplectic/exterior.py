"""Exterior algebra over Q^n with exact coefficients.

Multivectors and alternating forms share one sparse representation: a map
from strictly increasing 1-based index tuples to :class:`~fractions.Fraction`.
``dx^I`` evaluates on vectors by the determinant convention, so
``dx^{123}(e1, e2, e3) = 1``.

Contraction fills the *leading* slots of a form::

    (v1 ^ ... ^ vl) _| w  =  w(v1, ..., vl, -, ..., -)

which gives the iterated law ``contract(x ^ y, w) == contract(y, contract(x, w))``
with no sign.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import Scalar, Subspace, Vector, as_vector, format_rational, parse_rational

IndexTuple = tuple[int, ...]

__all__ = [
    "AlternatingForm",
    "IndexTuple",
    "Multivector",
    "basis_tuples",
    "contract",
    "decomposable",
    "eval_form",
    "exterior_power",
    "factor2",
    "form_from_records",
    "is_decomposable",
    "is_decomposable2",
    "multivector_from_records",
    "skew_matrix",
    "to_records",
    "wedge",
]


@lru_cache(maxsize=None)
def basis_tuples(n: int, grade: int) -> tuple[IndexTuple, ...]:
    """Lexicographically ordered basis index tuples of the grade-``grade`` part."""
    return tuple(combinations(range(1, n + 1), grade))


@lru_cache(maxsize=None)
def _positions(n: int, grade: int) -> dict[IndexTuple, int]:
    return {t: i for i, t in enumerate(basis_tuples(n, grade))}


def _merge_sign(a: IndexTuple, b: IndexTuple) -> int:
    """Sign of the shuffle sorting ``a + b``; 0 if they share an index."""
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        if j < len(b) and b[j] == x:
            return 0
        inversions += j
    return -1 if inversions % 2 else 1


class _Graded:
    __slots__ = ("n", "grade", "_coords", "_hash")

    def __init__(self, n: int, grade: int, coords: Mapping[Iterable[int], Scalar] | None = None):
        if n < 0 or grade < 0:
            raise ValueError("dimension and grade must be non-negative")
        clean: dict[IndexTuple, Fraction] = {}
        for idx, c in (coords or {}).items():
            t = tuple(int(i) for i in idx)
            if len(t) != grade:
                raise ValueError(f"index tuple {t} does not have length {grade}")
            if any(a >= b for a, b in zip(t, t[1:])) or (t and (t[0] < 1 or t[-1] > n)):
                raise ValueError(f"index tuple {t} must be strictly increasing within 1..{n}")
            c = Fraction(c)
            if c:
                clean[t] = clean.get(t, Fraction(0)) + c
        if clean and grade > n:
            raise ValueError(f"grade {grade} exceeds dimension {n}")
        self._init(n, grade, {t: c for t, c in clean.items() if c})

    def _init(self, n, grade, coords):
        self.n = n
        self.grade = grade
        self._coords = coords
        self._hash = None

    @classmethod
    def _raw(cls, n: int, grade: int, coords: dict[IndexTuple, Fraction]):
        obj = cls.__new__(cls)
        obj._init(n, grade, {t: c for t, c in coords.items() if c})
        return obj

    @classmethod
    def zero(cls, n: int, grade: int):
        return cls._raw(n, grade, {})

    @classmethod
    def from_dense(cls, n: int, grade: int, values: Sequence[Scalar]):
        tuples = basis_tuples(n, grade)
        if len(values) != len(tuples):
            raise ValueError(f"expected {len(tuples)} coordinates")
        return cls._raw(n, grade, {t: Fraction(v) for t, v in zip(tuples, values) if v})

    def dense(self) -> Vector:
        """Coordinates in the order of :func:`basis_tuples`."""
        pos = _positions(self.n, self.grade)
        out = [Fraction(0)] * len(pos)
        for t, c in self._coords.items():
            out[pos[t]] = c
        return tuple(out)

    def coeff(self, indices: Iterable[int]) -> Fraction:
        return self._coords.get(tuple(indices), Fraction(0))

    def items(self):
        return sorted(self._coords.items())

    def is_zero(self) -> bool:
        return not self._coords

    def __bool__(self) -> bool:
        return bool(self._coords)

    def _same(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n or other.grade != self.grade:
            raise ValueError("dimension or grade mismatch")

    def __add__(self, other):
        self._same(other)
        out = dict(self._coords)
        for t, c in other._coords.items():
            out[t] = out.get(t, Fraction(0)) + c
        return type(self)._raw(self.n, self.grade, out)

    def __neg__(self):
        return type(self)._raw(self.n, self.grade, {t: -c for t, c in self._coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar: Scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        s = Fraction(scalar)
        return type(self)._raw(self.n, self.grade, {t: s * c for t, c in self._coords.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return (self.n, self.grade, self._coords) == (other.n, other.grade, other._coords)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.n, self.grade,
                               frozenset(self._coords.items())))
        return self._hash

    _symbol = "e"

    def __repr__(self) -> str:
        if not self._coords:
            return f"{type(self).__name__}(n={self.n}, grade={self.grade}, 0)"
        terms = " + ".join(
            f"{format_rational(c)}*{self._symbol}{''.join(map(str, t)) or '()'}"
            for t, c in self.items()
        )
        return f"{type(self).__name__}(n={self.n}, {terms})"


class Multivector(_Graded):
    """Element of the grade-``grade`` exterior power of Q^n."""

    __slots__ = ()

    @classmethod
    def vector(cls, components: Sequence[Scalar]) -> "Multivector":
        v = as_vector(components)
        return cls._raw(len(v), 1, {(i + 1,): c for i, c in enumerate(v)})

    @classmethod
    def basis(cls, n: int, indices: Iterable[int]) -> "Multivector":
        t = tuple(indices)
        return cls(n, len(t), {t: 1})

    @classmethod
    def scalar(cls, n: int, value: Scalar = 1) -> "Multivector":
        return cls._raw(n, 0, {(): Fraction(value)})

    def to_vector(self) -> Vector:
        if self.grade != 1:
            raise ValueError("only grade-1 multivectors convert to vectors")
        return self.dense()


class AlternatingForm(_Graded):
    """Alternating form of degree ``grade`` on Q^n, in the ``dx^I`` basis."""

    __slots__ = ()
    _symbol = "dx"

    @property
    def degree(self) -> int:
        return self.grade

    @classmethod
    def basis(cls, n: int, indices: Iterable[int]) -> "AlternatingForm":
        t = tuple(indices)
        return cls(n, len(t), {t: 1})

    def value(self) -> Fraction:
        """The scalar of a degree-0 form."""
        if self.grade != 0:
            raise ValueError("only degree-0 forms are scalars")
        return self.coeff(())


def wedge(a: _Graded, b: _Graded) -> _Graded:
    """Exterior product; zero (of grade ``a.grade + b.grade``) past the top degree."""
    if type(a) is not type(b):
        raise TypeError("wedge needs two multivectors or two forms")
    if a.n != b.n:
        raise ValueError(f"ambient dimension mismatch: {a.n} != {b.n}")
    out: dict[IndexTuple, Fraction] = {}
    grade = a.grade + b.grade
    if grade <= a.n:
        for ta, ca in a._coords.items():
            for tb, cb in b._coords.items():
                s = _merge_sign(ta, tb)
                if s:
                    t = tuple(sorted(ta + tb))
                    out[t] = out.get(t, Fraction(0)) + s * ca * cb
    return type(a)._raw(a.n, grade, out)


def decomposable(vectors: Sequence[Sequence[Scalar]], n: int | None = None) -> Multivector:
    """``v1 ^ v2 ^ ... ^ vr``; the empty product is the scalar 1."""
    if not vectors:
        if n is None:
            raise ValueError("ambient dimension needed for an empty product")
        return Multivector.scalar(n)
    vs = [v if isinstance(v, Multivector) else Multivector.vector(v) for v in vectors]
    if n is not None and any(v.n != n for v in vs):
        raise ValueError("vectors do not live in the stated ambient space")
    out = vs[0]
    for v in vs[1:]:
        out = wedge(out, v)
    return out


def _complement(inner: IndexTuple, outer: IndexTuple) -> IndexTuple | None:
    s = set(inner)
    if not s.issubset(outer):
        return None
    return tuple(i for i in outer if i not in s)


def contract(x: Multivector, w: AlternatingForm) -> AlternatingForm:
    """Interior product ``x _| w`` inserting ``x`` into the leading slots of ``w``."""
    if not isinstance(x, Multivector) or not isinstance(w, AlternatingForm):
        raise TypeError("contract(x, w) needs a Multivector and an AlternatingForm")
    if x.n != w.n:
        raise ValueError(f"ambient dimension mismatch: {x.n} != {w.n}")
    if x.grade > w.grade:
        raise ValueError(f"grade {x.grade} exceeds form degree {w.grade}")
    out: dict[IndexTuple, Fraction] = {}
    for tw, cw in w._coords.items():
        for tx, cx in x._coords.items():
            rest = _complement(tx, tw)
            if rest is None:
                continue
            # dx^J(e_I, e_R) is the sign of the shuffle (I, R) -> J
            s = _merge_sign(tx, rest)
            out[rest] = out.get(rest, Fraction(0)) + s * cx * cw
    return AlternatingForm._raw(w.n, w.grade - x.grade, out)


def eval_form(w: AlternatingForm, vectors: Sequence[Sequence[Scalar]]) -> Fraction:
    """``w(v1, ..., vd)`` as an exact rational."""
    if len(vectors) != w.grade:
        raise ValueError(f"form of degree {w.grade} needs {w.grade} vectors, got {len(vectors)}")
    return contract(decomposable(vectors, w.n), w).value()


def is_decomposable2(x: Multivector) -> bool:
    """A 2-vector is decomposable iff ``x ^ x = 0``."""
    if x.grade != 2:
        raise ValueError("is_decomposable2 needs a 2-vector")
    return wedge(x, x).is_zero()


def is_decomposable(x: Multivector) -> bool:
    """Exact decomposability for grades 0, 1, 2, n-1 and n.

    Other grades have no criterion implemented and raise ``NotImplementedError``.
    """
    if x.grade in (0, 1) or x.grade >= x.n - 1:
        return True
    if x.grade == 2:
        return is_decomposable2(x)
    raise NotImplementedError(f"no exact decomposability test for grade {x.grade} in dimension {x.n}")


def skew_matrix(x: Multivector) -> list[list[Fraction]]:
    """The skew matrix ``A`` with ``A[i][j]`` the ``e_{i+1} ^ e_{j+1}`` coefficient."""
    if x.grade != 2:
        raise ValueError("skew_matrix needs a 2-vector")
    a = [[Fraction(0)] * x.n for _ in range(x.n)]
    for (i, j), c in x._coords.items():
        a[i - 1][j - 1] = c
        a[j - 1][i - 1] = -c
    return a


def factor2(x: Multivector) -> tuple[Vector, Vector]:
    """Vectors ``(u, v)`` with ``u ^ v == x`` for a nonzero decomposable 2-vector."""
    if x.is_zero() or not is_decomposable2(x):
        raise ValueError("factor2 needs a nonzero decomposable 2-vector")
    a = skew_matrix(x)
    (i, j), c = next(iter(x.items()))
    i, j = i - 1, j - 1
    # for x = u^v the columns A e_i, A e_j span the plane and (A e_i)^(A e_j) = c x
    u = tuple(-a[r][i] / c for r in range(x.n))
    v = tuple(-a[r][j] for r in range(x.n))
    if wedge(Multivector.vector(u), Multivector.vector(v)) != x:
        raise ArithmeticError("factor reconstruction failed")  # unreachable for decomposable x
    return u, v


def exterior_power(w: Subspace, grade: int) -> Subspace:
    """The span of ``w1 ^ ... ^ w_grade`` for ``w_i`` in ``w``, inside Q^C(n, grade)."""
    n = w.ambient_dim
    size = len(basis_tuples(n, grade))
    if grade > w.dim:
        return Subspace.zero(size)
    vecs = [Multivector.vector(b) for b in w.basis]
    gens = [decomposable([vecs[i] for i in combo], n).dense()
            for combo in combinations(range(w.dim), grade)]
    return Subspace.span(gens, size)


def to_records(x: _Graded) -> list[dict]:
    """Serialize as ``[{"indices": [...], "coeff": "p/q"}, ...]``."""
    return [{"indices": list(t), "coeff": format_rational(c)} for t, c in x.items()]


def _from_records(cls, records, n: int, grade: int | None):
    coords: dict[IndexTuple, Fraction] = {}
    for rec in records:
        try:
            t = tuple(int(i) for i in rec["indices"])
            c = parse_rational(rec["coeff"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed record {rec!r}") from exc
        if grade is None:
            grade = len(t)
        key = tuple(sorted(t))
        if len(set(t)) != len(t):
            continue
        # unsorted input indices are accepted with the permutation sign
        sign = 1
        lst = list(t)
        for i in range(len(lst)):
            for j in range(len(lst) - 1 - i):
                if lst[j] > lst[j + 1]:
                    lst[j], lst[j + 1] = lst[j + 1], lst[j]
                    sign = -sign
        coords[key] = coords.get(key, Fraction(0)) + sign * c
    if grade is None:
        raise ValueError("grade cannot be inferred from an empty record list")
    return cls(n, grade, coords)


def form_from_records(records, n: int, degree: int | None = None) -> AlternatingForm:
    return _from_records(AlternatingForm, records, n, degree)


def multivector_from_records(records, n: int, grade: int | None = None) -> Multivector:
    return _from_records(Multivector, records, n, grade)
