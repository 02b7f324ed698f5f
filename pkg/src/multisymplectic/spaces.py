"""Multisymplectic vector spaces and their orthogonal complements.

A multisymplectic space of degree ``k + 1`` is Q^n with a (k+1)-form ``omega``
such that ``v _| omega = 0`` only for ``v = 0``.  For a subspace ``W`` this
module computes

* the Type-I complement ``{v : (v ^ w1 ^ ... ^ wl) _| omega = 0, w_i in W}``
  (a linear subspace of V), and
* the Type-II complement ``{X decomposable : (X ^ w) _| omega = 0, w in W}``,
  held as the linear span ``L`` of its defining equations inside the
  grade-l exterior power; the set itself is the decomposable cone in ``L``.

Questions about the decomposable cone are not always decidable by linear
algebra alone, so they return a :class:`Verdict`.  When the space carries a
metric under which ``omega`` (degree 3) defines a cross product obeying
``|u x v|^2 = c (|u|^2 |v|^2 - <u,v>^2)``, those questions become exact.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .exterior import (
    AlternatingForm,
    Multivector,
    basis_tuples,
    contract,
    decomposable,
    exterior_power,
    is_decomposable,
    wedge,
)
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    dot,
    null_space,
    orthogonal_complement,
    random_vector,
)

__all__ = [
    "DegenerateFormError",
    "MultisymplecticSpace",
    "Status",
    "TypeIIComplement",
    "TypeIPredicates",
    "Verdict",
    "extend_to_lagrangian",
    "fully_nondegenerate_on",
    "is_multisymplectic_subspace",
    "is_weakly_nondegenerate",
    "lagrange_constant",
    "r_nondegenerate",
    "restricted_kernel",
    "type_i_complement",
    "type_i_predicates",
    "type_ii_coisotropic",
    "type_ii_complement",
    "type_ii_isotropic",
    "volume_form",
]

DEFAULT_TRIALS = 200


class DegenerateFormError(ValueError):
    """The form fails weak nondegeneracy."""


class Status(enum.Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a semi-decidable question.

    ``REFUTED`` verdicts always carry a checked counterexample in ``witness``.
    """

    status: Status
    witness: Multivector | None = None
    trials: int = 0
    method: str = ""

    @classmethod
    def proven(cls, method: str) -> "Verdict":
        return cls(Status.PROVEN, method=method)

    @classmethod
    def refuted(cls, witness: Multivector, method: str) -> "Verdict":
        return cls(Status.REFUTED, witness=witness, method=method)

    @classmethod
    def unknown(cls, trials: int) -> "Verdict":
        return cls(Status.UNKNOWN, trials=trials, method="random search exhausted")

    @property
    def proven_(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted_(self) -> bool:
        return self.status is Status.REFUTED

    def __str__(self) -> str:
        return self.status.value


def volume_form(n: int, scale: int | Fraction = 1) -> AlternatingForm:
    return AlternatingForm(n, n, {tuple(range(1, n + 1)): scale})


def _contraction_rows(omega: AlternatingForm, prefixes: Sequence[Multivector],
                      suffixes: Sequence[Multivector], grade: int) -> list[list[Fraction]]:
    """Constraint rows for ``X -> (p ^ X ^ s) _| omega`` over grade-``grade`` basis X.

    One row per (p, s, output coordinate); columns are the basis tuples of
    the grade-``grade`` exterior power.
    """
    n = omega.n
    tuples = basis_tuples(n, grade)
    rows: list[list[Fraction]] = []
    for p in prefixes:
        for s in suffixes:
            cols = []
            for t in tuples:
                x = wedge(wedge(p, Multivector.basis(n, t)), s)
                cols.append(contract(x, omega) if x.grade <= omega.grade
                            else AlternatingForm.zero(n, 0))
            out_keys = sorted({k for f in cols for k, _ in f.items()})
            for key in out_keys:
                rows.append([f.coeff(key) for f in cols])
    return rows


def lagrange_constant(omega: AlternatingForm, metric: Matrix) -> Fraction | None:
    """``c > 0`` with ``|(u^v) _| omega|^2 = c * Gram(u, v)`` identically, else None.

    The norm of the 1-form uses the inverse metric.  The identity is checked
    coefficientwise on the symmetrized quartic, so a returned constant is a
    proof that ``(u ^ v) _| omega = 0`` forces ``u ^ v = 0``.
    """
    if omega.degree != 3:
        return None
    n = omega.n
    ginv = _inverse(metric)
    if ginv is None or not metric.is_symmetric():
        return None
    # w[i][j][a] = omega(e_i, e_j, e_a)
    w = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), c in omega.items():
        for (a, b, d), s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                             ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            w[a - 1][b - 1][d - 1] = s * c
    g = metric.entries
    # quartic coefficient of u_i u_p v_j v_q, symmetrized over i<->p and j<->q
    ratio: Fraction | None = None
    for i in range(n):
        for p in range(i, n):
            for j in range(n):
                for q in range(j, n):
                    def t(i_, j_, p_, q_):
                        wa, wb = w[i_][j_], w[p_][q_]
                        return sum((ginv[a][b] * wa[a] * wb[b]
                                    for a in range(n) if wa[a] for b in range(n) if wb[b]),
                                   Fraction(0))

                    lhs = t(i, j, p, q) + t(p, j, i, q) + t(i, q, p, j) + t(p, q, i, j)

                    def gram(i_, j_, p_, q_):
                        return g[i_][p_] * g[j_][q_] - g[i_][j_] * g[p_][q_]

                    rhs = gram(i, j, p, q) + gram(p, j, i, q) + gram(i, q, p, j) + gram(p, q, i, j)
                    if rhs == 0:
                        if lhs != 0:
                            return None
                        continue
                    r = lhs / rhs
                    if ratio is None:
                        ratio = r
                    elif r != ratio:
                        return None
    return ratio if ratio is not None and ratio > 0 else None


def _inverse(m: Matrix) -> list[list[Fraction]] | None:
    n = m.nrows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.entries)]
    from .linalg import _rref_in_place

    piv = _rref_in_place(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(aug) < n:
        return None
    return [row[n:] for row in aug]


def is_weakly_nondegenerate(omega: AlternatingForm) -> bool:
    """True iff ``v _| omega = 0`` forces ``v = 0``."""
    if omega.degree < 1:
        return omega.n == 0
    scalar = [Multivector.scalar(omega.n)]
    return null_space(_contraction_rows(omega, scalar, scalar, 1), omega.n).is_zero()


@dataclass(frozen=True)
class MultisymplecticSpace:
    """``(Q^n, omega)`` with ``omega`` weakly nondegenerate of degree >= 2.

    ``metric`` is optional; when supplied and certified by
    :func:`lagrange_constant` it unlocks exact decisions on the decomposable
    cone for degree-3 forms.
    """

    omega: AlternatingForm
    metric: Matrix | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.omega.degree < 2:
            raise ValueError("a multisymplectic form has degree at least 2")
        if not is_weakly_nondegenerate(self.omega):
            raise DegenerateFormError("form has a nonzero vector in its contraction kernel")
        if self.metric is not None and (self.metric.nrows, self.metric.ncols) != (self.n, self.n):
            raise ValueError("metric shape does not match the ambient dimension")

    @property
    def n(self) -> int:
        return self.omega.n

    @property
    def degree(self) -> int:
        return self.omega.degree

    @property
    def k(self) -> int:
        return self.omega.degree - 1

    @classmethod
    def volume(cls, n: int) -> "MultisymplecticSpace":
        return cls(volume_form(n))

    @cached_property
    def cross_certificate(self) -> Fraction | None:
        return None if self.metric is None else lagrange_constant(self.omega, self.metric)

    def full(self) -> Subspace:
        return Subspace.full(self.n)

    def cross(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        """``g^{-1}((u ^ v) _| omega)``; needs a metric and a degree-3 form."""
        if self.metric is None or self.degree != 3:
            raise ValueError("cross product needs a metric and a 3-form")
        alpha = contract(decomposable([u, v], self.n), self.omega).dense()
        return tuple(self._metric_inverse @ alpha)

    @cached_property
    def _metric_inverse(self) -> Matrix:
        inv = _inverse(self.metric)
        if inv is None:
            raise ValueError("metric is singular")
        return Matrix.from_rows(inv, self.n)

    def _check_subspace(self, w: Subspace) -> None:
        if w.ambient_dim != self.n:
            raise ValueError(f"subspace lives in Q^{w.ambient_dim}, space is Q^{self.n}")


@dataclass(frozen=True)
class TypeIIComplement:
    """Linear span of the Type-II complement of grade ``grade``.

    Members of the Type-II complement are exactly the decomposable elements
    of :attr:`span`.
    """

    grade: int
    span: Subspace
    n: int

    def contains_linear(self, x: Multivector) -> bool:
        return x.grade == self.grade and self.span.contains(x.dense())

    def contains(self, x: Multivector) -> bool:
        """Membership in the Type-II complement (decomposable and in the span)."""
        return self.contains_linear(x) and is_decomposable(x)

    def basis(self) -> list[Multivector]:
        return [Multivector.from_dense(self.n, self.grade, b) for b in self.span.basis]


@dataclass(frozen=True)
class TypeIPredicates:
    isotropic: bool
    coisotropic: bool
    lagrangian: bool


def _vectors(w: Subspace) -> list[Multivector]:
    return [Multivector.vector(b) for b in w.basis]


def _check_l(l: int, lo: int, hi: int, what: str) -> None:
    if not lo <= l <= hi:
        raise ValueError(f"{what} l={l} outside {lo}..{hi}")


def type_i_complement(space: MultisymplecticSpace, w: Subspace, l: int) -> Subspace:
    """Vectors ``v`` with ``(v ^ w1 ^ ... ^ wl) _| omega = 0`` for all ``w_i`` in ``w``."""
    space._check_subspace(w)
    _check_l(l, 1, space.k, "Type-I complement")
    if l > w.dim:
        return space.full()
    vecs = _vectors(w)
    suffixes = [decomposable([vecs[i] for i in c], space.n) for c in combinations(range(w.dim), l)]
    rows = _contraction_rows(space.omega, [Multivector.scalar(space.n)], suffixes, 1)
    return null_space(rows, space.n)


def type_ii_complement(space: MultisymplecticSpace, w: Subspace, l: int) -> TypeIIComplement:
    """Span of the grade-``l`` Type-II complement of ``w``."""
    space._check_subspace(w)
    _check_l(l, 1, space.n, "Type-II complement")
    size = len(basis_tuples(space.n, l))
    if l >= space.k + 1 or w.is_zero():
        return TypeIIComplement(l, Subspace.full(size), space.n)
    rows = _contraction_rows(space.omega, [Multivector.scalar(space.n)], _vectors(w), l)
    return TypeIIComplement(l, null_space(rows, size), space.n)


def type_i_predicates(space: MultisymplecticSpace, w: Subspace, l: int) -> TypeIPredicates:
    comp = type_i_complement(space, w, l)
    iso = comp.includes(w)
    co = w.includes(comp)
    return TypeIPredicates(iso, co, iso and co)


def type_ii_isotropic(space: MultisymplecticSpace, w: Subspace, l: int) -> bool:
    """Decomposables of ``w`` span its l-th exterior power, so this is a linear inclusion."""
    return type_ii_complement(space, w, l).span.includes(exterior_power(w, l))


def restricted_kernel(space: MultisymplecticSpace, w: Subspace) -> Subspace:
    """``w`` intersected with its Type-I k-complement: the kernel of omega restricted to w."""
    return w & type_i_complement(space, w, space.k)


def is_multisymplectic_subspace(space: MultisymplecticSpace, w: Subspace) -> bool:
    return restricted_kernel(space, w).is_zero()


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _solve_last_factor(omega: AlternatingForm, head: Multivector,
                       tails: Sequence[Multivector], domain: Subspace | None) -> Subspace:
    """``{v (in domain) : (head ^ v ^ t) _| omega = 0 for every t in tails}``."""
    n = omega.n
    rows = _contraction_rows(omega, [head], tails, 1)
    sol = null_space(rows, n) if rows else Subspace.full(n)
    return sol if domain is None else sol & domain


def _sliced_search(omega: AlternatingForm, grade: int, tails: Sequence[Multivector],
                   trials: int, rng: random.Random, draw, accept) -> Multivector | None:
    """Random first factors, exact last factor.

    ``draw()`` returns ``(head_vectors, domain)``; the last factor is solved
    for exactly inside ``domain`` so a hit is never a rounding artefact.
    """
    n = omega.n
    for _ in range(trials):
        heads, domain = draw()
        head = decomposable(heads, n)
        if head.is_zero():
            continue
        sol = _solve_last_factor(omega, head, tails, domain)
        for b in sol.basis:
            x = wedge(head, Multivector.vector(b))
            if not x.is_zero() and accept(x):
                return x
    return None


def r_nondegenerate(omega: AlternatingForm, r: int, trials: int = DEFAULT_TRIALS,
                    seed=0, metric: Matrix | None = None, coeff_bound: int = 9) -> Verdict:
    """Does ``X _| omega = 0`` force ``X = 0`` for decomposable grade-r ``X``?"""
    n, k = omega.n, omega.degree - 1
    _check_l(r, 1, max(k, 1), "nondegeneracy level")
    size = len(basis_tuples(n, r))
    scalar = [Multivector.scalar(n)]
    kernel = null_space(_contraction_rows(omega, scalar, scalar, r), size)
    if kernel.is_zero():
        return Verdict.proven("contraction map is injective")
    if omega.degree == n:
        # a volume form annihilates only X = 0; kernel is nonzero only for omega = 0
        x = decomposable([[int(i == j) for i in range(n)] for j in range(r)], n)
        return Verdict.refuted(x, "zero top-degree form")
    if r == 1 or r >= n - 1 or (r == 2 and kernel.dim == 1):
        for b in kernel.basis:
            x = Multivector.from_dense(n, r, b)
            if is_decomposable(x):
                return Verdict.refuted(x, "decomposable kernel element")
        if r == 1 or r >= n - 1:
            return Verdict.proven("no decomposable kernel element")  # unreachable: all decomposable
        return Verdict.proven("one-dimensional kernel is not decomposable")
    if r == 2 and metric is not None and lagrange_constant(omega, metric):
        return Verdict.proven("cross-product norm identity")
    rng = _rng(seed)

    def draw():
        return [random_vector(n, coeff_bound, rng) for _ in range(r - 1)], None

    def accept(x):
        return contract(x, omega).is_zero()

    x = _sliced_search(omega, r, [Multivector.scalar(n)], trials, rng, draw, accept)
    return Verdict.refuted(x, "random search") if x is not None else Verdict.unknown(trials)


def _outside(w: Subspace, candidates) -> Vector | None:
    return next((tuple(c) for c in candidates if not w.contains(c)), None)


def type_ii_coisotropic(space: MultisymplecticSpace, w: Subspace, l: int,
                        trials: int = DEFAULT_TRIALS, seed=0, coeff_bound: int = 9) -> Verdict:
    """Is every decomposable of the Type-II complement in the l-th power of ``w``?"""
    comp = type_ii_complement(space, w, l)
    n = space.n
    power = exterior_power(w, l)
    if power.includes(comp.span):
        return Verdict.proven("complement span inside the exterior power")
    if l == 1 or l >= n - 1:
        # every element of the span is decomposable
        b = next(b for b in comp.span.basis if not power.contains(b))
        return Verdict.refuted(Multivector.from_dense(n, l, b), "every element decomposable")
    if comp.span.is_full():
        # any plane through a vector outside w will do
        c = _outside(w, Subspace.full(n).basis)
        others = [b for b in Subspace.full(n).basis if b != c][: l - 1]
        return Verdict.refuted(decomposable([c, *others], n), "complement is everything")
    if l == 2 and space.cross_certificate:
        return _coisotropic_by_cross(space, w, comp, power)

    rng = _rng(seed)
    tails = _vectors(w)

    def draw():
        while True:
            u = random_vector(n, coeff_bound, rng)
            if not w.contains(u):
                break
        return [u] + [random_vector(n, coeff_bound, rng) for _ in range(l - 2)], None

    def accept(x):
        return comp.contains_linear(x) and not power.contains(x.dense())

    x = _sliced_search(space.omega, l, tails, trials, rng, draw, accept)
    return Verdict.refuted(x, "random search") if x is not None else Verdict.unknown(trials)


def _coisotropic_by_cross(space, w, comp, power) -> Verdict:
    # decomposables u^v of the complement have u x v in the metric complement of w;
    # conversely u ^ (u x z) lies in it for any z there and any u orthogonal to z
    perp = orthogonal_complement(w, space.metric)
    n = space.n
    for z in perp.basis:
        zperp = orthogonal_complement(Subspace.span([z], n), space.metric)
        u = _outside(w, zperp.basis)
        if u is None:
            continue
        x = decomposable([u, space.cross(u, z)], n)
        if not x.is_zero() and comp.contains_linear(x) and not power.contains(x.dense()):
            return Verdict.refuted(x, "u ^ (u x z) construction")
    if perp.dim == 1:
        # u x v = t z with t != 0 forces u, v orthogonal to z, i.e. inside w
        return Verdict.proven("hyperplane: cross products pin both factors inside")
    raise ArithmeticError("cross-product construction failed")  # unreachable


def fully_nondegenerate_on(space: MultisymplecticSpace, w: Subspace,
                           trials: int = DEFAULT_TRIALS, seed=0, coeff_bound: int = 9) -> Verdict:
    """Is omega restricted to ``w`` fully nondegenerate?

    Equivalent to: no nonzero decomposable k-vector of ``w`` lies in the
    Type-II k-complement of ``w``.  Refutations carry that k-vector.
    """
    space._check_subspace(w)
    n, k = space.n, space.k
    if w.dim < k:
        return Verdict.proven("no nonzero decomposable k-vectors in w")
    comp = type_ii_complement(space, w, k)
    power = exterior_power(w, k)
    meet = comp.span & power
    if meet.is_zero():
        return Verdict.proven("exterior power meets complement span trivially")
    if w.dim <= k + 1:
        x = Multivector.from_dense(n, k, meet.basis[0])
        return Verdict.refuted(x, "every k-vector of w is decomposable")

    vecs = [tuple(b) for b in w.basis]
    kern = restricted_kernel(space, w)
    if not kern.is_zero():
        sigma = kern.basis[0]
        others = [b for b in vecs if not Subspace.span([sigma], n).contains(b)]
        x = decomposable([sigma] + _independent_with(sigma, others, k - 1, n), n)
        return Verdict.refuted(x, "kernel vector of the restricted form")

    def accept(x):
        return comp.contains_linear(x) and power.contains(x.dense())

    if k == 2 and space.cross_certificate:
        perp = orthogonal_complement(w, space.metric)
        if perp.is_zero():
            return r_nondegenerate(space.omega, 2, metric=space.metric)
        for z in perp.basis:
            # u in w with u x z in w; then u ^ (u x z) is a witness
            rows = [list(_cross_functional(space, z, y)) for y in perp.basis]
            cand = null_space(rows, n) & w
            for u in cand.basis:
                x = decomposable([u, space.cross(u, z)], n)
                if not x.is_zero() and accept(x):
                    return Verdict.refuted(x, "u ^ (u x z) construction")
    if k == 2 and w.dim == 4:
        return _pfaffian_decision(w, meet, n)

    rng = _rng(seed)

    def draw():
        coeffs = [[rng.randint(-coeff_bound, coeff_bound) for _ in range(w.dim)]
                  for _ in range(k - 1)]
        return [w.combination(c) for c in coeffs], w

    x = _sliced_search(space.omega, k, _vectors(w), trials, rng, draw, accept)
    return Verdict.refuted(x, "random search") if x is not None else Verdict.unknown(trials)


def _cross_functional(space, z, y) -> Vector:
    """Coefficients ``a`` with ``a . u = omega(u, z, y)``."""
    form = contract(decomposable([z, y], space.n), space.omega)  # omega(z, y, .)
    return form.dense()


def _independent_with(sigma, candidates, count, n) -> list[Vector]:
    chosen: list[Vector] = []
    for c in candidates:
        if len(chosen) == count:
            break
        if Subspace.span([sigma, *chosen, c], n).dim == len(chosen) + 2:
            chosen.append(c)
    return chosen


def _pfaffian_decision(w: Subspace, meet: Subspace, n: int) -> Verdict:
    # in a 4-dim w, X ^ X is a multiple of the volume: one quadratic form on meet
    from .linalg import symmetric_diagonalize

    vecs = [Multivector.vector(b) for b in w.basis]
    top = decomposable(vecs, n)
    key, scale = next(iter(top.items()))
    gens = [Multivector.from_dense(n, 2, b) for b in meet.basis]
    m = len(gens)
    gram = [[wedge(gens[i], gens[j]).coeff(key) / scale for j in range(m)] for i in range(m)]
    q, d = symmetric_diagonalize(Matrix.from_rows(gram, m))
    pos = any(x > 0 for x in d)
    neg = any(x < 0 for x in d)
    zero = [i for i, x in enumerate(d) if x == 0]
    if not zero and not (pos and neg):
        return Verdict.proven("Pfaffian form is definite on the complement")
    y = _isotropic_diagonal(d)
    if y is None:
        return Verdict(Status.UNKNOWN, method="indefinite Pfaffian form, no small rational zero")
    coeffs = q @ y
    x = sum((c * g for c, g in zip(coeffs, gens) if c), Multivector.zero(n, 2))
    return Verdict.refuted(x, "Pfaffian form isotropic")


def _isotropic_diagonal(d: Sequence[Fraction], box: int = 6) -> Vector | None:
    """A nonzero rational ``y`` with ``sum d_i y_i^2 = 0`` if an easy one exists."""
    from itertools import product
    from math import isqrt

    m = len(d)
    for i, x in enumerate(d):
        if x == 0:
            return tuple(Fraction(int(j == i)) for j in range(m))
    for i in range(m):
        for j in range(i + 1, m):
            if d[i] * d[j] < 0:
                r = -d[i] / d[j]
                a, b = r.numerator, r.denominator
                if isqrt(a) ** 2 == a and isqrt(b) ** 2 == b:
                    y = [Fraction(0)] * m
                    y[i] = Fraction(1)
                    y[j] = Fraction(isqrt(a), isqrt(b))
                    return tuple(y)
    for y in product(range(-box, box + 1), repeat=m):
        if any(y) and sum(di * yi * yi for di, yi in zip(d, y)) == 0:
            return tuple(Fraction(v) for v in y)
    return None


def extend_to_lagrangian(space: MultisymplecticSpace, w: Subspace, l: int,
                         rng: random.Random | None = None) -> Subspace:
    """Grow an l-isotropic ``w`` one vector at a time until it is l-Lagrangian.

    Each step adds a vector of the complement not yet in ``w``; isotropy is
    preserved, so the loop ends at a subspace equal to its complement.  With
    ``rng`` the added vector is a random element of the complement instead of
    its first basis vector.
    """
    comp = type_i_complement(space, w, l)
    if not comp.includes(w):
        raise ValueError(f"subspace is not Type-I {l}-isotropic")
    while not comp.equals(w):
        if rng is None:
            v = _outside(w, comp.basis)
        else:
            while True:
                v = comp.combination([rng.randint(-3, 3) for _ in range(comp.dim)])
                if not w.contains(v):
                    break
        w = w + Subspace.span([v], space.n)
        comp = type_i_complement(space, w, l)
        if not comp.includes(w):
            raise ArithmeticError("isotropy lost while extending")  # contradicts the chain argument
    return w
