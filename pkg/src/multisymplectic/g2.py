"""The G2 vector space: Q^7 with the standard 3-form phi0.

The metric is recovered from ``phi`` against a caller-supplied volume via

    (e_i _| phi) ^ (e_j _| phi) ^ phi = 6 g_ij vol,

the cross product from ``g(u x v, w) = phi(u, v, w)``.  Associative 3-planes
(copies of the imaginary quaternions) are detected exactly in every
dimension; in a 4-dim ``W`` this reduces to the sign pattern of one
Pfaffian quadratic form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exterior import (
    AlternatingForm,
    Multivector,
    contract,
    decomposable,
    eval_form,
    factor2,
    wedge,
)
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    dot,
    inertia,
    null_space,
    orthogonal_complement,
    symmetric_diagonalize,
)
from .spaces import (
    MultisymplecticSpace,
    Status,
    Verdict,
    _isotropic_diagonal,
    fully_nondegenerate_on,
    is_multisymplectic_subspace,
    type_i_predicates,
    type_ii_coisotropic,
    type_ii_complement,
    type_ii_isotropic,
    volume_form,
)

__all__ = [
    "ClassificationError",
    "G2ClassificationReport",
    "G2Space",
    "THEOREM_LABELS",
    "check_cross_identity",
    "classify_g2_subspace",
    "contains_associative",
    "corollary_check",
    "cross",
    "find_associative_in",
    "inner",
    "is_associative",
    "is_coassociative",
    "is_cross_closed",
    "metric_from_phi",
    "phi0",
    "standard_volume",
]

PHI0_TERMS = (
    ((1, 2, 3), 1),
    ((1, 4, 5), 1),
    ((1, 6, 7), 1),
    ((2, 4, 6), 1),
    ((2, 5, 7), -1),
    ((3, 4, 7), -1),
    ((3, 5, 6), -1),
)


def phi0() -> AlternatingForm:
    return AlternatingForm(7, 3, dict(PHI0_TERMS))


def standard_volume(n: int = 7) -> AlternatingForm:
    return volume_form(n)


def metric_from_phi(phi: AlternatingForm, volume: AlternatingForm) -> Matrix:
    """Read ``g_ij`` off ``(e_i _| phi) ^ (e_j _| phi) ^ phi`` against ``volume``."""
    n = phi.n
    if phi.degree != 3 or n != 7:
        raise ValueError("metric recovery needs a 3-form on a 7-dim space")
    if volume.n != n or volume.degree != n:
        raise ValueError("volume must be a top-degree form on the same space")
    top = tuple(range(1, n + 1))
    vol = volume.coeff(top)
    if vol == 0:
        raise ValueError("volume form is zero")
    hooks = [contract(Multivector.basis(n, [i]), phi) for i in range(1, n + 1)]
    rows = [[wedge(wedge(hooks[i], hooks[j]), phi).coeff(top) / (6 * vol) for j in range(n)]
            for i in range(n)]
    return Matrix.from_rows(rows, n)


@dataclass(frozen=True)
class G2Space:
    """A validated G2 structure ``(phi, g, vol)`` on Q^7."""

    phi: AlternatingForm
    volume: AlternatingForm
    metric: Matrix = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "metric", metric_from_phi(self.phi, self.volume))
        self._validate()

    @classmethod
    def standard(cls) -> "G2Space":
        return cls(phi0(), standard_volume())

    @property
    def n(self) -> int:
        return 7

    def _validate(self) -> None:
        n, g = self.n, self.metric
        pos, neg, zero = inertia(g)
        if (pos, neg, zero) != (n, 0, 0):
            raise ValueError(f"metric is not positive definite (inertia {pos, neg, zero})")
        hooks = [contract(Multivector.basis(n, [i]), self.phi) for i in range(1, n + 1)]
        for i in range(n):
            for j in range(i, n):
                lhs = wedge(wedge(hooks[i], hooks[j]), self.phi)
                if lhs != self.volume * (6 * g[i, j]):
                    raise ValueError(f"metric identity fails for pair ({i + 1}, {j + 1})")
        basis = Subspace.full(n).basis
        for i in range(n):
            for j in range(n):
                uv = self.cross(basis[i], basis[j])
                for k in range(n):
                    if inner(self, uv, basis[k]) != eval_form(self.phi, [basis[i], basis[j], basis[k]]):
                        raise ValueError("cross product incompatible with phi")
        if not self.multisymplectic.cross_certificate:
            raise ValueError("phi fails the cross-product norm identity")

    @cached_property
    def multisymplectic(self) -> MultisymplecticSpace:
        return MultisymplecticSpace(self.phi, self.metric)

    @cached_property
    def _inverse(self) -> Matrix:
        return self.multisymplectic._metric_inverse

    def cross(self, u: Sequence, v: Sequence) -> Vector:
        alpha = contract(decomposable([u, v], self.n), self.phi).dense()
        return self._inverse @ alpha

    @cached_property
    def cross_table(self) -> tuple[tuple[Vector, ...], ...]:
        basis = Subspace.full(self.n).basis
        return tuple(tuple(self.cross(a, b) for b in basis) for a in basis)


def cross(space: G2Space, u: Sequence, v: Sequence) -> Vector:
    return space.cross(u, v)


def inner(space: G2Space, u: Sequence, v: Sequence) -> Fraction:
    return dot(u, space.metric @ v)


def check_cross_identity(space: G2Space, x: Sequence, y: Sequence) -> bool:
    """``x x (x x y) == -|x|^2 y + <x, y> x`` exactly."""
    lhs = space.cross(x, space.cross(x, y))
    nx, xy = inner(space, x, x), inner(space, x, y)
    rhs = tuple(-nx * Fraction(b) + xy * Fraction(a) for a, b in zip(x, y))
    return lhs == rhs


def _require_dim(w: Subspace, dims, what: str) -> None:
    if w.dim not in dims:
        raise ValueError(f"{what} needs dimension in {sorted(dims)}, got {w.dim}")


def is_cross_closed(space: G2Space, w: Subspace) -> bool:
    _require_dim(w, {3}, "is_cross_closed")
    b = w.basis
    return all(w.contains(space.cross(b[i], b[j])) for i, j in ((0, 1), (0, 2), (1, 2)))


def is_associative(space: G2Space, a: Subspace) -> bool:
    """``phi(b1, b2, b3)^2`` equals the Gram determinant of the basis."""
    _require_dim(a, {3}, "is_associative")
    b = a.basis
    gram = Matrix.from_rows([[inner(space, x, y) for y in b] for x in b], 3)
    return eval_form(space.phi, b) ** 2 == _det3(gram)


def _det3(m: Matrix) -> Fraction:
    (a, b, c), (d, e, f), (g, h, i) = m.entries
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def is_coassociative(space: G2Space, c: Subspace) -> bool:
    _require_dim(c, {4}, "is_coassociative")
    b = c.basis
    return all(eval_form(space.phi, [b[i], b[j], b[k]]) == 0
               for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))


def _plane(space: G2Space, u: Sequence, v: Sequence) -> Subspace:
    return Subspace.span([u, v, space.cross(u, v)], space.n)


def _closed_kernel(space: G2Space, w: Subspace) -> Subspace:
    """2-vectors of ``w`` whose cross product stays in ``w``, as a subspace of the 2nd power.

    ``u x v`` lies in ``w`` iff ``phi(u, v, z) = 0`` for every ``z`` orthogonal
    to ``w``, which is linear in ``u ^ v``.
    """
    from .exterior import exterior_power

    perp = orthogonal_complement(w, space.metric)
    comp = type_ii_complement(space.multisymplectic, perp, 2)
    return comp.span & exterior_power(w, 2)


def _pfaffian_form(space: G2Space, w: Subspace, kernel: Subspace) -> tuple[Matrix, list[Multivector]]:
    n = space.n
    top = decomposable(w.basis, n)
    key, scale = next(iter(top.items()))
    gens = [Multivector.from_dense(n, 2, b) for b in kernel.basis]
    m = len(gens)
    rows = [[wedge(gens[i], gens[j]).coeff(key) / scale for j in range(m)] for i in range(m)]
    return Matrix.from_rows(rows, m), gens


def contains_associative(space: G2Space, w: Subspace) -> bool:
    """Exact existence test over the reals; never searches."""
    _require_dim(w, {3, 4, 5, 6, 7}, "contains_associative")
    if w.dim == 3:
        return is_cross_closed(space, w)
    if w.dim >= 5:
        return True
    kernel = _closed_kernel(space, w)
    if kernel.is_zero():
        return False
    pos, neg, zero = inertia(_pfaffian_form(space, w, kernel)[0])
    return zero > 0 or (pos > 0 and neg > 0)


def find_associative_in(space: G2Space, w: Subspace) -> Subspace | None:
    """An associative 3-plane inside ``w``, or None when there is none.

    Dim 4 uses the Pfaffian form on the cross-closed kernel.  Dim 5 and up
    fixes ``u`` in ``w`` and solves the linear system ``u x v in w``; its
    solution space has dimension at least ``2 dim w - 7 >= 3``, so a second
    factor independent of ``u`` always exists.
    """
    _require_dim(w, {3, 4, 5, 6, 7}, "find_associative_in")
    n = space.n
    if w.dim == 3:
        return w if is_cross_closed(space, w) else None
    if w.dim == 4:
        kernel = _closed_kernel(space, w)
        if kernel.is_zero():
            return None
        s, gens = _pfaffian_form(space, w, kernel)
        q, d = symmetric_diagonalize(s)
        if not any(x == 0 for x in d) and not (any(x > 0 for x in d) and any(x < 0 for x in d)):
            return None
        y = _isotropic_diagonal(d)
        if y is None:
            raise ArithmeticError("associative plane exists but no small rational one was found")
        coeffs = q @ y
        x = sum((c * g for c, g in zip(coeffs, gens) if c), Multivector.zero(n, 2))
        u, v = factor2(x)
        return _plane(space, u, v)
    u = w.basis[0]
    perp = orthogonal_complement(w, space.metric)
    rows = [contract(decomposable([u, z], n), space.phi).dense() for z in perp.basis]
    sol = (null_space(rows, n) if rows else Subspace.full(n)) & w
    line = Subspace.span([u], n)
    v = next(b for b in sol.basis if not line.contains(b))
    return _plane(space, u, v)


THEOREM_LABELS = (
    "dim0", "dim1", "dim2",
    "dim3-associative", "dim3-isotropic", "dim3-generic",
    "dim4-associative-containing", "dim4-coassociative", "dim4-generic",
    "dim5", "dim6", "dim7",
)


class ClassificationError(AssertionError):
    """First-principles predicates disagree with the stated case table."""


@dataclass(frozen=True)
class TypeIFields:
    isotropic2: bool
    coisotropic2: bool
    lagrangian2: bool
    lagrangian1: bool
    coisotropic1: bool


@dataclass(frozen=True)
class TypeIIFields:
    isotropic2: bool
    coisotropic2: Verdict


@dataclass(frozen=True)
class G2ClassificationReport:
    """Predicates of ``W`` computed directly, plus the case-table comparison.

    ``label`` reflects the predicates; ``branch`` is the case of the table
    selected by dimension and associative content alone; ``claims`` lists
    what the table asserts for that branch and ``discrepancies`` those
    claims the predicates contradict.
    """

    dim: int
    type_i: TypeIFields
    type_ii: TypeIIFields
    multisymplectic1: bool
    multisymplectic2: Verdict
    associative_witness: Subspace | None
    label: str
    branch: str
    claims: dict[str, object]
    discrepancies: tuple[str, ...]

    @property
    def consistent(self) -> bool:
        return not self.discrepancies

    def predicate_values(self) -> dict[str, object]:
        return {
            "type_i.isotropic2": self.type_i.isotropic2,
            "type_i.coisotropic2": self.type_i.coisotropic2,
            "type_i.lagrangian2": self.type_i.lagrangian2,
            "type_i.lagrangian1": self.type_i.lagrangian1,
            "type_i.coisotropic1": self.type_i.coisotropic1,
            "type_ii.isotropic2": self.type_ii.isotropic2,
            "type_ii.coisotropic2": self.type_ii.coisotropic2.status,
            "multisymplectic1": self.multisymplectic1,
            "multisymplectic2": self.multisymplectic2.status,
        }


_BRANCH_CLAIMS: dict[str, dict[str, object]] = {
    "dim1": {"type_i.lagrangian1": True, "type_i.isotropic2": True, "type_ii.isotropic2": True},
    "dim2": {"type_i.isotropic2": True, "type_ii.isotropic2": True},
    "dim3-associative": {"multisymplectic2": Status.PROVEN},
    "dim3-otherwise": {"type_i.isotropic2": True, "type_ii.isotropic2": True},
    "dim4-associative-containing": {
        "type_i.coisotropic2": True,
        "type_ii.isotropic2": False,
        "type_ii.coisotropic2": Status.REFUTED,
        "multisymplectic2": Status.REFUTED,
    },
    "dim4-otherwise": {"type_i.lagrangian2": True, "type_ii.isotropic2": True},
    "dim5": {
        "type_i.coisotropic2": True,
        "multisymplectic1": True,
        "type_ii.isotropic2": False,
        "type_ii.coisotropic2": Status.REFUTED,
        "multisymplectic2": Status.REFUTED,
    },
    "dim6": {
        "type_i.coisotropic2": True,
        "type_ii.coisotropic2": Status.PROVEN,
        "multisymplectic1": True,
    },
}


def _branch(dim: int, has_assoc: bool) -> str:
    if dim == 3:
        return "dim3-associative" if has_assoc else "dim3-otherwise"
    if dim == 4:
        return "dim4-associative-containing" if has_assoc else "dim4-otherwise"
    return f"dim{dim}"


def _label(dim: int, has_assoc: bool, ti: TypeIFields, tii: TypeIIFields) -> str:
    if dim == 3 and not has_assoc:
        return "dim3-isotropic" if ti.isotropic2 and tii.isotropic2 else "dim3-generic"
    if dim == 4 and not has_assoc:
        return "dim4-coassociative" if ti.lagrangian2 and tii.isotropic2 else "dim4-generic"
    if dim in (3, 4):
        return _branch(dim, True)
    return f"dim{dim}"


def classify_g2_subspace(space: G2Space, w: Subspace, *, trials: int = 200, seed=0,
                         strict: bool = False) -> G2ClassificationReport:
    """Compute every predicate of ``w`` and compare with the case table.

    With ``strict`` a disagreement raises :class:`ClassificationError`;
    otherwise it is recorded in ``discrepancies``.
    """
    if w.ambient_dim != space.n:
        raise ValueError(f"subspace lives in Q^{w.ambient_dim}, expected Q^7")
    ms = space.multisymplectic
    p2 = type_i_predicates(ms, w, 2)
    p1 = type_i_predicates(ms, w, 1)
    ti = TypeIFields(p2.isotropic, p2.coisotropic, p2.lagrangian, p1.lagrangian, p1.coisotropic)
    tii = TypeIIFields(type_ii_isotropic(ms, w, 2),
                       type_ii_coisotropic(ms, w, 2, trials=trials, seed=seed))
    witness = find_associative_in(space, w) if w.dim >= 3 else None
    has_assoc = witness is not None
    report_fields = dict(
        dim=w.dim,
        type_i=ti,
        type_ii=tii,
        multisymplectic1=is_multisymplectic_subspace(ms, w),
        multisymplectic2=fully_nondegenerate_on(ms, w, trials=trials, seed=seed),
        associative_witness=witness,
        label=_label(w.dim, has_assoc, ti, tii),
        branch=_branch(w.dim, has_assoc),
    )
    claims = dict(_BRANCH_CLAIMS.get(report_fields["branch"], {}))
    if w.dim >= 2:
        claims["type_i.coisotropic1"] = True
    probe = G2ClassificationReport(**report_fields, claims=claims, discrepancies=())
    values = probe.predicate_values()
    bad = tuple(f"{key}: expected {_show(want)}, got {_show(values[key])}"
                for key, want in claims.items() if values[key] != want)
    if witness is not None and not is_associative(space, witness):
        bad += ("associative witness fails the volume test",)
    if bad and strict:
        raise ClassificationError(f"{report_fields['branch']}: " + "; ".join(bad))
    return G2ClassificationReport(**report_fields, claims=claims, discrepancies=bad)


def _show(x) -> str:
    return x.value if isinstance(x, Status) else str(x).lower()


def corollary_check(space: G2Space, w: Subspace, *, trials: int = 200, seed=0) -> bool:
    """The associative / coassociative characterizations, evaluated on ``w``.

    Dim 3: associative iff omega restricted to ``w`` is fully nondegenerate.
    Dim 4: coassociative iff Type-I 2-Lagrangian iff Type-II 2-isotropic.
    """
    _require_dim(w, {3, 4}, "corollary_check")
    ms = space.multisymplectic
    if w.dim == 3:
        nondeg = fully_nondegenerate_on(ms, w, trials=trials, seed=seed)
        return is_associative(space, w) == (nondeg.status is Status.PROVEN)
    co = is_coassociative(space, w)
    return co == type_i_predicates(ms, w, 2).lagrangian == type_ii_isotropic(ms, w, 2)


def random_rational_vector(rng: random.Random, bound: int = 9, n: int = 7) -> Vector:
    return tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)) for _ in range(n))
