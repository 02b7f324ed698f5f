from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import span
from multisymplectic.exterior import AlternatingForm, eval_form
from multisymplectic.g2 import (
    ClassificationError,
    G2Space,
    check_cross_identity,
    classify_g2_subspace,
    contains_associative,
    corollary_check,
    cross,
    find_associative_in,
    inner,
    is_associative,
    is_coassociative,
    is_cross_closed,
    metric_from_phi,
    phi0,
    standard_volume,
)
from multisymplectic.linalg import Matrix, Subspace, random_subspace
from multisymplectic.spaces import Status

vec7 = st.lists(st.integers(-5, 5), min_size=7, max_size=7)


def test_phi0_coefficients():
    p = phi0()
    assert p.coeff((1, 2, 3)) == 1
    assert p.coeff((2, 5, 7)) == -1
    assert p.coeff((1, 2, 4)) == 0
    assert len(p.items()) == 7


def test_metric_examples():
    assert metric_from_phi(phi0(), standard_volume()) == Matrix.identity(7)
    assert metric_from_phi(phi0(), standard_volume() * 2) == Matrix.identity(7) * Fraction(1, 2)
    with pytest.raises(ValueError):
        metric_from_phi(phi0(), AlternatingForm.zero(7, 7))


def test_g2space_rejects_bad_forms():
    with pytest.raises(ValueError):
        G2Space(AlternatingForm(7, 3, {(1, 2, 3): 1}), standard_volume())
    # orientation reversal flips the sign of the recovered metric
    with pytest.raises(ValueError):
        G2Space(phi0(), standard_volume() * -1)


def test_cross_examples(g2, e):
    assert cross(g2, e[1], e[2]) == tuple(Fraction(x) for x in e[3])
    assert cross(g2, e[2], e[5]) == tuple(-Fraction(x) for x in e[7])
    assert not any(cross(g2, e[4], e[4]))


@settings(max_examples=40, deadline=None)
@given(vec7, vec7)
def test_cross_matches_evaluation_oracle(g2, u, v):
    # with g = identity, (u x v)_k = phi(u, v, e_k)
    basis = Subspace.full(7).basis
    assert g2.cross(u, v) == tuple(eval_form(phi0(), [u, v, b]) for b in basis)


@settings(max_examples=40, deadline=None)
@given(vec7, vec7)
def test_cross_product_identities(g2, u, v):
    uv = g2.cross(u, v)
    assert inner(g2, uv, u) == 0 == inner(g2, uv, v)
    assert g2.cross(v, u) == tuple(-c for c in uv)
    assert check_cross_identity(g2, u, v)


def test_cross_identity_examples(g2, e):
    assert check_cross_identity(g2, e[1], e[2])
    assert g2.cross(e[1], g2.cross(e[1], e[2])) == tuple(-Fraction(x) for x in e[2])
    assert check_cross_identity(g2, e[3], e[3])


def test_cross_table_entries_are_signed_basis_vectors(g2):
    for i, row in enumerate(g2.cross_table):
        for j, v in enumerate(row):
            nz = [c for c in v if c]
            assert (i == j and not nz) or (i != j and len(nz) == 1 and abs(nz[0]) == 1)


def test_orthonormal_cross_closed_triples_close_up_to_sign(g2, e):
    # e1 x e2 = +-e3, e1 x e3 = +-e2, e2 x e3 = +-e1
    for a, b, c in ((1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 5, 6)):
        for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
            v = g2.cross(e[x], e[y])
            assert v in (tuple(Fraction(t) for t in e[z]), tuple(-Fraction(t) for t in e[z]))


def test_cross_closed_examples(g2, e):
    assert is_cross_closed(g2, span(e[1], e[2], e[3]))
    assert not is_cross_closed(g2, span(e[4], e[5], e[6]))
    with pytest.raises(ValueError):
        is_cross_closed(g2, span(e[1], e[2]))


def test_random_three_planes_are_not_cross_closed(g2):
    assert not any(is_cross_closed(g2, random_subspace(7, 3, seed=s)) for s in range(20))


@pytest.mark.parametrize("rows, expected", [((1, 2, 3), True), ((1, 2, 4), False), ((1, 4, 5), True)])
def test_is_associative_examples(g2, e, rows, expected):
    assert is_associative(g2, span(*(e[i] for i in rows))) is expected


@pytest.mark.parametrize("seed", range(10))
def test_associative_agrees_with_cross_closed(g2, seed):
    rng = random.Random(seed)
    u = [rng.randint(-3, 3) for _ in range(7)]
    v = [rng.randint(-3, 3) for _ in range(7)]
    closed = span(u, v, g2.cross(u, v))
    generic = random_subspace(7, 3, seed=seed)
    for w in (closed, generic):
        assert is_associative(g2, w) == is_cross_closed(g2, w)


def test_is_coassociative_examples(g2, e):
    assert is_coassociative(g2, span(e[4], e[5], e[6], e[7]))
    assert not is_coassociative(g2, span(e[1], e[2], e[3], e[4]))


def test_find_associative_examples(g2, e):
    found = find_associative_in(g2, span(e[1], e[2], e[3], e[4]))
    assert found is not None and found.equals(span(e[1], e[2], e[3]))
    assert find_associative_in(g2, span(e[4], e[5], e[6], e[7])) is None
    with pytest.raises(ValueError):
        find_associative_in(g2, span(e[1], e[2]))


@pytest.mark.parametrize("dim", [5, 6, 7])
@pytest.mark.parametrize("seed", range(8))
def test_find_associative_high_dimensions(g2, dim, seed):
    w = random_subspace(7, dim, seed=seed)
    a = find_associative_in(g2, w)
    assert a is not None and w.includes(a)
    assert a.dim == 3 and is_cross_closed(g2, a) and is_associative(g2, a)


@pytest.mark.parametrize("seed", range(10))
def test_find_associative_dim4_structured(g2, seed):
    rng = random.Random(seed)
    u = [rng.randint(-3, 3) for _ in range(7)]
    v = [rng.randint(-3, 3) for _ in range(7)]
    f = [rng.randint(-3, 3) for _ in range(7)]
    w = span(u, v, g2.cross(u, v), f)
    if w.dim != 4:
        pytest.skip("degenerate draw")
    a = find_associative_in(g2, w)
    assert a is not None and w.includes(a) and is_cross_closed(g2, a)
    assert contains_associative(g2, w)


def test_generic_four_planes_contain_no_associative_plane(g2):
    assert not any(contains_associative(g2, random_subspace(7, 4, seed=s)) for s in range(20))


# ---------------------------------------------------------------- classification

def test_classify_associative_three_plane(g2, e):
    r = classify_g2_subspace(g2, span(e[1], e[2], e[3]))
    assert r.label == "dim3-associative" and r.consistent
    assert r.multisymplectic2.status is Status.PROVEN and r.multisymplectic1


def test_classify_coassociative_four_plane(g2, e):
    r = classify_g2_subspace(g2, span(e[4], e[5], e[6], e[7]))
    assert r.label == "dim4-coassociative" and r.consistent
    assert r.type_i.lagrangian2 and r.type_ii.isotropic2


@pytest.mark.parametrize("seed", range(3))
def test_classify_six_dimensional(g2, seed):
    r = classify_g2_subspace(g2, random_subspace(7, 6, seed=seed))
    assert r.label == "dim6" and r.consistent
    assert r.type_i.coisotropic2 and r.type_ii.coisotropic2.status is Status.PROVEN and r.multisymplectic1


def test_classify_five_dimensional_witnesses(g2):
    r = classify_g2_subspace(g2, random_subspace(7, 5, seed=0))
    assert r.consistent
    assert r.type_ii.coisotropic2.status is Status.REFUTED
    assert r.multisymplectic2.status is Status.REFUTED


def test_generic_three_plane_disagrees_with_case_table(g2, e):
    # phi(e1, e2, e3 + e4) = 1, so span{e1, e2, e3 + e4} is not isotropic
    w = span(e[1], e[2], [0, 0, 1, 1, 0, 0, 0])
    assert eval_form(phi0(), list(w.basis)) != 0
    assert not is_cross_closed(g2, w)
    r = classify_g2_subspace(g2, w)
    assert r.branch == "dim3-otherwise" and r.label == "dim3-generic"
    assert not r.type_i.isotropic2 and not r.type_ii.isotropic2
    assert not r.consistent
    with pytest.raises(ClassificationError):
        classify_g2_subspace(g2, w, strict=True)


def test_corollary_examples(g2, e):
    assert corollary_check(g2, span(e[1], e[2], e[3]))
    assert corollary_check(g2, span(e[4], e[5], e[6], e[7]))
    assert all(corollary_check(g2, random_subspace(7, 4, seed=s)) for s in range(5))


def test_corollary_fails_on_generic_three_planes(g2):
    # 2-multisymplectic but not associative: phi restricts to a volume form,
    # just not the induced one
    w = random_subspace(7, 3, seed=1)
    assert not is_associative(g2, w)
    assert not corollary_check(g2, w)
