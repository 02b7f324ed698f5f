from __future__ import annotations

from fractions import Fraction

import numpy
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from multisymplectic.linalg import (
    Matrix,
    Subspace,
    format_rational,
    inertia,
    null_space,
    orthogonal_complement,
    parse_rational,
    random_subspace,
    rank,
    rref,
    symmetric_diagonalize,
)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=6):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=0, max_size=max_rows)
        .map(lambda rows: (rows, c))
    )


@pytest.mark.parametrize("text, value", [
    ("3", Fraction(3)),
    ("-7/21", Fraction(-1, 3)),
    (" 5/2 ", Fraction(5, 2)),
    (4, Fraction(4)),
])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", [0.5, True, None, [1]])
def test_parse_rational_rejects_inexact(bad):
    with pytest.raises(TypeError):
        parse_rational(bad)


@pytest.mark.parametrize("bad", ["1/0", "one", "1.5e"])
def test_parse_rational_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(st.fractions(max_denominator=50))
def test_format_parse_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_and_null_space_agree_with_sympy(data):
    rows, ncols = data
    expected_rank = sympy.Matrix(rows).rank() if rows else 0
    assert rank(rows, ncols) == expected_rank
    ker = null_space(rows, ncols)
    assert ker.dim == ncols - expected_rank
    for v in ker.basis:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


def test_rref_canonical():
    m = rref([[2, 4, 2], [1, 2, 3], [0, 0, 0]])
    assert m.entries == ((1, 2, 0), (0, 0, 1), (0, 0, 0))


@settings(max_examples=40, deadline=None)
@given(matrices(4, 5), matrices(4, 5))
def test_intersection_and_sum_dimension_formula(a, b):
    n = max(a[1], b[1])
    pad = lambda rows, c: [r + [0] * (n - c) for r in rows]
    u = Subspace.span(pad(*a), n)
    w = Subspace.span(pad(*b), n)
    assert (u + w).dim + (u & w).dim == u.dim + w.dim
    meet = u & w
    assert u.includes(meet) and w.includes(meet)
    assert (u + w).includes(u) and (u + w).includes(w)


def test_subspace_canonical_equality():
    a = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
    b = Subspace.span([[1, 2, 1], [1, 0, -1]], 3)
    assert a == b and a.equals(b)
    assert a.contains([2, 3, 1]) and not a.contains([1, 0, 0])


def test_coordinates_and_combination_inverse():
    w = Subspace.span([[1, 2, 3, 4], [0, 1, 0, 1]], 4)
    v = w.combination([3, -2])
    assert w.coordinates(v) == (3, -2)


def test_annihilator_dimension():
    w = random_subspace(6, 2, seed=5)
    ann = w.annihilator()
    assert ann.dim == 4
    assert all(sum(a * b for a, b in zip(x, y)) == 0 for x in ann.basis for y in w.basis)


def test_orthogonal_complement_identity_metric():
    w = Subspace.span([[1, 1, 0]], 3)
    perp = orthogonal_complement(w, Matrix.identity(3))
    assert perp.equals(Subspace.span([[1, -1, 0], [0, 0, 1]], 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(small, min_size=n * n, max_size=n * n)
                                 .map(lambda xs: (n, xs))))
def test_congruence_diagonalization(data):
    n, xs = data
    a = [[xs[i * n + j] for j in range(n)] for i in range(n)]
    s = Matrix.from_rows([[a[i][j] + a[j][i] for j in range(n)] for i in range(n)], n)
    q, d = symmetric_diagonalize(s)
    assert q.T @ s @ q == Matrix.diag(d)
    assert rank(q) == n
    # floating eigenvalue signs plus exact rank are an independent inertia oracle
    eig = numpy.linalg.eigvalsh(numpy.array(s.entries, dtype=float))
    zero = n - sympy.Matrix(s.entries).rank()
    pos = int((eig > 1e-9).sum())
    assert inertia(s) == (pos, n - zero - pos, zero)


def test_inertia_zero_diagonal():
    assert inertia(Matrix.from_rows([[0, 1], [1, 0]])) == (1, 1, 0)


def test_random_subspace_is_seeded():
    assert random_subspace(7, 3, seed=11) == random_subspace(7, 3, seed=11)
    assert random_subspace(7, 3, seed=11).dim == 3
    with pytest.raises(ValueError):
        random_subspace(3, 4)
