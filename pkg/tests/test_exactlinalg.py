import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wittmod.exactlinalg import (
    SparseVector,
    SubspaceBasis,
    contains,
    dot,
    evaluate_multipoly,
    format_rational,
    kernel_basis,
    parse_rational,
    rref_basis,
    vandermonde_solve,
)

F = Fraction

rationals = st.fractions(
    min_value=-5, max_value=5, max_denominator=6
).map(lambda f: f.numerator if f.denominator == 1 else f)


def sv(*coords):
    """Dense coordinate list -> SparseVector over integer keys 0,1,..."""
    return SparseVector({i: c for i, c in enumerate(coords)})


# ---------------------------------------------------------------------------
# rationals


def test_parse_and_format_roundtrip():
    assert parse_rational("1/2") == F(1, 2)
    assert parse_rational("-3/6") == F(-1, 2)
    assert parse_rational("4") == 4
    assert isinstance(parse_rational("4/2"), int)
    assert format_rational(F(1, 2)) == "1/2"
    assert format_rational(F(-1, 2)) == "-1/2"
    assert format_rational(7) == "7"
    assert format_rational(F(14, 2)) == "7"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rational("1.5x")
    with pytest.raises(TypeError):
        parse_rational(1.5)


# ---------------------------------------------------------------------------
# dot


def test_dot_examples():
    assert dot((1, 0), (0, 1)) == 0
    assert dot((1, 0), (1, 0)) == 1
    # (1/2, 1/3) . (2, 3) = 1 + 1 = 2
    assert dot((F(1, 2), F(1, 3)), (2, 3)) == 2


def test_dot_length_mismatch():
    with pytest.raises(ValueError):
        dot((1, 0), (1, 0, 0))


@given(
    st.lists(rationals, min_size=3, max_size=3),
    st.lists(rationals, min_size=3, max_size=3),
    st.lists(rationals, min_size=3, max_size=3),
    rationals,
)
def test_dot_bilinear_symmetric(u, v, w, c):
    u, v, w = tuple(u), tuple(v), tuple(w)
    assert dot(u, v) == dot(v, u)
    cu_plus_w = tuple(c * a + b for a, b in zip(u, w))
    assert dot(cu_plus_w, v) == c * dot(u, v) + dot(w, v)


# ---------------------------------------------------------------------------
# sparse vectors


def test_sparse_vector_drops_zeros():
    v = SparseVector({0: 1, 1: 0, 2: F(0, 5)})
    assert list(v.keys()) == [0]
    assert (0 * v).is_zero()
    assert v - v == SparseVector()


def test_sparse_vector_arithmetic():
    v = sv(1, 2)
    w = sv(3, -2)
    assert v + w == sv(4, 0)
    assert v - w == sv(-2, 4)
    assert -v == sv(-1, -2)
    assert F(1, 2) * v == SparseVector({0: F(1, 2), 1: 1})
    assert v.add_scaled(w, 2) == sv(7, -2)


# ---------------------------------------------------------------------------
# rref / contains


def test_rref_empty():
    basis = rref_basis([])
    assert basis.rank == 0


def test_rref_scalar_multiples_collapse():
    basis = rref_basis([sv(1, 0), sv(2, 0)])
    assert basis.rank == 1
    assert list(basis.rows[0].sorted_items()) == [(0, 1)]


def test_rref_full_rank_two_by_two():
    # hand Gaussian elimination: rows (1,2), (3,4) -> (1,0), (0,1)
    basis = rref_basis([sv(1, 2), sv(3, 4)])
    assert basis.rank == 2
    assert basis.rows[0] == sv(1, 0)
    assert basis.rows[1] == sv(0, 1)


def test_rref_idempotent():
    basis = rref_basis([sv(1, 2, 3), sv(0, 1, 1), sv(2, 5, 7)])
    again = rref_basis(basis.rows)
    assert again == basis


def test_rref_order_independent():
    vectors = [sv(1, 2, 0), sv(0, 1, 5), sv(1, 3, 5), sv(2, 0, 1)]
    reference = rref_basis(vectors)
    for perm in itertools.permutations(vectors):
        assert rref_basis(perm) == reference


def test_contains_examples():
    basis = rref_basis([sv(1, 0), sv(0, 1)])
    assert contains(basis, sv(1, 1))
    basis3 = rref_basis([sv(1, 0, 0)])
    assert not contains(basis3, sv(0, 0, 1))
    line = rref_basis([sv(1, 2)])
    assert contains(line, SparseVector({0: F(1, 2), 1: 1}))


@settings(deadline=None)
@given(
    st.lists(
        st.lists(rationals, min_size=4, max_size=4), min_size=0, max_size=5
    ),
    st.lists(rationals, min_size=3, max_size=3),
)
def test_contains_every_span_member(rows, coeffs):
    vectors = [sv(*r) for r in rows]
    basis = rref_basis(vectors)
    combo = SparseVector()
    for c, v in zip(coeffs, vectors):
        combo = combo.add_scaled(v, c)
    assert contains(basis, combo)
    assert rref_basis(basis.rows) == basis


def test_kernel_basis_simple():
    # x0 + 2 x1 = 0 over keys (0, 1): kernel spanned by (-2, 1)
    rows = [sv(1, 2)]
    kern = kernel_basis(rows, [0, 1])
    assert len(kern) == 1
    assert dot((1, 2), (kern[0].get(0), kern[0].get(1))) == 0
    # every kernel vector annihilates every row
    for k in kern:
        assert sum(c * rows[0].get(key) for key, c in k.items()) == 0


# ---------------------------------------------------------------------------
# vandermonde interpolation


def c_of(value):
    return SparseVector({"c": value})


def test_vandermonde_constant():
    points = [(0,), (1,)]
    values = [c_of(7), c_of(7)]
    coeffs = vandermonde_solve(points, values, [1])
    assert coeffs[(0,)] == c_of(7)
    assert coeffs[(1,)].is_zero()


def test_vandermonde_square():
    # p(t) = t^2 at t = 0, 1, 2 -> coefficients (0, 0, 1)
    points = [(t,) for t in range(3)]
    values = [c_of(t * t) for t in range(3)]
    coeffs = vandermonde_solve(points, values, [2])
    assert coeffs[(0,)].is_zero()
    assert coeffs[(1,)].is_zero()
    assert coeffs[(2,)] == c_of(1)


def test_vandermonde_bilinear():
    # p(n, u) = n*u on {0,1}^2 -> coefficient 1 at (1,1), 0 elsewhere
    points = list(itertools.product(range(2), range(2)))
    values = [c_of(n * u) for n, u in points]
    coeffs = vandermonde_solve(points, values, [1, 1])
    for deg, vec in coeffs.items():
        if deg == (1, 1):
            assert vec == c_of(1)
        else:
            assert vec.is_zero()


def test_vandermonde_rejects_non_grid():
    with pytest.raises(ValueError):
        vandermonde_solve([(0,), (2,)], [c_of(0), c_of(2)], [1])


def test_vandermonde_rejects_inconsistent_overdetermined():
    # t^2 data cannot come from a degree-1 polynomial on {0,1,2}
    points = [(t,) for t in range(3)]
    values = [c_of(t * t) for t in range(3)]
    with pytest.raises(ValueError):
        vandermonde_solve(points, values, [1])


def test_vandermonde_overdetermined_consistent():
    points = [(t,) for t in range(4)]
    values = [c_of(3 * t + 1) for t in range(4)]
    coeffs = vandermonde_solve(points, values, [1])
    assert coeffs[(0,)] == c_of(1)
    assert coeffs[(1,)] == c_of(3)


@settings(deadline=None, max_examples=40)
@given(
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 1)),
        rationals,
        min_size=0,
        max_size=6,
    )
)
def test_vandermonde_roundtrip(coeff_map):
    # build p from random coefficients, evaluate on the grid, solve, compare
    coefficients = {deg: c_of(val) for deg, val in coeff_map.items()}
    if not coefficients:
        coefficients = {(0, 0): c_of(0)}
    bounds = [2, 1]
    points = list(itertools.product(range(3), range(2)))
    values = [evaluate_multipoly(coefficients, p) for p in points]
    solved = vandermonde_solve(points, values, bounds)
    for deg in itertools.product(range(3), range(2)):
        expected = coefficients.get(deg, SparseVector())
        assert solved[deg] == expected
    # reconstruction reproduces every grid value exactly
    for p, v in zip(points, values):
        assert evaluate_multipoly(solved, p) == v
