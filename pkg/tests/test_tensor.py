import math
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import corpus, kite, octahedron, perturbed_cube, rectangle, tetrahedron, unit_square
from polymink.algebra import ExactScalar, SparsePoly, omega, truncated_series
from polymink.errors import MethodUnsupported, RankTooHigh
from polymink.oracle import definitional_surface_tensor
from polymink.polytope import validate
from polymink.tensor import (
    METHODS,
    BigradedTensor,
    c_coefficient,
    derivative_extraction,
    e_elem,
    facet_form_product,
    gf_series_check,
    multi_indices,
    multinomial,
    multiplicities,
    multiset_partitions,
    partial_at_zero,
    surface_tensor,
    volume_tensor,
)

PI_INV = ExactScalar.pi_pow(-1)


def as_matrix(T):
    return [[T[((i, j), ())] for j in range(T.d)] for i in range(T.d)]


# --- index helpers ------------------------------------------------------------


def test_multi_index_helpers():
    assert multi_indices(2, 2) == [(0, 0), (0, 1), (1, 1)]
    assert multiplicities((0, 0, 2), 3) == (2, 0, 1)
    assert multinomial((2, 0, 1)) == 3


# --- elementary symmetric functions -----------------------------------------


@pytest.mark.parametrize("v", [(1, 1, 1), (-1, 1, -1), (1, -1, 1)])
def test_e_elem_on_octahedron_facet(v):
    pts = [tuple(Fraction(v[i]) if i == j else Fraction(0) for i in range(3)) for j in range(3)]
    for j in range(3):
        assert e_elem((j,), pts) == v[j]
        for k in range(3):
            if k != j:
                assert e_elem((j, k), pts) == v[j] * v[k]


def test_e_elem_of_repeated_point():
    x = (Fraction(2), Fraction(-3), Fraction(5))
    for I in [(0, 1, 2), (0, 0, 2), (1, 1, 1)]:
        assert e_elem(I, [x, x, x]) == 6 * math.prod(x[i] for i in I)


def test_e_elem_rank_too_high():
    with pytest.raises(RankTooHigh):
        e_elem((0, 0, 1), [(1, 2), (3, 4)])


coords = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(st.lists(st.tuples(coords, coords, coords), min_size=3, max_size=3), st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_e_elem_ignores_vertex_order(pts, I):
    I = tuple(sorted(I))
    ref = e_elem(I, pts)
    for perm in permutations(pts):
        assert e_elem(I, list(perm)) == ref


# --- multiset partitions -----------------------------------------------------


def test_partitions_keep_duplicates():
    parts = multiset_partitions((0, 0, 2), 2)
    assert sorted(sorted(p) for p in parts) == [[(0,), (0, 2)], [(0,), (0, 2)], [(0, 0), (2,)]]


def test_partition_counts():
    assert multiset_partitions((0, 1, 2), 3) == [[(0,), (1,), (2,)]]
    assert len(multiset_partitions((0, 1, 2), 2)) == 3
    assert len(multiset_partitions((0, 1, 2, 3), 2)) == 7
    assert len(multiset_partitions((0, 1, 2, 3), 2, max_part=2)) == 3


# --- closed-form coefficients ------------------------------------------------


def test_octahedron_brackets():
    P = octahedron()
    for j in range(3):
        total = sum((f.volume * c for f, c in zip(P.facets, c_coefficient((j,), P).values())), ExactScalar.zero())
        assert total == 0
    for f, value in zip(P.facets, c_coefficient((0, 1), P).values()):
        v = [sum(p[i] for p in P.points(f.vertex_ids)) for i in range(3)]
        assert value == v[0] * v[1]


def test_unit_square_first_bracket():
    assert list(c_coefficient((0,), unit_square()).values()) == [1, 2, 1, 0]


def test_closed_form_needs_simplicial():
    with pytest.raises(MethodUnsupported):
        c_coefficient((0,), perturbed_cube())


# --- derivative extraction ---------------------------------------------------


def taylor_derivative(P, fid, I):
    """d_I (1/L_F)(0) read off the geometric-series expansion."""
    forms = [P.forms[k] for k in P.facets[fid].vertex_ids]
    a = multiplicities(I, P.dim)
    series = truncated_series(SparsePoly.constant(P.dim), forms, len(I))
    return series.coefficient(a) * math.prod(math.factorial(x) for x in a)


@pytest.mark.parametrize("P", [octahedron(), tetrahedron(), unit_square()] + corpus(size=8))
def test_derivative_matches_taylor_coefficients(P):
    for r in range(1, 4):
        for I in multi_indices(P.dim, r):
            symbolic = derivative_extraction(P, I)
            assert symbolic == derivative_extraction(P, I, route="elementary")
            for f in P.facets:
                assert symbolic[f.id] == taylor_derivative(P, f.id, I)


def test_first_derivative_is_elementary():
    P = tetrahedron()
    for i in range(3):
        for f in P.facets:
            assert derivative_extraction(P, (i,))[f.id] == e_elem((i,), P.points(f.vertex_ids))


def test_third_derivative_expansion_on_tetrahedron():
    # -6 dL dL dL + 6 L dL d2L (three ways) - L^2 d3L at the origin, L(0) = 1
    P = validate(3, [(1, 2, 0), (0, 1, 3), (2, 0, 1), (0, 0, 0)], [[0, 1, 2], [1, 2, 3], [0, 2, 3], [0, 1, 3]])
    f = P.facets[0]
    LF = facet_form_product(P, f.id)
    j, k, m = 0, 1, 2

    def d(*idx):
        return partial_at_zero(LF, idx)

    expected = (
        -6 * d(m) * d(k) * d(j)
        + 2 * (d(m, k) * d(j) + d(m, j) * d(k) + d(k, j) * d(m))
        - d(m, k, j)
    )
    assert derivative_extraction(P, (j, k, m))[f.id] == expected


def test_top_derivative_vanishes_beyond_dimension():
    P = tetrahedron()
    for f in P.facets:
        LF = facet_form_product(P, f.id)
        assert partial_at_zero(LF, (0, 0, 1, 2)) == 0


@pytest.mark.parametrize("P", corpus(size=20))
def test_form_derivatives_are_signed_elementary_sums(P):
    for f in P.facets:
        LF = facet_form_product(P, f.id)
        pts = P.points(f.vertex_ids)
        for k in range(1, P.dim + 1):
            for I in multi_indices(P.dim, k):
                assert partial_at_zero(LF, I) == (-1) ** k * e_elem(I, pts)


# --- surface tensors ---------------------------------------------------------


@pytest.mark.parametrize("method", METHODS)
def test_unit_square_first_moment(method):
    T = surface_tensor(unit_square(), 1, 0, method)
    assert [T[((i,), ())] for i in range(2)] == [1, 1]


@pytest.mark.parametrize("method", METHODS)
def test_octahedron(method):
    P = octahedron()
    assert surface_tensor(P, 1, 0, method).is_zero()
    # each facet has area sqrt(3)/2 and mean x_j^2 = 1/6, so the diagonal is
    # 8 * sqrt(3)/12 / (2! * omega_1) = sqrt(3)/6
    M = as_matrix(surface_tensor(P, 2, 0, method))
    diag = ExactScalar.sqrt(3) / 6
    assert M == [[diag if i == j else 0 for j in range(3)] for i in range(3)]


@pytest.mark.parametrize("method", METHODS)
def test_unit_square_second_moment(method):
    M = as_matrix(surface_tensor(rectangle(1, 1), 2, 0, method))
    assert M == [[Fraction(5, 12), Fraction(1, 4)], [Fraction(1, 4), Fraction(5, 12)]]


@pytest.mark.parametrize("a, b", [(2, 3), (1, 1), (Fraction(1, 2), 5)])
def test_rectangle_second_moment_polynomial(a, b):
    a, b = Fraction(a), Fraction(b)
    expected = [
        [a**3 / 6 + a**2 * b / 4, a**2 * b / 8 + a * b**2 / 8],
        [a**2 * b / 8 + a * b**2 / 8, a * b**2 / 4 + b**3 / 6],
    ]
    for method in METHODS:
        assert as_matrix(surface_tensor(rectangle(a, b), 2, 0, method)) == expected


def test_rectangle_normal_tensors():
    a, b = 2, 3
    P = rectangle(a, b)
    assert surface_tensor(P, 0, 0)[((), ())] == a + b
    assert surface_tensor(P, 0, 1).is_zero()
    T = surface_tensor(P, 0, 2)
    # two edges of length b with normals +-e1, two of length a with normals +-e2
    coeff = (omega(3) * 2).inverse()
    assert T[((), (0, 0))] == coeff * (2 * b)
    assert T[((), (1, 1))] == coeff * (2 * a)
    assert T[((), (0, 1))] == 0
    assert T[((), (0, 0))] == PI_INV * Fraction(3, 4)


@pytest.mark.parametrize("P", [unit_square(), octahedron(), kite()] + corpus(size=6))
def test_rank_zero_is_half_the_surface_area(P):
    half = sum((f.volume for f in P.facets), ExactScalar.zero()) / 2
    assert surface_tensor(P, 0, 0)[((), ())] == half


def test_series_handles_quadrilateral_facets():
    P = perturbed_cube()
    for r in range(3):
        for s in range(3):
            assert surface_tensor(P, r, s, "series") == definitional_surface_tensor(P, r, s)
    for method in ("formula", "derivative"):
        with pytest.raises(MethodUnsupported):
            surface_tensor(P, 1, 0, method)


def test_series_refuses_non_simplicial_ridges():
    cube = [tuple(int(b) for b in f"{i:04b}") for i in range(16)]
    facets = [[k for k, v in enumerate(cube) if v[axis] == side] for axis in range(4) for side in (0, 1)]
    P = validate(4, cube, facets)
    with pytest.raises(MethodUnsupported):
        surface_tensor(P, 1, 0, "series")
    T = surface_tensor(P, 0, 0, "definitional")
    assert T[((), ())] == 4  # 8 unit cubes over omega_1


def test_unknown_method():
    with pytest.raises(MethodUnsupported):
        surface_tensor(unit_square(), 1, 0, "monte-carlo")


def test_gf_series_check():
    tensors = gf_series_check(unit_square(), 0, 1)
    assert tensors[0][((), ())] == 2
    assert [tensors[1][((i,), ())] for i in range(2)] == [1, 1]
    oct_tensors = gf_series_check(octahedron(), 0, 2)
    assert oct_tensors[2] == surface_tensor(octahedron(), 2, 0)


@pytest.mark.parametrize("P", corpus(size=12))
def test_radical_grading(P):
    facet_radicands = set()
    for f in P.facets:
        facet_radicands |= {k for k, _ in ExactScalar.sqrt(f.norm_sq).terms}
    for s in range(4):
        for value in surface_tensor(P, 1, s).entries.values():
            if value.is_zero:
                continue
            assert value.pi_power == -((s + 1) // 2)
            radicands = {k for k, _ in value.terms}
            if s % 2:
                assert radicands == {1}
            else:
                assert radicands <= facet_radicands


@pytest.mark.parametrize("P", [P for P in corpus(size=10) if P.dim == 3] + [octahedron()])
def test_coordinate_permutation_equivariance(P):
    perm = (2, 0, 1)
    Q = validate(
        3,
        [tuple(v[perm[i]] for i in range(3)) for v in P.vertices],
        [list(f.vertex_ids) for f in P.facets],
    )
    for r, s in [(1, 1), (2, 1), (2, 2)]:
        T, U = surface_tensor(P, r, s), surface_tensor(Q, r, s)
        for (I, J), value in U.entries.items():
            assert T[(tuple(perm[i] for i in I), tuple(perm[j] for j in J))] == value


@pytest.mark.parametrize("P", corpus(size=8))
def test_methods_agree_on_small_corpus(P):
    for r in range(3):
        for s in range(3):
            ref = definitional_surface_tensor(P, r, s)
            for method in ("formula", "derivative", "series"):
                assert surface_tensor(P, r, s, method) == ref


# --- volume tensors ----------------------------------------------------------


def test_volume_tensor_fixtures():
    T = volume_tensor(rectangle(2, 3), 1)
    assert [T[((i,), ())] for i in range(2)] == [6, 9]
    T = volume_tensor(kite(), 1)
    assert [T[((i,), ())] for i in range(2)] == [15, Fraction(14, 3)]
    # ab/24 * [[4a^2, 3ab], [3ab, 4b^2]]
    assert as_matrix(volume_tensor(rectangle(2, 3), 2)) == [[4, Fraction(9, 2)], [Fraction(9, 2), 9]]


@pytest.mark.parametrize("P", [kite(), octahedron(), perturbed_cube()])
def test_volume_tensor_rank_zero(P):
    assert volume_tensor(P, 0)[((), ())] == P.volume


# --- containers --------------------------------------------------------------


def test_tensor_json_round_trip():
    T = surface_tensor(octahedron(), 2, 2)
    doc = T.to_json(with_float=True)
    keys = [(tuple(e["x_index"]), tuple(e["u_index"])) for e in doc["entries"]]
    assert keys == sorted(keys)
    assert BigradedTensor.from_json(doc) == T


def test_array_view():
    T = surface_tensor(unit_square(), 1, 1)
    arr = T.array()
    assert arr[0][1] == T[((0,), (1,))] and arr[1][0] == T[((1,), (0,))]
