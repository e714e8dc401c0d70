from fractions import Fraction

import gmpy2
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conebits.combinatorics import (
    FVector,
    HVector,
    RngConfig,
    binomial,
    cone_f,
    cone_h,
    dumps_vector,
    f_of_graph,
    f_to_h,
    h_to_f,
    is_symmetrical,
    iterate_cone,
    loads_vector,
    palindromic_h,
    random_graph,
    read_vector,
    simplex_dual_f,
    write_vector,
)
from oracles import cone_faces, f_from_faces, h_by_formula, sample_edges


# --- types -----------------------------------------------------------------


def test_fvector_rejects_negative_and_empty():
    with pytest.raises(ValueError):
        FVector([])
    with pytest.raises(ValueError):
        FVector([3, -1])


def test_h_to_f_requires_unit_head():
    # h_0 is f_-1, the empty face
    with pytest.raises(ValueError, match="f_-1"):
        h_to_f(HVector([2, 1]))


def test_fvector_dimension():
    assert FVector([4, 6, 4]).dimension == 2


# --- binomial and cones ------------------------------------------------------


@pytest.mark.parametrize("n,k", [(0, 0), (5, 2), (10, 10), (3752, 1876), (4000, 17)])
def test_binomial_matches_gmpy2(n, k):
    assert binomial(n, k) == int(gmpy2.comb(n, k))


@pytest.mark.parametrize("n,k", [(5, -1), (5, 6), (0, 1)])
def test_binomial_zero_outside(n, k):
    assert binomial(n, k) == 0


def test_central_binomial_digit_count():
    # log10 C(3752, 1876) ~ 3752 log10 2 - 0.5 log10(pi * 1876) ~ 1127.5
    digits = len(str(binomial(3752, 1876)))
    assert abs(digits - 1128) <= 2


def test_cone_recursion_by_hand():
    assert cone_f(FVector([4, 6, 4])).components == (5, 10, 10, 4)
    assert iterate_cone(FVector([3, 3]), 0).components == (3, 3)
    assert iterate_cone(FVector([3, 3]), 2).components == (5, 10, 9, 3)


def test_iterate_cone_negative():
    with pytest.raises(ValueError):
        iterate_cone(FVector([1]), -1)


@pytest.mark.parametrize("j", [0, 1, 3])
def test_cone_h_appends_zeros(j):
    f = FVector([5, 7, 3])
    assert f_to_h(iterate_cone(f, j)) == cone_h(f_to_h(f), j)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("n", [1, 4, 8])
def test_cone_matches_face_enumeration(n, p):
    for seed in range(8):
        edges = sample_edges(n, p, seed)
        g = random_graph(n, Fraction(p), RngConfig(seed))
        assert g.num_edges == len(edges)
        for j in range(5):
            expect = f_from_faces(cone_faces(range(n), edges, j))
            assert list(iterate_cone(f_of_graph(g), j)) == expect


# --- simplex duals -----------------------------------------------------------


def test_simplex_dual_small():
    assert simplex_dual_f(4).components == (4, 6, 4)
    assert simplex_dual_f(2).components == (2,)


def test_simplex_dual_too_short():
    with pytest.raises(ValueError):
        simplex_dual_f(1)


@pytest.mark.parametrize("L", [2, 3, 10, 57, 300])
def test_simplex_dual_symmetric(L):
    f = simplex_dual_f(L)
    assert is_symmetrical(f)
    assert f[0] == f[-1] == L
    assert len(f) == L - 1


@pytest.mark.parametrize("L", [2, 5, 40, 300])
def test_simplex_dual_h_is_all_ones(L):
    assert f_to_h(simplex_dual_f(L)).components == (1,) * L


# --- f <-> h -------------------------------------------------------------------


def test_square_boundary():
    assert f_to_h(FVector([4, 4])).components == (1, 2, 1)
    assert h_to_f(HVector([1, 2, 1])).components == (4, 4)


def test_octahedron_boundary():
    assert f_to_h(FVector([6, 12, 8])).components == (1, 3, 3, 1)


@pytest.mark.parametrize("seed", range(5))
def test_f_to_h_matches_coefficient_formula(seed):
    rng = np.random.default_rng(seed)
    f = [int(x) for x in rng.integers(0, 10**6, size=int(rng.integers(1, 30)))]
    assert list(f_to_h(FVector(f))) == h_by_formula(f)


vectors = st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=64).filter(lambda v: v[0] > 0)


@settings(max_examples=300, deadline=None)
@given(vectors)
def test_h_to_f_inverts_f_to_h(comps):
    f = FVector(comps)
    assert h_to_f(f_to_h(f)) == f


def test_h_to_f_needs_two_components():
    with pytest.raises(ValueError):
        h_to_f(HVector([1]))


def test_palindromic_h():
    h = palindromic_h(5, 3)
    assert h.components == (1, 3, 3, 3, 1)
    f = h_to_f(h)
    assert f_to_h(f) == h
    with pytest.raises(ValueError):
        palindromic_h(5, 0)


# --- graphs ----------------------------------------------------------------------


def test_random_graph_extremes():
    assert random_graph(5, 1, RngConfig(1)).num_edges == 10
    assert random_graph(5, 0, RngConfig(1)).num_edges == 0
    assert f_of_graph(random_graph(5, 0, RngConfig(1))).components == (5,)


def test_random_graph_frozen():
    g = random_graph(100, Fraction(1, 2), RngConfig(42))
    assert g.num_edges == 2523


def test_random_graph_validation():
    with pytest.raises(ValueError):
        random_graph(0, 0.5, RngConfig(1))
    with pytest.raises(ValueError):
        random_graph(4, 1.5, RngConfig(1))
    with pytest.raises(ValueError):
        RngConfig(1, algorithm="mt19937")


# --- text format -----------------------------------------------------------------


@pytest.mark.parametrize("v", [FVector([4, 6, 4]), HVector([1, 2, 1]), FVector([2**200])])
def test_text_round_trip(v, tmp_path):
    assert loads_vector(dumps_vector(v)) == v
    path = write_vector(v, tmp_path / "v.txt")
    assert read_vector(path) == v


@pytest.mark.parametrize(
    "text",
    ["", "gvector 1\n1\n", "fvector 2\n1\n", "fvector 1\nx\n", "fvector 2\n0\n1\n"],
)
def test_text_rejects_malformed(text):
    with pytest.raises(ValueError):
        loads_vector(text)


def test_read_vector_reports_path(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("fvector 3\n1\n")
    with pytest.raises(ValueError, match="bad.txt"):
        read_vector(p)


# --- closed forms ------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=10).filter(lambda v: v[0] > 0), st.integers(0, 12))
def test_cone_closed_forms(comps, j):
    f = FVector(comps)
    fj = iterate_cone(f, j)
    assert fj[0] == f[0] + j
    assert fj[1] == f[1] + j * f[0] + j * (j - 1) // 2
    assert fj[-1] == f[-1]


@pytest.mark.parametrize("L", [2, 7, 64, 200])
def test_vertex_sum_and_hockey_stick(L):
    f = h_to_f(HVector([1] * L))
    assert f[0] == L
    n = L - 1
    assert all(f[n - 1 - k] == binomial(n + 1, k + 1) for k in range(n))
