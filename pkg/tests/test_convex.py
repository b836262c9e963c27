from __future__ import annotations

import json

import numpy as np
import pytest

from conelab.convex import (
    AffineMap,
    builtin_polytope,
    concavity_check,
    contains,
    distinguishability_matrix,
    dualize_automorphism,
    e_omega_function,
    e_omega_value,
    group_closed,
    load_polytope,
    make_polytope,
    perfectly_distinguishable,
    polytope_automorphisms,
    polytope_bit_symmetry,
    regular_polygon,
    simplex,
    square,
    star_star_check,
)
from conelab.errors import InvalidPolytope, NotAnAutomorphism, NotAVertex, ParseError, PointOutside, TooManyVertices

# recorded once from an LP feasibility oracle (scipy HiGHS) and frozen
PENTAGON_DISTINGUISHABLE = np.array([
    [0, 0, 1, 1, 0],
    [0, 0, 0, 1, 1],
    [1, 0, 0, 0, 1],
    [1, 1, 0, 0, 0],
    [0, 1, 1, 0, 0],
], dtype=bool)


def random_affine_image(P, rng):
    d = P.ambient_dim
    m = rng.normal(size=(d, d)) + 2 * np.eye(d)
    return make_polytope(P.vertices @ m.T + rng.normal(size=d), P.name + "-image")


# --- e_omega -----------------------------------------------------------------


def test_triangle_vertex_value():
    tri = builtin_polytope("triangle")
    assert e_omega_value(tri, 0, tri.vertices[1]) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", ["triangle", "square", "pentagon", "simplex:4"])
def test_value_one_at_omega(name):
    P = builtin_polytope(name)
    for i in range(P.n_vertices):
        assert e_omega_value(P, i, P.vertices[i]) == pytest.approx(1.0, abs=1e-12)


def test_square_center():
    sq = square()
    assert e_omega_value(sq, [1, 1], [0, 0]) == pytest.approx(0.5, abs=1e-12)
    a = e_omega_function(sq, [1, 1], [0, 0])
    vals = a.offset + sq.vertices @ a.gradient
    assert vals.min() >= -1e-12 and vals[0] == pytest.approx(1.0)
    assert a.offset == pytest.approx(0.5)


def test_membership_and_vertex_errors():
    sq = square()
    with pytest.raises(PointOutside):
        e_omega_value(sq, 0, [2.0, 0.0])
    with pytest.raises(NotAVertex):
        e_omega_value(sq, [0.5, 0.5], [0.0, 0.0])
    with pytest.raises(NotAVertex):
        e_omega_value(sq, 7, [0.0, 0.0])
    assert contains(sq, [0.3, -0.9]) and not contains(sq, [1.1, 0])


@pytest.mark.parametrize("name", ["square", "pentagon", "triangle"])
def test_values_in_unit_interval_and_concave(name, rng):
    P = builtin_polytope(name)
    for z in rng.dirichlet(np.ones(P.n_vertices), 20) @ P.vertices:
        v = e_omega_value(P, 0, z)
        assert -1e-12 <= v <= 1 + 1e-12
    assert concavity_check(P, 0, 30, rng) <= 1e-8


# --- (**) ----------------------------------------------------------------------


def test_triangle_passes():
    rep = star_star_check(builtin_polytope("triangle"))
    assert rep.passes
    for v in rep.vertices:
        assert v.affine and v.unique_one
        assert v.vertex_values == pytest.approx(list(np.eye(3)[v.vertex]), abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_simplex_barycentric(n, rng):
    P = simplex(n)
    rep = star_star_check(P, 16, rng)
    assert rep.passes
    for z in rng.dirichlet(np.ones(n), 5):
        for i in range(n):
            assert e_omega_value(P, i, z) == pytest.approx(z[i], abs=1e-8)


def test_square_fails_with_interior_gap():
    rep = star_star_check(square())
    assert not rep.passes
    for v in rep.vertices:
        assert not v.affine_fit
        assert v.centroid_value == pytest.approx(0.5, abs=1e-8)
        assert v.centroid_fit == pytest.approx(0.25, abs=1e-8)


def test_pentagon_fails():
    rep = star_star_check(builtin_polytope("pentagon"))
    assert not rep.passes
    assert all(not v.passes for v in rep.vertices)


@pytest.mark.parametrize("name", ["triangle", "square", "pentagon", "simplex:3"])
def test_verdict_is_affinely_invariant(name, rng):
    P = builtin_polytope(name)
    assert star_star_check(P, 8, rng).passes == star_star_check(random_affine_image(P, rng), 8, rng).passes


def test_report_serializes():
    json.dumps(star_star_check(square(), 4).to_dict())


# --- distinguishability ----------------------------------------------------------


def test_triangle_all_distinguishable():
    m = distinguishability_matrix(builtin_polytope("triangle"))
    assert np.array_equal(m, ~np.eye(3, dtype=bool))


def test_square_diagonal_witness():
    sq = square()
    d = perfectly_distinguishable(sq, [1, 1], [-1, -1])
    assert d
    vals = d.witness.offset + sq.vertices @ d.witness.gradient
    assert vals.min() >= -1e-9 and vals.max() <= 1 + 1e-9
    assert vals[0] == pytest.approx(1.0) and vals[2] == pytest.approx(0.0, abs=1e-12)


def test_pentagon_frozen_fixture():
    assert np.array_equal(distinguishability_matrix(builtin_polytope("pentagon")), PENTAGON_DISTINGUISHABLE)


def test_pentagon_fixture_against_highs():
    linprog = pytest.importorskip("scipy.optimize").linprog
    P = builtin_polytope("pentagon")
    design = np.hstack([np.ones((5, 1)), P.vertices])
    for i in range(5):
        for j in range(5):
            if i == j:
                continue
            res = linprog(np.zeros(3), A_ub=np.vstack([-design, design]), b_ub=np.r_[np.zeros(5), np.ones(5)],
                          A_eq=design[[i, j]], b_eq=[1, 0], bounds=[(None, None)] * 3, method="highs")
            assert (res.status == 0) == PENTAGON_DISTINGUISHABLE[i, j]


# --- affine symmetries ------------------------------------------------------------


@pytest.mark.parametrize("name,order", [("triangle", 6), ("square", 8), ("pentagon", 10), ("simplex:4", 24),
                                        ("simplex:1", 1)])
def test_group_orders(name, order):
    maps = polytope_automorphisms(builtin_polytope(name))
    assert len(maps) == order
    assert group_closed(maps)


def test_hexagon_order():
    assert len(polytope_automorphisms(regular_polygon(6))) == 12


def test_too_many_vertices():
    with pytest.raises(TooManyVertices):
        polytope_automorphisms(regular_polygon(17))


def test_dual_of_identity():
    sq = square()
    ident = next(m for m in polytope_automorphisms(sq) if m.perm == (0, 1, 2, 3))
    assert np.allclose(dualize_automorphism(sq, ident), np.eye(3))


def test_dual_of_quarter_turn():
    sq = square()
    rot = next(m for m in polytope_automorphisms(sq) if m.perm == (1, 2, 3, 0))
    ts = dualize_automorphism(sq, rot)
    # a(x, y) = x  becomes  x -> a(T x) = -y for T the +90 degree turn
    assert np.allclose(ts @ [0, 1, 0], [0, 0, -1])
    assert np.allclose(ts @ [1, 0, 0], [1, 0, 0])


def test_dual_of_triangle_transposition():
    tri = builtin_polytope("triangle")
    T = next(m for m in polytope_automorphisms(tri) if m.perm == (1, 0, 2))
    b0 = e_omega_function(tri, 0, tri.vertices[0]).coefficients()
    image = dualize_automorphism(tri, T) @ b0
    vals = image[0] + tri.vertices @ image[1:]
    # b0 o T is the barycentric coordinate of vertex 1
    assert np.allclose(vals, [0, 1, 0], atol=1e-10)


def test_dual_is_antihomomorphism(rng):
    P = builtin_polytope("pentagon")
    maps = polytope_automorphisms(P)
    for _ in range(20):
        a, b = (maps[i] for i in rng.integers(len(maps), size=2))
        lhs = dualize_automorphism(P, a.compose(b))
        rhs = dualize_automorphism(P, b) @ dualize_automorphism(P, a)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_dual_pairing_definition(rng):
    P = builtin_polytope("pentagon")
    for T in polytope_automorphisms(P):
        ts = dualize_automorphism(P, T)
        coef = rng.normal(size=3)
        x = rng.dirichlet(np.ones(5)) @ P.vertices
        lhs = (ts @ coef)[0] + x @ (ts @ coef)[1:]
        rhs = coef[0] + T.apply_hull(x) @ coef[1:]
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_dual_rejects_non_symmetry():
    sq = square()
    bad = AffineMap(2 * np.eye(2), np.zeros(2), (0, 1, 2, 3))
    with pytest.raises(NotAnAutomorphism):
        dualize_automorphism(sq, bad)


# --- bit symmetry ---------------------------------------------------------------


@pytest.mark.parametrize("name,holds", [("triangle", True), ("pentagon", True), ("simplex:4", True),
                                        ("square", False)])
def test_polytope_bit_symmetry(name, holds):
    v = polytope_bit_symmetry(builtin_polytope(name))
    assert v.holds is holds
    if not holds:
        assert v.obstruction["reason"] == "NoAffineTransporter"


def test_scalene_triangle_bit_symmetric(rng):
    assert polytope_bit_symmetry(random_affine_image(builtin_polytope("triangle"), rng)).holds


# --- construction and loading -------------------------------------------------------


def test_invalid_polytopes():
    with pytest.raises(InvalidPolytope):
        make_polytope([[0, 0], [1, 0], [0, 1], [0.2, 0.2]])
    with pytest.raises(InvalidPolytope):
        make_polytope([[0, 0], [1, 0], [1, 0]])


def test_load_polytope(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [0, 1]]}))
    assert load_polytope(str(path)).n_vertices == 3
    assert load_polytope("simplex:3").n_vertices == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_polytope(str(bad))
    with pytest.raises(ParseError):
        load_polytope("hexagon")
