from __future__ import annotations

import numpy as np
import pytest

from conelab.algebra import (
    CATALOG,
    Element,
    classical,
    complex_hermitian,
    direct_sum,
    is_positive,
    jordan_identity_residual,
    jordan_mul,
    leq,
    make_algebra,
    norm_inf,
    parse_kind,
    trace,
    trace_form,
)
from conelab.errors import AlgebraMismatch, InvalidKind, ParseError
from conelab.fields import field_matrix
from conelab.hypercomplex import hconj, hmul, hnorm
from conelab.logic import complete_frame, make_frame
from conelab.sampling import random_coords


def diag2(a, b):
    return make_algebra("herm_c:2").element([a, b, 0, 0])


def test_classical_three_shape():
    alg = make_algebra(classical(3))
    assert (alg.dim, alg.rank) == (3, 3)
    assert np.array_equal(alg.unit, [1.0, 1.0, 1.0])


def test_qubit_unit_is_identity_matrix():
    alg = make_algebra(complex_hermitian(2))
    assert (alg.dim, alg.rank) == (4, 2)
    assert np.allclose(field_matrix(alg, alg.unit), np.eye(2))


def test_direct_sum_dimensions_match_frame_count(rng):
    alg = make_algebra(direct_sum(complex_hermitian(2), classical(2)))
    assert (alg.dim, alg.rank) == (6, 4)
    full = complete_frame(make_frame(alg, []), rng)
    assert full.size == 4


@pytest.mark.parametrize("spec,dim,rank", [
    ("herm_r:4", 10, 4), ("herm_h:3", 15, 3), ("spin:7", 8, 2), ("albert", 27, 3),
    ("sum:spin:4+spin:4", 10, 4),
])
def test_family_dimensions(spec, dim, rank):
    alg = make_algebra(spec)
    assert (alg.dim, alg.rank) == (dim, rank)


def test_parse_kind_round_trip():
    for spec in CATALOG:
        assert str(parse_kind(spec)) == spec


@pytest.mark.parametrize("bad", ["bogus:3", "herm_c:1", "classical:0", "spin:x", "sum:", "herm_c", "albert:4"])
def test_parse_kind_rejects(bad):
    with pytest.raises((ParseError, InvalidKind)):
        parse_kind(bad)


def test_classical_product_is_componentwise():
    alg = make_algebra("classical:3")
    out = jordan_mul(alg.element([1, 2, 3]), alg.element([4, 5, 6]))
    assert np.array_equal(out.coords, [4, 10, 18])


def test_qubit_projector_is_idempotent():
    p = diag2(1, 0)
    assert np.allclose(jordan_mul(p, p).coords, p.coords)


def test_spin_unit_vector_squares_to_unit():
    alg = make_algebra("spin:3")
    u = np.array([0.6, 0.0, 0.8])
    x = alg.element(np.concatenate([[0.0], u]))
    assert np.allclose(jordan_mul(x, x).coords, [1, 0, 0, 0], atol=1e-15)


def test_spin_product_rule(rng):
    alg = make_algebra("spin:5")
    s, u, t, v = rng.normal(), rng.normal(size=5), rng.normal(), rng.normal(size=5)
    out = jordan_mul(alg.element(np.r_[s, u]), alg.element(np.r_[t, v]))
    assert np.allclose(out.coords, np.r_[s * t + u @ v, s * v + t * u], atol=1e-13)


@pytest.mark.parametrize("spec", ["herm_r:3", "herm_c:3", "herm_h:2"])
def test_matrix_product_matches_anticommutator(spec, rng):
    alg = make_algebra(spec)
    x, y = random_coords(alg, rng), random_coords(alg, rng)
    X, Y = field_matrix(alg, x), field_matrix(alg, y)
    assert np.allclose(field_matrix(alg, alg.mul(x, y)), 0.5 * (X @ Y + Y @ X), atol=1e-12)


def test_orthogonal_projectors_pair_to_zero():
    assert trace_form(diag2(1, 0), diag2(0, 1)) == 0.0


@pytest.mark.parametrize("spec", CATALOG)
def test_unit_pairs_to_rank(spec):
    alg = make_algebra(spec)
    assert trace_form(alg.one(), alg.one()) == pytest.approx(alg.rank, abs=1e-12)
    assert trace(alg.one()) == pytest.approx(alg.rank, abs=1e-12)


def test_spin_unit_norm():
    alg = make_algebra("spin:3")
    assert trace_form(alg.one(), alg.one()) == pytest.approx(2.0)


def test_positivity_and_norm_examples():
    x = diag2(3, -1)
    assert not is_positive(x)
    assert norm_inf(x) == pytest.approx(3.0)
    one = make_algebra("herm_c:2").one()
    assert is_positive(one) and norm_inf(one) == pytest.approx(1.0)
    alg = make_algebra("spin:4")
    u = np.array([0.0, 0.6, 0.0, 0.8])
    y = alg.element(np.r_[1.0, u])
    assert is_positive(y) and norm_inf(y) == pytest.approx(2.0)


def test_leq_is_cone_order():
    assert leq(diag2(0.2, 0.1), diag2(1, 1))
    assert not leq(diag2(1, 1), diag2(0.2, 3))


@pytest.mark.parametrize("spec", CATALOG)
def test_commutative_and_jordan_identity(spec, rng):
    alg = make_algebra(spec)
    x = random_coords(alg, rng, size=200)
    y = random_coords(alg, rng, size=200)
    assert np.max(np.abs(alg.mul(x, y) - alg.mul(y, x))) < 1e-12
    assert np.max(jordan_identity_residual(alg, x, y)) < 1e-9


@pytest.mark.parametrize("spec", CATALOG)
def test_gram_positive_definite(spec):
    g = make_algebra(spec).gram
    assert np.array_equal(g, g.T)
    assert np.linalg.eigvalsh(g).min() > 0


def test_octonions_alternative_and_normed(rng):
    x, y = rng.normal(size=(2, 500, 8))
    assert np.max(np.abs(hmul(hmul(x, x), y) - hmul(x, hmul(x, y)))) < 1e-12
    assert np.max(np.abs(hmul(hmul(y, x), x) - hmul(y, hmul(x, x)))) < 1e-12
    assert np.max(np.abs(hnorm(hmul(x, y)) - hnorm(x) * hnorm(y))) < 1e-12
    assert np.max(np.abs(hmul(x, hconj(x))[..., 1:])) < 1e-12


def test_octonions_not_associative(rng):
    x, y, z = rng.normal(size=(3, 8))
    assert np.linalg.norm(hmul(hmul(x, y), z) - hmul(x, hmul(y, z))) > 1e-3


def test_mixed_algebras_rejected():
    a = make_algebra("herm_c:2").one()
    b = make_algebra("classical:4").one()
    with pytest.raises(AlgebraMismatch):
        jordan_mul(a, b)
    with pytest.raises(AlgebraMismatch):
        Element(make_algebra("classical:3"), [1.0, 2.0])


def test_elements_are_immutable():
    e = make_algebra("classical:3").one()
    with pytest.raises(ValueError):
        e.coords[0] = 5.0
