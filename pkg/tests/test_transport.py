from __future__ import annotations

import numpy as np
import pytest

from conelab.algebra import CATALOG, make_algebra
from conelab.errors import NoTransporter, SizeMismatch
from conelab.fields import field_matrix, field_to_coords
from conelab.logic import make_frame
from conelab.sampling import random_atom_coords, random_frame_coords
from conelab.transport import exchange_automorphism, peirce_symmetry, transport_atom, transport_frame

SIMPLE = [s for s in CATALOG if not s.startswith("sum")]


def frame(alg, rows):
    return make_frame(alg, [alg.element(r) for r in rows])


@pytest.mark.parametrize("spec", SIMPLE)
@pytest.mark.parametrize("method", ["auto", "symmetry"])
def test_frame_transport_simple(spec, method, rng):
    alg = make_algebra(spec)
    for k in sorted({1, 2, alg.rank}):
        f1 = frame(alg, random_frame_coords(alg, rng, k))
        f2 = frame(alg, random_frame_coords(alg, rng, k))
        res = transport_frame(f1, f2, rng, method)
        assert res.residual < 1e-8
        U = res.automorphism
        for a, b in zip(f1.atoms, f2.atoms):
            assert np.allclose(U.apply(a.coords), b.coords, atol=1e-8)


def test_transporters_keep_transition_values(rng):
    alg = make_algebra("herm_h:3")
    f1 = frame(alg, random_frame_coords(alg, rng, 2))
    f2 = frame(alg, random_frame_coords(alg, rng, 2))
    U = transport_frame(f1, f2, rng).automorphism
    for _ in range(50):
        p, q = random_atom_coords(alg, rng), random_atom_coords(alg, rng)
        assert abs(alg.pair(p, q) - alg.pair(U.apply(p), U.apply(q))) < 1e-9


def test_classical_frame_permutation():
    alg = make_algebra("classical:4")
    e = np.eye(4)
    res = transport_frame(frame(alg, e[[0, 1]]), frame(alg, e[[2, 0]]))
    U = res.automorphism
    assert np.allclose(U.apply(e[0]), e[2]) and np.allclose(U.apply(e[1]), e[0])
    assert set(np.unique(U.matrix)) <= {0.0, 1.0}


def test_qubit_transport_from_eigenvectors():
    alg = make_algebra("herm_c:2")
    psi = np.array([1.0, 0.0])
    phi = np.array([1.0, 1j]) / np.sqrt(2)
    p = alg.element(field_to_coords(alg, np.outer(psi, psi.conj())))
    q = alg.element(field_to_coords(alg, np.outer(phi, phi.conj())))
    U = transport_atom(p, q)
    assert np.allclose(U(p).coords, q.coords, atol=1e-12)
    # U comes from a unitary: it keeps the spectrum of any element
    x = alg.element([0.3, -0.2, 0.5, 0.1])
    assert np.allclose(np.linalg.eigvalsh(field_matrix(alg, U(x).coords)),
                       np.linalg.eigvalsh(field_matrix(alg, x.coords)), atol=1e-12)


@pytest.mark.parametrize("spec", CATALOG)
def test_exchange_on_connected_atoms(spec, rng):
    alg = make_algebra(spec)
    if alg.family == "sum":
        # both atoms in the first factor
        f = random_frame_coords(alg, rng)
        blk = [r for r in f if np.linalg.norm(r[: alg.factors[0][0].dim]) > 0.5][:2]
        if len(blk) < 2:
            pytest.skip("factor of rank one")
        p, q = alg.element(blk[0]), alg.element(blk[1])
    else:
        p, q = (alg.element(random_atom_coords(alg, rng)) for _ in range(2))
    U = exchange_automorphism(p, q, rng)
    assert np.allclose(U(p).coords, q.coords, atol=1e-8)
    assert np.allclose(U(q).coords, p.coords, atol=1e-8)


@pytest.mark.parametrize("spec", ["herm_c:3", "albert", "herm_h:2", "herm_r:3"])
def test_peirce_symmetry_swaps(spec, rng):
    alg = make_algebra(spec)
    for p, q in [tuple(random_atom_coords(alg, rng) for _ in range(2)), tuple(random_frame_coords(alg, rng, 2))]:
        s = peirce_symmetry(alg, p, q, rng)
        assert np.allclose(alg.mul(s, s), alg.unit, atol=1e-10)
        ls = lambda x: alg.mul(s, x)  # noqa: E731
        swap = lambda x: 2 * ls(ls(x)) - x  # noqa: E731
        assert np.allclose(swap(p), q, atol=1e-9) and np.allclose(swap(q), p, atol=1e-9)


def test_peirce_symmetry_absent_across_factors(rng):
    alg = make_algebra("sum:herm_c:2+herm_c:2")
    p = np.r_[1.0, 0, 0, 0, np.zeros(4)]
    q = np.r_[np.zeros(4), 1.0, 0, 0, 0]
    assert peirce_symmetry(alg, p, q, rng) is None


def test_cross_factor_atoms_need_swap(rng):
    alg = make_algebra("sum:herm_c:2+herm_c:2")
    p = alg.element(np.r_[1.0, 0, 0, 0, np.zeros(4)])
    q = alg.element(np.r_[np.zeros(4), 0, 1.0, 0, 0])
    U = transport_atom(p, q, rng)
    assert np.allclose(U(p).coords, q.coords, atol=1e-10)


def test_signature_mismatch(rng):
    alg = make_algebra("sum:herm_c:2+herm_c:2")
    z = np.zeros(4)
    inside = frame(alg, [np.r_[1.0, 0, 0, 0, z], np.r_[0, 1.0, 0, 0, z]])
    across = frame(alg, [np.r_[1.0, 0, 0, 0, z], np.r_[z, 1.0, 0, 0, 0]])
    with pytest.raises(NoTransporter) as err:
        transport_frame(inside, across, rng)
    assert err.value.obstruction == "FactorSignatureMismatch"
    assert err.value.witness


def test_non_isomorphic_factors(rng):
    alg = make_algebra("sum:herm_c:2+classical:2")
    p = alg.element(np.r_[1.0, 0, 0, 0, 0, 0])
    q = alg.element(np.r_[0, 0, 0, 0, 1.0, 0])
    with pytest.raises(NoTransporter) as err:
        transport_atom(p, q, rng)
    assert err.value.obstruction == "NonIsomorphicFactors"
    with pytest.raises(NoTransporter):
        exchange_automorphism(p, q, rng)


def test_size_mismatch(rng):
    alg = make_algebra("herm_c:3")
    with pytest.raises(SizeMismatch):
        transport_frame(frame(alg, random_frame_coords(alg, rng, 1)), frame(alg, random_frame_coords(alg, rng, 2)))
