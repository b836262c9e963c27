from __future__ import annotations

import numpy as np
import pytest

from conelab.algebra import CATALOG, make_algebra
from conelab.automorphisms import (
    Automorphism,
    all_block_permutations,
    blocks,
    complex_conjugation,
    explicit_automorphism,
    factorwise_automorphism,
    haar_sample,
    identity_automorphism,
    permutation_automorphism,
    spin_rotation,
    symmetry_automorphism,
    unitary_automorphism,
    validation_report,
)
from conelab.errors import InvalidAutomorphism
from conelab.fields import field_matrix
from conelab.sampling import haar_orthogonal, haar_symplectic, haar_unitary, random_coords
from conelab.spectral import eigenvalues_coords


@pytest.mark.parametrize("spec", CATALOG)
def test_haar_samples_are_valid(spec, rng):
    alg = make_algebra(spec)
    for _ in range(3):
        rep = haar_sample(alg, rng).validate(samples=50, rng=rng)
        assert rep["unit_residual"] < 1e-10
        assert rep["jordan_basis_residual"] < 1e-8
        assert rep["spectral_residual"] < 1e-8


def test_classical_haar_is_permutation(rng):
    alg = make_algebra("classical:4")
    seen = set()
    for _ in range(200):
        m = haar_sample(alg, rng).matrix
        assert set(np.unique(m)) <= {0.0, 1.0}
        assert np.array_equal(m.sum(axis=0), np.ones(4))
        seen.add(tuple(np.argmax(m, axis=0)))
    assert len(seen) == 24


def test_haar_unitary_columns(rng):
    u = haar_unitary(3, rng)
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-13)
    o = haar_orthogonal(5, rng)
    assert np.allclose(o.T @ o, np.eye(5), atol=1e-13)
    s = haar_symplectic(2, rng)
    assert np.allclose(s.conj().T @ s, np.eye(4), atol=1e-13)


def test_haar_unitary_phase_statistics():
    """With the phase fix, the mean of u[0,0] vanishes and E|u00|^2 = 1/n."""
    rng = np.random.default_rng(11)
    vals = np.array([haar_unitary(3, rng)[0, 0] for _ in range(4000)])
    assert abs(vals.mean()) < 0.03
    assert abs(np.mean(np.abs(vals) ** 2) - 1 / 3) < 0.02


def test_unitary_conjugation_matches_matrices(rng):
    alg = make_algebra("herm_c:3")
    u = haar_unitary(3, rng)
    U = unitary_automorphism(alg, u)
    x = random_coords(alg, rng)
    assert np.allclose(field_matrix(alg, U.apply(x)), u @ field_matrix(alg, x) @ u.conj().T, atol=1e-12)


def test_spectral_invariance_and_inverse(rng):
    alg = make_algebra("herm_h:3")
    U = haar_sample(alg, rng)
    x = random_coords(alg, rng)
    assert np.allclose(eigenvalues_coords(alg, U.apply(x)), eigenvalues_coords(alg, x), atol=1e-10)
    assert np.allclose(U.inverse().apply(U.apply(x)), x, atol=1e-12)
    assert np.allclose(U.compose(U.inverse()).matrix, np.eye(alg.dim), atol=1e-12)


def test_explicit_constructors_validate(rng):
    alg = make_algebra("herm_c:2")
    complex_conjugation(alg).validate()
    spin = make_algebra("spin:5")
    spin_rotation(spin, haar_orthogonal(5, rng)).validate()
    identity_automorphism(alg).validate()
    s = np.zeros(4)
    s[:2] = [1, -1]
    symmetry_automorphism(alg, s).validate()


def test_non_automorphisms_rejected(rng):
    alg = make_algebra("herm_c:2")
    scaled = np.eye(4)
    scaled[2, 2] = 2.0
    rep = validation_report(Automorphism(alg, "explicit", scaled))
    assert not rep["valid"]
    with pytest.raises(InvalidAutomorphism):
        explicit_automorphism(alg, scaled)
    with pytest.raises(InvalidAutomorphism):
        Automorphism(alg, "mystery", np.eye(4))
    # conjugation by diag(1, -1) negates the off-diagonal entry
    flip = np.diag([1.0, 1.0, -1.0, -1.0])
    explicit_automorphism(alg, flip)
    bad = np.eye(4)
    bad[0, 1] = 0.1
    assert not validation_report(Automorphism(alg, "explicit", bad))["valid"]


def test_albert_rejects_complex_unitary(rng):
    with pytest.raises(InvalidAutomorphism):
        unitary_automorphism(make_algebra("albert"), haar_unitary(3, rng))


def test_block_structure():
    alg = make_algebra("sum:herm_c:2+classical:2")
    b = blocks(alg)
    assert [blk.kind for blk in b] == [b[0].kind, b[1].kind, b[1].kind]
    assert [blk.offset for blk in b] == [0, 4, 5]
    perms = list(all_block_permutations(alg))
    assert len(perms) == 2


def test_factor_swap(rng):
    alg = make_algebra("sum:spin:4+spin:4")
    b = blocks(alg)
    swap = factorwise_automorphism(alg, [np.eye(5), np.eye(5)], [1, 0])
    swap.validate()
    x = random_coords(alg, rng)
    assert np.allclose(swap.apply(x), np.r_[x[5:], x[:5]])
    assert len(b) == 2


def test_permutation_action():
    alg = make_algebra("classical:3")
    U = permutation_automorphism(alg, [2, 0, 1])
    assert np.array_equal(U.apply(np.eye(3)[0]), np.eye(3)[2])
