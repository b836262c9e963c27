"""Property-based checks on hypothesis-generated coordinates."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conelab.algebra import jordan_identity_residual, make_algebra
from conelab.logic import orthogonality_tests
from conelab.lp import LPProblem, lp_solve
from conelab.spectral import decompose_coords, eigenvalues_coords

SPECS = ["classical:4", "herm_r:3", "herm_c:3", "herm_h:2", "spin:5", "albert", "sum:herm_c:2+classical:2"]
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def element(draw):
    spec = draw(st.sampled_from(SPECS))
    alg = make_algebra(spec)
    return alg, draw(arrays(float, alg.dim, elements=finite))


@settings(max_examples=150, deadline=None)
@given(element())
def test_spectral_reconstruction(data):
    alg, x = data
    s, atoms, _ = decompose_coords(alg, x, np.random.default_rng(0))
    scale = max(1.0, float(np.abs(s).max()))
    assert np.max(np.abs(s @ atoms - x)) < 1e-8 * scale
    assert np.allclose(atoms @ alg.gram @ atoms.T, np.eye(alg.rank), atol=1e-8)
    assert np.all(np.diff(s) <= 1e-12 * scale)


@settings(max_examples=100, deadline=None)
@given(element(), st.integers(0, 2 ** 32 - 1))
def test_jordan_identity(data, seed):
    alg, x = data
    y = np.random.default_rng(seed).normal(size=alg.dim)
    if np.linalg.norm(x) > 0:
        assert jordan_identity_residual(alg, x[None], y[None])[0] < 1e-9


@settings(max_examples=100, deadline=None)
@given(element())
def test_spectrum_shift_and_scale(data):
    alg, x = data
    s = eigenvalues_coords(alg, x)
    scale = max(1.0, float(np.abs(s).max()))
    assert np.allclose(eigenvalues_coords(alg, x + 2.5 * alg.unit), s + 2.5, atol=1e-8 * scale)
    assert np.allclose(eigenvalues_coords(alg, -x), -s[::-1], atol=1e-8 * scale)
    assert float(x @ alg.trace_vec) == pytest.approx(float(s.sum()), abs=1e-8 * scale * alg.rank)


@settings(max_examples=100, deadline=None)
@given(element())
def test_spectral_atoms_pass_orthogonality(data):
    alg, x = data
    _, atoms, _ = decompose_coords(alg, x, np.random.default_rng(1))
    for i in range(len(atoms)):
        for j in range(len(atoms)):
            rep = orthogonality_tests(alg, atoms[i], atoms[j])
            assert rep.consistent
            assert rep.orthogonal == (i != j)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_lp_box_optimum(n, mi, seed):
    """Over a box intersected with random half-spaces through an interior point."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=n)
    A = np.vstack([rng.normal(size=(mi, n)), np.eye(n), -np.eye(n)])
    b = np.r_[np.abs(rng.normal(size=mi)) + 0.1, np.ones(2 * n)]
    sol = lp_solve(LPProblem(c, A, b))
    assert sol.optimal
    assert np.all(A @ sol.x <= b + 1e-8)
    # no sampled feasible point does better
    pts = rng.uniform(-1, 1, size=(2000, n))
    feas = pts[np.all(pts @ A.T <= b, axis=1)]
    if len(feas):
        assert sol.value <= float((feas @ c).min()) + 1e-9
