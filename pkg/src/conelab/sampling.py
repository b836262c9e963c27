"""Random elements, atoms, frames and Haar-distributed matrices.

Random elements are Gaussian and isotropic for the trace form, so their
distribution is invariant under every automorphism; atoms and frames taken
from them (or from Haar unitaries) are uniformly distributed.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .algebra import Algebra
from .fields import field_to_coords, line_projector


@lru_cache(maxsize=None)
def _isotropic_factor(kind) -> np.ndarray:
    from .algebra import make_algebra

    alg = make_algebra(kind)
    w, v = np.linalg.eigh(alg.gram)
    return v @ np.diag(w ** -0.5) @ v.T


def random_coords(alg: Algebra, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    shape = (alg.dim,) if size is None else (size, alg.dim)
    return rng.standard_normal(shape) @ _isotropic_factor(alg.kind).T


def random_positive_coords(alg: Algebra, rng, size=None) -> np.ndarray:
    x = random_coords(alg, rng, size)
    return alg.mul(x, x)


def random_state_coords(alg: Algebra, rng, size=None) -> np.ndarray:
    a = random_positive_coords(alg, rng, size)
    return a / alg.trace(a)[..., None] if size is not None else a / alg.trace(a)


# --- Haar matrices ---------------------------------------------------------


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar quaternionic unitary, returned as its complex 2n x 2n image.

    Quaternionic Gram-Schmidt on a Gaussian quaternion matrix; equivariance
    under left multiplication makes the result Haar distributed.
    """
    from .fields import complete_basis

    cols = []
    for _ in range(n):
        cols.append(rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n))
    # complete_basis orthonormalizes in order and appends partners
    return complete_basis(4, cols, n)


def haar_field_unitary(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return haar_orthogonal(n, rng)
    if d == 2:
        return haar_unitary(n, rng)
    if d == 4:
        return haar_symplectic(n, rng)
    raise ValueError(f"no unitary group sampler for field dimension {d}")


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.standard_normal(n)
    return u / np.linalg.norm(u)


# --- atoms and frames ------------------------------------------------------


def random_frame_coords(alg: Algebra, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Rows of a uniformly random frame; complete (size m) unless ``size`` is given."""
    m = alg.rank
    k = m if size is None else size
    f = alg.family
    if f == "classical":
        rows = np.eye(m)[rng.permutation(m)]
    elif f == "spin":
        u = random_unit_vector(alg.kind.n, rng)
        rows = np.zeros((2, alg.dim))
        rows[:, 0] = 0.5
        rows[0, 1:] = 0.5 * u
        rows[1, 1:] = -0.5 * u
    elif f == "albert":
        from .spectral import decompose_coords

        _, rows, _ = decompose_coords(alg, random_coords(alg, rng), rng)
        rows = rows[rng.permutation(3)]
    elif f == "sum":
        parts = []
        for sub, off in alg.factors:
            sub_rows = random_frame_coords(sub, rng)
            full = np.zeros((sub.rank, alg.dim))
            full[:, off:off + sub.dim] = sub_rows
            parts.append(full)
        rows = np.concatenate(parts)[rng.permutation(m)]
    else:
        d, n = alg.field_dim, alg.kind.n
        u = haar_field_unitary(d, n, rng)
        rows = np.array([field_to_coords(alg, line_projector(d, u[:, i])) for i in range(n)])
    return rows[:k]


def random_atom_coords(alg: Algebra, rng: np.random.Generator) -> np.ndarray:
    f = alg.family
    if f in ("herm_r", "herm_c", "herm_h"):
        d, n = alg.field_dim, alg.kind.n
        space = 2 * n if d == 4 else n
        if d == 1:
            u = rng.standard_normal(space)
        else:
            u = rng.standard_normal(space) + 1j * rng.standard_normal(space)
        return field_to_coords(alg, line_projector(d, u))
    if f == "sum":
        weights = np.array([sub.rank for sub, _ in alg.factors], dtype=float)
        i = rng.choice(len(alg.factors), p=weights / weights.sum())
        sub, off = alg.factors[i]
        out = np.zeros(alg.dim)
        out[off:off + sub.dim] = random_atom_coords(sub, rng)
        return out
    return random_frame_coords(alg, rng, 1)[0]
