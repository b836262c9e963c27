"""Associative matrix representations of the R, C and H Hermitian families.

The working representation ("field matrix") is

* R: the real symmetric n x n matrix,
* C: the complex Hermitian n x n matrix,
* H: the complex 2n x 2n image [[Z1, Z2], [-conj Z2, conj Z1]] of Q = Z1 + Z2 j.

Vectors live in the same space (R^n, C^n, C^2n).  For H the antiunitary
``jmap`` pairs every vector with its partner; a quaternionic line is the
complex span of {u, jmap(u)}.  Rank-one projectors and unitaries built from
such pairs stay inside the image of quaternion matrices.
"""

from __future__ import annotations

import numpy as np

from .algebra import Algebra, coords_to_hyper, hyper_to_coords

# copies of each eigenvalue in the real symmetric embedding
REAL_MULTIPLICITY = {1: 1, 2: 2, 4: 4}


def field_matrix(alg: Algebra, x: np.ndarray) -> np.ndarray:
    d, n = alg.field_dim, alg.kind.n
    h = coords_to_hyper(n, d, x)
    if d == 1:
        return h[..., 0]
    if d == 2:
        return h[..., 0] + 1j * h[..., 1]
    if d == 4:
        z1 = h[..., 0] + 1j * h[..., 1]
        z2 = h[..., 2] + 1j * h[..., 3]
        top = np.concatenate([z1, z2], axis=-1)
        bottom = np.concatenate([-z2.conj(), z1.conj()], axis=-1)
        return np.concatenate([top, bottom], axis=-2)
    raise ValueError(f"{alg.kind} has no associative matrix representation")


def field_to_coords(alg: Algebra, m: np.ndarray) -> np.ndarray:
    d, n = alg.field_dim, alg.kind.n
    if d == 1:
        h = np.real(m)[..., None]
    elif d == 2:
        h = np.stack([m.real, m.imag], axis=-1)
    elif d == 4:
        c11, c12 = m[..., :n, :n], m[..., :n, n:]
        c21, c22 = m[..., n:, :n], m[..., n:, n:]
        z1 = 0.5 * (c11 + c22.conj())
        z2 = 0.5 * (c12 - c21.conj())
        h = np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)
    else:
        raise ValueError(f"{alg.kind} has no associative matrix representation")
    return hyper_to_coords(n, d, h)


def real_embed(m: np.ndarray) -> np.ndarray:
    """Real symmetric image of a real/complex Hermitian matrix."""
    if not np.iscomplexobj(m):
        return np.asarray(m, dtype=float)
    a, b = m.real, m.imag
    return np.block([[a, -b], [b, a]])


def real_unembed(s: np.ndarray, complex_out: bool) -> np.ndarray:
    if not complex_out:
        return s
    k = s.shape[0] // 2
    return 0.5 * (s[:k, :k] + s[k:, k:]) + 0.5j * (s[k:, :k] - s[:k, k:])


def jmap(u: np.ndarray) -> np.ndarray:
    k = u.shape[0] // 2
    return np.concatenate([-u[k:].conj(), u[:k].conj()])


def line_basis(d: int, u: np.ndarray) -> list[np.ndarray]:
    """Vectors spanning the field line through u (over the underlying complex/real space)."""
    return [u, jmap(u)] if d == 4 else [u]


def line_projector(d: int, u: np.ndarray) -> np.ndarray:
    u = u / np.linalg.norm(u)
    return sum(np.outer(w, w.conj()) for w in line_basis(d, u))


def atom_vector(d: int, p: np.ndarray) -> np.ndarray:
    """A unit vector whose field line is the range of the rank-one projector p."""
    col = int(np.argmax(np.linalg.norm(p, axis=0)))
    u = p[:, col]
    return u / np.linalg.norm(u)


def project_to_line(d: int, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of v onto the field line of the unit vector w."""
    return sum(b * np.vdot(b, v) for b in line_basis(d, w))


def complete_basis(d: int, vectors: list[np.ndarray], size: int) -> np.ndarray:
    """Extend field-orthonormal vectors to a unitary in the field representation.

    ``size`` is n (the matrix order).  For H the result is
    [u_1 .. u_n | j u_1 .. j u_n], the complex image of a quaternionic unitary.
    """
    space = 2 * size if d == 4 else size
    dtype = float if d == 1 else complex
    found: list[np.ndarray] = []
    span: list[np.ndarray] = []
    candidates = list(vectors) + [np.eye(space, dtype=dtype)[i] for i in range(size)]
    for c in candidates:
        x = np.array(c, dtype=dtype)
        for _ in range(2):
            for b in span:
                x = x - b * np.vdot(b, x)
        nrm = np.linalg.norm(x)
        if nrm < 1e-8:
            if len(found) < len(vectors):
                raise ValueError("vectors are not field-orthonormal")
            continue
        x = x / nrm
        found.append(x)
        span.extend(line_basis(d, x))
        if len(found) == size:
            break
    cols = found + ([jmap(u) for u in found] if d == 4 else [])
    return np.stack(cols, axis=1)


def conjugate(u: np.ndarray, m: np.ndarray) -> np.ndarray:
    return u @ m @ u.conj().T
