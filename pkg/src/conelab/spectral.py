"""Spectral decomposition into a complete frame of orthogonal atoms.

Every element a of a rank-m algebra is written as a = sum_k s_k e_k with
s_1 >= ... >= s_m and e_1, ..., e_m pairwise orthogonal primitive idempotents
summing to the unit.  Zero eigenvalues keep their atoms, so the frame is
always complete.

Solvers per family: Jacobi on the real symmetric embedding for R, C and H
(each eigenvalue appears 1, 2 or 4 times there); closed form for spin
factors and classical algebras; factorwise for direct sums.  Albert elements
are shifted by T/3 and rescaled to unit norm; the cubic characteristic
polynomial l^3 - T l^2 + S l - N then has an isolated root whose Frobenius
covariant is well conditioned.  The remaining pair is resolved in closed form
inside the rank-2 Peirce subalgebra of its idempotent (a spin factor), which
avoids the sqrt(eps) accuracy of the cubic formula near a double root.

Eigenvalues closer than 1e-8 * max(1, |a|) form a cluster.  A cluster of
size k > 1 has a k-dimensional choice of atoms; it is split by diagonalizing
a seeded random element compressed to the cluster, and the result is flagged
``split=True``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import CLUSTER_TOL, Algebra, Element
from .errors import SpectralFailure
from .fields import REAL_MULTIPLICITY, field_matrix, field_to_coords, real_embed, real_unembed
from .jacobi import jacobi_eigh

DEFAULT_SEED = 0
_SPLIT_ATTEMPTS = 8


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    atoms: tuple[Element, ...]
    split: bool = False

    @property
    def n_nonzero(self) -> int:
        scale = max(1.0, float(np.max(np.abs(self.eigenvalues))))
        return int(np.sum(np.abs(self.eigenvalues) > CLUSTER_TOL * scale))

    def reconstruct(self) -> Element:
        alg = self.atoms[0].algebra
        coords = np.asarray(self.eigenvalues) @ np.stack([e.coords for e in self.atoms])
        return Element(alg, coords)

    def atom_matrix(self) -> np.ndarray:
        return np.stack([e.coords for e in self.atoms])


def _rng(rng, seed):
    if rng is None:
        return np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    return rng


def spectral_decompose(a: Element, rng: np.random.Generator | None = None, seed: int | None = None) -> SpectralDecomposition:
    """Decompose ``a``; ``rng``/``seed`` only matter for degenerate spectra."""
    alg = a.algebra
    s, atoms, split = decompose_coords(alg, a.coords, _rng(rng, seed))
    return SpectralDecomposition(s, tuple(Element(alg, e) for e in atoms), split)


def eigenvalues(a: Element) -> np.ndarray:
    return eigenvalues_coords(a.algebra, a.coords)


def _clusters(s: np.ndarray, tol: float) -> list[tuple[int, int]]:
    out = []
    start = 0
    for i in range(1, len(s) + 1):
        if i == len(s) or s[i - 1] - s[i] > tol:
            out.append((start, i))
            start = i
    return out


def _scale(s: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(s)))) if len(s) else 1.0


# --- eigenvalues only ------------------------------------------------------


def eigenvalues_coords(alg: Algebra, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    f = alg.family
    if f == "classical":
        return np.sort(x)[::-1].copy()
    if f == "spin":
        t, nv = x[0], np.linalg.norm(x[1:])
        return np.array([t + nv, t - nv])
    if f == "albert":
        return _albert_roots(alg, x)
    if f == "sum":
        parts = [eigenvalues_coords(sub, x[off:off + sub.dim]) for sub, off in alg.factors]
        return np.sort(np.concatenate(parts))[::-1].copy()
    r = REAL_MULTIPLICITY[alg.field_dim]
    w, _ = jacobi_eigh(real_embed(field_matrix(alg, x)), vectors=False)
    return w.reshape(alg.kind.n, r).mean(axis=1)


# --- full decomposition ----------------------------------------------------


def decompose_coords(alg: Algebra, x: np.ndarray, rng: np.random.Generator):
    """Return (eigenvalues, atom coordinate rows, split flag) for raw coordinates."""
    x = np.asarray(x, dtype=float)
    f = alg.family
    if f == "classical":
        order = np.argsort(-x, kind="stable")
        return x[order].copy(), np.eye(alg.dim)[order], False
    if f == "spin":
        return _decompose_spin(alg, x, rng)
    if f == "albert":
        return _decompose_albert(alg, x, rng)
    if f == "sum":
        return _decompose_sum(alg, x, rng)
    return _decompose_matrix(alg, x, rng)


def _decompose_spin(alg, x, rng):
    t, v = x[0], x[1:]
    nv = np.linalg.norm(v)
    s = np.array([t + nv, t - nv])
    split = False
    if nv > CLUSTER_TOL * _scale(s):
        u = v / nv
    else:
        u = rng.normal(size=v.shape)
        u /= np.linalg.norm(u)
        split = True
    atoms = np.zeros((2, alg.dim))
    atoms[:, 0] = 0.5
    atoms[0, 1:] = 0.5 * u
    atoms[1, 1:] = -0.5 * u
    return s, atoms, split


def _decompose_sum(alg, x, rng):
    vals, rows = [], []
    split = False
    for sub, off in alg.factors:
        s, atoms, sp = decompose_coords(sub, x[off:off + sub.dim], rng)
        split |= sp
        full = np.zeros((len(s), alg.dim))
        full[:, off:off + sub.dim] = atoms
        vals.append(s)
        rows.append(full)
    s = np.concatenate(vals)
    atoms = np.concatenate(rows)
    order = np.argsort(-s, kind="stable")
    return s[order], atoms[order], split


def _decompose_matrix(alg, x, rng):
    d, n = alg.field_dim, alg.kind.n
    r = REAL_MULTIPLICITY[d]
    w, vecs = jacobi_eigh(real_embed(field_matrix(alg, x)))
    s = w.reshape(n, r).mean(axis=1)
    tol = CLUSTER_TOL * _scale(s)
    atoms = []
    split = False
    for i0, i1 in _clusters(s, tol):
        vc = vecs[:, r * i0:r * i1]
        k = i1 - i0
        if k == 1:
            atoms.append(_real_projector_to_coords(alg, vc @ vc.T))
            continue
        split = True
        for wj in _split_matrix_cluster(alg, vc, k, r, rng):
            atoms.append(_real_projector_to_coords(alg, vc @ wj @ wj.T @ vc.T))
    return s, np.array(atoms), split


def _split_matrix_cluster(alg, vc, k, r, rng):
    for _ in range(_SPLIT_ATTEMPTS):
        probe = real_embed(field_matrix(alg, rng.normal(size=alg.dim)))
        w2, v2 = jacobi_eigh(vc.T @ probe @ vc)
        s2 = w2.reshape(k, r).mean(axis=1)
        if k == 1 or np.min(-np.diff(s2)) > 1e-6 * _scale(s2):
            return [v2[:, r * j:r * j + r] for j in range(k)]
    raise SpectralFailure("could not split a degenerate eigenvalue cluster")


def _real_projector_to_coords(alg, p_real):
    d = alg.field_dim
    m = real_unembed(p_real, complex_out=d != 1)
    return field_to_coords(alg, m)


# --- Albert algebra --------------------------------------------------------


def albert_invariants(alg: Algebra, x: np.ndarray) -> tuple[float, float, float]:
    """Trace T, quadratic invariant S and cubic norm N of an Albert element.

    With X = [[a, z, conj(y)], [conj(z), b, w], [y, conj(w), c]]
    (so w = X_12, y = conj(X_02), z = X_01):
    N = abc - a|w|^2 - b|y|^2 - c|z|^2 + 2 Re(w (y z)).
    """
    from .hypercomplex import hconj, hmul

    h = alg.to_matrix(x)
    a, b, c = h[0, 0, 0], h[1, 1, 0], h[2, 2, 0]
    z, w, y = h[0, 1], h[1, 2], hconj(h[0, 2])
    t = a + b + c
    tr2 = float(alg.trace(alg.mul(x, x)))
    s = 0.5 * (t * t - tr2)
    n = a * b * c - a * (w @ w) - b * (y @ y) - c * (z @ z) + 2.0 * hmul(w, hmul(y, z))[0]
    return float(t), float(s), float(n)


def _cubic_roots(t: float, s: float, n: float) -> np.ndarray:
    """Real roots of l^3 - t l^2 + s l - n (descending), polished by Newton steps."""
    q = (t * t - 3.0 * s) / 9.0
    r = (-2.0 * t ** 3 + 9.0 * t * s - 27.0 * n) / 54.0
    if q <= 0.0:
        roots = np.full(3, t / 3.0)
    else:
        sq = np.sqrt(q)
        theta = np.arccos(np.clip(r / sq ** 3, -1.0, 1.0))
        k = np.arange(3)
        roots = -2.0 * sq * np.cos((theta + 2.0 * np.pi * k) / 3.0) + t / 3.0
    for _ in range(2):
        f = ((roots - t) * roots + s) * roots - n
        df = (3.0 * roots - 2.0 * t) * roots + s
        step = np.where(np.abs(df) > 1e-6 * max(1.0, t * t), f / np.where(df == 0, 1.0, df), 0.0)
        roots = roots - step
    return np.sort(roots)[::-1].copy()


def _albert_roots(alg, x):
    return _decompose_albert(alg, x, np.random.default_rng(DEFAULT_SEED), atoms=False)[0]


def _lagrange_projectors(alg, x, values):
    """Frobenius covariants prod_{j != k}(x - v_j 1)/(v_k - v_j) for distinct values."""
    unit = alg.unit
    out = []
    for k, vk in enumerate(values):
        p = unit.copy()
        for j, vj in enumerate(values):
            if j != k:
                p = alg.mul(p, x - vj * unit) / (vk - vj)
        out.append(p)
    return out


def _decompose_albert(alg, x, rng, atoms=True):
    unit = alg.unit
    t = float(alg.trace(x))
    c = t / 3.0
    z = x - c * unit
    nz = np.sqrt(max(float(alg.pair(z, z)), 0.0))
    scale = max(1.0, abs(c) + nz)
    if nz <= CLUSTER_TOL * scale:
        vals = np.full(3, c)
        if not atoms:
            return vals, None, False
        return vals, np.array(_split_albert_cluster(alg, unit.copy(), 3, rng)), True
    # traceless, unit norm: roots sum to 0 with squares summing to 1, so the
    # most isolated root is at least ~0.6 away from the other two
    w = z / nz
    _, s_inv, n_inv = albert_invariants(alg, w)
    roots = _cubic_roots(0.0, s_inv, n_inv)
    iso = 0 if roots[0] - roots[1] >= roots[1] - roots[2] else 2
    lam = roots[iso]
    sigma = -lam
    prod = s_inv - lam * sigma
    e_iso = (alg.mul(w, w) - sigma * w + prod * unit) / (lam * lam - sigma * lam + prod)
    e_pair = unit - e_iso
    y = alg.mul(w, e_pair)
    mid = 0.5 * float(alg.trace(y))
    dev = y - mid * e_pair
    delta = np.sqrt(max(float(alg.pair(dev, dev)), 0.0) / 2.0)
    pair_vals = [mid + delta, mid - delta]
    vals = np.array([lam] + pair_vals if iso == 0 else pair_vals + [lam])
    vals = c + nz * vals
    if not atoms:
        return vals, None, False
    split = False
    if nz * delta > CLUSTER_TOL * scale:
        pair_atoms = [0.5 * (e_pair + dev / delta), 0.5 * (e_pair - dev / delta)]
    else:
        pair_atoms = _split_albert_cluster(alg, e_pair, 2, rng)
        split = True
    rows = [e_iso] + pair_atoms if iso == 0 else pair_atoms + [e_iso]
    return vals, np.array(rows), split


def _split_albert_cluster(alg, e, k, rng):
    """Split the rank-k idempotent e into atoms using a seeded compressed element."""
    comp = alg.unit - e
    for _ in range(_SPLIT_ATTEMPTS):
        b = rng.normal(size=alg.dim)
        eb = alg.mul(e, b)
        ueb = 2.0 * alg.mul(e, eb) - eb
        shift = -2.0 * (np.sqrt(max(alg.pair(ueb, ueb), 0.0)) + 1.0)
        vals, atoms, split = _decompose_albert(alg, ueb + shift * comp, rng)
        gaps_ok = k == 1 or np.min(-np.diff(vals[:k])) > 1e-6 * _scale(vals)
        if split or not gaps_ok:
            continue
        return list(atoms[:k])
    raise SpectralFailure("could not split a degenerate Albert eigenvalue cluster")
