"""Cyclic Jacobi eigensolver for dense real symmetric matrices.

Rotations are applied in round-robin (tournament) order: each round annihilates
n/2 disjoint off-diagonal pairs at once, and n-1 rounds make one sweep that
visits every pair exactly once.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import SpectralFailure


@lru_cache(maxsize=64)
def _schedule(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def jacobi_eigh(s: np.ndarray, vectors: bool = True, max_sweeps: int = 60):
    """Eigen-decompose a real symmetric matrix.

    Returns ``(w, V)`` with eigenvalues sorted in descending order and the
    matching orthonormal eigenvectors as columns of ``V`` (``V`` is None when
    ``vectors`` is false).
    """
    a = np.array(s, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpectralFailure(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SpectralFailure("matrix has non-finite entries")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(n) if vectors else None
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return _sorted(np.diag(a).copy(), v)
    rounds = _schedule(n)
    eye = np.eye(n)
    prev_off = np.inf
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-15 * scale or (off <= 1e-12 * scale and off >= prev_off):
            return _sorted(np.diag(a).copy(), v)
        prev_off = off
        for p, q in rounds:
            apq = a[p, q]
            zero = np.abs(apq) <= 1e-200 * scale
            if zero.all():
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * np.where(zero, 1.0, apq))
            t = np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[zero] = 0.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            sn = t * c
            rot = eye.copy()
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = sn
            rot[q, p] = -sn
            a = rot.T @ a @ rot
            a[p, q] = 0.0
            a[q, p] = 0.0
            if vectors:
                v = v @ rot
    raise SpectralFailure(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def _sorted(w, v):
    order = np.argsort(-w, kind="stable")
    return w[order], (v[:, order] if v is not None else None)
