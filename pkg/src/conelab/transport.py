"""Transporters: automorphisms carrying atoms and frames onto each other.

Matrix algebras use unitaries built from eigenvector bases, spin factors use
reflections, classical algebras permutations.  Albert (and, as a cross-check,
every simple algebra) uses products of Peirce symmetries: for atoms p, q with
c = tr(p o q), the map U_s(x) = 2 s o (s o x) - x with

* s = 1 - 2f, f the atom of p + q at eigenvalue 1 - sqrt(c), when c > 0,
* s = 1 - p - q + x, x in the Peirce space of (p, q) with x o x = p + q,
  when p and q are orthogonal,

is an automorphism that swaps p and q.  Direct sums are handled blockwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Element, _same
from .automorphisms import (
    Automorphism,
    block_of,
    blocks,
    factorwise_automorphism,
    identity_automorphism,
    permutation_automorphism,
    spin_rotation,
    symmetry_automorphism,
    unitary_automorphism,
)
from .errors import NoTransporter, SizeMismatch
from .fields import atom_vector, complete_basis, field_matrix, project_to_line
from .logic import Frame, check_atom
from .spectral import DEFAULT_SEED, decompose_coords

TRANSPORT_TOL = 1e-8
_ORTHO_CUT = 1e-12
_EQUAL_CUT = 1e-12


@dataclass(frozen=True, eq=False)
class TransporterResult:
    automorphism: Automorphism
    residual: float
    method: str


def _rng(rng):
    return np.random.default_rng(DEFAULT_SEED) if rng is None else rng


# --- Peirce symmetries -----------------------------------------------------


def peirce_symmetry(alg: Algebra, p: np.ndarray, q: np.ndarray, rng: np.random.Generator) -> np.ndarray | None:
    """A symmetry s with U_s p = q and U_s q = p; None if p and q share no Peirce space."""
    c = float(alg.pair(p, q))
    if c >= 1.0 - _EQUAL_CUT:
        return alg.unit.copy()
    if c > _ORTHO_CUT:
        vals, atoms, _ = decompose_coords(alg, p + q, rng)
        k = int(np.argmin(np.abs(vals - (1.0 - np.sqrt(c)))))
        return alg.unit - 2.0 * atoms[k]
    from .sampling import random_coords

    for _ in range(8):
        b = random_coords(alg, rng)
        x0 = 4.0 * alg.mul(p, alg.mul(q, b))
        n2 = float(alg.pair(x0, x0))
        if n2 > 1e-6 * float(alg.pair(b, b)):
            return alg.unit - p - q + x0 / np.sqrt(n2 / 2.0)
    return None


def _symmetry_frame_transport(alg: Algebra, src: np.ndarray, dst: np.ndarray, rng) -> np.ndarray | None:
    m = np.eye(alg.dim)
    for p, q in zip(src, dst):
        cur = m @ p
        if np.max(np.abs(cur - q)) <= 1e-13:
            continue
        s = peirce_symmetry(alg, cur, q, rng)
        if s is None:
            return None
        m = symmetry_automorphism(alg, s).matrix @ m
    return m


# --- per-family transporters on a simple block -----------------------------


def _unitary_frame(alg: Algebra, src: np.ndarray, dst: np.ndarray) -> Automorphism:
    d, n = alg.field_dim, alg.kind.n
    vs = [atom_vector(d, field_matrix(alg, p)) for p in src]
    ws = [atom_vector(d, field_matrix(alg, q)) for q in dst]
    v = complete_basis(d, vs, n)
    w = complete_basis(d, ws, n)
    return unitary_automorphism(alg, w @ v.conj().T)


def _householder(alg: Algebra, p: np.ndarray, q: np.ndarray) -> Automorphism:
    """A unitary reflection mapping the line of p onto the line of q and back."""
    d, n = alg.field_dim, alg.kind.n
    v = atom_vector(d, field_matrix(alg, p))
    w = atom_vector(d, field_matrix(alg, q))
    wp = project_to_line(d, w, v)
    nw = np.linalg.norm(wp)
    wp = w if nw < 1e-12 else wp / nw
    r = v - wp
    size = v.shape[0]
    if np.linalg.norm(r) < 1e-14:
        return unitary_automorphism(alg, np.eye(size))
    r = r / np.linalg.norm(r)
    h = np.eye(size) - 2.0 * np.outer(r, r.conj())
    if d == 4:
        from .fields import jmap

        jr = jmap(r)
        h = h - 2.0 * np.outer(jr, jr.conj())
    return unitary_automorphism(alg, h)


def _spin_vector(p: np.ndarray) -> np.ndarray:
    u = p[1:]
    return u / np.linalg.norm(u)


def _spin_reflection(alg: Algebra, u: np.ndarray, w: np.ndarray) -> Automorphism:
    r = u - w
    k = u.shape[0]
    if np.linalg.norm(r) < 1e-14:
        return spin_rotation(alg, np.eye(k))
    r = r / np.linalg.norm(r)
    return spin_rotation(alg, np.eye(k) - 2.0 * np.outer(r, r))


def _simple_frame(alg: Algebra, src: np.ndarray, dst: np.ndarray, rng, method: str) -> Automorphism:
    f = alg.family
    if len(src) == 0:
        return identity_automorphism(alg)
    if f == "classical":
        s = [int(np.argmax(p)) for p in src]
        t = [int(np.argmax(q)) for q in dst]
        rest_s = [i for i in range(alg.rank) if i not in s]
        rest_t = [i for i in range(alg.rank) if i not in t]
        perm = [0] * alg.rank
        for i, j in zip(s + rest_s, t + rest_t):
            perm[i] = j
        return permutation_automorphism(alg, perm)
    if method == "symmetry" or f == "albert":
        m = _symmetry_frame_transport(alg, src, dst, rng)
        if m is None:
            raise NoTransporter("no Peirce symmetry joins the atoms", "Unsupported")
        return Automorphism(alg, "explicit", m, {"construction": "peirce_symmetries"})
    if f == "spin":
        # a frame has at most two atoms, and the second is fixed by the first
        return _spin_reflection(alg, _spin_vector(src[0]), _spin_vector(dst[0]))
    return _unitary_frame(alg, src, dst)


def _simple_exchange(alg: Algebra, p: np.ndarray, q: np.ndarray, rng, method: str) -> Automorphism:
    f = alg.family
    if f == "classical":
        i, j = int(np.argmax(p)), int(np.argmax(q))
        perm = list(range(alg.rank))
        perm[i], perm[j] = j, i
        return permutation_automorphism(alg, perm)
    if method == "symmetry" or f == "albert":
        s = peirce_symmetry(alg, p, q, rng)
        if s is None:
            raise NoTransporter("no Peirce symmetry joins the atoms", "Unsupported")
        return symmetry_automorphism(alg, s)
    if f == "spin":
        return _spin_reflection(alg, _spin_vector(p), _spin_vector(q))
    return _householder(alg, p, q)


# --- block bookkeeping for direct sums -------------------------------------


def _block_assignment(alg: Algebra, rows: np.ndarray) -> list[int]:
    out = []
    for x in rows:
        b = block_of(alg, x)
        if b is None:
            raise NoTransporter("atom is spread over several factors", "Unsupported")
        out.append(b)
    return out


def _block_permutation(alg: Algebra, src_rows, dst_rows, witness) -> list[int]:
    bl = blocks(alg)
    sb = _block_assignment(alg, src_rows)
    tb = _block_assignment(alg, dst_rows)
    forward: dict[int, int] = {}
    backward: dict[int, int] = {}
    for i, j in zip(sb, tb):
        if bl[i].kind != bl[j].kind:
            raise NoTransporter(
                f"a {bl[i].kind} atom cannot be mapped into a {bl[j].kind} factor",
                "NonIsomorphicFactors",
                witness,
            )
        if forward.get(i, j) != j or backward.get(j, i) != i:
            raise NoTransporter(
                "frames distribute their atoms over the factors differently",
                "FactorSignatureMismatch",
                witness,
            )
        forward[i] = j
        backward[j] = i
    perm = [-1] * len(bl)
    for i, j in forward.items():
        perm[i] = j
    free_targets = [j for j in range(len(bl)) if j not in backward]
    for i in range(len(bl)):
        if perm[i] >= 0:
            continue
        j = next(t for t in free_targets if bl[t].kind == bl[i].kind)
        free_targets.remove(j)
        perm[i] = j
    return perm


def _sum_transport(alg, src, dst, rng, method, exchange=False) -> Automorphism:
    witness = {"frame_a": np.asarray(src).tolist(), "frame_b": np.asarray(dst).tolist()}
    bl = blocks(alg)
    if exchange:
        p, q = src[0], dst[0]
        i = _block_assignment(alg, [p])[0]
        j = _block_assignment(alg, [q])[0]
        if bl[i].kind != bl[j].kind:
            raise NoTransporter(
                f"a {bl[i].kind} atom cannot be exchanged with a {bl[j].kind} atom",
                "NonIsomorphicFactors",
                witness,
            )
        maps: list = [None] * len(bl)
        perm = list(range(len(bl)))
        sub = bl[i].algebra
        ps, qs = p[bl[i].slice()], q[bl[j].slice()]
        if i == j:
            if sub.family != "classical":
                maps[i] = _simple_exchange(sub, ps, qs, rng, method).matrix
        else:
            perm[i], perm[j] = j, i
            if sub.family != "classical":
                t = _simple_frame(sub, ps[None], qs[None], rng, method)
                maps[i] = t.matrix
                maps[j] = t.inverse().matrix
        return factorwise_automorphism(alg, maps, perm)
    perm = _block_permutation(alg, src, dst, witness)
    sb = _block_assignment(alg, src)
    maps = [None] * len(bl)
    for i, b in enumerate(bl):
        if b.algebra.family == "classical":
            continue
        t = bl[perm[i]]
        idx = [k for k, s in enumerate(sb) if s == i]
        s_rows = np.array([src[k][b.slice()] for k in idx]).reshape(len(idx), b.algebra.dim)
        d_rows = np.array([dst[k][t.slice()] for k in idx]).reshape(len(idx), b.algebra.dim)
        maps[i] = _simple_frame(b.algebra, s_rows, d_rows, rng, method).matrix
    return factorwise_automorphism(alg, maps, perm)


# --- public operations -----------------------------------------------------


def _residual(U: Automorphism, src, dst) -> float:
    if len(src) == 0:
        return 0.0
    return float(np.max(np.abs(U.apply(np.asarray(src)) - np.asarray(dst))))


def _check(U: Automorphism, res: float, what: str, witness) -> None:
    if res > TRANSPORT_TOL:
        raise NoTransporter(f"{what} residual {res:.3e} exceeds tolerance", "Unsupported", witness)


def _frame_rows(frame) -> np.ndarray:
    if isinstance(frame, Frame):
        return frame.coords()
    return np.array([e.coords if isinstance(e, Element) else e for e in frame], dtype=float)


def transport_frame(f1: Frame, f2: Frame, rng: np.random.Generator | None = None, method: str = "auto") -> TransporterResult:
    """An automorphism U with U(f1[i]) = f2[i] for every i."""
    alg = f1.algebra
    if f2.algebra.kind != alg.kind:
        _same(f1.algebra.one(), f2.algebra.one())
    if f1.size != f2.size:
        raise SizeMismatch(f"frames of sizes {f1.size} and {f2.size}")
    rng = _rng(rng)
    src, dst = _frame_rows(f1), _frame_rows(f2)
    if alg.family == "sum" or (alg.family == "classical" and method == "blocks"):
        U = _sum_transport(alg, src, dst, rng, method)
        used = "factorwise"
    else:
        U = _simple_frame(alg, src, dst, rng, method)
        used = "peirce_symmetries" if U.params.get("construction") else U.kind
    res = _residual(U, src, dst)
    _check(U, res, "frame transport", {"frame_a": src.tolist(), "frame_b": dst.tolist()})
    return TransporterResult(U, res, used)


def transport_atom(p: Element, q: Element, rng: np.random.Generator | None = None, method: str = "auto") -> Automorphism:
    _same(p, q)
    check_atom(p)
    check_atom(q)
    alg = p.algebra
    return transport_frame(Frame(alg, (p,)), Frame(alg, (q,)), rng, method).automorphism


def exchange_automorphism(p: Element, q: Element, rng: np.random.Generator | None = None, method: str = "auto") -> Automorphism:
    """An automorphism with Up = q and Uq = p."""
    _same(p, q)
    check_atom(p)
    check_atom(q)
    alg = p.algebra
    rng = _rng(rng)
    if alg.family == "sum":
        U = _sum_transport(alg, p.coords[None], q.coords[None], rng, method, exchange=True)
    else:
        U = _simple_exchange(alg, p.coords, q.coords, rng, method)
    res = max(_residual(U, [p.coords], [q.coords]), _residual(U, [q.coords], [p.coords]))
    _check(U, res, "exchange", {"p": p.coords.tolist(), "q": q.coords.tolist()})
    return U
