"""States, atom states and transition probabilities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import CLUSTER_TOL, Algebra, Element, _same
from .errors import InvalidState
from .logic import Frame, check_atom
from .spectral import eigenvalues


@dataclass(frozen=True, eq=False)
class State:
    """The state mu(x) = tr(riesz o x)."""

    algebra: Algebra
    riesz: Element

    def __call__(self, x: Element) -> float:
        _same(self.riesz, x)
        return float(self.algebra.pair(self.riesz.coords, x.coords))

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return self.algebra.pair(self.riesz.coords, coords)


def make_state(riesz: Element, validate: bool = True, tol: float = CLUSTER_TOL) -> State:
    if validate:
        tr = float(riesz.algebra.trace(riesz.coords))
        if abs(tr - 1.0) > tol:
            raise InvalidState(f"mu(1) = {tr:.12g}", witness={"riesz": riesz.coords.tolist()})
        lo = float(eigenvalues(riesz)[-1])
        if lo < -tol:
            raise InvalidState(
                f"riesz vector has eigenvalue {lo:.3e} < 0", witness={"riesz": riesz.coords.tolist()}
            )
    return State(riesz.algebra, riesz)


def atom_state(e: Element) -> State:
    """The unique state with value 1 at the atom e; its riesz vector is e."""
    check_atom(e)
    return State(e.algebra, e)


def transition_probability(p: Element, q: Element, validate: bool = True) -> float:
    _same(p, q)
    if validate:
        check_atom(p)
        check_atom(q)
    return float(p.algebra.pair(p.coords, q.coords))


def symmetry_defect(p: Element, q: Element) -> float:
    return abs(transition_probability(p, q) - transition_probability(q, p))


def transition_defect_scan(alg: Algebra, samples: int, rng: np.random.Generator) -> dict:
    """Max |P_p(q) - P_q(p)| and the range of P over sampled atom pairs.

    P_p(q) is the atom state of p evaluated through the trace-form Gram
    matrix, while P_q(p) is tr(q o p) through the structure constants, so
    the two sides take different floating-point paths.
    """
    from .sampling import random_atom_coords

    worst, lo, hi = 0.0, np.inf, -np.inf
    for _ in range(samples):
        p = random_atom_coords(alg, rng)
        q = random_atom_coords(alg, rng)
        pq = float(alg.pair(p, q))
        qp = float(alg.trace(alg.mul(q, p)))
        worst = max(worst, abs(pq - qp))
        lo, hi = min(lo, pq, qp), max(hi, pq, qp)
    return {"samples": samples, "max_defect": worst, "min_value": float(lo), "max_value": float(hi)}


def invariance_check(U, e: Element, a: Element) -> float:
    """|P_e(a) - P_{Ue}(Ua)| for a validated automorphism U."""
    _same(e, a)
    check_atom(e)
    U.ensure_valid()
    ue, ua = U(e), U(a)
    return abs(float(e.algebra.pair(e.coords, a.coords)) - float(e.algebra.pair(ue.coords, ua.coords)))


@dataclass(frozen=True)
class TransitionTable:
    rows: np.ndarray
    cols: np.ndarray
    matrix: np.ndarray

    @property
    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def to_dict(self) -> dict:
        return {
            "rows": self.rows.tolist(),
            "cols": self.cols.tolist(),
            "matrix": self.matrix.tolist(),
            "row_sums": self.row_sums.tolist(),
        }


def transition_table(rows: Frame, cols: Frame) -> TransitionTable:
    alg = rows.algebra
    if cols.algebra.kind != alg.kind:
        from .errors import AlgebraMismatch

        raise AlgebraMismatch(f"{alg.kind} vs {cols.algebra.kind}")
    r, c = rows.coords(), cols.coords()
    return TransitionTable(r, c, r @ alg.gram @ c.T)


# --- closed-form uniqueness certificates -----------------------------------


def atom_state_unique_classical(alg: Algebra, i: int) -> float:
    """Distance from the only state of Classical(n) with mu(e_i) = 1 to tr(e_i o .).

    States of Classical(n) are probability vectors; mu(e_i) = 1 forces the
    vertex delta_i, so the certificate compares that vertex with the riesz form.
    """
    n = alg.rank
    vertex = np.eye(n)[i]
    e = np.eye(n)[i]
    return float(np.max(np.abs(alg.gram @ e - vertex)))


def atom_state_unique_spin(alg: Algebra, u: np.ndarray) -> float:
    """Same certificate for a spin factor.

    States are mu(t, v) = t + w.v with |w| <= 1; mu(1/2, u/2) = 1 forces
    w = u by the equality case of Cauchy-Schwarz.  Compare with the riesz form.
    """
    u = np.asarray(u, dtype=float) / np.linalg.norm(u)
    e = np.concatenate([[0.5], 0.5 * u])
    functional = alg.gram @ e
    forced = np.concatenate([[1.0], u])
    return float(np.max(np.abs(functional - forced)))
