"""Idempotents, atoms, orthogonality and frames.

Orthogonality of two atoms is tested three ways: e1 + e2 <= 1, P_e1(e2) = 0
and P_e2(e1) = 0.  For atoms with c = tr(e1 o e2) the smallest eigenvalue of
1 - e1 - e2 is exactly -sqrt(c), so the order test uses the threshold
sqrt(tol) while the two transition tests use tol; with that pairing the three
predicates coincide on exact atoms and any disagreement is a numerical fault.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import CLUSTER_TOL, Algebra, Element, _same
from .errors import InconsistentOrthogonality, InvalidFrame, NotAnAtom, NotAnEffect, NotAnIdempotent
from .sampling import random_frame_coords, random_positive_coords
from .spectral import DEFAULT_SEED, eigenvalues, eigenvalues_coords, spectral_decompose

ORTHO_TOL = 1e-8


# --- idempotents and atoms -------------------------------------------------


def idempotent_residual(p: Element) -> float:
    alg = p.algebra
    r = alg.mul(p.coords, p.coords) - p.coords
    return float(np.sqrt(max(alg.pair(r, r), 0.0)))


def is_idempotent(p: Element, tol: float = CLUSTER_TOL) -> bool:
    return idempotent_residual(p) <= tol


def is_atom(e: Element, tol: float = CLUSTER_TOL) -> bool:
    return is_idempotent(e, tol) and abs(float(e.algebra.trace(e.coords)) - 1.0) <= tol


def check_idempotent(p: Element, tol: float = CLUSTER_TOL) -> Element:
    res = idempotent_residual(p)
    if res > tol:
        raise NotAnIdempotent(f"|p o p - p| = {res:.3e}", witness={"coords": p.coords.tolist()})
    return p


def check_atom(e: Element, tol: float = CLUSTER_TOL) -> Element:
    """Raise NotAnAtom unless e o e = e and tr(e) = 1 (so its spectrum is (1, 0, ..., 0))."""
    res = idempotent_residual(e)
    tr = float(e.algebra.trace(e.coords))
    if res > tol or abs(tr - 1.0) > tol:
        raise NotAnAtom(
            f"idempotent residual {res:.3e}, trace {tr:.12g}",
            witness={"coords": e.coords.tolist()},
        )
    return e


def is_effect_extreme(a: Element, tol: float = CLUSTER_TOL) -> bool:
    """True iff the effect a (0 <= a <= 1) is an idempotent."""
    s = eigenvalues(a)
    if s[0] > 1.0 + tol or s[-1] < -tol:
        raise NotAnEffect(
            f"spectrum [{s[-1]:.6g}, {s[0]:.6g}] leaves [0, 1]",
            witness={"eigenvalues": s.tolist()},
        )
    return bool(np.all(np.minimum(np.abs(s), np.abs(s - 1.0)) <= tol))


def orthocomplement(p: Element) -> Element:
    check_idempotent(p)
    return p.algebra.one() - p


# --- orthogonality ---------------------------------------------------------


@dataclass(frozen=True)
class OrthogonalityReport:
    sum_below_unit: bool
    first_vanishes: bool
    second_vanishes: bool
    min_eigenvalue: float
    p12: float
    p21: float

    @property
    def orthogonal(self) -> bool:
        return self.sum_below_unit

    @property
    def consistent(self) -> bool:
        return self.sum_below_unit == self.first_vanishes == self.second_vanishes


def orthogonality_tests(alg: Algebra, x: np.ndarray, y: np.ndarray, tol: float = ORTHO_TOL) -> OrthogonalityReport:
    rest = alg.unit - x - y
    lo = float(eigenvalues_coords(alg, rest)[-1])
    p12 = float(alg.pair(x, y))
    p21 = float(alg.pair(y, x))
    return OrthogonalityReport(
        sum_below_unit=lo >= -np.sqrt(tol),
        first_vanishes=abs(p12) <= tol,
        second_vanishes=abs(p21) <= tol,
        min_eigenvalue=lo,
        p12=p12,
        p21=p21,
    )


def are_orthogonal(e1: Element, e2: Element, tol: float = ORTHO_TOL) -> OrthogonalityReport:
    _same(e1, e2)
    check_atom(e1)
    check_atom(e2)
    rep = orthogonality_tests(e1.algebra, e1.coords, e2.coords, tol)
    if not rep.consistent:
        raise InconsistentOrthogonality(
            "orthogonality tests disagree",
            witness={"e1": e1.coords.tolist(), "e2": e2.coords.tolist(), "report": rep.__dict__},
        )
    return rep


# --- frames ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Frame:
    algebra: Algebra
    atoms: tuple[Element, ...]

    @property
    def size(self) -> int:
        return len(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __getitem__(self, i):
        return self.atoms[i]

    def coords(self) -> np.ndarray:
        if not self.atoms:
            return np.zeros((0, self.algebra.dim))
        return np.stack([e.coords for e in self.atoms])

    def total(self) -> Element:
        return Element(self.algebra, self.coords().sum(axis=0))


def make_frame(alg: Algebra, atoms, validate: bool = True) -> Frame:
    """Build a frame from Elements or coordinate rows."""
    els = tuple(a if isinstance(a, Element) else Element(alg, a) for a in atoms)
    frame = Frame(alg, els)
    if validate:
        validate_frame(frame)
    return frame


def validate_frame(frame: Frame) -> None:
    alg = frame.algebra
    if frame.size > alg.rank:
        raise InvalidFrame(f"{frame.size} atoms exceed rank {alg.rank}")
    for e in frame.atoms:
        if e.algebra.kind != alg.kind:
            raise InvalidFrame(f"atom from {e.algebra.kind} in a frame of {alg.kind}")
        try:
            check_atom(e)
        except NotAnAtom as err:
            raise InvalidFrame(str(err), witness=err.witness) from err
    for i in range(frame.size):
        for j in range(i + 1, frame.size):
            if not are_orthogonal(frame.atoms[i], frame.atoms[j]).orthogonal:
                raise InvalidFrame(f"atoms {i} and {j} are not orthogonal", witness={"pair": [i, j]})
    if frame.size and np.linalg.matrix_rank(frame.coords(), tol=1e-6) < frame.size:
        raise InvalidFrame("frame atoms are linearly dependent")


def complete_frame(partial: Frame, rng: np.random.Generator | None = None) -> Frame:
    """Extend a frame to size m with atoms of the complement 1 - sum(partial)."""
    alg = partial.algebra
    rng = np.random.default_rng(DEFAULT_SEED) if rng is None else rng
    k = partial.size
    m = alg.rank
    if k == m:
        return partial
    rest = alg.one() - partial.total()
    dec = spectral_decompose(rest, rng=rng)
    extra = dec.atoms[: m - k]
    return Frame(alg, partial.atoms + tuple(extra))


def information_capacity(alg: Algebra) -> int:
    return alg.rank


def greedy_maximal_frame(alg: Algebra, rng: np.random.Generator) -> Frame:
    """Grow a frame one atom at a time until no atom fits under the remainder.

    Each new atom is the top spectral atom of U_r(b) for a random positive b,
    where r is the idempotent left over; it lies under r and is therefore
    orthogonal to every atom chosen so far.
    """
    r = alg.unit.copy()
    atoms = []
    while alg.trace(r) > 0.5:
        b = random_positive_coords(alg, rng)
        rb = alg.mul(r, b)
        urb = 2.0 * alg.mul(r, rb) - rb
        dec = spectral_decompose(Element(alg, urb), rng=rng)
        e = dec.atoms[0]
        atoms.append(e)
        r = r - e.coords
        if len(atoms) > alg.dim:
            break
    return Frame(alg, tuple(atoms))


def frame_rigidity_check(alg: Algebra, samples: int, rng: np.random.Generator) -> dict:
    """Sizes of maximal frames from completion and from greedy growth."""
    sizes = []
    worst_sum = 0.0
    for i in range(samples):
        if i % 2 == 0:
            k = int(rng.integers(0, alg.rank + 1))
            partial = make_frame(alg, random_frame_coords(alg, rng, k), validate=False)
            frame = complete_frame(partial, rng)
        else:
            frame = greedy_maximal_frame(alg, rng)
        sizes.append(frame.size)
        worst_sum = max(worst_sum, float(np.max(np.abs(frame.total().coords - alg.unit))))
    return {
        "samples": samples,
        "rank": alg.rank,
        "sizes": sorted(set(sizes)),
        "all_size_m": all(s == alg.rank for s in sizes),
        "max_unit_residual": worst_sum,
    }


# --- lattice operations ----------------------------------------------------


def lattice_meet(p: Element, q: Element, rng: np.random.Generator | None = None) -> Element:
    """Spectral projection of (p + q)/2 onto its eigenvalue-1 cluster."""
    _same(p, q)
    check_idempotent(p)
    check_idempotent(q)
    alg = p.algebra
    dec = spectral_decompose((p + q) * 0.5, rng=rng)
    coords = np.zeros(alg.dim)
    for s, e in zip(dec.eigenvalues, dec.atoms):
        if s >= 1.0 - CLUSTER_TOL:
            coords = coords + e.coords
    return Element(alg, coords)


def lattice_join(p: Element, q: Element, rng: np.random.Generator | None = None) -> Element:
    return orthocomplement(lattice_meet(orthocomplement(p), orthocomplement(q), rng))


def orthogonality_check(alg: Algebra, samples: int, rng: np.random.Generator, tol: float = ORTHO_TOL) -> dict:
    """Run the three tests on sampled pairs: frame pairs, random pairs and equal pairs."""
    from .sampling import random_atom_coords

    counts = {"pairs": 0, "orthogonal": 0, "non_orthogonal": 0, "disagreements": 0}
    witness = None
    for i in range(samples):
        mode = i % 3
        if mode == 0 and alg.rank >= 2:
            f = random_frame_coords(alg, rng, 2)
            x, y = f[0], f[1]
        elif mode == 2:
            x = random_atom_coords(alg, rng)
            y = x
        else:
            x = random_atom_coords(alg, rng)
            y = random_atom_coords(alg, rng)
        rep = orthogonality_tests(alg, x, y, tol)
        counts["pairs"] += 1
        counts["orthogonal" if rep.orthogonal else "non_orthogonal"] += 1
        if not rep.consistent:
            counts["disagreements"] += 1
            if witness is None:
                witness = {"e1": x.tolist(), "e2": y.tolist()}
    counts["witness"] = witness
    return counts


def orthomodularity_check(alg: Algebra, samples: int, rng: np.random.Generator, tol: float = 1e-8) -> dict:
    """Check q = p v (q ^ p') for sampled comparable pairs p <= q."""
    from .algebra import leq

    worst = 0.0
    failures = 0
    m = alg.rank
    for _ in range(samples):
        frame = random_frame_coords(alg, rng)
        k = int(rng.integers(1, m + 1))
        j = int(rng.integers(0, k + 1))
        p = Element(alg, frame[:j].sum(axis=0) if j else np.zeros(alg.dim))
        q = Element(alg, frame[:k].sum(axis=0))
        if not leq(p, q):
            failures += 1
            continue
        rhs = lattice_join(p, lattice_meet(q, orthocomplement(p), rng), rng)
        err = float(np.max(np.abs(rhs.coords - q.coords)))
        worst = max(worst, err)
        failures += err > tol
    return {"samples": samples, "failures": int(failures), "max_residual": worst}
