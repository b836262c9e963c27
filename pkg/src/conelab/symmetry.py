"""Invariant states and forms, the rescaled self-dual form, state
decompositions and the weak/exchange/bit/strong symmetry verdicts.

Levels, for atoms (pure states) and frames:

* weak: for any atoms p, q some automorphism U has U p = q.  This is the
  transitive reading; a literal "U p = U q" would be vacuous.
* exchange: for any atoms p, q some U has U p = q and U q = p.
* bit: any ordered orthogonal pair can be mapped onto any other.
* strong: the same for frames of every size.

Exchange symmetry is reported next to the others; no implication between
it and bit or strong symmetry is assumed.  Positive verdicts are backed by
transporters built and validated on sampled instances, negative ones by a
concrete obstruction; ``structural`` records the verdict expected from the
decomposition into simple factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, Element, make_algebra
from .automorphisms import blocks, haar_sample
from .errors import (
    ConelabError,
    EpsilonNotConstant,
    EpsilonOutOfRange,
    InvalidState,
    NoTransporter,
    NotPositiveDefinite,
    SelfDualityViolated,
)
from .logic import Frame
from .sampling import random_atom_coords, random_coords, random_frame_coords, random_positive_coords
from .spectral import decompose_coords, spectral_decompose
from .transition import State, atom_state
from .transport import exchange_automorphism, transport_frame

EPS_SPREAD_TOL = 1e-8
CONTRACT_TOL = 1e-8
LEVELS = ("weak", "exchange", "bit", "strong")


# --- bilinear forms --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BilinearForm:
    algebra: Algebra
    gram: np.ndarray
    label: str = ""

    def __call__(self, a: Element, b: Element) -> float:
        return float(a.coords @ self.gram @ b.coords)

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("...i,ij,...j->...", x, self.gram, y)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.gram + self.gram.T))[0])


def make_form(alg: Algebra, gram: np.ndarray, validate: bool = True, label: str = "") -> BilinearForm:
    g = np.array(gram, dtype=float)
    if g.shape != (alg.dim, alg.dim):
        raise NotPositiveDefinite(f"Gram matrix shape {g.shape} does not match dim {alg.dim}")
    if validate:
        asym = float(np.max(np.abs(g - g.T)))
        if asym > 1e-12 * max(1.0, float(np.max(np.abs(g)))):
            raise NotPositiveDefinite(f"Gram matrix is not symmetric (defect {asym:.3e})")
        g = 0.5 * (g + g.T)
        lo = float(np.linalg.eigvalsh(g)[0])
        if lo <= 0.0:
            raise NotPositiveDefinite(f"minimum eigenvalue {lo:.3e}", witness={"min_eigenvalue": lo})
    g.setflags(write=False)
    return BilinearForm(alg, g, label)


def trace_bilinear_form(alg: Algebra) -> BilinearForm:
    return make_form(alg, alg.gram, label="trace")


def admissible_beta(alg: Algebra) -> tuple[float, float]:
    """Open interval of beta keeping (1 - beta) tr + beta * tau tau^T positive definite.

    On the unit direction the form is (1 - beta) m + beta m^2, elsewhere
    (orthogonal to the unit for the trace form) it is (1 - beta) times the
    trace form.
    """
    m = alg.rank
    if m == 1:
        return (-np.inf, np.inf)
    return (-1.0 / (m - 1), 1.0)


def make_invariant_form(alg: Algebra, beta: float, cross_gamma: float = 0.0) -> BilinearForm:
    """(1 - beta) * trace form + beta * m^2 mu_inv (x) mu_inv, plus optional cross-factor terms."""
    tau = alg.trace_vec
    g = (1.0 - beta) * alg.gram + beta * np.outer(tau, tau)
    if cross_gamma:
        parts = [(off, sub.dim) for sub, off in alg.factors]
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                ti = np.zeros(alg.dim)
                tj = np.zeros(alg.dim)
                ti[parts[i][0]:parts[i][0] + parts[i][1]] = tau[parts[i][0]:parts[i][0] + parts[i][1]]
                tj[parts[j][0]:parts[j][0] + parts[j][1]] = tau[parts[j][0]:parts[j][0] + parts[j][1]]
                g = g + cross_gamma * (np.outer(ti, tj) + np.outer(tj, ti))
    lo, hi = admissible_beta(alg)
    try:
        return make_form(alg, g, label=f"invariant(beta={beta:g}, gamma={cross_gamma:g})")
    except NotPositiveDefinite as err:
        raise NotPositiveDefinite(
            f"beta={beta:g} gamma={cross_gamma:g}: {err}",
            witness={"beta": beta, "gamma": cross_gamma, "admissible_beta": [lo, hi]},
        ) from err


def form_invariance_residual(form: BilinearForm, samples: int, rng: np.random.Generator) -> float:
    alg = form.algebra
    worst = 0.0
    for _ in range(samples):
        m = haar_sample(alg, rng).matrix
        worst = max(worst, float(np.max(np.abs(m.T @ form.gram @ m - form.gram))))
    return worst


# --- invariant state -------------------------------------------------------


def invariant_state(alg: Algebra) -> State:
    """mu_inv(x) = tr(x) / m."""
    return State(alg, Element(alg, alg.unit / alg.rank))


def average_state(mu0: State, n: int, rng: np.random.Generator) -> State:
    """Empirical Haar average x -> mean_U mu0(U x)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    alg = mu0.algebra
    acc = np.zeros((alg.dim, alg.dim))
    for _ in range(n):
        acc += haar_sample(alg, rng).matrix
    riesz = np.linalg.solve(alg.gram, (acc / n).T @ alg.gram @ mu0.riesz.coords)
    return State(alg, Element(alg, riesz))


def state_distance(a: State, b: State) -> float:
    """Trace-form norm of the difference of the riesz vectors."""
    d = a.riesz.coords - b.riesz.coords
    return float(np.sqrt(max(a.algebra.pair(d, d), 0.0)))


def convergence_check(mu0: State, sizes=(100, 10_000), seeds=range(8)) -> dict:
    """Mean distance to mu_inv at each sample size; the N^-1/2 law predicts ratio sqrt(N2/N1)."""
    target = invariant_state(mu0.algebra)
    means = []
    for n in sizes:
        errs = [state_distance(average_state(mu0, n, np.random.default_rng(s)), target) for s in seeds]
        means.append(float(np.mean(errs)))
    ratio = means[0] / means[-1] if means[-1] > 0 else np.inf
    return {
        "sizes": list(sizes),
        "mean_errors": means,
        "ratio": float(ratio),
        "predicted_ratio": float(np.sqrt(sizes[-1] / sizes[0])),
    }


# --- epsilon and the rescaled form -----------------------------------------


def _orthogonal_pair_values(form: BilinearForm, samples: int, rng: np.random.Generator):
    alg = form.algebra
    vals, pairs = [], []
    for _ in range(samples):
        f = random_frame_coords(alg, rng)
        g = f @ form.gram @ f.T
        for i in range(len(f)):
            for j in range(len(f)):
                if i != j:
                    vals.append(float(g[i, j]))
                    pairs.append((f[i], f[j]))
    return np.array(vals), pairs


def measure_epsilon(form: BilinearForm, samples: int, rng: np.random.Generator, tol: float = EPS_SPREAD_TOL) -> float:
    """Common value of <p|q> over sampled orthogonal atom pairs."""
    if form.algebra.rank < 2:
        raise ConelabError("rank-1 algebras have no orthogonal atom pairs")
    vals, pairs = _orthogonal_pair_values(form, samples, rng)
    lo, hi = float(vals.min()), float(vals.max())
    if hi - lo > tol:
        i, j = int(np.argmin(vals)), int(np.argmax(vals))
        raise EpsilonNotConstant(
            f"<p|q> over orthogonal pairs ranges over [{lo:.6g}, {hi:.6g}]",
            lo,
            hi,
            witness={
                "low_pair": [pairs[i][0].tolist(), pairs[i][1].tolist()],
                "high_pair": [pairs[j][0].tolist(), pairs[j][1].tolist()],
            },
        )
    return float(np.mean(vals))


@dataclass(frozen=True, eq=False)
class Theorem2Result:
    epsilon: float
    base: BilinearForm
    result: BilinearForm
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        d = self.diagnostics
        return all(d[k] <= CONTRACT_TOL for k in d if k.endswith("_residual"))


def theorem2_form(form_o: BilinearForm, samples: int = 200, rng: np.random.Generator | None = None) -> Theorem2Result:
    """<a|b> = (<a|b>_o - m^2 eps mu_inv(a) mu_inv(b)) / (1 - eps), with its contract checked on samples."""
    rng = np.random.default_rng(0) if rng is None else rng
    alg = form_o.algebra
    eps = measure_epsilon(form_o, max(1, samples // 4), rng)
    if abs(eps) >= 1.0 - 1e-9:
        raise EpsilonOutOfRange(f"epsilon = {eps:.12g}", witness={"epsilon": eps})
    tau = alg.trace_vec
    # m^2 mu_inv (x) mu_inv = tau tau^T
    g = (form_o.gram - eps * np.outer(tau, tau)) / (1.0 - eps)
    result = make_form(alg, g, label="rescaled")
    m = alg.rank
    frames = np.stack([random_frame_coords(alg, rng) for _ in range(samples)])
    atoms = frames.reshape(-1, alg.dim)
    norms = result.evaluate(atoms, atoms)
    base_norms = form_o.evaluate(atoms, atoms)
    g_frames = np.einsum("fia,ab,fjb->fij", frames, result.gram, frames)
    off = g_frames[:, ~np.eye(m, dtype=bool)] if m > 1 else np.zeros(1)
    p = np.stack([random_atom_coords(alg, rng) for _ in range(samples)])
    q = np.stack([random_atom_coords(alg, rng) for _ in range(samples)])
    tp_res = np.abs(result.evaluate(p, q) - alg.pair(p, q))
    x = random_coords(alg, rng, samples)
    unit_res = np.abs(result.evaluate(x, alg.unit) - m * (x @ tau) / m)
    diagnostics = {
        "samples": samples,
        "base_atom_norm_residual": float(np.max(np.abs(base_norms - 1.0))),
        "atom_norm_residual": float(np.max(np.abs(norms - 1.0))),
        "orthogonal_pair_residual": float(np.max(np.abs(off))),
        "transition_residual": float(np.max(tp_res)),
        "unit_pairing_residual": float(np.max(unit_res)),
        "unit_norm": float(result.evaluate(alg.unit, alg.unit)),
        "trace_form_distance": float(np.max(np.abs(result.gram - alg.gram))),
    }
    return Theorem2Result(eps, form_o, result, diagnostics)


# --- self-duality ----------------------------------------------------------


@dataclass(frozen=True)
class SelfDualityReport:
    positive_pairs: int
    min_positive_value: float
    negatives: int
    max_witness_value: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def self_duality_check(form: BilinearForm, samples: int, rng: np.random.Generator, negatives: int | None = None, tol: float = 1e-10) -> SelfDualityReport:
    """Positive pairs pair non-negatively; every sampled non-positive a has a positive b with <a|b> < 0."""
    alg = form.algebra
    negatives = max(1, samples // 10) if negatives is None else negatives
    half = samples // 2
    a = random_positive_coords(alg, rng, samples - half)
    b = random_positive_coords(alg, rng, samples - half)
    vals = form.evaluate(a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
    if alg.rank >= 2:
        fa = np.stack([random_frame_coords(alg, rng, 2) for _ in range(half)]) if half else np.zeros((0, 2, alg.dim))
        va = form.evaluate(fa[:, 0], fa[:, 1]) if half else np.zeros(0)
        vb = form.evaluate(fa[:, 1], fa[:, 0]) if half else np.zeros(0)
        pairs_a = np.concatenate([a, fa[:, 0], fa[:, 1]])
        pairs_b = np.concatenate([b, fa[:, 1], fa[:, 0]])
        vals = np.concatenate([vals, va, vb])
    else:
        pairs_a, pairs_b = a, b
    k = int(np.argmin(vals))
    if vals[k] < -tol:
        raise SelfDualityViolated(
            f"positive pair with <a|b> = {vals[k]:.3e}",
            witness={"a": pairs_a[k].tolist(), "b": pairs_b[k].tolist(), "value": float(vals[k])},
        )
    worst = -np.inf
    for i in range(negatives):
        if i % 10 == 9:
            x = random_coords(alg, rng)
            s, atoms, _ = decompose_coords(alg, x, rng)
            if s[-1] >= 0:
                x = x - (s[-1] + 1.0) * alg.unit
                s = s - (s[-1] + 1.0)
        else:
            atoms = random_frame_coords(alg, rng)
            s = rng.standard_normal(alg.rank)
            j = int(rng.integers(alg.rank))
            s[j] = -abs(s[j]) - 0.1
            order = np.argsort(-s, kind="stable")
            s, atoms = s[order], atoms[order]
            x = s @ atoms
        witness = atoms[int(np.argmin(s))]
        v = float(form.evaluate(x, witness))
        worst = max(worst, v)
        if v >= 0.0:
            raise SelfDualityViolated(
                f"non-positive element pairs non-negatively with its negative-eigenvalue atom ({v:.3e})",
                witness={"a": x.tolist(), "b": witness.tolist(), "value": v},
            )
    return SelfDualityReport(len(vals), float(vals[k]), negatives, float(worst))


def corrupted_form(alg: Algebra, strength: float = 2.0) -> BilinearForm:
    """Trace form minus an asymmetric rank-one term that makes one orthogonal pair negative.

    Regression fixture for self_duality_check; not a valid form.
    """
    p = np.zeros(alg.dim)
    q = np.zeros(alg.dim)
    f = random_frame_coords(alg, np.random.default_rng(0), 2)
    p, q = f[0], f[1]
    g = alg.gram - strength * np.outer(alg.gram @ p, alg.gram @ q)
    return make_form(alg, g, validate=False, label="corrupted")


# --- state decomposition ---------------------------------------------------


def state_decomposition(mu: State, rng: np.random.Generator | None = None, tol: float = 1e-10) -> list[tuple[float, State]]:
    """mu = sum_k s_k P_{e_k} with e_k a frame from the spectral decomposition of the riesz vector."""
    dec = spectral_decompose(mu.riesz, rng=rng)
    if dec.eigenvalues[-1] < -tol * max(1.0, float(dec.eigenvalues[0])):
        raise InvalidState(f"riesz vector has eigenvalue {dec.eigenvalues[-1]:.3e}")
    return [(float(s), atom_state(e)) for s, e in zip(dec.eigenvalues, dec.atoms)]


# --- symmetry verdicts -----------------------------------------------------


@dataclass(frozen=True)
class SymmetryVerdict:
    level: str
    holds: bool
    structural: bool | None = None
    transporters: int = 0
    max_residual: float = 0.0
    max_transition_shift: float = 0.0
    obstruction: dict | None = None
    note: str = ""

    @property
    def consistent(self) -> bool:
        return self.structural is None or self.structural == self.holds

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["consistent"] = self.consistent
        return d


def structural_classification(alg: Algebra) -> dict:
    """Verdicts from the decomposition into simple ideals.

    Simple and abelian algebras have all four properties; sums of isomorphic
    non-abelian factors keep weak and exchange symmetry but lose bit and
    strong symmetry; sums of non-isomorphic factors lose all four.
    """
    kinds = [b.kind for b in blocks(alg)]
    abelian = all(k == "classical:1" for k in kinds)
    simple = len(kinds) == 1
    iso = len(set(kinds)) == 1
    return {
        "blocks": kinds,
        "simple": simple,
        "abelian": abelian,
        "isomorphic_factors": iso,
        "weak": iso,
        "exchange": iso,
        "bit": simple or abelian,
        "strong": simple or abelian,
    }


def _embed_frame(alg: Algebra, sig: list[int], rng) -> np.ndarray:
    bl = blocks(alg)
    rows = []
    for b_idx in sorted(set(sig)):
        b = bl[b_idx]
        c = sig.count(b_idx)
        sub = random_frame_coords(b.algebra, rng, c)
        for r in sub:
            full = np.zeros(alg.dim)
            full[b.slice()] = r
            rows.append(full)
    return np.array(rows)


def _targeted_candidates(alg: Algebra, level: str, rng) -> list:
    """Instances that straddle factors; these are where obstructions live."""
    bl = blocks(alg)
    out = []
    if len(bl) < 2:
        return out
    first_of_kind = {}
    for i, b in enumerate(bl):
        first_of_kind.setdefault(b.kind, i)
    reps = list(first_of_kind.values())
    if level in ("weak", "exchange"):
        pool = reps if len(reps) > 1 else [0, 1]
        for i in pool:
            for j in pool:
                if i != j:
                    out.append((_embed_frame(alg, [i], rng), _embed_frame(alg, [j], rng)))
        return out
    big = [i for i, b in enumerate(bl) if b.algebra.rank >= 2]
    sigs = [[0, 1]] + [[i, i] for i in big[:1]]
    if len(reps) > 1:
        sigs.append([reps[0], reps[1]])
    for s1 in sigs:
        for s2 in sigs:
            if s1 != s2:
                out.append((_embed_frame(alg, s1, rng), _embed_frame(alg, s2, rng)))
    return out


def _random_candidates(alg: Algebra, level: str, samples: int, rng) -> list:
    m = alg.rank
    out = []
    for _ in range(samples):
        if level in ("weak", "exchange"):
            out.append((random_atom_coords(alg, rng)[None], random_atom_coords(alg, rng)[None]))
        elif level == "bit":
            out.append((random_frame_coords(alg, rng, 2), random_frame_coords(alg, rng, 2)))
        else:
            k = int(rng.integers(1, m + 1))
            out.append((random_frame_coords(alg, rng, k), random_frame_coords(alg, rng, k)))
    return out


def _transition_shift(alg: Algebra, m: np.ndarray, rows: np.ndarray, rng) -> float:
    extra = random_atom_coords(alg, rng)
    pts = np.vstack([rows, extra[None]])
    img = pts @ m.T
    before = pts @ alg.gram @ pts.T
    after = img @ alg.gram @ img.T
    return float(np.max(np.abs(before - after)))


def verdict_for_level(alg: Algebra, level: str, samples: int, rng: np.random.Generator, validate: bool = True) -> SymmetryVerdict:
    structural = structural_classification(alg)[level]
    if level in ("bit",) and alg.rank < 2:
        return SymmetryVerdict(level, True, structural, note="vacuous: rank 1 has no 2-frames")
    cands = _targeted_candidates(alg, level, rng) + _random_candidates(alg, level, samples, rng)
    count, worst, shift = 0, 0.0, 0.0
    obstruction = None
    for src, dst in cands:
        try:
            if level == "exchange":
                p, q = Element(alg, src[0]), Element(alg, dst[0])
                U = exchange_automorphism(p, q, rng)
                res = max(
                    float(np.max(np.abs(U.apply(src[0]) - dst[0]))),
                    float(np.max(np.abs(U.apply(dst[0]) - src[0]))),
                )
            else:
                f1 = Frame(alg, tuple(Element(alg, r) for r in src))
                f2 = Frame(alg, tuple(Element(alg, r) for r in dst))
                tr = transport_frame(f1, f2, rng)
                U, res = tr.automorphism, tr.residual
            if validate:
                U.validate(samples=20, spectral_samples=1, rng=rng)
            count += 1
            worst = max(worst, res)
            shift = max(shift, _transition_shift(alg, U.matrix, np.vstack([src, dst]), rng))
        except NoTransporter as err:
            if obstruction is None:
                obstruction = {
                    "reason": err.obstruction,
                    "message": str(err),
                    "frame_a": np.asarray(src).tolist(),
                    "frame_b": np.asarray(dst).tolist(),
                }
    holds = obstruction is None
    return SymmetryVerdict(level, holds, structural, count, worst, shift, obstruction)


def symmetry_report(alg: Algebra | str, samples: int, rng: np.random.Generator, levels=LEVELS) -> tuple[SymmetryVerdict, ...]:
    alg = make_algebra(alg) if isinstance(alg, str) else alg
    return tuple(verdict_for_level(alg, lv, samples, rng) for lv in levels)
