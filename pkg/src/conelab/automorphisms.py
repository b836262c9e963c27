"""Jordan automorphisms as linear maps on coordinates, and Haar sampling.

Every automorphism is stored as a dim x dim matrix M acting on coordinate
vectors.  Validation is exact on the structure constants (M(e_i o e_j) =
Me_i o Me_j for all basis pairs, which implies positivity of M and its
inverse) and is backed by sampled spectral invariance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .algebra import Algebra, Element, _same, coords_to_hyper, hyper_to_coords, make_algebra
from .errors import InvalidAutomorphism
from .fields import field_matrix, field_to_coords
from .sampling import haar_field_unitary, haar_orthogonal, random_coords, random_positive_coords

KINDS = ("permutation", "unitary", "spin_rotation", "factorwise", "explicit")

UNIT_TOL = 1e-10
JORDAN_TOL = 1e-8
SPECTRAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Automorphism:
    algebra: Algebra
    kind: str
    matrix: np.ndarray
    params: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidAutomorphism(f"unknown automorphism kind {self.kind!r}")
        m = np.array(self.matrix, dtype=float)
        if m.shape != (self.algebra.dim, self.algebra.dim):
            raise InvalidAutomorphism(f"matrix shape {m.shape} does not match dim {self.algebra.dim}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, a: Element) -> Element:
        if a.algebra.kind != self.algebra.kind:
            _same(Element(self.algebra, self.algebra.unit), a)
        return Element(a.algebra, self.matrix @ a.coords)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.matrix.T

    def compose(self, other: Automorphism) -> Automorphism:
        """self after other."""
        return Automorphism(
            self.algebra, "explicit", self.matrix @ other.matrix, {"composed": [self.kind, other.kind]}
        )

    def inverse(self) -> Automorphism:
        # automorphisms are isometries of the trace form: M^-1 = G^-1 M^T G
        g = self.algebra.gram
        inv = np.linalg.solve(g, self.matrix.T @ g)
        return Automorphism(self.algebra, self.kind, inv, {"inverse_of": self.kind})

    def validate(self, samples: int = 200, spectral_samples: int = 2, rng: np.random.Generator | None = None) -> dict:
        report = validation_report(self, samples, spectral_samples, rng)
        if not report["valid"]:
            raise InvalidAutomorphism("automorphism failed validation", witness=report)
        self._cache["valid"] = report
        return report

    def ensure_valid(self) -> dict:
        if "valid" not in self._cache:
            self.validate()
        return self._cache["valid"]


def validation_report(U: Automorphism, samples: int = 200, spectral_samples: int = 2, rng=None) -> dict:
    from .spectral import eigenvalues_coords

    alg = U.algebra
    rng = np.random.default_rng(0) if rng is None else rng
    m = U.matrix
    unit_res = float(np.max(np.abs(m @ alg.unit - alg.unit)))
    # exact certificate on basis pairs: M Gamma_ij = Gamma(M e_i, M e_j)
    gamma = alg.structure
    d = alg.dim
    lhs = gamma @ m.T
    t1 = (m.T @ gamma.reshape(d, d * d)).reshape(d, d, d)
    rhs = np.swapaxes(np.swapaxes(t1, 1, 2) @ m, 1, 2)
    basis_res = float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(gamma)))))
    x = random_coords(alg, rng, samples)
    y = random_coords(alg, rng, samples)
    prod = alg.mul(x, y)
    diff = U.apply(prod) - alg.mul(U.apply(x), U.apply(y))
    sample_res = float(np.max(np.linalg.norm(diff, axis=1) / (np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1))))
    iso_res = float(np.max(np.abs(m.T @ alg.gram @ m - alg.gram)))
    spec_res = 0.0
    pos_min = np.inf
    inv = np.linalg.inv(m)
    for a in random_positive_coords(alg, rng, spectral_samples):
        s = eigenvalues_coords(alg, a)
        spec_res = max(spec_res, float(np.max(np.abs(eigenvalues_coords(alg, m @ a) - s))) / max(1.0, s[0]))
        pos_min = min(pos_min, float(eigenvalues_coords(alg, inv @ a)[-1]) / max(1.0, s[0]))
    valid = (
        unit_res < UNIT_TOL
        and basis_res < JORDAN_TOL
        and sample_res < JORDAN_TOL
        and iso_res < JORDAN_TOL
        and spec_res < SPECTRAL_TOL
        and pos_min > -SPECTRAL_TOL
    )
    return {
        "valid": bool(valid),
        "unit_residual": unit_res,
        "jordan_basis_residual": basis_res,
        "jordan_sample_residual": sample_res,
        "trace_form_residual": iso_res,
        "spectral_residual": spec_res,
        "inverse_min_eigenvalue": float(pos_min) if np.isfinite(pos_min) else 0.0,
    }


# --- constructors ----------------------------------------------------------


def identity_automorphism(alg: Algebra) -> Automorphism:
    return Automorphism(alg, "explicit", np.eye(alg.dim), {"identity": True})


def explicit_automorphism(alg: Algebra, matrix: np.ndarray, validate: bool = True) -> Automorphism:
    U = Automorphism(alg, "explicit", matrix)
    if validate:
        U.validate()
    return U


def permutation_automorphism(alg: Algebra, perm) -> Automorphism:
    """e_i -> e_perm[i] on Classical(n)."""
    perm = [int(i) for i in perm]
    if alg.family != "classical" or sorted(perm) != list(range(alg.rank)):
        raise InvalidAutomorphism(f"{perm} is not a permutation of the atoms of {alg.kind}")
    m = np.zeros((alg.dim, alg.dim))
    m[perm, np.arange(alg.dim)] = 1.0
    return Automorphism(alg, "permutation", m, {"perm": perm})


def _basis_images(alg: Algebra, fn) -> np.ndarray:
    cols = [fn(np.eye(alg.dim)[i]) for i in range(alg.dim)]
    return np.stack(cols, axis=1)


def unitary_automorphism(alg: Algebra, u: np.ndarray) -> Automorphism:
    """x -> u x u* for a unitary u in the field representation.

    For Albert, u must be a real orthogonal 3 x 3 matrix; real scalars
    commute with octonions, so the conjugation is a Jordan automorphism.
    """
    u = np.asarray(u)
    if alg.family == "albert":
        if np.iscomplexobj(u) or u.shape != (3, 3) or np.max(np.abs(u.T @ u - np.eye(3))) > 1e-10:
            raise InvalidAutomorphism("Albert conjugations must use a real orthogonal 3 x 3 matrix")

        def fn(x):
            h = coords_to_hyper(3, 8, x)
            return hyper_to_coords(3, 8, np.einsum("ac,cdk,bd->abk", u, h, u))
    elif alg.family in ("herm_r", "herm_c", "herm_h"):
        size = 2 * alg.kind.n if alg.field_dim == 4 else alg.kind.n
        if u.shape != (size, size) or np.max(np.abs(u.conj().T @ u - np.eye(size))) > 1e-10:
            raise InvalidAutomorphism(f"expected a {size} x {size} unitary")

        def fn(x):
            return field_to_coords(alg, u @ field_matrix(alg, x) @ u.conj().T)
    else:
        raise InvalidAutomorphism(f"{alg.kind} has no unitary conjugations")
    m = _basis_images(alg, fn)
    return Automorphism(alg, "unitary", m, {"unitary": _encode_matrix(u)})


def complex_conjugation(alg: Algebra) -> Automorphism:
    """Entrywise conjugation (equivalently transposition) on ComplexHermitian(n)."""
    if alg.family != "herm_c":
        raise InvalidAutomorphism("complex conjugation is defined on complex Hermitian matrices")
    n = alg.kind.n
    m = np.eye(alg.dim)
    for k in range(n * (n - 1) // 2):
        m[n + 2 * k + 1, n + 2 * k + 1] = -1.0
    return Automorphism(alg, "unitary", m, {"conjugation": True})


def spin_rotation(alg: Algebra, r: np.ndarray) -> Automorphism:
    r = np.asarray(r, dtype=float)
    k = alg.kind.n
    if alg.family != "spin" or r.shape != (k, k) or np.max(np.abs(r.T @ r - np.eye(k))) > 1e-10:
        raise InvalidAutomorphism(f"expected an orthogonal {k} x {k} matrix for {alg.kind}")
    m = np.eye(alg.dim)
    m[1:, 1:] = r
    return Automorphism(alg, "spin_rotation", m, {"rotation": r.tolist()})


def symmetry_automorphism(alg: Algebra, s: np.ndarray) -> Automorphism:
    """U_s(x) = 2 s o (s o x) - x for a symmetry s (s o s = 1)."""
    ls = alg.mul(s, np.eye(alg.dim)).T
    m = 2.0 * ls @ ls - np.eye(alg.dim)
    return Automorphism(alg, "explicit", m, {"symmetry": np.asarray(s).tolist()})


# --- direct-sum blocks -----------------------------------------------------


@dataclass(frozen=True)
class Block:
    kind: str
    algebra: Algebra
    offset: int

    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.algebra.dim)


def blocks(alg: Algebra) -> tuple[Block, ...]:
    """Simple ideals of alg; Classical(n) contributes n copies of R."""
    parts = alg.factors if alg.family == "sum" else ((alg, 0),)
    out = []
    one = make_algebra("classical:1")
    for sub, off in parts:
        if sub.family == "classical":
            out.extend(Block("classical:1", one, off + i) for i in range(sub.rank))
        else:
            out.append(Block(str(sub.kind), sub, off))
    return tuple(out)


def block_of(alg: Algebra, x: np.ndarray, tol: float = 1e-8) -> int | None:
    hit = None
    for i, b in enumerate(blocks(alg)):
        if np.linalg.norm(x[b.slice()]) > tol:
            if hit is not None:
                return None
            hit = i
    return hit


def factorwise_automorphism(alg: Algebra, block_maps, perm) -> Automorphism:
    """Block i is mapped by block_maps[i] (a matrix or None for identity) into block perm[i]."""
    bl = blocks(alg)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(len(bl))):
        raise InvalidAutomorphism("block permutation is not a bijection")
    m = np.zeros((alg.dim, alg.dim))
    for i, b in enumerate(bl):
        t = bl[perm[i]]
        if t.kind != b.kind:
            raise InvalidAutomorphism(f"cannot map a {b.kind} block onto a {t.kind} block")
        sub = np.eye(b.algebra.dim) if block_maps[i] is None else np.asarray(block_maps[i])
        m[t.slice(), b.slice()] = sub
    return Automorphism(alg, "factorwise", m, {"block_perm": perm})


# --- Haar sampling ---------------------------------------------------------


def _kind_preserving_permutation(kinds: list[str], rng: np.random.Generator) -> list[int]:
    perm = list(range(len(kinds)))
    for k in sorted(set(kinds)):
        idx = [i for i, kk in enumerate(kinds) if kk == k]
        shuffled = [idx[j] for j in rng.permutation(len(idx))]
        for i, j in zip(idx, shuffled):
            perm[i] = j
    return perm


def haar_sample(alg: Algebra, rng: np.random.Generator) -> Automorphism:
    """Haar-random element of the sampled automorphism subgroup.

    Classical: uniform permutations.  R/C/H: conjugation by a Haar unitary
    (with complex conjugation for C).  Spin: O(k).  Albert: conjugation by
    a Haar O(3) matrix.  Direct sums: independent blocks plus a uniform
    permutation of isomorphic blocks.
    """
    f = alg.family
    if f == "classical":
        return permutation_automorphism(alg, rng.permutation(alg.rank))
    if f in ("herm_r", "herm_c", "herm_h"):
        u = haar_field_unitary(alg.field_dim, alg.kind.n, rng)
        U = unitary_automorphism(alg, u)
        if f == "herm_c" and rng.random() < 0.5:
            c = complex_conjugation(alg)
            U = Automorphism(alg, "unitary", U.matrix @ c.matrix, {"unitary": U.params["unitary"], "conjugation": True})
        return U
    if f == "spin":
        return spin_rotation(alg, haar_orthogonal(alg.kind.n, rng))
    if f == "albert":
        return unitary_automorphism(alg, haar_orthogonal(3, rng))
    bl = blocks(alg)
    maps = []
    for b in bl:
        maps.append(None if b.kind == "classical:1" else haar_sample(b.algebra, rng).matrix)
    perm = _kind_preserving_permutation([b.kind for b in bl], rng)
    return factorwise_automorphism(alg, maps, perm)


def _encode_matrix(u: np.ndarray):
    if np.iscomplexobj(u):
        return {"real": u.real.tolist(), "imag": u.imag.tolist()}
    return {"real": np.asarray(u).tolist()}


def all_block_permutations(alg: Algebra):
    """Every kind-preserving permutation of the blocks (small sums only)."""
    kinds = [b.kind for b in blocks(alg)]
    for p in permutations(range(len(kinds))):
        if all(kinds[i] == kinds[p[i]] for i in range(len(kinds))):
            yield list(p)
