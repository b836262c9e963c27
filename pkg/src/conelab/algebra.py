"""Coordinatized finite-dimensional Euclidean Jordan algebras.

Families and coordinates
------------------------
classical:n   R^n, componentwise product.
herm_r:n      real symmetric n x n matrices.
herm_c:n      complex Hermitian n x n matrices.
herm_h:n      quaternionic Hermitian n x n matrices.
albert        octonionic Hermitian 3 x 3 matrices (27 real coordinates).
spin:k        pairs (t, v) with v in R^k, (s,u)o(t,v) = (st + u.v, sv + tu).
sum:A+B+...   direct sums; coordinates are concatenated.

Hermitian matrices over a field of real dimension d use the coordinates
``[X_00, ..., X_{n-1,n-1}, X_01 (d reals), X_02, ..., X_{n-2,n-1}]``: the
diagonal first, then the upper-triangle entries in row-major order.  The
basis element for an off-diagonal coordinate is the symmetrized unit
E_ij*e_c + E_ji*conj(e_c).  The Jordan product of matrices is (XY + YX)/2.

Every algebra is stored as structure constants ``structure[i, j, k]`` plus the
linear trace functional ``trace_vec`` (sum of spectral eigenvalues); the trace
form is tr(a o b), so atoms have norm 1 and tr(1 o 1) equals the rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AlgebraMismatch, InvalidKind, ParseError
from .hypercomplex import hconj, mult_table

TOL = 1e-9
CLUSTER_TOL = 1e-8

_MATRIX_FAMILIES = {"herm_r": 1, "herm_c": 2, "herm_h": 4, "albert": 8}


@dataclass(frozen=True)
class AlgebraKind:
    family: str
    n: int = 0
    parts: tuple[AlgebraKind, ...] = ()

    def __post_init__(self):
        f, n = self.family, self.n
        if f == "classical" and n >= 1:
            return
        if f in ("herm_r", "herm_c", "herm_h") and n >= 2:
            return
        if f == "spin" and n >= 2:
            return
        if f == "albert" and n == 3:
            return
        if f == "sum":
            if not self.parts:
                raise InvalidKind("direct sum needs at least one part")
            for p in self.parts:
                if not isinstance(p, AlgebraKind):
                    raise InvalidKind(f"direct-sum part {p!r} is not an AlgebraKind")
                if p.family == "sum":
                    raise InvalidKind("nested direct sums are not allowed; flatten them")
            return
        raise InvalidKind(f"invalid algebra kind {f}:{n}")

    @property
    def dim(self) -> int:
        f, n = self.family, self.n
        if f == "classical":
            return n
        if f == "herm_r":
            return n * (n + 1) // 2
        if f == "herm_c":
            return n * n
        if f == "herm_h":
            return n * (2 * n - 1)
        if f == "spin":
            return n + 1
        if f == "albert":
            return 27
        return sum(p.dim for p in self.parts)

    @property
    def rank(self) -> int:
        if self.family == "spin":
            return 2
        if self.family == "sum":
            return sum(p.rank for p in self.parts)
        return self.n

    @property
    def is_matrix(self) -> bool:
        return self.family in _MATRIX_FAMILIES

    def __str__(self):
        if self.family == "albert":
            return "albert"
        if self.family == "sum":
            return "sum:" + "+".join(str(p) for p in self.parts)
        return f"{self.family}:{self.n}"


def classical(n: int) -> AlgebraKind:
    return AlgebraKind("classical", n)


def real_symmetric(n: int) -> AlgebraKind:
    return AlgebraKind("herm_r", n)


def complex_hermitian(n: int) -> AlgebraKind:
    return AlgebraKind("herm_c", n)


def quaternion_hermitian(n: int) -> AlgebraKind:
    return AlgebraKind("herm_h", n)


def spin_factor(k: int) -> AlgebraKind:
    return AlgebraKind("spin", k)


def albert() -> AlgebraKind:
    return AlgebraKind("albert", 3)


def direct_sum(*parts: AlgebraKind) -> AlgebraKind:
    return AlgebraKind("sum", 0, tuple(parts))


def parse_kind(spec: str) -> AlgebraKind:
    """Parse ``classical:3``, ``herm_c:2``, ``albert``, ``sum:spin:4+spin:4`` ..."""
    spec = spec.strip()
    if spec.startswith("sum:"):
        parts = [s for s in spec[4:].split("+")]
        if not parts or any(not p for p in parts):
            raise ParseError(f"malformed direct sum spec {spec!r}")
        try:
            return direct_sum(*(parse_kind(p) for p in parts))
        except InvalidKind as exc:
            raise ParseError(str(exc)) from exc
    if spec == "albert":
        return albert()
    family, _, arg = spec.partition(":")
    if family not in ("classical", "herm_r", "herm_c", "herm_h", "spin") or not arg:
        raise ParseError(f"unknown algebra spec {spec!r}")
    try:
        n = int(arg)
    except ValueError:
        raise ParseError(f"bad size in algebra spec {spec!r}") from None
    try:
        return AlgebraKind(family, n)
    except InvalidKind as exc:
        raise ParseError(str(exc)) from exc


# --- Hermitian matrices over R, C, H, O ------------------------------------


def _upper_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def coords_to_hyper(n: int, d: int, x: np.ndarray) -> np.ndarray:
    """Coordinates (..., dim) -> Hermitian hypercomplex matrices (..., n, n, d)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1] + (n, n, d))
    idx = np.arange(n)
    out[..., idx, idx, 0] = x[..., :n]
    pos = n
    for i, j in _upper_pairs(n):
        v = x[..., pos:pos + d]
        out[..., i, j, :] = v
        out[..., j, i, :] = hconj(v)
        pos += d
    return out


def hyper_to_coords(n: int, d: int, h: np.ndarray) -> np.ndarray:
    """Inverse of :func:`coords_to_hyper`; the Hermitian part is taken."""
    pairs = _upper_pairs(n)
    out = np.empty(h.shape[:-3] + (n + d * len(pairs),))
    idx = np.arange(n)
    out[..., :n] = h[..., idx, idx, 0]
    pos = n
    for i, j in pairs:
        out[..., pos:pos + d] = 0.5 * (h[..., i, j, :] + hconj(h[..., j, i, :]))
        pos += d
    return out


def hyper_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("...acp,...cbq,pqk->...abk", x, y, mult_table(x.shape[-1]))


def _matrix_structure(n: int, d: int) -> np.ndarray:
    dim = n + d * n * (n - 1) // 2
    basis = coords_to_hyper(n, d, np.eye(dim))
    prod = np.einsum("iacp,jcbq,pqk->ijabk", basis, basis, mult_table(d))
    jordan = 0.5 * (prod + prod.transpose(1, 0, 2, 3, 4))
    return hyper_to_coords(n, d, jordan)


def _spin_structure(k: int) -> np.ndarray:
    dim = k + 1
    g = np.zeros((dim, dim, dim))
    g[0, 0, 0] = 1.0
    for i in range(1, dim):
        g[0, i, i] = g[i, 0, i] = 1.0
        g[i, i, 0] = 1.0
    return g


def _classical_structure(n: int) -> np.ndarray:
    g = np.zeros((n, n, n))
    idx = np.arange(n)
    g[idx, idx, idx] = 1.0
    return g


# --- Algebra and Element ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class Algebra:
    kind: AlgebraKind
    structure: np.ndarray
    trace_vec: np.ndarray
    unit: np.ndarray
    gram: np.ndarray
    factors: tuple[tuple[Algebra, int], ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.kind.dim

    @property
    def rank(self) -> int:
        return self.kind.rank

    @property
    def family(self) -> str:
        return self.kind.family

    @property
    def field_dim(self) -> int:
        return _MATRIX_FAMILIES.get(self.kind.family, 0)

    def __repr__(self):
        return f"Algebra({self.kind}, dim={self.dim}, rank={self.rank})"

    # raw coordinate arithmetic; leading axes broadcast
    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        left = (x @ self.structure.reshape(self.dim, -1)).reshape(x.shape[:-1] + (self.dim, self.dim))
        return np.einsum("...j,...jk->...k", y, left)

    def trace(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.trace_vec

    def pair(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Trace form on raw coordinates."""
        return np.einsum("...i,ij,...j->...", x, self.gram, y)

    def element(self, coords) -> Element:
        return Element(self, coords)

    def one(self) -> Element:
        return Element(self, self.unit)

    def zero(self) -> Element:
        return Element(self, np.zeros(self.dim))

    def basis(self, i: int) -> Element:
        return Element(self, np.eye(self.dim)[i])

    def from_matrix(self, h: np.ndarray) -> Element:
        """Build an element from a hypercomplex Hermitian array (n, n, d)."""
        if not self.kind.is_matrix:
            raise AlgebraMismatch(f"{self.kind} is not a matrix algebra")
        return Element(self, hyper_to_coords(self.kind.n, self.field_dim, np.asarray(h, dtype=float)))

    def to_matrix(self, x) -> np.ndarray:
        if not self.kind.is_matrix:
            raise AlgebraMismatch(f"{self.kind} is not a matrix algebra")
        x = x.coords if isinstance(x, Element) else x
        return coords_to_hyper(self.kind.n, self.field_dim, x)


@dataclass(frozen=True, eq=False)
class Element:
    algebra: Algebra
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (self.algebra.dim,):
            raise AlgebraMismatch(
                f"element of {self.algebra.kind} needs {self.algebra.dim} coordinates, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def _check(self, other: Element):
        if not isinstance(other, Element) or other.algebra.kind != self.algebra.kind:
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self) -> Element:
        return Element(self.algebra, -self.coords)

    def __mul__(self, s: float) -> Element:
        return Element(self.algebra, float(s) * self.coords)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> Element:
        return Element(self.algebra, self.coords / float(s))

    def __repr__(self):
        return f"Element({self.algebra.kind}, {np.array2string(self.coords, precision=6)})"


@lru_cache(maxsize=None)
def make_algebra(kind: AlgebraKind | str) -> Algebra:
    """Build (and cache) the algebra of the given kind or spec string."""
    if isinstance(kind, str):
        kind = parse_kind(kind)
    if not isinstance(kind, AlgebraKind):
        raise InvalidKind(f"expected AlgebraKind, got {kind!r}")
    f, n = kind.family, kind.n
    factors: tuple = ()
    if f == "classical":
        gamma = _classical_structure(n)
        tvec = np.ones(n)
    elif f == "spin":
        gamma = _spin_structure(n)
        tvec = np.zeros(n + 1)
        tvec[0] = 2.0
    elif kind.is_matrix:
        gamma = _matrix_structure(n, _MATRIX_FAMILIES[f])
        tvec = np.zeros(kind.dim)
        tvec[:n] = 1.0
    else:
        subs = [make_algebra(p) for p in kind.parts]
        dim = kind.dim
        gamma = np.zeros((dim, dim, dim))
        tvec = np.zeros(dim)
        offs = []
        off = 0
        for s in subs:
            sl = slice(off, off + s.dim)
            gamma[sl, sl, sl] = s.structure
            tvec[sl] = s.trace_vec
            offs.append((s, off))
            off += s.dim
        factors = tuple(offs)
    gamma = 0.5 * (gamma + gamma.transpose(1, 0, 2))
    if f == "classical":
        unit = np.ones(n)
    elif f == "spin":
        unit = np.eye(n + 1)[0]
    elif kind.is_matrix:
        unit = np.zeros(kind.dim)
        unit[:n] = 1.0
    else:
        unit = np.concatenate([s.unit for s, _ in factors])
    gram = np.einsum("ijk,k->ij", gamma, tvec)
    gram = 0.5 * (gram + gram.T)
    for arr in (gamma, tvec, unit, gram):
        arr.setflags(write=False)
    return Algebra(kind, gamma, tvec, unit, gram, factors)


def _same(a: Element, b: Element):
    if a.algebra.kind != b.algebra.kind:
        raise AlgebraMismatch(f"{a.algebra.kind} vs {b.algebra.kind}")


def jordan_mul(a: Element, b: Element) -> Element:
    _same(a, b)
    return Element(a.algebra, a.algebra.mul(a.coords, b.coords))


def trace(a: Element) -> float:
    return float(a.algebra.trace(a.coords))


def trace_form(a: Element, b: Element) -> float:
    _same(a, b)
    return float(a.algebra.pair(a.coords, b.coords))


def norm_inf(a: Element) -> float:
    from .spectral import eigenvalues

    return float(np.max(np.abs(eigenvalues(a))))


def is_positive(a: Element, tol: float = CLUSTER_TOL) -> bool:
    """True iff every spectral eigenvalue is >= -tol (scaled for large elements)."""
    from .spectral import eigenvalues

    s = eigenvalues(a)
    return bool(s[-1] >= -tol * max(1.0, float(np.max(np.abs(s)))))


def leq(a: Element, b: Element, tol: float = CLUSTER_TOL) -> bool:
    """Cone order a <= b."""
    return is_positive(b - a, tol)


def jordan_identity_residual(alg: Algebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Relative residual of (x o y) o x^2 - x o (y o x^2) for batches of coordinates."""
    x2 = alg.mul(x, x)
    lhs = alg.mul(alg.mul(x, y), x2)
    rhs = alg.mul(x, alg.mul(y, x2))
    scale = np.linalg.norm(x, axis=-1) ** 3 * np.linalg.norm(y, axis=-1) + 1e-300
    return np.linalg.norm(lhs - rhs, axis=-1) / scale


def factor_of(alg: Algebra, x: np.ndarray, tol: float = 1e-8) -> int | None:
    """Index of the unique direct-sum factor carrying x, or None if spread over several."""
    hit = None
    for i, (sub, off) in enumerate(alg.factors):
        if np.linalg.norm(x[off:off + sub.dim]) > tol:
            if hit is not None:
                return None
            hit = i
    return hit


CATALOG = (
    "classical:3",
    "classical:8",
    "herm_r:3",
    "herm_r:5",
    "herm_c:2",
    "herm_c:3",
    "herm_c:5",
    "herm_h:2",
    "herm_h:3",
    "spin:3",
    "spin:6",
    "spin:10",
    "albert",
    "sum:herm_c:2+herm_c:2",
    "sum:spin:4+spin:4",
    "sum:herm_c:2+classical:2",
)
