"""Polytope state spaces: e_omega, property (**), distinguishability and
affine symmetries.

A polytope is given by its vertices.  Computations run in coordinates on its
affine hull; when the polytope is full-dimensional these are the ambient
coordinates.  Affine functions are stored as coefficient vectors
(offset, gradient).  Non-negativity on the polytope is imposed at the
vertices, which is exact for affine functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np

from .errors import InvalidPolytope, NotAnAutomorphism, NotAVertex, ParseError, PointOutside, TooManyVertices
from .lp import LPProblem, lp_solve

VERTEX_TOL = 1e-9
FIT_TOL = 1e-8
MAX_VERTICES = 16


@dataclass(frozen=True)
class AffineFunction:
    offset: float
    gradient: np.ndarray

    def __call__(self, x) -> np.ndarray:
        return self.offset + np.asarray(x, dtype=float) @ self.gradient

    def coefficients(self) -> np.ndarray:
        return np.concatenate([[self.offset], self.gradient])

    def to_dict(self) -> dict:
        return {"offset": float(self.offset), "gradient": np.asarray(self.gradient).tolist()}


@dataclass(frozen=True, eq=False)
class Polytope:
    vertices: np.ndarray
    name: str = ""
    _hull: tuple = field(default=(), repr=False)

    def __post_init__(self):
        v = np.atleast_2d(np.array(self.vertices, dtype=float))
        if v.ndim != 2 or v.shape[0] == 0:
            raise InvalidPolytope("need a non-empty list of points")
        if not np.all(np.isfinite(v)):
            raise InvalidPolytope("vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        c = v.mean(axis=0)
        if v.shape[0] == 1:
            basis = np.zeros((v.shape[1], 0))
        else:
            _, s, vt = np.linalg.svd(v - c, full_matrices=False)
            r = int(np.sum(s > 1e-10 * max(1.0, s[0])))
            basis = vt[:r].T
        if basis.shape[1] == v.shape[1]:
            c, basis = np.zeros(v.shape[1]), np.eye(v.shape[1])
        object.__setattr__(self, "_hull", (c, basis))

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def dim(self) -> int:
        return self._hull[1].shape[1]

    def to_hull(self, x) -> np.ndarray:
        c, basis = self._hull
        return (np.asarray(x, dtype=float) - c) @ basis

    def from_hull(self, y) -> np.ndarray:
        c, basis = self._hull
        return c + np.asarray(y, dtype=float) @ basis.T

    def hull_vertices(self) -> np.ndarray:
        return self.to_hull(self.vertices)

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def ambient_function(self, coef: np.ndarray) -> AffineFunction:
        """Convert hull-coordinate coefficients to an affine function on the ambient space."""
        c, basis = self._hull
        g = basis @ coef[1:]
        return AffineFunction(float(coef[0] - g @ c), g)

    def to_dict(self) -> dict:
        return {"name": self.name, "vertices": self.vertices.tolist()}


def make_polytope(vertices, name: str = "", validate: bool = True) -> Polytope:
    P = Polytope(vertices, name)
    if validate:
        validate_polytope(P)
    return P


def validate_polytope(P: Polytope) -> None:
    v = P.vertices
    for i in range(P.n_vertices):
        for j in range(i + 1, P.n_vertices):
            if np.max(np.abs(v[i] - v[j])) <= VERTEX_TOL:
                raise InvalidPolytope(f"vertices {i} and {j} coincide", witness={"pair": [i, j]})
    if P.n_vertices == 1:
        return
    for i in range(P.n_vertices):
        others = np.delete(v, i, axis=0)
        if _convex_weights(others, v[i]) is not None:
            raise InvalidPolytope(f"vertex {i} lies in the hull of the others", witness={"vertex": i})


def _convex_weights(points: np.ndarray, x: np.ndarray) -> np.ndarray | None:
    """Weights lambda >= 0, sum 1, with lambda @ points = x, or None."""
    k = points.shape[0]
    E = np.vstack([points.T, np.ones((1, k))])
    f = np.concatenate([x, [1.0]])
    sol = lp_solve(LPProblem(np.zeros(k), A=-np.eye(k), b=np.zeros(k), E=E, f=f))
    return sol.x if sol.optimal else None


def contains(P: Polytope, x) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (P.ambient_dim,):
        return False
    if np.max(np.abs(P.from_hull(P.to_hull(x)) - x)) > 1e-9 * max(1.0, float(np.max(np.abs(x)))):
        return False
    return _convex_weights(P.hull_vertices(), P.to_hull(x)) is not None


# --- fixtures --------------------------------------------------------------


def regular_polygon(k: int, name: str = "") -> Polytope:
    ang = 2.0 * np.pi * np.arange(k) / k
    return make_polytope(np.stack([np.cos(ang), np.sin(ang)], axis=1), name or f"polygon:{k}")


def simplex(n: int) -> Polytope:
    """The n-simplex as the standard basis vectors of R^n (s_1 + ... + s_n = 1)."""
    if n < 1:
        raise InvalidPolytope("simplex:n needs n >= 1")
    return make_polytope(np.eye(n), f"simplex:{n}")


def square() -> Polytope:
    return make_polytope([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]], "square")


BUILTIN_POLYTOPES = ("triangle", "square", "pentagon", "simplex:n")


def builtin_polytope(name: str) -> Polytope:
    if name == "triangle":
        return regular_polygon(3, "triangle")
    if name == "square":
        return square()
    if name == "pentagon":
        return regular_polygon(5, "pentagon")
    if name.startswith("simplex:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError as err:
            raise ParseError(f"bad simplex size in {name!r}") from err
        return simplex(n)
    raise ParseError(f"unknown polytope {name!r}")


def load_polytope(source: str) -> Polytope:
    """A builtin name or a JSON file {"vertices": [[...], ...]}."""
    path = Path(source)
    if not path.exists():
        return builtin_polytope(source)
    try:
        data = json.loads(path.read_text())
        verts = data["vertices"]
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise ParseError(f"cannot read polytope file {source}: {err}") from err
    try:
        return make_polytope(verts, data.get("name", path.stem))
    except (ValueError, TypeError) as err:
        raise ParseError(f"bad vertex list in {source}: {err}") from err


# --- e_omega and property (**) ---------------------------------------------


def vertex_index(P: Polytope, omega) -> int:
    if isinstance(omega, (int, np.integer)):
        if not 0 <= int(omega) < P.n_vertices:
            raise NotAVertex(f"vertex index {omega} out of range")
        return int(omega)
    w = np.asarray(omega, dtype=float)
    d = np.max(np.abs(P.vertices - w), axis=1) if w.shape == (P.ambient_dim,) else None
    if d is None or d.min() > VERTEX_TOL:
        raise NotAVertex(f"{w.tolist()} is not a vertex", witness={"point": w.tolist()})
    return int(np.argmin(d))


def _e_omega_hull(P: Polytope, i: int, z: np.ndarray) -> tuple[float, np.ndarray]:
    hv = P.hull_vertices()
    k, r = hv.shape
    ones = np.ones((k, 1))
    A = -np.hstack([ones, hv])
    E = np.concatenate([[1.0], hv[i]])[None]
    c = np.concatenate([[1.0], z])
    sol = lp_solve(LPProblem(c, A=A, b=np.zeros(k), E=E, f=[1.0]))
    if not sol.optimal:
        raise PointOutside(f"e_omega LP is {sol.status}")
    return sol.value, sol.x


def e_omega_value(P: Polytope, omega, zeta, check_membership: bool = True) -> float:
    """inf { a(zeta) : a affine, a >= 0 on P, a(omega) = 1 }."""
    i = vertex_index(P, omega)
    z = np.asarray(zeta, dtype=float)
    if check_membership and not contains(P, z):
        raise PointOutside(f"{z.tolist()} is not in the polytope", witness={"point": z.tolist()})
    return _e_omega_hull(P, i, P.to_hull(z))[0]


def e_omega_function(P: Polytope, omega, zeta) -> AffineFunction:
    """An optimal affine function a for e_omega(zeta), on ambient coordinates."""
    i = vertex_index(P, omega)
    _, coef = _e_omega_hull(P, i, P.to_hull(np.asarray(zeta, dtype=float)))
    return P.ambient_function(coef)


@dataclass(frozen=True)
class VertexStarStar:
    vertex: int
    vertex_values: list
    fit_residual: float
    affine_fit: bool
    centroid_value: float
    centroid_fit: float
    interior_residual: float | None
    affine: bool
    unique_one: bool | None

    @property
    def passes(self) -> bool:
        return bool(self.affine and self.unique_one)


@dataclass(frozen=True)
class StarStarReport:
    polytope: str
    vertices: list
    passes: bool
    distinguishability_note: str = "orthogonality of extreme points is taken as LP distinguishability"

    def to_dict(self) -> dict:
        return {
            "polytope": self.polytope,
            "passes": self.passes,
            "vertices": [dict(v.__dict__, passes=v.passes) for v in self.vertices],
        }


def star_star_check(P: Polytope, interior_samples: int = 64, rng: np.random.Generator | None = None) -> StarStarReport:
    rng = np.random.default_rng(0) if rng is None else rng
    hv = P.hull_vertices()
    k = P.n_vertices
    design = np.hstack([np.ones((k, 1)), hv])
    cen = hv.mean(axis=0)
    weights = rng.dirichlet(np.ones(k), size=interior_samples) if interior_samples else np.zeros((0, k))
    interior = weights @ hv
    out = []
    for i in range(k):
        vals = np.array([_e_omega_hull(P, i, hv[j])[0] for j in range(k)])
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        fit_vals = design @ coef
        fit_res = float(np.max(np.abs(fit_vals - vals)))
        affine_fit = fit_res < FIT_TOL
        cval = _e_omega_hull(P, i, cen)[0]
        cfit = float(coef[0] + cen @ coef[1:])
        interior_res = None
        affine = False
        unique = None
        if affine_fit:
            lp_vals = np.array([_e_omega_hull(P, i, z)[0] for z in interior])
            fits = coef[0] + interior @ coef[1:]
            interior_res = float(max(abs(cval - cfit), np.max(np.abs(lp_vals - fits), initial=0.0)))
            affine = interior_res < FIT_TOL
            if affine:
                others = np.delete(fit_vals, i)
                unique = bool(np.all(others < 1.0 - FIT_TOL))
        out.append(
            VertexStarStar(i, vals.tolist(), fit_res, affine_fit, float(cval), cfit, interior_res, affine, unique)
        )
    return StarStarReport(P.name, out, all(v.passes for v in out))


def concavity_check(P: Polytope, omega, samples: int, rng: np.random.Generator) -> float:
    """Largest violation of e(l z1 + (1-l) z2) >= l e(z1) + (1-l) e(z2) over sampled triples."""
    i = vertex_index(P, omega)
    hv = P.hull_vertices()
    k = P.n_vertices
    worst = -np.inf
    for _ in range(samples):
        z1, z2 = rng.dirichlet(np.ones(k), size=2) @ hv
        lam = rng.random()
        mid = _e_omega_hull(P, i, lam * z1 + (1 - lam) * z2)[0]
        chord = lam * _e_omega_hull(P, i, z1)[0] + (1 - lam) * _e_omega_hull(P, i, z2)[0]
        worst = max(worst, chord - mid)
    return float(worst)


# --- distinguishability ----------------------------------------------------


@dataclass(frozen=True)
class Distinguishability:
    distinguishable: bool
    witness: AffineFunction | None = None

    def __bool__(self):
        return self.distinguishable


def perfectly_distinguishable(P: Polytope, omega1, omega2) -> Distinguishability:
    """Is there an effect a (0 <= a <= 1 on P) with a(omega1) = 1 and a(omega2) = 0?"""
    i, j = vertex_index(P, omega1), vertex_index(P, omega2)
    if i == j:
        return Distinguishability(False)
    hv = P.hull_vertices()
    k, r = hv.shape
    design = np.hstack([np.ones((k, 1)), hv])
    A = np.vstack([-design, design])
    b = np.concatenate([np.zeros(k), np.ones(k)])
    E = design[[i, j]]
    sol = lp_solve(LPProblem(np.zeros(r + 1), A=A, b=b, E=E, f=[1.0, 0.0]))
    if not sol.optimal:
        return Distinguishability(False)
    return Distinguishability(True, P.ambient_function(sol.x))


def distinguishability_matrix(P: Polytope) -> np.ndarray:
    k = P.n_vertices
    out = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = bool(perfectly_distinguishable(P, i, j))
    return out


# --- affine automorphisms --------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """x -> M x + t on hull coordinates, permuting the vertices by ``perm``."""

    matrix: np.ndarray
    shift: np.ndarray
    perm: tuple

    def apply_hull(self, y) -> np.ndarray:
        return np.asarray(y, dtype=float) @ self.matrix.T + self.shift

    def compose(self, other: AffineMap) -> AffineMap:
        """self after other."""
        return AffineMap(
            self.matrix @ other.matrix,
            self.matrix @ other.shift + self.shift,
            tuple(self.perm[other.perm[i]] for i in range(len(self.perm))),
        )


def _affine_basis(hv: np.ndarray) -> list[int]:
    r = hv.shape[1]
    chosen = [0]
    for i in range(1, hv.shape[0]):
        if len(chosen) == r + 1:
            break
        trial = hv[chosen + [i]] - hv[0]
        if np.linalg.matrix_rank(trial[1:], tol=1e-9) == len(chosen):
            chosen.append(i)
    return chosen


def _fit_map(src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r = src.shape[1]
    if r == 0:
        return np.zeros((0, 0)), np.zeros(0)
    ds = (src[1:] - src[0]).T
    dd = (dst[1:] - dst[0]).T
    m = np.linalg.solve(ds.T, dd.T).T if ds.shape[0] == ds.shape[1] else dd @ np.linalg.pinv(ds)
    return m, dst[0] - m @ src[0]


def _match_vertices(hv: np.ndarray, img: np.ndarray, tol: float) -> tuple | None:
    if hv.shape[1] == 0:
        return tuple(range(hv.shape[0]))
    perm = []
    for y in img:
        d = np.max(np.abs(hv - y), axis=1)
        j = int(np.argmin(d))
        if d[j] > tol:
            return None
        perm.append(j)
    return tuple(perm) if len(set(perm)) == len(perm) else None


def polytope_automorphisms(P: Polytope, tol: float = 1e-9) -> list[AffineMap]:
    """All affine bijections of P, found by mapping an affine basis of vertices onto every ordered vertex tuple."""
    k = P.n_vertices
    if k > MAX_VERTICES:
        raise TooManyVertices(f"{k} vertices exceed the search bound {MAX_VERTICES}")
    hv = P.hull_vertices()
    base = _affine_basis(hv)
    scale = max(1.0, float(np.max(np.abs(hv), initial=0.0)))
    found: dict[tuple, AffineMap] = {}
    for tup in permutations(range(k), len(base)):
        m, t = _fit_map(hv[base], hv[list(tup)])
        perm = _match_vertices(hv, hv @ m.T + t if hv.shape[1] else hv, tol * scale)
        if perm is not None and perm not in found:
            found[perm] = AffineMap(m, t, perm)
    return [found[p] for p in sorted(found)]


def group_closed(maps: list[AffineMap]) -> bool:
    perms = {m.perm for m in maps}
    return all(a.compose(b).perm in perms for a in maps for b in maps)


def dualize_automorphism(P: Polytope, T: AffineMap) -> np.ndarray:
    """Matrix of T* on coefficient vectors (offset, gradient): (T* a)(x) = a(T x)."""
    hv = P.hull_vertices()
    if _match_vertices(hv, T.apply_hull(hv), 1e-9 * max(1.0, float(np.max(np.abs(hv), initial=0.0)))) is None:
        raise NotAnAutomorphism("map does not permute the vertices")
    r = T.matrix.shape[0]
    out = np.zeros((r + 1, r + 1))
    out[0, 0] = 1.0
    out[0, 1:] = T.shift
    out[1:, 1:] = T.matrix.T
    return out


def polytope_bit_symmetry(P: Polytope):
    """Do affine symmetries act transitively on ordered distinguishable vertex pairs?"""
    from .symmetry import SymmetryVerdict

    maps = polytope_automorphisms(P)
    dist = distinguishability_matrix(P)
    k = P.n_vertices
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j and dist[i, j]]
    if not pairs:
        return SymmetryVerdict("bit", True, None, len(maps), note="no distinguishable pairs")
    start = pairs[0]
    orbit = {(m.perm[start[0]], m.perm[start[1]]) for m in maps}
    missing = [p for p in pairs if p not in orbit]
    obstruction = None
    if missing:
        obstruction = {
            "reason": "NoAffineTransporter",
            "pair_a": list(start),
            "pair_b": list(missing[0]),
            "vertices_a": P.vertices[list(start)].tolist(),
            "vertices_b": P.vertices[list(missing[0])].tolist(),
        }
    return SymmetryVerdict(
        "bit",
        not missing,
        None,
        len(maps),
        obstruction=obstruction,
        note=f"{len(pairs)} ordered distinguishable pairs, group order {len(maps)}",
    )
