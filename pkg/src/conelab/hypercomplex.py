"""Real, complex, quaternion and octonion arithmetic via Cayley-Dickson doubling.

A hypercomplex number of dimension d (1, 2, 4 or 8) is stored as a length-d
real vector of coefficients on the basis e0 = 1, e1, ..., e_{d-1}.  Doubling
uses the convention

    (a, b)(c, d) = (ac - conj(d) b,  d a + b conj(c))

where a pair (a, b) stands for a + b*l with l the new imaginary unit.  Starting
from the reals this gives i = e1; then j = e2, k = e3 = e1 e2 for the
quaternions; the octonion units e4..e7 are e4 = l, e5 = e1 l, e6 = e2 l,
e7 = e3 l.  With this table a quaternion q = z1 + z2 j (z1 = q0 + q1 i,
z2 = q2 + q3 i) has the complex 2x2 image [[z1, z2], [-conj(z2), conj(z1)]].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DIMS = (1, 2, 4, 8)
FIELD_NAMES = {1: "R", 2: "C", 4: "H", 8: "O"}


def _conj(x: np.ndarray) -> np.ndarray:
    y = -x
    y[..., 0] = x[..., 0]
    return y


def _cd_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = x.shape[-1]
    if d == 1:
        return x * y
    h = d // 2
    a, b = x[..., :h], x[..., h:]
    c, e = y[..., :h], y[..., h:]
    first = _cd_mul(a, c) - _cd_mul(_conj(e), b)
    second = _cd_mul(e, a) + _cd_mul(b, _conj(c))
    return np.concatenate([first, second], axis=-1)


@lru_cache(maxsize=None)
def mult_table(d: int) -> np.ndarray:
    """Structure constants C with (xy)_k = sum_ij x_i y_j C[i, j, k]."""
    if d not in DIMS:
        raise ValueError(f"hypercomplex dimension must be one of {DIMS}, got {d}")
    eye = np.eye(d)
    table = np.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            table[i, j] = _cd_mul(eye[i], eye[j])
    table.setflags(write=False)
    return table


def hmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Broadcasting product of coefficient arrays (last axis = d)."""
    return np.einsum("...i,...j,ijk->...k", x, y, mult_table(x.shape[-1]))


def hconj(x: np.ndarray) -> np.ndarray:
    return _conj(np.asarray(x, dtype=float))


def hnorm(x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(x) ** 2, axis=-1))


@dataclass(frozen=True, eq=False)
class Hypercomplex:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.shape[0] not in DIMS:
            raise ValueError(f"need a coefficient vector of length 1, 2, 4 or 8, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def __mul__(self, other: Hypercomplex) -> Hypercomplex:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Hypercomplex(hmul(self.coeffs, other.coeffs))

    def __add__(self, other: Hypercomplex) -> Hypercomplex:
        return Hypercomplex(self.coeffs + other.coeffs)

    def __sub__(self, other: Hypercomplex) -> Hypercomplex:
        return Hypercomplex(self.coeffs - other.coeffs)

    def conj(self) -> Hypercomplex:
        return Hypercomplex(hconj(self.coeffs))

    def norm(self) -> float:
        return float(hnorm(self.coeffs))

    def __repr__(self):
        return f"Hypercomplex({FIELD_NAMES[self.dim]}, {self.coeffs.tolist()})"
