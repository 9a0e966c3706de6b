"""Complex linear algebra on short vectors: inner products, rays, angles.

Conventions
-----------
``inner_product(u, v) = sum_i u_i * conj(v_i)`` -- the conjugate is taken on
the *second* argument. Everything else in the package uses this order.

A ray is the class of a nonzero vector under multiplication by a nonzero
complex scalar. Its canonical representative has unit norm and its first
coordinate of magnitude above ``tol`` is a positive real number.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroVectorError

#: Tolerance for decision predicates (orthogonality, ray identity).
DECISION_TOL = 1e-9
#: Tolerance for checks that reproduce exact constructions.
REPRODUCTION_TOL = 1e-12
#: Grid used to bucket canonical coordinates before the exact comparison.
HASH_GRID = 1e-6


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


def _check_same_dim(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")


def inner_product(u, v) -> complex:
    """Return ``sum_i u_i * conj(v_i)``."""
    u, v = as_vector(u), as_vector(v)
    _check_same_dim(u, v)
    return complex(np.dot(u, np.conj(v)))


def norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def _hash_key(unit: np.ndarray) -> tuple[int, ...]:
    q = np.rint(np.stack([unit.real, unit.imag], axis=-1).ravel() / HASH_GRID)
    # +0 folds -0.0 into 0.0 before the int conversion
    return tuple(int(x) for x in q + 0.0)


@dataclass(frozen=True, eq=False)
class Ray:
    """Canonical representative of a complex projective ray.

    Two rays compare equal when their canonical unit vectors are closer than
    ``tol`` in Euclidean norm. ``hash_key`` quantizes the coordinates to
    ``HASH_GRID`` so that rays can be bucketed; equality inside a bucket is
    still decided by the tolerance comparison.
    """

    unit: tuple[complex, ...]
    tol: float = field(default=DECISION_TOL)
    hash_key: tuple[int, ...] = field(default=(), repr=False)

    @property
    def d(self) -> int:
        return len(self.unit)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.unit, dtype=complex)

    def distance(self, other: "Ray") -> float:
        return float(np.linalg.norm(self.vector - other.vector))

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        if self.d != other.d:
            return False
        return self.distance(other) < self.tol

    def __hash__(self):
        return hash(self.hash_key)

    def scaled(self) -> np.ndarray:
        """The representative whose leading nonzero coordinate equals 1."""
        v = self.vector
        lead = _leading_index(v, self.tol)
        return v / v[lead]


def _leading_index(v: np.ndarray, tol: float) -> int:
    big = np.flatnonzero(np.abs(v) > tol)
    if big.size == 0:
        raise ZeroVectorError("vector has no coordinate above tolerance")
    return int(big[0])


def canonicalize_ray(v, tol: float = DECISION_TOL) -> Ray:
    """Return the canonical ray of a nonzero vector.

    Raises ZeroVectorError when ``||v|| <= tol``.
    """
    v = as_vector(v)
    n = np.linalg.norm(v)
    if not n > tol:
        raise ZeroVectorError(f"vector norm {n:.3g} is not above tolerance {tol:.3g}")
    u = v / n
    lead = _leading_index(u, tol)
    u = u * (abs(u[lead]) / u[lead])
    u[lead] = abs(u[lead])
    return Ray(unit=tuple(complex(x) for x in u), tol=tol, hash_key=_hash_key(u))


def cos_angle(r1: Ray, r2: Ray) -> float:
    """Magnitude of the overlap of two rays, in ``[0, 1]`` up to rounding."""
    return abs(inner_product(r1.vector, r2.vector))


def is_orthogonal(r1: Ray, r2: Ray, tol: float = DECISION_TOL) -> bool:
    return cos_angle(r1, r2) < tol


def canonicalize_rows(vs: np.ndarray, tol: float = DECISION_TOL) -> np.ndarray:
    """Vectorized canonicalization of the rows of ``vs`` (shape ``(..., d)``).

    Rows with norm at or below ``tol`` come back as NaN.
    """
    vs = np.asarray(vs, dtype=complex)
    n = np.linalg.norm(vs, axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(n > tol, vs / n, np.nan)
        big = np.abs(u) > tol
        lead = np.argmax(big, axis=-1)[..., None]
        lead_val = np.take_along_axis(u, lead, axis=-1)
        u = u * (np.abs(lead_val) / lead_val)
    return u


def overlap_matrix(rows: np.ndarray) -> np.ndarray:
    """``|<r_i, r_j>|`` for all pairs of (already unit) rows; works batched."""
    rows = np.asarray(rows, dtype=complex)
    return np.abs(np.einsum("...id,...jd->...ij", rows, np.conj(rows)))
