"""Multivariate Gaussian input densities and the affine drifts between them.

The training density of every benchmark problem is the standard normal
``N(0, I)``; the test density is obtained by translating its mean and
scaling/rotating its covariance.  Transforms act on the density parameters,
never on sampled points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._rng import make_generator
from .exceptions import DimensionError, FactorizationError, UnsupportedDimensionError

_SYM_TOL = 1e-12
_PIVOT_TOL = 1e-12
_LOG_2PI = math.log(2.0 * math.pi)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    """Mean vector and covariance matrix of a d-variate normal density.

    Parameters
    ----------
    mean : array-like, shape (d,)
    cov : array-like, shape (d, d)
        Symmetric positive definite.

    Raises
    ------
    DimensionError
        If shapes disagree.
    FactorizationError
        If ``cov`` is asymmetric beyond 1e-12 or its Cholesky factorization
        fails or produces a pivot at or below 1e-12.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _readonly(np.atleast_1d(self.mean))
        cov = _readonly(np.atleast_2d(self.cov))
        if mean.ndim != 1 or mean.size == 0:
            raise DimensionError(f"mean must be a non-empty vector, got shape {mean.shape}")
        d = mean.size
        if cov.shape != (d, d):
            raise DimensionError(f"cov shape {cov.shape} does not match mean length {d}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise FactorizationError("non-finite Gaussian parameters")
        if np.max(np.abs(cov - cov.T)) > _SYM_TOL:
            raise FactorizationError("covariance is not symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        self.chol  # validate eagerly

    @classmethod
    def standard(cls, dim: int) -> "GaussianSpec":
        return cls(np.zeros(dim), np.eye(dim))

    @property
    def dim(self) -> int:
        return self.mean.size

    @cached_property
    def chol(self) -> np.ndarray:
        """Lower Cholesky factor of the covariance."""
        try:
            L = np.linalg.cholesky(self.cov)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError(f"covariance is not positive definite: {exc}") from None
        if np.any(np.diag(L) ** 2 <= _PIVOT_TOL):
            raise FactorizationError("covariance has a Cholesky pivot <= 1e-12")
        L.setflags(write=False)
        return L

    @cached_property
    def log_det(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))

    def mahalanobis_sq(self, x) -> np.ndarray | float:
        """(x - mean)^T cov^{-1} (x - mean), by triangular solves."""
        X, single = _as_points(x, self.dim)
        z = _solve_lower(self.chol, (X - self.mean).T)
        q = np.einsum("ij,ij->j", z, z)
        return float(q[0]) if single else q

    def __eq__(self, other):
        if not isinstance(other, GaussianSpec):
            return NotImplemented
        return np.array_equal(self.mean, other.mean) and np.array_equal(self.cov, other.cov)

    def __hash__(self):
        return hash((self.mean.tobytes(), self.cov.tobytes()))

    def __repr__(self):
        return f"GaussianSpec(mean={self.mean.tolist()}, cov={self.cov.tolist()})"

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist()}


def _as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise DimensionError(f"expected points of dimension {dim}, got shape {np.shape(x)}")
    return X, single


def _solve_lower(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    # forward substitution; d <= 4 here so a Python loop over rows is cheap
    Z = np.empty_like(B, dtype=float)
    for i in range(L.shape[0]):
        Z[i] = (B[i] - L[i, :i] @ Z[:i]) / L[i, i]
    return Z


def log_pdf(spec: GaussianSpec, x) -> np.ndarray | float:
    """Log density of ``spec`` at one point ``x`` (shape (d,)) or at each row of ``x``."""
    q = spec.mahalanobis_sq(x)
    return -0.5 * (spec.dim * _LOG_2PI + spec.log_det + q)


@dataclass(frozen=True)
class SampleMatrix:
    points: np.ndarray
    seed: int

    def __post_init__(self):
        pts = _readonly(self.points)
        if pts.ndim != 2:
            raise DimensionError("points must be a 2-D array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("sample contains non-finite values")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def sample(spec: GaussianSpec, n: int, seed: int) -> SampleMatrix:
    """Draw ``n`` points as ``mean + L z`` with ``z`` standard normal.

    Identical ``(spec, n, seed)`` always gives bit-identical output.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = make_generator(seed)
    z = rng.standard_normal((n, spec.dim))
    return SampleMatrix(spec.mean + z @ spec.chol.T, seed)


@dataclass(frozen=True, eq=False)
class DriftTransform:
    """Translation of the mean plus axis scaling and an optional planar rotation.

    ``scale_factors`` are the diagonal of the scaling matrix ``S`` (so variances
    grow by ``s_i**2``).  ``rotation_angle`` is in degrees and rotates the
    (x1, x2) plane; it is only supported for d = 2 and d = 4.
    """

    translation: np.ndarray
    scale_factors: np.ndarray
    rotation_angle: float | None = None

    def __post_init__(self):
        t = _readonly(np.atleast_1d(self.translation))
        s = _readonly(np.atleast_1d(self.scale_factors))
        if t.ndim != 1 or s.shape != t.shape:
            raise DimensionError("translation and scale_factors must be vectors of equal length")
        if not np.all(np.isfinite(t)):
            raise ValueError("translation must be finite")
        if not np.all(np.isfinite(s)) or np.any(s <= 0):
            raise ValueError("scale factors must be finite and strictly positive")
        if self.rotation_angle is not None and not math.isfinite(self.rotation_angle):
            raise ValueError("rotation angle must be finite")
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "scale_factors", s)

    @classmethod
    def identity(cls, dim: int) -> "DriftTransform":
        return cls(np.zeros(dim), np.ones(dim))

    @property
    def dim(self) -> int:
        return self.translation.size

    def __eq__(self, other):
        if not isinstance(other, DriftTransform):
            return NotImplemented
        return (
            np.array_equal(self.translation, other.translation)
            and np.array_equal(self.scale_factors, other.scale_factors)
            and self.rotation_angle == other.rotation_angle
        )

    def __hash__(self):
        return hash((self.translation.tobytes(), self.scale_factors.tobytes(), self.rotation_angle))

    def to_dict(self) -> dict:
        return {
            "translation": self.translation.tolist(),
            "scale_factors": self.scale_factors.tolist(),
            "rotation_angle": self.rotation_angle,
        }


def rotation_matrix(angle_deg: float, dim: int) -> np.ndarray:
    """Basic rotation by ``angle_deg`` in the (x1, x2) plane, for d in {2, 4}."""
    if dim not in (2, 4):
        raise UnsupportedDimensionError(f"rotation is only defined for d in {{2, 4}}, got d={dim}")
    theta = math.radians(angle_deg)
    c, s = math.cos(theta), math.sin(theta)
    R = np.eye(dim)
    R[:2, :2] = [[c, -s], [s, c]]
    return R


def apply_drift(base: GaussianSpec, t: DriftTransform) -> GaussianSpec:
    """Drifted density: translated mean, covariance ``R (S S cov) R^T``.

    Scaling is applied before rotation.  The product ``S S cov`` is taken
    literally and then symmetrized, which for the identity base covariance
    used throughout the catalog is the diagonal matrix of squared factors.
    """
    if t.dim != base.dim:
        raise DimensionError(f"transform dimension {t.dim} != density dimension {base.dim}")
    S = np.diag(t.scale_factors)
    cov = S @ S @ base.cov
    if t.rotation_angle is not None:
        R = rotation_matrix(t.rotation_angle, base.dim)
        cov = R @ cov @ R.T
    cov = 0.5 * (cov + cov.T)
    return GaussianSpec(base.mean + t.translation, cov)
