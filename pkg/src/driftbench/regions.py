"""Density-ratio regions of the input domain.

R1 is where the test-to-training density ratio is at most 1 (the training
density dominates), R2 where it exceeds 1.  The boundary between them is the
hypersurface on which the two Gaussian densities are equal.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DimensionError, EmptyInputError, UnsupportedDimensionError
from .gauss import GaussianSpec, _as_points, log_pdf


class Region(enum.IntEnum):
    R1 = 1
    R2 = 2


def log_density_ratio(train: GaussianSpec, test: GaussianSpec, x) -> np.ndarray | float:
    if train.dim != test.dim:
        raise DimensionError(f"train dimension {train.dim} != test dimension {test.dim}")
    return log_pdf(test, x) - log_pdf(train, x)


def density_ratio(train: GaussianSpec, test: GaussianSpec, x) -> np.ndarray | float:
    """p_test(x) / p_train(x), evaluated in log space."""
    return np.exp(log_density_ratio(train, test, x))


def hypersurface(train: GaussianSpec, test: GaussianSpec, x) -> np.ndarray | float:
    """Quadratic form whose sign separates R1 (>= 0) from R2 (< 0).

    ``(x-mu)^T Sigma^{-1} (x-mu) + log|Sigma| - (x-mu0)^T Sigma0^{-1} (x-mu0) - log|Sigma0|``
    which for the standard-normal training density reduces to
    ``(x-mu)^T Sigma^{-1} (x-mu) + log|Sigma| - x^T x``.  It equals minus twice
    the log density ratio, so it is nonnegative exactly where the ratio is <= 1.
    """
    if train.dim != test.dim:
        raise DimensionError(f"train dimension {train.dim} != test dimension {test.dim}")
    return (
        test.mahalanobis_sq(x) + test.log_det
        - train.mahalanobis_sq(x) - train.log_det
    )


@dataclass(frozen=True, eq=False)
class RegionPartition:
    ratios: np.ndarray
    regions: np.ndarray

    def __len__(self):
        return self.ratios.size

    def mask(self, region: Region) -> np.ndarray:
        return self.regions == int(region)

    def counts(self) -> dict[str, int]:
        return {r.name: int(np.sum(self.regions == int(r))) for r in Region}


def assign_regions(train: GaussianSpec, test: GaussianSpec, points) -> RegionPartition:
    """Tag each row of ``points`` with R1/R2 by the sign of the hypersurface form.

    Points exactly on the boundary (ratio 1) go to R1.  The stored ratios are
    computed independently from the two log densities.
    """
    X, _ = _as_points(points, train.dim)
    h = np.atleast_1d(hypersurface(train, test, X))
    # h = -2 log ratio, so ratio <= 1 (R1) is h >= 0; the boundary h == 0 stays in R1
    regions = np.where(h >= 0.0, int(Region.R1), int(Region.R2)).astype(np.int8)
    ratios = np.atleast_1d(density_ratio(train, test, X))
    return RegionPartition(ratios, regions)


class Taxonomy(str, enum.Enum):
    VERTICAL_PLANE = "VerticalPlane"
    AXIS_PARALLEL_PLANE = "AxisParallelPlane"
    PARALLEL_PLANES = "ParallelPlanes"
    ELLIPTIC_CYLINDER = "EllipticCylinder"
    RIGHT_CIRCULAR_CYLINDER = "RightCircularCylinder"
    SHIFTED_CYLINDER = "ShiftedCylinder"
    GENERAL = "General"


_EXACT = 1e-12
COEFF_NAMES = ("x2", "y2", "x", "y", "xy")


@dataclass(frozen=True)
class Surface2D:
    """Equal-density curve of a 2-D test Gaussian against the standard normal.

    The curve is ``coeff_x2 x^2 + coeff_y2 y^2 + coeff_x x + coeff_y y +
    coeff_xy xy = rhs``; points with left-hand side ``>= rhs`` lie in R1.
    """

    coeff_x2: float
    coeff_y2: float
    coeff_x: float
    coeff_y: float
    coeff_xy: float
    rhs: float
    a: float
    b: float
    c: float
    taxonomy: Taxonomy
    mu1: float
    mu2: float
    sigma1: float
    sigma2: float
    rho: float

    @property
    def coefficients(self) -> tuple[float, ...]:
        return (self.coeff_x2, self.coeff_y2, self.coeff_x, self.coeff_y, self.coeff_xy)

    def lhs(self, x, y):
        return (
            self.coeff_x2 * x * x + self.coeff_y2 * y * y + self.coeff_x * x
            + self.coeff_y * y + self.coeff_xy * x * y
        )

    def residual(self, x, y):
        """Left-hand side minus ``rhs``; equals minus the log density ratio."""
        return self.lhs(x, y) - self.rhs

    def equation_vector(self) -> np.ndarray:
        """(x^2, y^2, x, y, xy, constant) of the form ``... - rhs = 0``."""
        return np.array([*self.coefficients, -self.rhs])

    def normalized(self) -> np.ndarray:
        """Equation vector scaled so its first nonzero entry is 1."""
        v = self.equation_vector()
        nz = np.flatnonzero(np.abs(v) > _EXACT)
        return v / v[nz[0]] if nz.size else v

    @property
    def center(self) -> tuple[float, float] | None:
        """Center of a shifted cylinder, ``(mu1/(1-s1^2), mu2/(1-s2^2))``."""
        if self.taxonomy is not Taxonomy.SHIFTED_CYLINDER:
            return None
        return (self.mu1 / (1 - self.sigma1**2), self.mu2 / (1 - self.sigma2**2))

    @property
    def semi_axes_sq(self) -> tuple[float, float] | None:
        """(alpha^2, beta^2) of a centered elliptic or circular cylinder."""
        if self.taxonomy not in (Taxonomy.ELLIPTIC_CYLINDER, Taxonomy.RIGHT_CIRCULAR_CYLINDER):
            return None
        s1, s2 = self.sigma1, self.sigma2
        log_s = math.log(s1 * s2)
        return (2 * s1**2 * log_s / (s1**2 - 1), 2 * s2**2 * log_s / (s2**2 - 1))

    def to_dict(self) -> dict:
        return {
            "coefficients": dict(zip(COEFF_NAMES, self.coefficients)),
            "rhs": self.rhs,
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "taxonomy": self.taxonomy.value,
            "equation": self.equation(),
            "normalized_equation": self.equation(normalized=True),
        }

    def equation(self, digits: int = 6, normalized: bool = False) -> str:
        """Human-readable ``S: ... = 0`` with rational coefficients where exact.

        ``normalized=True`` first scales the equation so its leading term is 1.
        """
        vec = self.normalized() if normalized else self.equation_vector()
        terms = []
        for name, val in zip(("x^2", "y^2", "x", "y", "x*y", ""), vec):
            if abs(val) <= _EXACT:
                continue
            mag = _pretty(abs(val), digits)
            if name:
                mag = name if mag == "1" else f"{mag}*{name}"
            sign = "-" if val < 0 else "+"
            terms.append((sign, mag))
        if not terms:
            return "S: 0 = 0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mag in terms[1:]:
            out += f" {sign} {mag}"
        return f"S: {out} = 0"


def _pretty(v: float, digits: int) -> str:
    frac = Fraction(v).limit_denominator(96)
    if abs(float(frac) - v) < 1e-12:
        return str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"
    return f"{v:.{digits}g}"


def surface_coefficients(test: GaussianSpec) -> Surface2D:
    """Equal-density surface of a 2-D ``test`` density against ``N(0, I)``.

    Raises
    ------
    UnsupportedDimensionError
        If ``test`` is not two-dimensional.
    ValueError
        If the correlation coefficient has magnitude >= 1.
    """
    if test.dim != 2:
        raise UnsupportedDimensionError(f"surface equations are two-dimensional, got d={test.dim}")
    mu1, mu2 = (float(v) for v in test.mean)
    s1 = math.sqrt(test.cov[0, 0])
    s2 = math.sqrt(test.cov[1, 1])
    rho = float(test.cov[0, 1]) / (s1 * s2)
    if abs(rho) >= 1.0:
        raise ValueError(f"|rho| must be < 1, got {rho}")
    b = 1.0 / (2.0 * (1.0 - rho**2))
    a = math.log(1.0 / (s1 * s2 * math.sqrt(1.0 - rho**2)))
    c = a - b * mu1**2 / s1**2 - b * mu2**2 / s2**2
    r = c + 2 * b * rho * mu1 * mu2 / (s1 * s2)
    cross = 2 * b * rho / (s1 * s2)
    return Surface2D(
        coeff_x2=-0.5 + b / s1**2,
        coeff_y2=-0.5 + b / s2**2,
        coeff_x=-(2 * b * mu1 / s1**2 - cross * mu2),
        coeff_y=-(2 * b * mu2 / s2**2 - cross * mu1),
        coeff_xy=-cross,
        rhs=r,
        a=a,
        b=b,
        c=c,
        taxonomy=_classify(mu1, mu2, s1, s2, rho),
        mu1=mu1,
        mu2=mu2,
        sigma1=s1,
        sigma2=s2,
        rho=rho,
    )


def _classify(mu1, mu2, s1, s2, rho) -> Taxonomy:
    if abs(rho) > _EXACT:
        return Taxonomy.GENERAL
    shifted = [abs(mu1) > _EXACT, abs(mu2) > _EXACT]
    scaled = [abs(s1 - 1) > _EXACT, abs(s2 - 1) > _EXACT]
    if not any(scaled):
        if all(shifted):
            return Taxonomy.VERTICAL_PLANE
        if any(shifted):
            return Taxonomy.AXIS_PARALLEL_PLANE
        return Taxonomy.GENERAL  # identical densities, no surface
    if not any(shifted):
        if all(scaled):
            if abs(s1 - s2) <= _EXACT:
                return Taxonomy.RIGHT_CIRCULAR_CYLINDER
            return Taxonomy.ELLIPTIC_CYLINDER
        return Taxonomy.PARALLEL_PLANES
    if all(scaled):
        return Taxonomy.SHIFTED_CYLINDER
    return Taxonomy.GENERAL


QUARTILE_LABELS = ("Q1", "Q2", "Q3", "Q4")


def quartile_summary(values) -> tuple[float, float, float, float, float]:
    """(min, Q1, median, Q3, max) with linear interpolation between closest ranks."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInputError("quartile summary of an empty sequence")
    q = np.percentile(v, [0, 25, 50, 75, 100])
    return tuple(float(x) for x in q)


def bin_by_quartile(values, quartiles) -> np.ndarray:
    """Bin index 0..3 (Q1..Q4) per value: [min,Q1], (Q1,med], (med,Q3], (Q3,max]."""
    v = np.asarray(values, dtype=float).ravel()
    lo, q1, med, q3, hi = quartiles
    if np.any(v < lo) or np.any(v > hi):
        raise ValueError("value outside the [min, max] range of the quartile summary")
    return np.searchsorted(np.array([q1, med, q3]), v, side="left").astype(np.int8)
