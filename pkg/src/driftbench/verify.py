"""Built-in analytic self-checks (no training involved).

* reference intersection equations for the six distinct 2-D drifts
* region assignment by the quadratic form agrees with the density-ratio sign
* drifted covariance matrices match their published values
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import derive_seed
from .experiments import CATALOG, catalog
from .gauss import sample
from .regions import Region, Taxonomy, assign_regions, log_density_ratio, surface_coefficients

_L2, _L6, _L12 = math.log(2.0), math.log(6.0), math.log(12.0)

# (x^2, y^2, x, y, xy, constant) of "... = 0", as printed for each figure panel
REFERENCE_SURFACES = {
    "Exp1.1": ((0, 0, 1, 0, 0, -1.5), Taxonomy.AXIS_PARALLEL_PLANE),
    "Exp1.3": ((0, 0, -3, -1, 0, 5), Taxonomy.VERTICAL_PLANE),
    "Exp1.5": ((-3 / 8, 0, 0, 0, 0, _L2), Taxonomy.PARALLEL_PLANES),
    "Exp1.7": ((-1 / 3, -1 / 4, 0, 0, 0, _L6 / 2), Taxonomy.ELLIPTIC_CYLINDER),
    "Exp1.9": ((-1 / 3, -1 / 4, -1, -1 / 2, 0, _L6 / 2 + 7 / 4), Taxonomy.SHIFTED_CYLINDER),
    "Exp1.11": ((-17 / 48, -17 / 48, -29 / 24, 11 / 24, -1 / 24, _L12 / 2 + 127 / 48), Taxonomy.GENERAL),
}

REFERENCE_COVARIANCES = {
    "Exp1.1": [[1, 0], [0, 1]],
    "Exp1.3": [[1, 0], [0, 1]],
    "Exp1.5": [[4, 0], [0, 1]],
    "Exp1.7": [[3, 0], [0, 2]],
    "Exp1.9": [[3, 0], [0, 2]],
    "Exp1.11": [[3.5, 0.5], [0.5, 3.5]],
    "Exp2.1": np.eye(4).tolist(),
    "Exp2.3": np.diag([3.0, 2, 2, 3]).tolist(),
    "Exp2.5": [[2.5, 0.5, 0, 0], [0.5, 2.5, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]],
}

SURFACE_TOL = 1e-10
COVARIANCE_TOL = 1e-12
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def normalize(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=float)
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    return v / v[nz[0]] if nz.size else v


def check_surfaces() -> list[CheckResult]:
    out = []
    for exp_id, (ref, taxonomy) in REFERENCE_SURFACES.items():
        surf = surface_coefficients(catalog(exp_id).test_density)
        err = float(np.max(np.abs(surf.normalized() - normalize(ref))))
        ok = err <= SURFACE_TOL and surf.taxonomy is taxonomy
        out.append(CheckResult(
            f"surface {exp_id}", ok, f"{surf.equation()} [{surf.taxonomy.value}] max err {err:.2e}"
        ))
    center = surface_coefficients(catalog("Exp1.9").test_density).center
    ok = center is not None and np.allclose(center, (-1.5, -1.0), atol=1e-12)
    out.append(CheckResult("surface Exp1.9 center", ok, f"{center}"))
    return out


def check_regions(n_probes: int = 10_000, seed: int = 0) -> list[CheckResult]:
    out = []
    for exp_id, spec in CATALOG.items():
        train, test = spec.train_density, spec.test_density
        # probe both densities so both sides of the boundary are well covered
        half = n_probes // 2
        pts = np.vstack([
            sample(train, half, derive_seed(seed, exp_id, "probe", "train")).points,
            sample(test, n_probes - half, derive_seed(seed, exp_id, "probe", "test")).points,
        ])
        part = assign_regions(train, test, pts)
        lr = log_density_ratio(train, test, pts)
        expected = np.where(lr <= 0, int(Region.R1), int(Region.R2))
        disagree = (part.regions != expected) & (np.abs(lr) > BOUNDARY_TOL)
        out.append(CheckResult(
            f"regions {exp_id}", not disagree.any(),
            f"{int(disagree.sum())} disagreements outside the boundary band, counts {part.counts()}",
        ))
    return out


def check_covariances() -> list[CheckResult]:
    out = []
    for exp_id, ref in REFERENCE_COVARIANCES.items():
        for eid in (exp_id, _twin(exp_id)):
            cov = catalog(eid).test_density.cov
            err = float(np.max(np.abs(cov - np.asarray(ref, dtype=float))))
            out.append(CheckResult(f"covariance {eid}", err <= COVARIANCE_TOL, f"max err {err:.2e}"))
    return out


def _twin(exp_id: str) -> str:
    prefix, num = exp_id.split(".")
    return f"{prefix}.{int(num) + 1}"


def run_all() -> list[CheckResult]:
    return check_surfaces() + check_regions() + check_covariances()
