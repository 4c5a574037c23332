# %% [markdown]
# Where does the drifted density overtake the training density?
#
# For each 2-D experiment the set {p_te = p_tr} is a conic.  Points on the
# training side of it (ratio <= 1) form R1, the rest form R2.

# %%
import numpy as np

from driftbench.experiments import CATALOG
from driftbench.regions import assign_regions, surface_coefficients
from driftbench.gauss import sample

# %%
for exp_id, spec in CATALOG.items():
    if spec.dim != 2:
        continue
    s = surface_coefficients(spec.test_density)
    print(f"{exp_id:8s} {s.taxonomy.value:22s} {s.equation(digits=4, normalized=True)}")

# %% [markdown]
# The equation is only useful if it agrees with the densities themselves.
# Draw from the drifted Gaussian and check the share of each region.

# %%
spec = CATALOG["Exp1.9"]
pts = sample(spec.test_density, 50_000, seed=1).points
part = assign_regions(spec.train_density, spec.test_density, pts)
print(part.counts())
print("max ratio in R1:", part.ratios[part.regions == 1].max())
print("min ratio in R2:", part.ratios[part.regions == 2].min())

# %%
# the polynomial residual is minus the log ratio, point by point
from driftbench.regions import log_density_ratio

surf = surface_coefficients(spec.test_density)
gap = surf.residual(pts[:, 0], pts[:, 1]) + log_density_ratio(spec.train_density, spec.test_density, pts)
print("center", surf.center, "semi-axes^2", surf.semi_axes_sq)
print("largest disagreement:", np.abs(gap).max())
