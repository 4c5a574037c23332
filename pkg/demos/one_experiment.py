# %% [markdown]
# One drift experiment end to end, at a reduced sample size so it runs in
# a few seconds.  Pass `n_train=20000` etc. for the full-size version.

# %%
from driftbench.experiments import run_benchmark
from driftbench.report import format_overall

report = run_benchmark(["Exp1.3"], seed=0, n_train=2000, n_test=2000, n_region=1000)
print(format_overall(report))

# %% [markdown]
# Degradation is the percentage drop from the same-distribution test set to
# the drifted one.  A negative number means the model did better on the
# drifted data.

# %%
exp = report["experiments"][0]
for cell in exp["overall"]:
    same, drifted = cell["same"]["acc"], cell["drifted"]["acc"]
    print(f'{cell["model"]:4s} acc {same:.4f} -> {drifted:.4f}  ({cell["degradation"]["acc"]:+.2f}%)')

# %%
# drift parameters are recorded with every report entry
print(exp["spec"]["drift"])
