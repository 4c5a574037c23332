"""Experiment catalog and the end-to-end evaluation runner.

Each experiment trains on ``N(0, I)`` data and evaluates on (a) fresh data from
the same density and (b) data from a drifted density, both labelled by the
same posterior function.  The drifted density is then split into the R1/R2
density-ratio regions and into density-ratio quartiles for a finer breakdown.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from ._rng import NORMAL_METHOD, PRNG_ALGORITHM, derive_seed, make_generator
from .classifiers import ClassifierConfig, ClassifierKind, Estimator, default_configs, train
from .exceptions import RegionStarvationError, UndefinedRateError
from .gauss import DriftTransform, GaussianSpec, apply_drift, sample
from .labeling import LabeledDataset, PosteriorFn, Source, bayes_labels, sample_labels
from .metrics import MetricBundle, degradation_rate, evaluate
from .regions import QUARTILE_LABELS, Region, assign_regions, bin_by_quartile, quartile_summary, surface_coefficients

log = logging.getLogger(__name__)

METRICS = ("acc", "f1", "mcc")
LABEL_MODES = ("bayes", "bernoulli")
DEFAULT_LABEL_MODE = "bayes"
REGION_OVERSAMPLING_CAP = 100


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    dim: int
    drift: DriftTransform
    posterior: PosteriorFn
    transformation: str
    n_train: int = 20000
    n_test_same: int = 20000
    n_test_drifted: int = 20000
    n_region_eval: int = 10000

    def __post_init__(self):
        if self.posterior.dim != self.dim or self.drift.dim != self.dim:
            raise ValueError(f"{self.id}: posterior/drift dimension does not match d={self.dim}")
        for name in ("n_train", "n_test_same", "n_test_drifted", "n_region_eval"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @property
    def train_density(self) -> GaussianSpec:
        return GaussianSpec.standard(self.dim)

    @property
    def test_density(self) -> GaussianSpec:
        return apply_drift(self.train_density, self.drift)

    def with_sizes(self, n_train=None, n_test=None, n_region=None) -> "ExperimentSpec":
        return replace(
            self,
            n_train=n_train or self.n_train,
            n_test_same=n_test or self.n_test_same,
            n_test_drifted=n_test or self.n_test_drifted,
            n_region_eval=n_region or self.n_region_eval,
        )

    def to_dict(self) -> dict:
        test = self.test_density
        return {
            "id": self.id,
            "dim": self.dim,
            "transformation": self.transformation,
            "posterior": self.posterior.value,
            "drift": self.drift.to_dict(),
            "test_density": test.to_dict(),
            "n_train": self.n_train,
            "n_test_same": self.n_test_same,
            "n_test_drifted": self.n_test_drifted,
            "n_region_eval": self.n_region_eval,
        }


def _catalog() -> dict[str, ExperimentSpec]:
    r2, r3 = math.sqrt(2.0), math.sqrt(3.0)
    settings_2d = [
        ("One-axis translation", (3, 0), (1, 1), None),
        ("Two-axis translation", (3, 1), (1, 1), None),
        ("One-axis scaling", (0, 0), (2, 1), None),
        ("Two-axis scaling", (0, 0), (r3, r2), None),
        ("Translation and scaling", (3, 1), (r3, r2), None),
        ("Translation, scaling, rotation", (4, -1), (2, r3), 45.0),
    ]
    settings_4d = [
        ("Two-axis translation", (0, -2, -1, 1), (1, 1, 1, 1), None),
        ("Two-axis scaling", (0, 0, 0, 0), (r3, r2, r2, r3), None),
        ("Translation, scaling, rotation", (0, -2, -1, 1), (r3, r2, r2, r3), 45.0),
    ]
    out = {}
    for prefix, dim, settings, fns in (
        ("Exp1", 2, settings_2d, (PosteriorFn.F1, PosteriorFn.F2)),
        ("Exp2", 4, settings_4d, (PosteriorFn.F3, PosteriorFn.F4)),
    ):
        number = 1
        for label, shift, scale, angle in settings:
            drift = DriftTransform(np.array(shift, float), np.array(scale, float), angle)
            for fn in fns:
                exp_id = f"{prefix}.{number}"
                out[exp_id] = ExperimentSpec(exp_id, dim, drift, fn, label)
                number += 1
    return out


CATALOG: dict[str, ExperimentSpec] = _catalog()
EXPERIMENT_IDS: tuple[str, ...] = tuple(CATALOG)


def catalog(exp_id: str) -> ExperimentSpec:
    """Published parameterization of one experiment, e.g. ``catalog("Exp1.5")``."""
    try:
        return CATALOG[exp_id]
    except KeyError:
        raise KeyError(f"unknown experiment {exp_id!r}; known: {', '.join(EXPERIMENT_IDS)}") from None


# ---------------------------------------------------------------------------
# data generation
# ---------------------------------------------------------------------------

def label_points(fn: PosteriorFn, points, seed: int, source: Source, label_mode: str) -> LabeledDataset:
    if label_mode == "bayes":
        return bayes_labels(fn, points, source)
    if label_mode == "bernoulli":
        return sample_labels(fn, points, seed, source)
    raise ValueError(f"unknown label mode {label_mode!r}; expected one of {LABEL_MODES}")


@dataclass(frozen=True, eq=False)
class ExperimentData:
    train: LabeledDataset
    test_same: LabeledDataset
    test_drifted: LabeledDataset


def generate_data(spec: ExperimentSpec, seed: int, label_mode: str = DEFAULT_LABEL_MODE) -> ExperimentData:
    """Training, same-distribution and drifted test sets for one experiment.

    All three are labelled by the same posterior function object.
    """
    fn = spec.posterior
    tr = sample(spec.train_density, spec.n_train, derive_seed(seed, spec.id, "train", "points"))
    ts = sample(spec.train_density, spec.n_test_same, derive_seed(seed, spec.id, "test_same", "points"))
    td = sample(spec.test_density, spec.n_test_drifted, derive_seed(seed, spec.id, "test_drifted", "points"))
    return ExperimentData(
        train=label_points(fn, tr, derive_seed(seed, spec.id, "train", "labels"), Source.TRAIN, label_mode),
        test_same=label_points(fn, ts, derive_seed(seed, spec.id, "test_same", "labels"), Source.TEST_SAME, label_mode),
        test_drifted=label_points(
            fn, td, derive_seed(seed, spec.id, "test_drifted", "labels"), Source.TEST_DRIFTED, label_mode
        ),
    )


# ---------------------------------------------------------------------------
# overall evaluation
# ---------------------------------------------------------------------------

def _rates(same: MetricBundle, drifted: MetricBundle) -> dict:
    out = {}
    for key, a, b in zip(METRICS, same.as_row().values(), drifted.as_row().values()):
        try:
            out[key] = degradation_rate(a, b)
        except UndefinedRateError:
            out[key] = None
    return out


@dataclass(eq=False)
class ModelResult:
    model: str
    same: MetricBundle
    drifted: MetricBundle
    degradation: dict

    def to_dict(self) -> dict:
        flags = [f"degradation.{k} undefined" for k, v in self.degradation.items() if v is None]
        for name, b in (("same", self.same), ("drifted", self.drifted)):
            if b.f1_degenerate:
                flags.append(f"{name}.f1 degenerate")
            if b.mcc_degenerate:
                flags.append(f"{name}.mcc degenerate")
        return {
            "model": self.model,
            "same": self.same.as_row(),
            "drifted": self.drifted.as_row(),
            "degradation": dict(self.degradation),
            "flags": flags,
        }


@dataclass(eq=False)
class OverallFragment:
    spec: ExperimentSpec
    seed: int
    results: list[ModelResult]
    models: dict[str, Estimator] = field(default_factory=dict, repr=False)
    data: ExperimentData | None = field(default=None, repr=False)


def run_experiment(
    spec: ExperimentSpec,
    configs=None,
    seed: int = 0,
    label_mode: str = DEFAULT_LABEL_MODE,
) -> OverallFragment:
    """Train every model on the training set and score both test sets."""
    configs = default_configs() if configs is None else configs
    data = generate_data(spec, seed, label_mode)
    results, models = [], {}
    for cfg in configs:
        name = cfg.kind.value
        log.info("%s: training %s", spec.id, name)
        model = train(cfg, data.train, derive_seed(seed, spec.id, "model", name))
        same = evaluate(data.test_same.labels, model.predict(data.test_same.points))
        drifted = evaluate(data.test_drifted.labels, model.predict(data.test_drifted.points))
        results.append(ModelResult(name, same, drifted, _rates(same, drifted)))
        models[name] = model
    return OverallFragment(spec, seed, results, models, data)


# ---------------------------------------------------------------------------
# region and quartile evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RegionSamples:
    """Equal-size labelled samples of the drifted density inside R1 and inside R2."""

    r1: LabeledDataset
    r2: LabeledDataset
    draws: int

    def combined(self) -> LabeledDataset:
        cat = lambda a, b: np.concatenate([a, b])
        return LabeledDataset(
            cat(self.r1.points, self.r2.points),
            cat(self.r1.labels, self.r2.labels),
            cat(self.r1.posterior_values, self.r2.posterior_values),
            Source.REGION_EVAL,
            self.r1.posterior_fn,
            ratios=cat(self.r1.ratios, self.r2.ratios),
            regions=cat(self.r1.regions, self.r2.regions),
        )


def draw_region_samples(
    spec: ExperimentSpec, seed: int, label_mode: str = DEFAULT_LABEL_MODE, batch: int | None = None
) -> RegionSamples:
    """Rejection-sample the drifted density until R1 and R2 each hold ``n_region_eval`` points.

    Raises
    ------
    RegionStarvationError
        If a region is still short after ``100 * n_region_eval`` draws.
    """
    need = spec.n_region_eval
    cap = REGION_OVERSAMPLING_CAP * need
    batch = batch or max(need, 1024)
    train_d, test_d = spec.train_density, spec.test_density
    rng = make_generator(seed, spec.id, "region", "points")
    L = test_d.chol
    kept = {Region.R1: [], Region.R2: []}
    have = {Region.R1: 0, Region.R2: 0}
    draws = 0
    while min(have.values()) < need:
        if draws >= cap:
            short = Region.R1 if have[Region.R1] < need else Region.R2
            raise RegionStarvationError(short.name, have[short], need, draws)
        size = min(batch, cap - draws)
        pts = test_d.mean + rng.standard_normal((size, spec.dim)) @ L.T
        draws += size
        part = assign_regions(train_d, test_d, pts)
        for region in Region:
            if have[region] >= need:
                continue
            m = part.mask(region)
            take = np.flatnonzero(m)[: need - have[region]]
            if take.size:
                kept[region].append((pts[take], part.ratios[take], part.regions[take]))
                have[region] += take.size

    out = {}
    for region in Region:
        pts = np.concatenate([k[0] for k in kept[region]])
        ds = label_points(
            spec.posterior, pts, derive_seed(seed, spec.id, "region", region.name, "labels"),
            Source.REGION_EVAL, label_mode,
        )
        out[region] = replace(
            ds,
            ratios=np.concatenate([k[1] for k in kept[region]]),
            regions=np.concatenate([k[2] for k in kept[region]]),
        )
    return RegionSamples(out[Region.R1], out[Region.R2], draws)


@dataclass(eq=False)
class RegionFragment:
    results: dict[str, dict[str, MetricBundle]]
    samples: RegionSamples

    def to_list(self) -> list[dict]:
        return [
            {
                "model": name,
                "R1": per["R1"].as_row(),
                "R2": per["R2"].as_row(),
            }
            for name, per in self.results.items()
        ]


def run_region_eval(
    spec: ExperimentSpec, models: dict[str, Estimator], seed: int, label_mode: str = DEFAULT_LABEL_MODE
) -> RegionFragment:
    samples = draw_region_samples(spec, seed, label_mode)
    results = {}
    for name, model in models.items():
        results[name] = {
            "R1": evaluate(samples.r1.labels, model.predict(samples.r1.points)),
            "R2": evaluate(samples.r2.labels, model.predict(samples.r2.points)),
        }
    return RegionFragment(results, samples)


@dataclass(eq=False)
class QuartileFragment:
    summary: tuple[float, ...]
    bin_counts: list[int]
    accuracy: dict[str, list[float | None]]

    @property
    def degenerate(self) -> bool:
        return any(c == 0 for c in self.bin_counts)

    def to_dict(self) -> dict:
        return {
            "summary": list(self.summary),
            "bins": list(QUARTILE_LABELS),
            "bin_counts": list(self.bin_counts),
            "per_model_bins": [{"model": m, "accuracy": acc} for m, acc in self.accuracy.items()],
            "degenerate": self.degenerate,
        }


def quartile_accuracy(ratios, labels, predictions: dict[str, np.ndarray]) -> QuartileFragment:
    summary = quartile_summary(ratios)
    bins = bin_by_quartile(ratios, summary)
    counts = [int(np.sum(bins == b)) for b in range(4)]
    acc = {}
    for name, pred in predictions.items():
        acc[name] = [
            float(np.mean(pred[bins == b] == labels[bins == b])) if counts[b] else None
            for b in range(4)
        ]
    return QuartileFragment(summary, counts, acc)


def run_quartile_eval(spec: ExperimentSpec, models: dict[str, Estimator], samples: RegionSamples) -> QuartileFragment:
    """Per-quartile accuracy over the union of the two region samples."""
    both = samples.combined()
    preds = {name: m.predict(both.points) for name, m in models.items()}
    return quartile_accuracy(both.ratios, both.labels, preds)


# ---------------------------------------------------------------------------
# full runs and report assembly
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class ExperimentResult:
    spec: ExperimentSpec
    seed: int
    overall: list[ModelResult]
    regions: RegionFragment | None
    quartiles: QuartileFragment | None
    models: dict[str, Estimator] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "overall": [r.to_dict() for r in self.overall],
            "regions": self.regions.to_list() if self.regions else [],
            "region_draws": self.regions.samples.draws if self.regions else None,
            "quartiles": self.quartiles.to_dict() if self.quartiles else None,
        }


def evaluate_experiment(
    spec: ExperimentSpec,
    configs=None,
    seed: int = 0,
    label_mode: str = DEFAULT_LABEL_MODE,
    regions: bool = True,
    keep_models: bool = False,
) -> ExperimentResult:
    """Overall, region-wise and quartile-wise evaluation of one experiment."""
    frag = run_experiment(spec, configs, seed, label_mode)
    reg = quart = None
    if regions:
        reg = run_region_eval(spec, frag.models, seed, label_mode)
        quart = run_quartile_eval(spec, frag.models, reg.samples)
    return ExperimentResult(spec, seed, frag.results, reg, quart, frag.models if keep_models else {})


def _task(args):
    spec, configs, seed, label_mode, regions = args
    return evaluate_experiment(spec, configs, seed, label_mode, regions).to_dict()


def replicate_seeds(master_seed: int, reps: int) -> list[int]:
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if reps == 1:
        return [int(master_seed)]
    return [derive_seed(master_seed, "replicate", r) for r in range(reps)]


def run_benchmark(
    experiment_ids=EXPERIMENT_IDS,
    models=None,
    seed: int = 0,
    reps: int = 1,
    n_train: int | None = None,
    n_test: int | None = None,
    n_region: int | None = None,
    label_mode: str = DEFAULT_LABEL_MODE,
    regions: bool = True,
    workers: int = 1,
    timestamp: str | None = None,
) -> dict:
    """Run experiments x replicates and return the JSON-ready report document.

    With ``reps > 1`` each cell holds the mean over replicates, a matching
    ``*_std`` entry holds the population standard deviation, and the
    per-replicate fragments are kept under ``replicates``.
    """
    if label_mode not in LABEL_MODES:
        raise ValueError(f"unknown label mode {label_mode!r}")
    if models is None:
        configs = default_configs()
    else:
        configs = [m if isinstance(m, ClassifierConfig) else ClassifierConfig.default(m) for m in models]
    specs = [catalog(i).with_sizes(n_train, n_test, n_region) for i in experiment_ids]
    seeds = replicate_seeds(seed, reps)
    tasks = [(s, configs, rs, label_mode, regions) for s in specs for rs in seeds]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            frags = list(pool.map(_task, tasks))
    else:
        frags = []
        for i, t in enumerate(tasks, 1):
            log.info("task %d/%d: %s seed=%d", i, len(tasks), t[0].id, t[2])
            frags.append(_task(t))

    config = {
        "experiments": [s.id for s in specs],
        "models": [c.to_dict() for c in configs],
        "seed": int(seed),
        "reps": reps,
        "n_train": n_train,
        "n_test": n_test,
        "n_region": n_region,
        "label_mode": label_mode,
        "regions": regions,
    }
    experiments = []
    for k, spec in enumerate(specs):
        reps_k = frags[k * len(seeds):(k + 1) * len(seeds)]
        experiments.append(_merge(spec, reps_k))
    from .report import config_hash

    return {
        "meta": {
            "schema_version": 1,
            "version": __version__,
            "seed": int(seed),
            "replicate_seeds": seeds,
            "timestamp": timestamp,
            "config": config,
            "config_hash": config_hash(config),
            "prng": PRNG_ALGORITHM,
            "normal_sampler": NORMAL_METHOD,
            "label_mode": label_mode,
        },
        "experiments": experiments,
    }


def _mean_std(values):
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    arr = np.asarray(vals, dtype=float)
    return float(arr.mean()), float(arr.std())


def _agg_rows(rows: list[dict]) -> tuple[dict, dict]:
    mean, std = {}, {}
    for key in rows[0]:
        mean[key], std[key] = _mean_std([r[key] for r in rows])
    return mean, std


def _merge(spec: ExperimentSpec, frags: list[dict]) -> dict:
    entry = {"id": spec.id, "spec": spec.to_dict()}
    entry["surface"] = surface_coefficients(spec.test_density).to_dict() if spec.dim == 2 else None
    if len(frags) == 1:
        f = frags[0]
        entry.update(overall=f["overall"], regions=f["regions"], quartiles=f["quartiles"])
        return entry

    overall = []
    for m, row in enumerate(frags[0]["overall"]):
        cell = {"model": row["model"]}
        for part in ("same", "drifted", "degradation"):
            cell[part], cell[f"{part}_std"] = _agg_rows([f["overall"][m][part] for f in frags])
        cell["flags"] = sorted({flag for f in frags for flag in f["overall"][m]["flags"]})
        overall.append(cell)
    regions = []
    for m, row in enumerate(frags[0]["regions"]):
        cell = {"model": row["model"]}
        for part in ("R1", "R2"):
            cell[part], cell[f"{part}_std"] = _agg_rows([f["regions"][m][part] for f in frags])
        regions.append(cell)
    quartiles = None
    if frags[0]["quartiles"] is not None:
        qs = [f["quartiles"] for f in frags]
        summary = np.mean([q["summary"] for q in qs], axis=0).tolist()
        per_model = []
        for m, row in enumerate(qs[0]["per_model_bins"]):
            acc = [_mean_std([q["per_model_bins"][m]["accuracy"][b] for q in qs])[0] for b in range(4)]
            per_model.append({"model": row["model"], "accuracy": acc})
        quartiles = {
            "summary": summary,
            "summary_replicates": [q["summary"] for q in qs],
            "bins": list(QUARTILE_LABELS),
            "bin_counts": np.sum([q["bin_counts"] for q in qs], axis=0).tolist(),
            "per_model_bins": per_model,
            "degenerate": any(q["degenerate"] for q in qs),
        }
    entry.update(overall=overall, regions=regions, quartiles=quartiles, replicates=frags)
    return entry
