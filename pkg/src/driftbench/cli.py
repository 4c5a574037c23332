"""Command-line entry point: ``driftbench {list,run,surface,verify}``.

Exit status is 0 on success, 1 on a runtime failure (including a failed
``verify``) and 2 on a usage error.  Progress goes to stderr; reports go to
``--out`` or, without it, to stdout.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .classifiers import ALL_KINDS, ClassifierKind
from .exceptions import RegionStarvationError
from .experiments import DEFAULT_LABEL_MODE, EXPERIMENT_IDS, LABEL_MODES, catalog, run_benchmark
from .regions import surface_coefficients
from .report import canonical_json, format_overall, OVERALL_COLUMNS, overall_rows, to_csv, write_report

log = logging.getLogger("driftbench")

MIN_SAMPLE_SIZE = 100
SEED_ENV = "DRIFTBENCH_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    experiments: list[str] = field(default_factory=lambda: list(EXPERIMENT_IDS))
    models: list[str] = field(default_factory=lambda: [k.value for k in ALL_KINDS])
    seed: int = 0
    reps: int = 1
    n_train: int | None = None
    n_test: int | None = None
    n_region: int | None = None
    out: str | None = None
    format: str = "json"
    threads: int = 1
    label_mode: str = DEFAULT_LABEL_MODE
    regions: bool = True

    def validate(self) -> "RunConfig":
        if self.reps < 1:
            raise UsageError("--reps must be >= 1")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        for name in ("n_train", "n_test", "n_region"):
            v = getattr(self, name)
            if v is not None and v < MIN_SAMPLE_SIZE:
                raise UsageError(f"--{name.replace('_', '-')} must be >= {MIN_SAMPLE_SIZE}")
        if self.format not in ("json", "csv", "both"):
            raise UsageError("--format must be json, csv or both")
        if self.format == "both" and not self.out:
            raise UsageError("--format both needs --out")
        if self.label_mode not in LABEL_MODES:
            raise UsageError(f"--label-mode must be one of {', '.join(LABEL_MODES)}")
        self.experiments = _resolve_ids(self.experiments)
        self.models = _resolve_models(self.models)
        return self


def _split(values) -> list[str]:
    if isinstance(values, str):
        values = [values]
    out = []
    for v in values:
        out.extend(p.strip() for p in str(v).split(",") if p.strip())
    return out


def _resolve_ids(ids) -> list[str]:
    ids = _split(ids)
    if not ids or [i.lower() for i in ids] == ["all"]:
        return list(EXPERIMENT_IDS)
    lookup = {e.lower(): e for e in EXPERIMENT_IDS}
    out = []
    for i in ids:
        key = i.lower() if i.lower().startswith("exp") else f"exp{i}".lower()
        if key not in lookup:
            raise UsageError(f"unknown experiment {i!r}; valid: {', '.join(EXPERIMENT_IDS)}")
        if lookup[key] not in out:
            out.append(lookup[key])
    return out


def _resolve_models(models) -> list[str]:
    models = _split(models)
    if not models or [m.lower() for m in models] == ["all"]:
        return [k.value for k in ALL_KINDS]
    try:
        kinds = [ClassifierKind.parse(m).value for m in models]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return list(dict.fromkeys(kinds))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="driftbench", description="Synthetic covariate-shift benchmark.")
    p.add_argument("--version", action="version", version=f"driftbench {__version__}")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress progress output")
    sub = p.add_subparsers(dest="command", metavar="{list,run,surface,verify}")

    sub.add_parser("list", help="print the experiment catalog")

    run = sub.add_parser("run", help="run experiments and write a report")
    run.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    run.add_argument("--exp", action="append", help="experiment id, repeatable or comma separated (default: all)")
    run.add_argument("--models", help="comma-separated classifier kinds (default: all)")
    run.add_argument("--seed", type=int, help=f"master seed (default: ${SEED_ENV} or 0)")
    run.add_argument("--reps", type=int, help="independent replicates (default: 1)")
    run.add_argument("--n-train", type=int, help="training size (default: 20000)")
    run.add_argument("--n-test", type=int, help="size of each test set (default: 20000)")
    run.add_argument("--n-region", type=int, help="points per region (default: 10000)")
    run.add_argument("--out", help="report path (default: stdout)")
    run.add_argument("--format", choices=("json", "csv", "both"), help="output format (default: json)")
    run.add_argument("--threads", type=int, help="worker processes (default: 1)")
    run.add_argument("--label-mode", choices=LABEL_MODES, help=f"labelling rule (default: {DEFAULT_LABEL_MODE})")
    run.add_argument("--skip-regions", action="store_true", help="skip region and quartile evaluation")
    run.add_argument("--summary", action="store_true", help="also print a text table to stderr")

    surf = sub.add_parser("surface", help="print the intersection surface of a 2-D experiment")
    surf.add_argument("--exp", required=True, help="2-D experiment id")
    surf.add_argument("--json", action="store_true", help="emit the coefficients as JSON")

    sub.add_parser("verify", help="run the analytic self-checks")
    return p


def _config_from(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(data) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(**data)
    if "seed" not in data:
        env = os.environ.get(SEED_ENV)
        if env is not None:
            try:
                cfg.seed = int(env)
            except ValueError:
                raise UsageError(f"${SEED_ENV} must be an integer, got {env!r}") from None
    overrides = {
        "experiments": args.exp, "models": args.models, "seed": args.seed, "reps": args.reps,
        "n_train": args.n_train, "n_test": args.n_test, "n_region": args.n_region,
        "out": args.out, "format": args.format, "threads": args.threads, "label_mode": args.label_mode,
    }
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    if args.skip_regions:
        cfg.regions = False
    return cfg.validate()


def cmd_list(args) -> int:
    print(f"{'id':<9}{'d':>2}  {'posterior':<10}{'drift':<32}{'translation':<22}{'scale':<30}rotation")
    for exp_id in EXPERIMENT_IDS:
        s = catalog(exp_id)
        t = ", ".join(f"{v:g}" for v in s.drift.translation)
        sc = ", ".join(f"{v:.4g}" for v in s.drift.scale_factors)
        rot = "-" if s.drift.rotation_angle is None else f"{s.drift.rotation_angle:g} deg"
        print(f"{exp_id:<9}{s.dim:>2}  {s.posterior.value:<10}{s.transformation:<32}({t}){'':<{max(0, 20 - len(t))}}({sc}){'':<{max(0, 28 - len(sc))}}{rot}")
    return 0


def cmd_run(args) -> int:
    cfg = _config_from(args)
    log.info("running %d experiment(s) x %d replicate(s), models %s",
             len(cfg.experiments), cfg.reps, ",".join(cfg.models))
    start = time.perf_counter()
    report = run_benchmark(
        cfg.experiments, cfg.models, seed=cfg.seed, reps=cfg.reps,
        n_train=cfg.n_train, n_test=cfg.n_test, n_region=cfg.n_region,
        label_mode=cfg.label_mode, regions=cfg.regions, workers=cfg.threads,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    log.info("finished in %.1f s", time.perf_counter() - start)
    if cfg.out:
        for path in write_report(report, cfg.out, cfg.format):
            log.info("wrote %s", path)
    elif cfg.format == "csv":
        sys.stdout.write(to_csv(overall_rows(report), OVERALL_COLUMNS))
    else:
        sys.stdout.write(canonical_json(report))
    if args.summary:
        print(format_overall(report), file=sys.stderr)
    return 0


def cmd_surface(args) -> int:
    exp_id = _resolve_ids([args.exp])[0]
    spec = catalog(exp_id)
    if spec.dim != 2:
        raise UsageError(f"{exp_id} is {spec.dim}-dimensional; surfaces are printed for 2-D experiments only")
    surf = surface_coefficients(spec.test_density)
    if args.json:
        print(json.dumps({"id": exp_id, **surf.to_dict()}, indent=2, sort_keys=True))
        return 0
    print(f"{exp_id}: {surf.equation(normalized=True)}")
    print(f"taxonomy: {surf.taxonomy.value}")
    print(f"unscaled: {surf.equation()}")
    print("R1 (test-to-training ratio <= 1) is where the unscaled left-hand side is >= 0")
    if surf.center is not None:
        print(f"center: ({surf.center[0]:.6g}, {surf.center[1]:.6g})")
    if surf.semi_axes_sq is not None:
        print(f"semi-axes squared: ({surf.semi_axes_sq[0]:.6g}, {surf.semi_axes_sq[1]:.6g})")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


COMMANDS = {"list": cmd_list, "run": cmd_run, "surface": cmd_surface, "verify": cmd_verify}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print(f"driftbench: error: a command is required ({', '.join(COMMANDS)})", file=sys.stderr)
        return 2
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(message)s", "%H:%M:%S"))
        log.addHandler(handler)
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"driftbench: error: {exc}", file=sys.stderr)
        return 2
    except (RegionStarvationError, ValueError, OSError, RuntimeError) as exc:
        print(f"driftbench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
