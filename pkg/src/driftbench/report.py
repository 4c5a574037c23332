"""Serialization of benchmark reports: canonical JSON and flat CSV tables."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

OVERALL_COLUMNS = (
    "experiment", "model",
    "same_acc", "same_f1", "same_mcc",
    "drifted_acc", "drifted_f1", "drifted_mcc",
    "deg_acc", "deg_f1", "deg_mcc",
)
QUARTILE_COLUMNS = ("experiment", "model", "bin", "lower", "upper", "count", "accuracy")
REGION_COLUMNS = ("experiment", "model", "region", "acc", "f1", "mcc")


def _clean(obj):
    # JSON has no NaN/inf; map them to null so the output stays strict
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def canonical_json(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def config_hash(config: dict) -> str:
    blob = json.dumps(_clean(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def strip_timestamp(doc: dict) -> dict:
    out = json.loads(json.dumps(doc))
    out.get("meta", {}).pop("timestamp", None)
    return out


def overall_rows(report: dict) -> list[dict]:
    rows = []
    for exp in report["experiments"]:
        for cell in exp["overall"]:
            row = {"experiment": exp["id"], "model": cell["model"]}
            for part, prefix in (("same", "same"), ("drifted", "drifted"), ("degradation", "deg")):
                for m in ("acc", "f1", "mcc"):
                    row[f"{prefix}_{m}"] = cell[part][m]
            rows.append(row)
    return rows


def region_rows(report: dict) -> list[dict]:
    rows = []
    for exp in report["experiments"]:
        for cell in exp["regions"]:
            for region in ("R1", "R2"):
                rows.append({"experiment": exp["id"], "model": cell["model"], "region": region, **cell[region]})
    return rows


def quartile_rows(report: dict) -> list[dict]:
    rows = []
    for exp in report["experiments"]:
        q = exp.get("quartiles")
        if not q:
            continue
        s = q["summary"]
        for cell in q["per_model_bins"]:
            for b, label in enumerate(q["bins"]):
                rows.append({
                    "experiment": exp["id"], "model": cell["model"], "bin": label,
                    "lower": s[b], "upper": s[b + 1], "count": q["bin_counts"][b],
                    "accuracy": cell["accuracy"][b],
                })
    return rows


def to_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in columns})
    return buf.getvalue()


def write_report(report: dict, out: str | Path, fmt: str = "json") -> list[Path]:
    """Write ``report`` next to ``out``; returns the paths written.

    ``fmt="csv"`` writes ``<stem>.csv`` (overall table), ``<stem>_regions.csv``
    and ``<stem>_quartiles.csv``; ``"both"`` additionally writes the JSON.
    """
    if fmt not in ("json", "csv", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(out)
    written = []
    if fmt in ("json", "both"):
        path = out if out.suffix == ".json" or fmt == "json" else out.with_suffix(".json")
        path.write_text(canonical_json(report))
        written.append(path)
    if fmt in ("csv", "both"):
        base = out.with_suffix("")
        tables = (
            (base.with_suffix(".csv"), overall_rows(report), OVERALL_COLUMNS),
            (base.parent / f"{base.name}_regions.csv", region_rows(report), REGION_COLUMNS),
            (base.parent / f"{base.name}_quartiles.csv", quartile_rows(report), QUARTILE_COLUMNS),
        )
        for path, rows, cols in tables:
            path.write_text(to_csv(rows, cols))
            written.append(path)
    return written


def format_overall(report: dict) -> str:
    """Plain-text overall table; degradation rates rounded to two decimals."""
    lines = [
        f"{'exp':<9}{'model':<6}{'same acc/f1/mcc':>24}{'drift acc/f1/mcc':>24}{'deg % acc/f1/mcc':>27}"
    ]
    fmt3 = lambda v: "   n/a" if v is None else f"{v:6.3f}"
    fmt2 = lambda v: "    n/a" if v is None else f"{v:7.2f}"
    for r in overall_rows(report):
        same = " ".join(fmt3(r[f"same_{m}"]) for m in ("acc", "f1", "mcc"))
        drift = " ".join(fmt3(r[f"drifted_{m}"]) for m in ("acc", "f1", "mcc"))
        deg = " ".join(fmt2(r[f"deg_{m}"]) for m in ("acc", "f1", "mcc"))
        lines.append(f"{r['experiment']:<9}{r['model']:<6}{same:>24}{drift:>24}{deg:>27}")
    return "\n".join(lines)
