"""Checks for the statistical acceptance criteria, computed from a report dict.

Each check returns ``(name, passed, detail)``.  Kept free of pytest so the
same logic can be run against a saved report from the command line::

    python tests/criteria.py report.json
"""
from __future__ import annotations

import json
import sys

import numpy as np

from driftbench.metrics import pearson_matrix

MODELS = ("SVM", "LR", "RF", "GNB", "KNN")
IDS_2D = tuple(f"Exp1.{i}" for i in range(1, 13))


def _exp(report, exp_id):
    for e in report["experiments"]:
        if e["id"] == exp_id:
            return e
    raise KeyError(exp_id)


def _cell(entry, section, model):
    for c in entry[section]:
        if c["model"] == model:
            return c
    raise KeyError(model)


def _have(report, ids):
    present = {e["id"] for e in report["experiments"]}
    return all(i in present for i in ids)


def rf_most_robust(report):
    wins, worst, detail = 0, 0.0, []
    for i in IDS_2D:
        e = _exp(report, i)
        deg = {m: _cell(e, "overall", m)["degradation"]["acc"] for m in MODELS}
        best = min(deg, key=lambda m: deg[m])
        wins += best == "RF"
        worst = max(worst, deg["RF"])
        detail.append(f"{i}:{best}")
    ok = wins >= 9 and worst <= 3.0
    return "4a RF lowest acc degradation in >=9/12 and <=3% everywhere", ok, \
        f"RF lowest in {wins}/12, max RF degradation {worst:.2f}% ({' '.join(detail)})"


def svm_exp11(report):
    d = _cell(_exp(report, "Exp1.1"), "overall", "SVM")["degradation"]["acc"]
    return "4b Exp1.1 SVM acc degradation in 1.34 +/- 1.5", abs(d - 1.34) <= 1.5, f"{d:.2f}%"


def chance_rows_4d(report):
    ok, detail = True, []
    for i in ("Exp2.2", "Exp2.4", "Exp2.6"):
        e = _exp(report, i)
        for m in ("GNB", "LR"):
            a = _cell(e, "overall", m)["same"]["acc"]
            ok &= abs(a - 0.5) <= 0.03
            detail.append(f"{i}/{m} same acc {a:.3f}")
    for i in ("Exp2.2", "Exp2.4"):
        e = _exp(report, i)
        for m in ("RF", "KNN"):
            d = _cell(e, "overall", m)["degradation"]["acc"]
            ok &= d >= 10.0
            detail.append(f"{i}/{m} deg {d:.2f}%")
    return "4c 4D chance-level rows and RF/KNN degradation >=10%", ok, "; ".join(detail)


def mcc_most_affected(report):
    n = hits = 0
    for i in IDS_2D:
        for c in _exp(report, i)["overall"]:
            d = c["degradation"]
            if d["acc"] is None or d["mcc"] is None:
                continue
            n += 1
            hits += d["mcc"] >= d["acc"]
    frac = hits / n
    return "4d MCC degradation >= acc degradation in >=80% of 2D cells", frac >= 0.8, f"{hits}/{n} = {frac:.1%}"


def rf_regions(report):
    bad = []
    for i in IDS_2D:
        c = _cell(_exp(report, i), "regions", "RF")
        if not c["R1"]["acc"] >= c["R2"]["acc"]:
            bad.append(f"{i} ({c['R1']['acc']:.4f} < {c['R2']['acc']:.4f})")
    return "5a RF R1 acc >= R2 acc in all 12 2D experiments", not bad, "violations: " + (", ".join(bad) or "none")


def pooled_regions(report):
    n = hits = 0
    for i in IDS_2D:
        for c in _exp(report, i)["regions"]:
            n += 1
            hits += c["R1"]["acc"] >= c["R2"]["acc"]
    return "5b pooled R1 acc >= R2 acc in >=90% of 2D cells", hits / n >= 0.9, f"{hits}/{n} = {hits / n:.1%}"


def medians(report):
    meds = {e["id"]: e["quartiles"]["summary"][2] for e in report["experiments"]}
    bad = {k: round(v, 4) for k, v in meds.items() if abs(v - 1.0) > 0.05}
    return "6a median density ratio within 1.00 +/- 0.05 everywhere", not bad, \
        f"{len(meds)} experiments, outside band: {bad or 'none'}"


def exp11_quartiles(report):
    s = _exp(report, "Exp1.1")["quartiles"]["summary"]
    q1_ok = abs(s[1] - 0.355) <= 0.30 * 0.355
    q3_ok = abs(s[3] - 112.6) <= 0.40 * 112.6
    return "6b Exp1.1 Q1 ~ 0.355 (30%) and Q3 ~ 112.6 (40%)", q1_ok and q3_ok, f"Q1={s[1]:.4f} Q3={s[3]:.2f}"


def quartile_trend(report):
    detail, ok = [], True
    for m in ("SVM", "KNN"):
        count = 0
        for i in IDS_2D:
            acc = _cell_bins(_exp(report, i), m)
            count += all(acc[b + 1] <= acc[b] for b in range(3))
        ok &= count >= 9
        detail.append(f"{m} nonincreasing in {count}/12")
    return "6c SVM and KNN quartile accuracy nonincreasing in >=9/12", ok, "; ".join(detail)


def _cell_bins(entry, model):
    for c in entry["quartiles"]["per_model_bins"]:
        if c["model"] == model:
            return c["accuracy"]
    raise KeyError(model)


def correlation(report):
    acc, f1 = [], []
    for i in IDS_2D:
        for c in _exp(report, i)["overall"]:
            acc.append(c["degradation"]["acc"])
            f1.append(c["degradation"]["f1"])
    _, r = pearson_matrix({"acc": np.array(acc, float), "f1": np.array(f1, float)})
    return "7 Pearson(acc deg, F1 deg) over 2D cells >= 0.8", r[0, 1] >= 0.8, f"r = {r[0, 1]:.4f}"


CHECKS_2D = (rf_most_robust, svm_exp11, mcc_most_affected, rf_regions, pooled_regions,
             exp11_quartiles, quartile_trend, correlation)
CHECKS_4D = (chance_rows_4d,)


def run_checks(report):
    out = []
    if _have(report, IDS_2D):
        out.extend(c(report) for c in CHECKS_2D)
    if _have(report, ("Exp2.2", "Exp2.4", "Exp2.6")):
        out.extend(c(report) for c in CHECKS_4D)
    if all(e.get("quartiles") for e in report["experiments"]):
        out.append(medians(report))
    return out


if __name__ == "__main__":
    docs = [json.load(open(p)) for p in sys.argv[1:]]
    merged = {"experiments": [e for d in docs for e in d["experiments"]]}
    for name, ok, detail in run_checks(merged):
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
