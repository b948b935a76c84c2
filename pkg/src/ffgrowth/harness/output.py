"""CSV and JSON writers.  Output is a pure function of the config and seed."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .config import ExperimentConfig
from .experiments import COLUMNS, ECHO_COLUMNS, ExponentFit, TrialResult

SCHEMA = "ffgrowth/1"
# Fitted slopes cannot see polylogarithmic factors at these sizes.
LOG_BLIND = "log-blind"


def format_value(v) -> str:
    """Cell text: exact integers and fractions stay exact, floats use 12 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".12g")
    return str(v)


def _json_value(v):
    if v is None or isinstance(v, bool):
        return v
    if isinstance(v, float):
        return None if math.isnan(v) or math.isinf(v) else float(format(v, ".12g"))
    # integers and fractions as strings so no consumer rounds them
    return format_value(v)


def _echo(r: TrialResult) -> dict:
    return {
        "experiment": r.experiment, "p": r.p, "n": r.n, "family": r.family, "size": r.size,
        "trial": r.trial, "set_seed": r.set_seed, "sets": r.sets_repr(),
    }


def to_csv(results: list[TrialResult], experiment: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = COLUMNS[experiment]
    w.writerow(ECHO_COLUMNS + cols)
    for r in results:
        echo = _echo(r)
        w.writerow([format_value(echo[c]) for c in ECHO_COLUMNS] + [format_value(r.values.get(c)) for c in cols])
    return buf.getvalue()


def fits_to_csv(fits: list[ExponentFit]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "family", "quantity", "slope", "intercept", "samples", "max_abs_residual", "reference", "note"])
    for f in fits:
        res = max((abs(x) for x in f.residuals), default=None)
        w.writerow([f.experiment, f.family, f.quantity, format_value(f.slope), format_value(f.intercept),
                    f.samples, format_value(res), format_value(f.reference), LOG_BLIND])
    return buf.getvalue()


def to_json(cfg: ExperimentConfig, results: list[TrialResult], fits: list[ExponentFit]) -> str:
    cols = COLUMNS[cfg.experiment]
    doc = {
        "schema": SCHEMA,
        "config": cfg.to_dict(),
        "columns": ECHO_COLUMNS + cols,
        "rows": [
            {**{c: _json_value(v) for c, v in _echo(r).items()}, **{c: _json_value(r.values.get(c)) for c in cols}}
            for r in results
        ],
        "fits": [
            {
                "family": f.family, "quantity": f.quantity, "slope": _json_value(f.slope),
                "intercept": _json_value(f.intercept), "samples": f.samples,
                "residuals": [_json_value(x) for x in f.residuals], "reference": _json_value(f.reference), "note": LOG_BLIND,
            }
            for f in fits
        ],
        "failures": [
            {"trial": r.trial, "family": r.family, "size": r.size, "set_seed": str(r.set_seed),
             "sets": r.sets_repr(), "certificates": r.failed_certificates()}
            for r in results if r.failed_certificates()
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
