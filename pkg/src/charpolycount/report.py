"""Comparison rows, CSV tables and JSON reports.

Reports split volatile data (``timestamps``, ``timing``) from content, and the
content hash covers only the latter, so identical config and seed give the
same hash and the same bytes outside those two blocks.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from ._accel import backend_name

UNDEFINED = "undefined"
COMPARE_COLUMNS = ("T", "count", "prediction", "ratio", "seconds")
PREDICT_COLUMNS = ("T", "C_T", "euler_product", "prediction")
VOLATILE_KEYS = ("timestamps", "timing")


def ratio(count: int | None, prediction: float) -> float | str:
    if count is None or not prediction > 0 or not math.isfinite(prediction):
        return UNDEFINED
    return count / prediction


@dataclass(frozen=True)
class CompareRow:
    T: str
    count: int | None
    prediction: float
    seconds: float
    enumerator: str = ""
    error: str | None = None

    @property
    def ratio(self) -> float | str:
        return ratio(self.count, self.prediction)

    def csv_fields(self) -> list[str]:
        r = self.ratio
        return [
            self.T,
            "" if self.count is None else str(self.count),
            repr(self.prediction),
            r if isinstance(r, str) else repr(r),
            f"{self.seconds:.3f}",
        ]

    def to_json(self) -> dict:
        out = {
            "T": self.T,
            "count": self.count,
            "prediction": self.prediction,
            "ratio": self.ratio,
            "enumerator": self.enumerator,
        }
        if self.error:
            out["error"] = self.error
        return out


def csv_table(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def content_hash(report: dict) -> str:
    body = {k: v for k, v in report.items() if k not in VOLATILE_KEYS and k != "content_hash"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def build_report(
    *,
    command: str,
    config: dict,
    seed: int,
    invariants: dict | None = None,
    locals_: list | None = None,
    predictions: dict | None = None,
    rows: list[CompareRow] = (),
    started: float | None = None,
) -> dict:
    now = datetime.now(timezone.utc).isoformat()
    report = {
        "metadata": {"version": __version__, "command": command, "seed": seed, "backend": backend_name()},
        "config": config,
        "invariants": invariants,
        "locals": locals_ or [],
        "predictions": predictions or {},
        "rows": [r.to_json() for r in rows],
        "timestamps": {"started": started_iso(started) if started else now, "finished": now},
        "timing": {"seconds": [r.seconds for r in rows]},
    }
    report["content_hash"] = content_hash(report)
    return report


def started_iso(t: float) -> str:
    return datetime.fromtimestamp(t, timezone.utc).isoformat()


def check_ratios(report: dict, rel: float = 1e-12) -> bool:
    """Every stored ratio equals count/prediction recomputed from the stored fields."""
    for row in report["rows"]:
        want = ratio(row["count"], row["prediction"])
        got = row["ratio"]
        if isinstance(want, str) or isinstance(got, str):
            if want != got:
                return False
        elif abs(got - want) > rel * abs(want):
            return False
    return True


def dump_json(obj, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    return text


def append_run_log(path: str | Path, report: dict) -> None:
    """Append one report per line (JSON Lines); the file is never rewritten."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(report, sort_keys=True) + "\n")
