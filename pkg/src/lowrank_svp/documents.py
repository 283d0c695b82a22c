"""Instance and result documents: the JSON interchange formats of the CLI.

Instance files round-trip losslessly (floats use Python's shortest
round-trip representation).  Result documents carry the solution, the
search statistics, and optional rate fields for channel runs.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DocumentError
from .model import DpkInstance

SCHEMA_VERSION = "1"


def instance_to_document(inst: DpkInstance, metadata=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": inst.n,
        "k": inst.k,
        "d": [float(x) for x in inst.d],
        "V": [[float(x) for x in row] for row in inst.V],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def instance_from_document(doc) -> DpkInstance:
    if not isinstance(doc, dict):
        raise DocumentError("instance document must be a JSON object")
    for key in ("schema_version", "n", "k", "d", "V"):
        if key not in doc:
            raise DocumentError(f"missing required field {key!r}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise DocumentError(
            f"unsupported schema_version {doc['schema_version']!r}"
        )
    n, k = doc["n"], doc["k"]
    if not (isinstance(n, int) and isinstance(k, int) and 1 <= k <= n):
        raise DocumentError("n and k must be integers with 1 <= k <= n")
    d = doc["d"]
    V = doc["V"]
    if not (isinstance(d, list) and len(d) == n):
        raise DocumentError(f"d must be a list of {n} reals")
    if not (
        isinstance(V, list)
        and len(V) == n
        and all(isinstance(row, list) and len(row) == k for row in V)
    ):
        raise DocumentError(f"V must be a list of {n} rows of {k} reals")
    try:
        return DpkInstance(d=np.array(d, dtype=float), V=np.array(V, dtype=float))
    except Exception as exc:  # shape/finiteness/positivity problems
        raise DocumentError(str(exc)) from exc


def load_instance(path) -> DpkInstance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    return instance_from_document(doc)


def result_document(result, stats, wall_time_ms=None, rate=None, oracle=None) -> dict:
    doc = {
        "a_star": [int(x) for x in result.a_star],
        "f_star": float(result.f_star),
        "stats": {
            "G_min": float(stats.G_min),
            "lambda_lb": float(stats.lambda_lb),
            "psi": float(stats.psi),
            "psi_ceil": int(stats.psi_ceil),
            "phase1_points": int(result.phase1_points),
            "candidates_evaluated": int(result.candidates_evaluated),
            "used_path": result.used_path,
        },
    }
    if wall_time_ms is not None:
        doc["stats"]["wall_time_ms"] = float(wall_time_ms)
    if rate is not None:
        doc["rate"] = rate
    if oracle is not None:
        doc["oracle"] = oracle
    return doc


def oracle_document(res, wall_time_ms=None) -> dict:
    doc = {
        "f_star": float(res.f_star),
        "minimizers": [[int(x) for x in a] for a in res.minimizers],
        "vectors_scanned": int(res.vectors_scanned),
    }
    if wall_time_ms is not None:
        doc["wall_time_ms"] = float(wall_time_ms)
    return doc


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"
