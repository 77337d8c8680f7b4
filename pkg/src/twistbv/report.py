"""Deterministic verification reports.

One invocation produces one versioned document {version, invocation,
results}.  The canonical body is byte-deterministic: results are ordered
by scenario id, scalars are rendered exactly, and timing lives in a
separate field that is stripped before serialization.
"""

import json
import os

from .scalars import Scalar

REPORT_VERSION = 1
REPORT_DIR_ENV = "TWISTBV_REPORT_DIR"


def jsonify(value):
    """Recursively convert report payloads to JSON-safe data.

    Scalars render through their exact text form; dict keys become
    strings; sets and tuples become sorted/plain lists.
    """
    if isinstance(value, Scalar):
        return value.text()
    if isinstance(value, dict):
        return {str(k): jsonify(v) for k, v in sorted(
            value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    if isinstance(value, set):
        return sorted(jsonify(v) for v in value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "text"):
        return value.text()
    return str(value)


def make_result(scenario_id, status, parameters=None, witnesses=None,
                timing_ms=0.0):
    if status not in ("pass", "fail", "error"):
        raise ValueError("bad status %r" % status)
    witnesses = [jsonify(w) for w in (witnesses or [])]
    if status == "fail" and not witnesses:
        raise ValueError("failing result needs at least one witness")
    return {
        "scenario_id": scenario_id,
        "status": status,
        "parameters": jsonify(parameters or {}),
        "witnesses": witnesses,
        "timing_ms": round(timing_ms, 3),
    }


def canonical_report(invocation, results):
    """The versioned document with timing stripped, ordered by id."""
    body = []
    for res in sorted(results, key=lambda r: r["scenario_id"]):
        entry = {k: v for k, v in res.items() if k != "timing_ms"}
        body.append(entry)
    return {
        "version": REPORT_VERSION,
        "invocation": list(invocation),
        "results": body,
    }


def render_json(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def render_table(results) -> str:
    lines = []
    width = max((len(r["scenario_id"]) for r in results), default=0)
    for res in sorted(results, key=lambda r: r["scenario_id"]):
        line = "%-*s  %s" % (width, res["scenario_id"], res["status"])
        if "timing_ms" in res:
            line += "  (%.1f ms)" % res["timing_ms"]
        for w in res["witnesses"]:
            line += "\n%-*s    witness: %s" % (width, "", json.dumps(
                w, sort_keys=True, ensure_ascii=False))
        lines.append(line)
    return "\n".join(lines) + "\n"


def render_md(results) -> str:
    lines = ["| scenario | status | witnesses |", "| --- | --- | --- |"]
    for res in sorted(results, key=lambda r: r["scenario_id"]):
        wit = "; ".join(json.dumps(w, sort_keys=True, ensure_ascii=False)
                        for w in res["witnesses"])
        lines.append("| %s | %s | %s |"
                     % (res["scenario_id"], res["status"], wit))
    return "\n".join(lines) + "\n"


def write_report(report, name="report.json"):
    """Write the canonical body under the configured report directory.

    Returns the path written, or None when no directory is configured.
    """
    directory = os.environ.get(REPORT_DIR_ENV)
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_json(report))
    return path
