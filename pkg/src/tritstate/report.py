"""Plain-data documents and text tables for the CLI."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .oracle import DitFunction, Encoding
from .partition import BasisDecomposition, ClassTable, MubReport
from .reproduce import ALPHA, ALPHABAR, SCHEME, SYMBOLS, SchemeVerification
from .search import SearchReport
from .simulator import OutcomeDistribution, ProtocolSummary

_NAMED = (("1", 1 + 0j), ("-1", -1 + 0j), ("alpha", ALPHA), ("alphabar", ALPHABAR))


def pair(z: complex) -> list[float]:
    # +0.0 avoids emitting -0.0, which would differ across equivalent runs
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def format_complex(z: complex, tol: float = 1e-12) -> str:
    for name, value in _NAMED:
        if abs(z - value) < tol:
            return name
    return f"{z.real + 0.0:.6g}{z.imag + 0.0:+.6g}i"


def format_vector(v) -> str:
    return "(" + ",".join(format_complex(complex(z)) for z in v) + ")"


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180 line endings by default
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def literal(fid: int, d: int) -> str:
    return DitFunction.from_id(fid, d).literal()


# -- partition ---------------------------------------------------------------


def partition_doc(table: ClassTable, decomp: BasisDecomposition, mub: MubReport | None) -> dict:
    d = table.d
    basis_of = {i: b for b, basis in enumerate(decomp.bases) for i in basis}
    return {
        "d": d,
        "encoding": [pair(z) for z in table.encoding.g],
        "classes": [
            {
                "index": i,
                "ray": [pair(z) for z in c.ray.unit],
                "display": format_vector(c.ray.scaled()),
                "members": [literal(m, d) for m in c.members],
                "basis": basis_of.get(i),
            }
            for i, c in enumerate(table.classes)
        ],
        "feasible": decomp.feasible,
        "k": decomp.k,
        "bases": [list(b) for b in decomp.bases],
        "mub": None if mub is None else {
            "is_mub": mub.is_mub,
            "target": mub.target,
            "max_intra_deviation": mub.max_intra_deviation,
            "max_cross_deviation": mub.max_cross_deviation,
            "cross_overlaps": list(mub.cross_overlaps),
        },
    }


def partition_csv(doc: dict) -> str:
    rows = [
        [c["index"], c["display"], " ".join(c["members"]), "" if c["basis"] is None else c["basis"] + 1]
        for c in doc["classes"]
    ]
    return dumps_csv(["class", "ray", "members", "basis"], rows)


def _cell_lines(members, vector: str) -> list[str]:
    lines = list(members)
    mid = len(lines) // 2
    width = max(len(m) for m in lines)
    pad = " " * (len(vector) + 4)
    return [m.ljust(width) + (f" -> {vector}" if i == mid else pad) for i, m in enumerate(lines)]


def _grid(columns: list[list[list[str]]]) -> str:
    """Lay out cells (lists of lines) as columns; ``columns[c][r]`` is a cell."""
    rows = max(len(col) for col in columns)
    widths = [max(len(line) for cell in col for line in cell) for col in columns]
    sep = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    out = [sep]
    for r in range(rows):
        height = max(len(col[r]) for col in columns if r < len(col))
        for k in range(height):
            parts = []
            for col, w in zip(columns, widths):
                cell = col[r] if r < len(col) else []
                parts.append(" " + (cell[k] if k < len(cell) else "").ljust(w) + " ")
            out.append("|" + "|".join(parts) + "|")
        out.append(sep)
    return "\n".join(out)


def partition_text(doc: dict) -> str:
    d = doc["d"]
    lines = [f"d = {d}", "encoding " + format_vector(complex(*z) for z in doc["encoding"])]
    lines.append(f"{len(doc['classes'])} rays over {d ** d} functions")
    if doc["feasible"]:
        columns = [
            [_cell_lines(doc["classes"][i]["members"], doc["classes"][i]["display"]) for i in basis]
            for basis in doc["bases"]
        ]
        lines.append(f"k = {doc['k']} orthogonal bases (one per column)")
        lines.append(_grid(columns))
        mub = doc["mub"]
        lines.append(
            f"max intra-basis overlap {mub['max_intra_deviation']:.3g}; "
            f"max |cross overlap - 1/sqrt(d)| {mub['max_cross_deviation']:.3g}; "
            f"mutually unbiased: {'yes' if mub['is_mub'] else 'no'}"
        )
    else:
        lines.append("rays do not split into orthogonal bases")
        for c in doc["classes"]:
            lines.append(f"  {c['index']:>3}  {c['display']}  {' '.join(c['members'])}")
    return "\n".join(lines) + "\n"


# -- verify ------------------------------------------------------------------


def verification_doc(v: SchemeVerification) -> dict:
    return {
        "passed": v.passed,
        "tol": v.tol,
        "max_deviation": v.max_deviation,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in v.checks],
        "cells": v.cells,
        "k": None if v.decomp is None else v.decomp.k,
        "cross_overlaps": None if v.mub is None else list(v.mub.cross_overlaps),
    }


def verification_csv(doc: dict) -> str:
    return dumps_csv(["check", "passed", "detail"], [[c["name"], c["passed"], c["detail"]] for c in doc["checks"]])


def verification_text(v: SchemeVerification) -> str:
    table = v.table
    columns = []
    for c in range(3):
        col = []
        for r in range(3):
            lits, symbols = SCHEME[r][c]
            cell = next(x for x in v.cells if x["row"] == r and x["col"] == c)
            if cell["class"] is not None and table is not None:
                # rescale the computed ray onto the printed vector's phase
                ray = table.classes[cell["class"]].ray.vector
                shown = format_vector(ray * (SYMBOLS[symbols[0]] / ray[0]))
            else:
                shown = "(no match)"
            col.append(_cell_lines(lits, shown))
        columns.append(col)
    lines = ["oracle g = (alphabar, 1, alpha) on (-, 0, +)", _grid(columns)]
    for c in v.checks:
        lines.append(f"[{'ok' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    lines.append("verdict: " + ("match" if v.passed else "MISMATCH"))
    return "\n".join(lines) + "\n"


# -- simulate ----------------------------------------------------------------


def distribution_doc(dist: OutcomeDistribution) -> dict:
    return {"probs": list(dist.probs), "sampled_outcome": dist.sampled_outcome, "seed": dist.seed}


def protocol_doc(summary: ProtocolSummary, d: int) -> dict:
    return {
        "trials": summary.trials,
        "seed": summary.seed,
        "runs": summary.runs,
        "queries": summary.queries,
        "overall_accuracy": summary.overall_accuracy,
        "functions": [
            {"function": literal(fid, d), "accuracy": summary.accuracy[fid], "tallies": summary.tallies[fid]}
            for fid in sorted(summary.tallies)
        ],
        "class_accuracy": summary.class_accuracy,
    }


def simulate_csv(doc: dict) -> str:
    rows = []
    if doc.get("protocol"):
        for f in doc["protocol"]["functions"]:
            for label, n in f["tallies"].items():
                rows.append([f["function"], label, n, f["accuracy"]])
    else:
        for label, n in doc["outcome_tallies"].items():
            rows.append([doc["function"], label, n, ""])
    return dumps_csv(["function", "outcome", "count", "accuracy"], rows)


def simulate_text(doc: dict) -> str:
    lines = [f"d = {doc['d']}, column {doc['column']} of {doc['k']}", "basis " + ", ".join(doc["basis"])]
    if doc.get("function") is not None:
        probs = ", ".join(f"{p:.6f}" for p in doc["distribution"]["probs"])
        lines.append(f"function {doc['function']}: outcome probabilities ({probs})")
        tallies = ", ".join(f"{k}: {v}" for k, v in doc["outcome_tallies"].items())
        lines.append(f"sampled over {doc['trials']} trials (seed {doc['seed']}): {tallies}")
        if doc["identified"] is not None:
            lines.append(f"identified {doc['identified']} with one query; accuracy {doc['accuracy']:.3f}")
        else:
            lines.append(f"identification refused: {doc['error']}")
    proto = doc.get("protocol")
    if proto:
        lines.append(f"protocol over {len(proto['functions'])} promised functions x {proto['trials']} trials")
        for f in proto["functions"]:
            lines.append(f"  {f['function']:>8}  accuracy {f['accuracy']:.3f}")
        lines.append(f"queries {proto['queries']} for {proto['runs']} runs")
    return "\n".join(lines) + "\n"


# -- search ------------------------------------------------------------------


def search_doc(report: SearchReport) -> dict:
    return report.to_dict()


def search_csv(doc: dict) -> str:
    keys = [
        "kind", "d", "samples", "seed", "tol", "screen_tol", "min_k_found", "feasible_count",
        "infeasible_count", "inadmissible_count", "refined_attempts", "refined_successes",
    ]
    rows = [[k, doc[k]] for k in keys]
    rows.append(["violations", len(doc["violations"])])
    if doc["step_b"]:
        rows += [[f"step_b_{k}", v] for k, v in doc["step_b"].items()]
    if doc["roots_of_unity"]:
        rows += [[f"roots_of_unity_{k}", v] for k, v in doc["roots_of_unity"].items() if k != "cross_overlaps"]
    return dumps_csv(["field", "value"], rows)


def search_text(doc: dict) -> str:
    lines = [
        f"{doc['kind']}: d = {doc['d']}, {doc['samples']} samples, seed {doc['seed']}, tol {doc['tol']:g}",
        f"feasible {doc['feasible_count']}, infeasible {doc['infeasible_count']} "
        f"(inadmissible {doc['inadmissible_count']})",
        f"refinement: {doc['refined_attempts']} polished, {doc['refined_successes']} became exact",
        f"fewest bases found: {doc['min_k_found'] if doc['min_k_found'] is not None else 'none'}",
    ]
    if doc["step_b"]:
        sb = doc["step_b"]
        lines.append(
            f"non-orthogonality bound: {sb['failures']} failures over {sb['checked']} samples, "
            f"min margin {sb['min_margin']:.4g}" if sb["min_margin"] is not None else "no admissible samples"
        )
    if doc["violation_bound"] is not None:
        lines.append(f"samples with k <= {doc['violation_bound']}: {len(doc['violations'])}")
    for v in doc["violations"]:
        lines.append(f"  VIOLATION #{v['index']}: k={v['k']} encoding {v['encoding']}")
    ru = doc["roots_of_unity"]
    if ru:
        lines.append(
            f"roots of unity at d={doc['d']}: {ru['ray_count']} rays, k={ru['k']}, "
            f"mutually unbiased: {ru['is_mub']}"
        )
    return "\n".join(lines) + "\n"


def encoding_text(enc: Encoding) -> str:
    return format_vector(np.asarray(enc.g))
