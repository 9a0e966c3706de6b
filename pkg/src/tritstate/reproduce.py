"""Reference d=3 construction and a checker that rebuilds it from scratch.

``SCHEME`` is the 3x3 grid of cells: each cell lists three functions (as
``f(-) f(0) f(+)`` literals) that share one ray, together with the vector
printed for that ray. Columns of the grid are the orthogonal triples.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import REPRODUCTION_TOL, canonicalize_ray, cos_angle, is_orthogonal
from .oracle import DitFunction, enumerate_functions, oracle_vector, roots_of_unity_encoding
from .partition import (
    BasisDecomposition,
    ClassTable,
    MubReport,
    decompose_bases,
    partition_rays,
    verify_mub,
)
from .simulator import measure, prepare_state

ALPHA = cmath.exp(2j * cmath.pi / 3)
ALPHABAR = ALPHA.conjugate()
SYMBOLS = {"1": 1 + 0j, "alpha": ALPHA, "alphabar": ALPHABAR}

# SCHEME[row][col] = (member literals, displayed vector)
SCHEME = (
    (
        (("---", "000", "+++"), ("1", "1", "1")),
        (("--0", "00+", "++-"), ("1", "1", "alpha")),
        (("--+", "00-", "++0"), ("1", "1", "alphabar")),
    ),
    (
        (("-0+", "0+-", "+-0"), ("1", "alpha", "alphabar")),
        (("-0-", "0+0", "+-+"), ("1", "alpha", "1")),
        (("-+-", "0-0", "+0+"), ("1", "alphabar", "1")),
    ),
    (
        (("-+0", "+0-", "0-+"), ("1", "alphabar", "alpha")),
        (("0--", "+00", "-++"), ("alpha", "1", "1")),
        (("+--", "-00", "0++"), ("alphabar", "1", "1")),
    ),
)


def scheme_vector(symbols) -> np.ndarray:
    return np.array([SYMBOLS[s] for s in symbols], dtype=complex)


def scheme_columns() -> list[set[frozenset[int]]]:
    """Each grid column as a set of member-id sets."""
    cols = []
    for c in range(3):
        cols.append(
            {
                frozenset(DitFunction.from_literal(lit).id for lit in SCHEME[r][c][0])
                for r in range(3)
            }
        )
    return cols


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SchemeVerification:
    tol: float
    checks: list[Check] = field(default_factory=list)
    table: ClassTable | None = None
    decomp: BasisDecomposition | None = None
    mub: MubReport | None = None
    cells: list[dict] = field(default_factory=list)
    max_deviation: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))


def verify_scheme(tol: float = REPRODUCTION_TOL) -> SchemeVerification:
    """Rebuild all 27 oracle vectors for d=3 and compare against ``SCHEME``."""
    out = SchemeVerification(tol=tol)
    enc = roots_of_unity_encoding(3)

    ident = [abs(ALPHA**3 - 1), abs(ALPHA * ALPHABAR - 1), abs(ALPHA + ALPHABAR + 1)]
    out.add("alpha identities", max(ident) < tol, f"max residual {max(ident):.3g}")
    dev = float(np.max(np.abs(enc.array - np.array([ALPHABAR, 1, ALPHA]))))
    out.add("encoding is (alphabar, 1, alpha)", dev < tol, f"max deviation {dev:.3g}")

    functions = enumerate_functions(3)
    vectors = np.array([oracle_vector(f, enc).v for f in functions])
    mags = float(np.max(np.abs(np.abs(vectors) - 1)))
    out.add("27 oracle vectors", len(functions) == 27, f"{len(functions)} functions")
    out.add("unit-magnitude entries", mags < tol, f"max deviation {mags:.3g}")

    table = partition_rays(functions, enc, tol)
    out.table = table
    sizes = sorted(len(c.members) for c in table.classes)
    out.add("9 classes of 3", sizes == [3] * 9, f"class sizes {sizes}")

    max_dev = 0.0
    for r, c in itertools.product(range(3), range(3)):
        lits, symbols = SCHEME[r][c]
        ids = tuple(sorted(DitFunction.from_literal(lit).id for lit in lits))
        expected = canonicalize_ray(scheme_vector(symbols), tol)
        match = next((i for i, cl in enumerate(table.classes) if tuple(sorted(cl.members)) == ids), None)
        cell = {"row": r, "col": c, "members": list(lits), "vector": list(symbols), "class": match}
        if match is None:
            cell["deviation"] = None
            out.add(f"cell ({r + 1},{c + 1})", False, f"no class holds exactly {list(lits)}")
        else:
            got = table.classes[match].ray
            d = float(np.max(np.abs(got.vector - expected.vector)))
            max_dev = max(max_dev, d)
            cell["deviation"] = d
            out.add(f"cell ({r + 1},{c + 1})", d < tol, f"max coordinate deviation {d:.3g}")
        # each member's own oracle vector must land on the cell's ray
        for lit in lits:
            ray = canonicalize_ray(oracle_vector(DitFunction.from_literal(lit), enc).array, tol)
            if not np.max(np.abs(ray.vector - expected.vector)) < tol:
                out.add(f"member {lit}", False, "oracle ray differs from the cell vector")
        out.cells.append(cell)
    out.max_deviation = max_dev

    shift_ok = all(
        {tuple((y + s) % 3 for y in DitFunction.from_id(cl.members[0], 3).table) for s in range(3)}
        == {DitFunction.from_id(m, 3).table for m in cl.members}
        for cl in table.classes
    )
    out.add("classes are constant shifts", shift_ok)

    decomp = decompose_bases(table, tol)
    out.decomp = decomp
    out.add("k = 3", decomp.feasible and decomp.k == 3, f"feasible={decomp.feasible} k={decomp.k}")
    if not decomp.feasible:
        return out

    got_cols = {frozenset(frozenset(table.classes[i].members) for i in b) for b in decomp.bases}
    want_cols = {frozenset(col) for col in scheme_columns()}
    out.add("bases are the grid columns", got_cols == want_cols)

    mub = verify_mub(table, decomp, tol)
    out.mub = mub
    out.add("intra-basis overlaps", mub.max_intra_deviation < tol, f"max {mub.max_intra_deviation:.3g}")
    target = math.sqrt(3) / 3
    cross_dev = max((abs(x - target) for x in mub.cross_overlaps), default=math.inf)
    out.add(
        "cross overlaps sqrt(3)/3",
        len(mub.cross_overlaps) == 27 and cross_dev < tol,
        f"{len(mub.cross_overlaps)} pairs, max deviation {cross_dev:.3g}",
    )

    worst = 0.0
    for p, q in itertools.permutations(range(3), 2):
        basis = [table.classes[i].ray for i in decomp.bases[q]]
        for i in decomp.bases[p]:
            for fid in table.classes[i].members:
                probs = measure(prepare_state(DitFunction.from_id(fid, 3), enc), basis, 0).probs
                worst = max(worst, max(abs(x - 1 / 3) for x in probs))
    out.add("cross-basis distributions uniform", worst < tol, f"max deviation {worst:.3g}")
    return out


def scheme_rays_orthogonal_by_column(tol: float = REPRODUCTION_TOL) -> bool:
    """Direct check on the printed vectors: columns orthogonal, cross pairs at sqrt(3)/3."""
    rays = [[canonicalize_ray(scheme_vector(SCHEME[r][c][1])) for r in range(3)] for c in range(3)]
    for col in rays:
        if not all(is_orthogonal(a, b, tol) for a, b in itertools.combinations(col, 2)):
            return False
    for ca, cb in itertools.combinations(rays, 2):
        for a in ca:
            for b in cb:
                if abs(cos_angle(a, b) - math.sqrt(3) / 3) >= tol:
                    return False
    return True

