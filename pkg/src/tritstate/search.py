"""Seeded scans over encodings looking for fewer orthogonal bases.

For d=3 no encoding yields fewer than three orthogonal triples. The scan
here is numerical corroboration of that: it samples encodings in the gauge
``g[0] = 1``, rules out most samples with a vectorized necessary condition,
partitions the survivors exactly, and polishes near-misses with a
least-squares solve so a counterexample cannot hide between samples.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .algebra import DECISION_TOL
from .errors import ResourceCapError, ZeroVectorError
from .oracle import (
    Encoding,
    enumerate_functions,
    function_tables,
    roots_of_unity_encoding,
)
from .partition import (
    SearchBudgetExceeded,
    _partition,
    decompose_bases,
    partition_rays,
    verify_mub,
)

#: Looser radius used to decide which samples deserve exact treatment and a polish.
SCREEN_TOL = 0.1
LOG_MAGNITUDE_RANGE = (-1.0, 1.0)
PHASE_RANGE = (0.0, 2 * np.pi)
GENERATOR = "numpy.random.PCG64"
PROBE_DIMENSIONS = (2, 3, 4)

# rows: 2 g(-) + g(0) = 0, g(-) + 2 g(+) = 0, 2 g(0) + g(+) = 0
FINAL_SYSTEM = ((2, 1, 0), (1, 0, 2), (0, 2, 1))


# -- parametrisation ---------------------------------------------------------


def encoding_array_from_params(params) -> np.ndarray:
    """Map ``(..., 2(d-1))`` params to ``(..., d)`` amplitudes with ``g[0] = 1``.

    Params are interleaved per free amplitude: ``log10 |g[k]|, arg g[k]``.
    """
    params = np.asarray(params, dtype=float)
    logmag, phase = params[..., 0::2], params[..., 1::2]
    free = 10.0**logmag * np.exp(1j * phase)
    ones = np.ones(params.shape[:-1] + (1,), dtype=complex)
    return np.concatenate([ones, free], axis=-1)


def params_from_encoding(enc: Encoding) -> np.ndarray:
    """Inverse of ``encoding_array_from_params`` after dividing out ``g[0]``."""
    g = enc.array / enc.g[0]
    out = np.empty(2 * (enc.d - 1))
    out[0::2] = np.log10(np.abs(g[1:]))
    out[1::2] = np.mod(np.angle(g[1:]), 2 * np.pi)
    return out


@dataclass(frozen=True)
class EncodingSample:
    enc: Encoding
    params: tuple[float, ...]

    @classmethod
    def from_params(cls, params) -> "EncodingSample":
        params = np.asarray(params, dtype=float)
        return cls(Encoding(encoding_array_from_params(params)), tuple(float(p) for p in params))

    def to_dict(self) -> dict:
        return {
            "params": list(self.params),
            "encoding": [[z.real, z.imag] for z in self.enc.g],
        }


def _uniform_to_params(u: np.ndarray) -> np.ndarray:
    lo, hi = LOG_MAGNITUDE_RANGE
    params = np.empty_like(u)
    params[..., 0::2] = lo + (hi - lo) * u[..., 0::2]
    params[..., 1::2] = PHASE_RANGE[0] + (PHASE_RANGE[1] - PHASE_RANGE[0]) * u[..., 1::2]
    return params


def sample_encoding(rng: np.random.Generator, d: int) -> EncodingSample:
    """Draw one encoding: log-uniform magnitudes over two decades, uniform phases.

    Consumes ``2(d-1)`` uniforms, so ``n`` calls match one batched draw of
    shape ``(n, 2(d-1))``.
    """
    return EncodingSample.from_params(_uniform_to_params(rng.random(2 * (d - 1))))


# -- exact evaluation --------------------------------------------------------


def min_bases_for_encoding(enc: Encoding, tol: float = DECISION_TOL) -> int | None:
    """Number of orthogonal bases the oracle rays split into, or None."""
    if not enc.admissible(tol):
        return None
    table = partition_rays(enumerate_functions(enc.d), enc, tol)
    return decompose_bases(table, tol).k


@dataclass(frozen=True)
class ProofStepResult:
    step: str
    holds: bool
    margin: float
    detail: str = ""


def _step_b_pairs(g: np.ndarray):
    """For each letter pair (a, b): overlap of (g_a,g_a,g_b),(g_a,g_b,g_b) and its lower bound."""
    for a, b in itertools.combinations(range(3), 2):
        ga, gb = g[..., a], g[..., b]
        inner = np.abs(ga) ** 2 + ga * np.conj(gb) + np.abs(gb) ** 2
        bound = np.abs(ga) ** 2 + np.abs(gb) ** 2 - np.abs(ga) * np.abs(gb)
        yield (a, b), np.abs(inner), bound


def proof_step_checks(enc: Encoding, tol: float = DECISION_TOL) -> list[ProofStepResult]:
    """Evaluate the three necessary conditions used against k <= 2 (d=3 only).

    a: every value is nonzero.
    b: the rays of (a,a,b) and (a,b,b) are never orthogonal, via
       ``|<u,v>| >= |g_a|^2 + |g_b|^2 - |g_a||g_b|``.
    c: the values are pairwise distinct.
    """
    if enc.d != 3:
        raise ValueError("the proof steps are stated for d=3")
    g = enc.array
    mags = np.abs(g)
    margin_a = float(mags.min() - tol)
    results = [ProofStepResult("a", margin_a > 0, margin_a, "min |g| - tol")]

    margins_b, ok_b = [], True
    for (a, b), overlap, bound in _step_b_pairs(g):
        margins_b.append(float(bound))
        # the triangle inequality must hold up to rounding
        ok_b &= bool(overlap >= bound - 1e-12 * max(1.0, float(bound)))
    margin_b = min(margins_b)
    results.append(
        ProofStepResult("b", ok_b and margin_b > tol, margin_b, "min lower bound on |<u,v>|")
    )

    dists = [abs(g[x] - g[y]) for x, y in itertools.combinations(range(3), 2)]
    margin_c = float(min(dists) - tol)
    results.append(ProofStepResult("c", margin_c > 0, margin_c, "min |g_x - g_y| - tol"))
    return results


def integer_determinant(m: Sequence[Sequence[int]]) -> int:
    """Cofactor expansion along the first row, in Python integers."""
    n = len(m)
    if n == 1:
        return int(m[0][0])
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * int(m[0][j]) * integer_determinant(minor)
    return total


def final_system_determinant(system: Sequence[Sequence[int]] = FINAL_SYSTEM) -> int:
    """Determinant of the closing linear system; nonzero means only g = 0 solves it."""
    return integer_determinant([list(row) for row in system])


# -- refinement --------------------------------------------------------------


def refine_encoding(
    enc: Encoding,
    tol: float = DECISION_TOL,
    screen_tol: float = SCREEN_TOL,
    max_iter: int = 100,
    max_nodes: int = 10_000,
) -> EncodingSample | None:
    """Polish ``enc`` towards the nearest exact decomposition, if one is close.

    The rays are grouped and split into bases at the loose ``screen_tol``.
    If that succeeds, a least-squares solve drives every implied ray identity
    and orthogonality to zero. Returns the polished sample, or None when no
    loose structure exists or the loose cover search exceeds ``max_nodes``.
    The caller re-checks the result at ``tol``.
    """
    d = enc.d
    enc = Encoding(enc.array / enc.g[0])
    try:
        table = _partition(enumerate_functions(d), enc, screen_tol)
    except ZeroVectorError:
        return None
    try:
        decomp = decompose_bases(table, screen_tol, max_nodes)
    except SearchBudgetExceeded:
        return None
    if not decomp.feasible:
        return None

    tables = function_tables(d)
    reps = [c.members[0] for c in table.classes]
    same = [(c.members[0], m) for c in table.classes for m in c.members[1:]]
    orth = [(reps[a], reps[b]) for basis in decomp.bases for a, b in itertools.combinations(basis, 2)]
    iu, ju = np.triu_indices(d, 1)
    same_a = [p for p, _ in same]
    same_b = [q for _, q in same]
    orth_a = [p for p, _ in orth]
    orth_b = [q for _, q in orth]

    def residuals(x):
        V = encoding_array_from_params(x)[tables]
        V = V / np.linalg.norm(V, axis=1, keepdims=True)
        parts = []
        if same:
            A, B = V[same_a], V[same_b]
            # all 2x2 minors vanish iff the two rows are parallel
            parts.append((A[:, iu] * B[:, ju] - A[:, ju] * B[:, iu]).ravel())
        if orth:
            parts.append(np.sum(V[orth_a] * np.conj(V[orth_b]), axis=1))
        r = np.concatenate(parts)
        return np.concatenate([r.real, r.imag])

    sol = least_squares(
        residuals, params_from_encoding(enc), method="trf", max_nfev=max_iter,
        xtol=1e-15, ftol=1e-15, gtol=1e-15,
    )
    return EncodingSample.from_params(sol.x)


# -- scans -------------------------------------------------------------------


@dataclass
class SearchReport:
    kind: str
    d: int
    samples: int
    seed: int | None
    tol: float
    screen_tol: float
    refine: bool
    min_k_found: int | None
    feasible_count: int
    infeasible_count: int
    inadmissible_count: int
    refined_attempts: int
    refined_successes: int
    k_histogram: dict[int, int]
    violation_bound: int | None
    violations: list[dict]
    witness: dict | None
    step_b: dict | None
    generator: str = GENERATOR
    param_ranges: dict = field(
        default_factory=lambda: {
            "log10_magnitude": list(LOG_MAGNITUDE_RANGE),
            "phase": list(PHASE_RANGE),
            "gauge": "g[0] = 1",
        }
    )
    roots_of_unity: dict | None = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["k_histogram"] = {str(k): v for k, v in sorted(self.k_histogram.items())}
        return out


def _screen_deficit(gs: np.ndarray, tables: np.ndarray, d: int, chunk: int) -> np.ndarray:
    """Per sample: the worst, over functions, of the (d-1)-th smallest overlap.

    Any exact decomposition needs every function's ray to have d-1 orthogonal
    partners, so a sample with deficit >= tol cannot decompose at tol.
    """
    out = np.empty(len(gs))
    F = len(tables)
    for start in range(0, len(gs), chunk):
        V = gs[start:start + chunk][:, tables]
        with np.errstate(invalid="ignore", divide="ignore"):
            V = V / np.linalg.norm(V, axis=-1, keepdims=True)
        over = np.abs(V @ np.conj(V).transpose(0, 2, 1))
        over[:, np.arange(F), np.arange(F)] = np.inf
        kth = np.partition(over, d - 2, axis=-1)[..., d - 2]
        out[start:start + chunk] = kth.max(axis=-1)
    return np.nan_to_num(out, nan=np.inf)


def _admissible_mask(gs: np.ndarray, tol: float) -> np.ndarray:
    ok = np.all(np.abs(gs) > tol, axis=-1)
    d = gs.shape[-1]
    for x, y in itertools.combinations(range(d), 2):
        ok &= np.abs(gs[:, x] - gs[:, y]) > tol
    return ok


def scan_params(
    params,
    d: int,
    tol: float = DECISION_TOL,
    seed: int | None = None,
    refine: bool = True,
    screen_tol: float = SCREEN_TOL,
    kind: str = "lower_bound_scan",
) -> SearchReport:
    """Evaluate a fixed array of sample params, shape ``(n, 2(d-1))``."""
    params = np.asarray(params, dtype=float).reshape(-1, 2 * (d - 1))
    tables = function_tables(d)
    n = len(params)
    gs = encoding_array_from_params(params)
    admissible = _admissible_mask(gs, tol)
    chunk = max(1, 2**21 // len(tables) ** 2)
    deficit = np.full(n, np.inf)
    deficit[admissible] = _screen_deficit(gs[admissible], tables, d, chunk)

    step_b = None
    if d == 3:
        fails, min_margin = 0, np.inf
        ga = gs[admissible]
        for _, overlap, bound in _step_b_pairs(ga):
            bad = (bound <= 0) | (overlap < bound - 1e-12 * np.maximum(1.0, bound))
            fails += int(bad.sum())
            if bound.size:
                min_margin = min(min_margin, float(bound.min()))
        step_b = {
            "checked": int(admissible.sum()),
            "failures": fails,
            "min_margin": None if np.isinf(min_margin) else min_margin,
        }

    violation_bound = 2 if d == 3 else None
    ks: dict[int, int] = {}
    found: dict[int, EncodingSample] = {}
    violations = []
    attempts = successes = 0
    for i in np.flatnonzero(admissible & (deficit < screen_tol)):
        sample = EncodingSample.from_params(params[i])
        k = min_bases_for_encoding(sample.enc, tol)
        refined = False
        if k is None and refine:
            attempts += 1
            polished = refine_encoding(sample.enc, tol, screen_tol)
            if polished is not None:
                k_pol = min_bases_for_encoding(polished.enc, tol)
                if k_pol is not None:
                    successes += 1
                    k, sample, refined = k_pol, polished, True
        if k is None:
            continue
        ks[int(i)] = k
        found[int(i)] = sample
        if violation_bound is not None and k <= violation_bound:
            violations.append({"index": int(i), "k": k, "refined": refined, **sample.to_dict()})

    k_hist: dict[int, int] = {}
    for k in ks.values():
        k_hist[k] = k_hist.get(k, 0) + 1
    min_k = min(ks.values()) if ks else None
    if min_k is not None:
        best = min(i for i, k in ks.items() if k == min_k)
        witness = {"index": best, "k": min_k, "score": 0.0, **found[best].to_dict()}
    elif admissible.any():
        best = int(np.argmin(deficit))
        witness = {
            "index": best,
            "k": None,
            "score": float(deficit[best]),
            **EncodingSample.from_params(params[best]).to_dict(),
        }
    else:
        witness = None

    return SearchReport(
        kind=kind,
        d=d,
        samples=n,
        seed=seed,
        tol=tol,
        screen_tol=screen_tol,
        refine=refine,
        min_k_found=min_k,
        feasible_count=len(ks),
        infeasible_count=n - len(ks),
        inadmissible_count=int((~admissible).sum()),
        refined_attempts=attempts,
        refined_successes=successes,
        k_histogram=k_hist,
        violation_bound=violation_bound,
        violations=violations,
        witness=witness,
        step_b=step_b,
    )


def _draw_params(d: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return _uniform_to_params(rng.random((samples, 2 * (d - 1))))


def lower_bound_scan(
    d: int = 3,
    samples: int = 100_000,
    seed: int = 42,
    tol: float = DECISION_TOL,
    refine: bool = True,
    screen_tol: float = SCREEN_TOL,
) -> SearchReport:
    """Sample ``samples`` encodings and report the fewest bases any achieves."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    function_tables(d)  # enforces the enumeration cap before drawing
    return scan_params(_draw_params(d, samples, seed), d, tol, seed, refine, screen_tol)


def roots_of_unity_summary(d: int, tol: float = DECISION_TOL) -> dict:
    enc = roots_of_unity_encoding(d)
    table = partition_rays(enumerate_functions(d), enc, tol)
    decomp = decompose_bases(table, tol)
    out = {"ray_count": len(table), "k": decomp.k, "is_mub": None, "cross_overlaps": None}
    if decomp.feasible:
        mub = verify_mub(table, decomp, tol)
        out["is_mub"] = mub.is_mub
        out["cross_overlaps"] = sorted({round(c, 12) for c in mub.cross_overlaps})
    return out


def conjecture_probe(
    d: int,
    samples: int = 100_000,
    seed: int = 42,
    tol: float = DECISION_TOL,
    refine: bool = True,
    screen_tol: float = SCREEN_TOL,
) -> SearchReport:
    """Scan as ``lower_bound_scan`` and add the roots-of-unity structure at ``d``.

    Nothing is asserted for d != 3; the report only records what was found.
    """
    if d > max(PROBE_DIMENSIONS):
        raise ResourceCapError(f"the probe covers d in {PROBE_DIMENSIONS}; d={d} is over the cap")
    if d not in PROBE_DIMENSIONS:
        raise ValueError(f"the probe covers d in {PROBE_DIMENSIONS}")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    report = scan_params(
        _draw_params(d, samples, seed), d, tol, seed, refine, screen_tol, kind="conjecture_probe"
    )
    report.roots_of_unity = roots_of_unity_summary(d, tol)
    return report
