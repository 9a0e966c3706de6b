"""Single-query identification: prepare, measure, read off the class."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import DECISION_TOL, Ray, canonicalize_ray, inner_product
from .errors import PromiseViolation
from .oracle import DitFunction, Encoding, oracle_vector
from .partition import BasisDecomposition, ClassTable


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Generator for one trial, derived from ``(seed, trial)`` only."""
    return np.random.default_rng([int(seed), int(trial)])


class Oracle:
    """Black box around ``f``; counts how often its state is prepared."""

    def __init__(self, f: DitFunction, enc: Encoding):
        self._f = f
        self._enc = enc
        self.calls = 0

    def query(self) -> np.ndarray:
        self.calls += 1
        return prepare_state(self._f, self._enc)


@dataclass(frozen=True)
class PromiseProblem:
    """One basis of a decomposition, with the functions promised to land in it."""

    basis: tuple[Ray, ...]
    labels: tuple[str, ...]
    expected: dict[int, int] = field(repr=False)

    @property
    def promise_set(self) -> frozenset[int]:
        return frozenset(self.expected)

    @classmethod
    def from_decomposition(
        cls, table: ClassTable, decomp: BasisDecomposition, column: int
    ) -> "PromiseProblem":
        """Build the problem for basis ``column`` (0-based) of ``decomp``."""
        if not decomp.feasible:
            raise ValueError("decomposition is infeasible; no promise problem exists")
        if not 0 <= column < len(decomp.bases):
            raise ValueError(f"column {column} out of range 0..{len(decomp.bases) - 1}")
        idx = decomp.bases[column]
        expected = {fid: pos for pos, i in enumerate(idx) for fid in table.classes[i].members}
        return cls(
            basis=tuple(table.classes[i].ray for i in idx),
            labels=tuple(f"class {i}" for i in idx),
            expected=expected,
        )


@dataclass(frozen=True)
class OutcomeDistribution:
    probs: tuple[float, ...]
    sampled_outcome: int | None
    seed: int


def prepare_state(f: DitFunction, enc: Encoding, tol: float = DECISION_TOL) -> np.ndarray:
    enc.require_admissible(tol)
    v = oracle_vector(f, enc).array
    return v / np.linalg.norm(v)


def _check_basis(basis: Sequence[Ray], d: int, tol: float) -> None:
    if len(basis) != d or any(r.d != d for r in basis):
        raise ValueError(f"basis must hold {d} rays of dimension {d}")
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            if abs(inner_product(a.vector, b.vector)) >= tol:
                raise ValueError("basis is not orthonormal within tolerance")


def measure(
    state, basis: Sequence[Ray], seed: int | np.random.Generator = 0, tol: float = DECISION_TOL
) -> OutcomeDistribution:
    """Born-rule projective measurement of a unit state in ``basis``."""
    state = np.asarray(state, dtype=complex)
    if abs(np.linalg.norm(state) - 1.0) > tol:
        raise ValueError("state must have unit norm")
    _check_basis(basis, state.shape[0], tol)
    probs = np.array([abs(inner_product(state, r.vector)) ** 2 for r in basis])
    rng = seed if isinstance(seed, np.random.Generator) else trial_rng(seed)
    # clip rounding noise before sampling; probs sum to 1 within ~1e-15
    p = np.clip(probs, 0.0, None)
    outcome = int(rng.choice(len(p), p=p / p.sum()))
    seed_val = seed if isinstance(seed, int) else -1
    return OutcomeDistribution(tuple(float(x) for x in probs), outcome, seed_val)


def identify_class(
    f: DitFunction,
    problem: PromiseProblem,
    enc: Encoding,
    seed: int | np.random.Generator = 0,
    oracle: Oracle | None = None,
) -> str:
    """Identify the class of ``f`` with one oracle query.

    Raises PromiseViolation if ``f`` is not in the problem's promise set; no
    query is made in that case.
    """
    if f.id not in problem.expected:
        raise PromiseViolation(
            f"function {f.literal()} is not promised to lie in this basis"
        )
    if oracle is None:
        oracle = Oracle(f, enc)
    state = oracle.query()
    dist = measure(state, problem.basis, seed)
    return problem.labels[dist.sampled_outcome]


@dataclass(frozen=True)
class ProtocolSummary:
    trials: int
    seed: int
    tallies: dict[int, dict[str, int]]
    accuracy: dict[int, float]
    class_accuracy: dict[str, float]
    queries: int
    runs: int

    @property
    def overall_accuracy(self) -> float:
        return sum(self.accuracy.values()) / len(self.accuracy)


def run_protocol(
    problem: PromiseProblem, enc: Encoding, trials: int = 100, seed: int = 0
) -> ProtocolSummary:
    """Identify every promised function ``trials`` times.

    Trial ``t`` of function ``fid`` uses the generator of ``(seed, t)``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    tallies: dict[int, dict[str, int]] = {}
    accuracy: dict[int, float] = {}
    per_class: dict[str, list[int]] = {lab: [0, 0] for lab in problem.labels}
    queries = 0
    for fid in sorted(problem.expected):
        f = DitFunction.from_id(fid, enc.d)
        truth = problem.labels[problem.expected[fid]]
        counts: Counter[str] = Counter()
        for t in range(trials):
            oracle = Oracle(f, enc)
            counts[identify_class(f, problem, enc, trial_rng(seed, t), oracle)] += 1
            queries += oracle.calls
        tallies[fid] = {lab: counts[lab] for lab in problem.labels}
        accuracy[fid] = counts[truth] / trials
        per_class[truth][0] += counts[truth]
        per_class[truth][1] += trials
    return ProtocolSummary(
        trials=trials,
        seed=seed,
        tallies=tallies,
        accuracy=accuracy,
        class_accuracy={lab: hit / tot for lab, (hit, tot) in per_class.items() if tot},
        queries=queries,
        runs=len(problem.expected) * trials,
    )


def class_ray_of(f: DitFunction, enc: Encoding, tol: float = DECISION_TOL) -> Ray:
    return canonicalize_ray(oracle_vector(f, enc).array, tol)
