"""Group functions by oracle ray and split the rays into orthogonal bases."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import DECISION_TOL, Ray, canonicalize_ray, overlap_matrix
from .oracle import DitFunction, Encoding, oracle_vector


@dataclass(frozen=True)
class RayClass:
    ray: Ray
    members: tuple[int, ...]


@dataclass(frozen=True)
class ClassTable:
    """Functions grouped by the ray of their oracle vector.

    Classes are listed in order of their smallest member id.
    """

    classes: tuple[RayClass, ...]
    encoding: Encoding
    d: int

    def __len__(self):
        return len(self.classes)

    @property
    def rays(self) -> list[Ray]:
        return [c.ray for c in self.classes]

    def units(self) -> np.ndarray:
        return np.array([c.ray.unit for c in self.classes], dtype=complex)

    def class_of(self, fid: int) -> int:
        for i, c in enumerate(self.classes):
            if fid in c.members:
                return i
        raise KeyError(f"function id {fid} is not in this table")

    def permuted(self, order: Sequence[int]) -> "ClassTable":
        return ClassTable(tuple(self.classes[i] for i in order), self.encoding, self.d)


@dataclass(frozen=True)
class BasisDecomposition:
    """Ray indices split into mutually orthogonal d-tuples, when possible."""

    bases: tuple[tuple[int, ...], ...]
    feasible: bool

    @property
    def k(self) -> int | None:
        return len(self.bases) if self.feasible else None


@dataclass(frozen=True)
class MubReport:
    max_intra_deviation: float
    cross_overlaps: tuple[float, ...] = field(repr=False)
    is_mub: bool
    target: float

    @property
    def max_cross_deviation(self) -> float:
        if not self.cross_overlaps:
            return 0.0
        return float(np.max(np.abs(np.array(self.cross_overlaps) - self.target)))


def partition_rays(
    functions: Iterable[DitFunction], enc: Encoding, tol: float = DECISION_TOL
) -> ClassTable:
    """Bucket functions whose oracle vectors span the same ray.

    Raises InadmissibleEncoding if ``enc`` has a zero or repeated value.
    """
    enc.require_admissible(tol)
    return _partition(functions, enc, tol)


def _partition(functions: Iterable[DitFunction], enc: Encoding, tol: float) -> ClassTable:
    functions = list(functions)
    reps: list[Ray] = []
    members: list[list[int]] = []
    rep_units = np.empty((len(functions), enc.d), dtype=complex)
    buckets: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for f in functions:
        ray = canonicalize_ray(oracle_vector(f, enc).array, tol)
        idx = next((i for i in buckets.get(ray.hash_key, ()) if reps[i] == ray), None)
        if idx is None and reps:
            # grid boundaries can split equal rays across buckets
            close = np.linalg.norm(rep_units[: len(reps)] - ray.vector, axis=1) < tol
            hits = np.flatnonzero(close)
            idx = int(hits[0]) if hits.size else None
        if idx is None:
            idx = len(reps)
            rep_units[idx] = ray.vector
            reps.append(ray)
            members.append([])
        buckets[ray.hash_key].append(idx)
        members[idx].append(f.id)
    classes = tuple(RayClass(r, tuple(m)) for r, m in zip(reps, members))
    return ClassTable(classes, enc, enc.d)


def orthogonality_graph(table: ClassTable, tol: float = DECISION_TOL) -> list[frozenset[int]]:
    """Adjacency sets: ``j in adj[i]`` iff rays ``i`` and ``j`` are orthogonal."""
    if not table.classes:
        return []
    over = overlap_matrix(table.units())
    np.fill_diagonal(over, np.inf)
    return [frozenset(np.flatnonzero(row < tol).tolist()) for row in over]


class SearchBudgetExceeded(RuntimeError):
    """Backtracking visited more nodes than its budget allowed."""


def decompose_bases(
    table: ClassTable, tol: float = DECISION_TOL, max_nodes: int | None = None
) -> BasisDecomposition:
    """Exact cover of the rays by orthogonal d-cliques, lexicographically least.

    Backtracking always extends the lowest uncovered ray, trying its
    orthogonal partner sets in increasing order, so the first cover found is
    the canonical one. ``max_nodes`` bounds the number of blocks tried and
    raises SearchBudgetExceeded when hit; the default is unbounded.
    """
    d = table.d
    n = len(table)
    adj = orthogonality_graph(table, tol)
    infeasible = BasisDecomposition((), False)
    if n == 0 or n % d or any(len(a) < d - 1 for a in adj):
        return infeasible

    covered = [False] * n
    chosen: list[tuple[int, ...]] = []
    visited = 0

    def cliques(block: tuple[int, ...], candidates: list[int]):
        # grows block one partner at a time, in increasing index order
        nonlocal visited
        visited += 1
        if max_nodes is not None and visited > max_nodes:
            raise SearchBudgetExceeded(f"more than {max_nodes} search nodes")
        if len(block) == d:
            yield block
            return
        for pos, j in enumerate(candidates):
            rest = [c for c in candidates[pos + 1:] if c in adj[j]]
            if len(rest) >= d - len(block) - 1:
                yield from cliques(block + (j,), rest)

    def extend() -> bool:
        try:
            lead = covered.index(False)
        except ValueError:
            return True
        partners = sorted(j for j in adj[lead] if j > lead and not covered[j])
        for block in cliques((lead,), partners):
            for i in block:
                covered[i] = True
            chosen.append(block)
            if extend():
                return True
            chosen.pop()
            for i in block:
                covered[i] = False
        return False

    if not extend():
        return infeasible
    return BasisDecomposition(tuple(chosen), True)


def verify_mub(
    table: ClassTable, decomp: BasisDecomposition, tol: float = DECISION_TOL
) -> MubReport:
    """Collect every overlap inside and across the bases of a decomposition."""
    if not decomp.feasible:
        raise ValueError("verify_mub needs a feasible decomposition")
    over = overlap_matrix(table.units())
    intra = [over[a, b] for basis in decomp.bases for a, b in itertools.combinations(basis, 2)]
    cross = [
        float(over[a, b])
        for p, q in itertools.combinations(range(len(decomp.bases)), 2)
        for a in decomp.bases[p]
        for b in decomp.bases[q]
    ]
    target = 1.0 / np.sqrt(table.d)
    is_mub = all(abs(c - target) < tol for c in cross)
    return MubReport(
        max_intra_deviation=float(max(intra, default=0.0)),
        cross_overlaps=tuple(cross),
        is_mub=is_mub,
        target=float(target),
    )


def basis_sets(table: ClassTable, decomp: BasisDecomposition) -> set[frozenset[tuple[int, ...]]]:
    """Bases as sets of class member tuples; independent of class ordering."""
    return {frozenset(table.classes[i].members for i in basis) for basis in decomp.bases}
