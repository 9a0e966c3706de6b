import itertools
import math

import numpy as np
import pytest

from tritstate.algebra import canonicalize_ray
from tritstate.errors import InadmissibleEncoding
from tritstate.oracle import DitFunction, Encoding, enumerate_functions, oracle_vector, roots_of_unity_encoding
from tritstate.partition import (
    SearchBudgetExceeded,
    basis_sets,
    decompose_bases,
    orthogonality_graph,
    partition_rays,
    verify_mub,
)

from conftest import ALPHA, PAPER_COLUMNS, parallel


def brute_force_classes(functions, enc):
    """Group by Cauchy-Schwarz equality; no canonical phase involved."""
    groups: list[list] = []
    for f in functions:
        v = oracle_vector(f, enc).array
        for g in groups:
            if parallel(v, oracle_vector(g[0], enc).array):
                g.append(f)
                break
        else:
            groups.append([f])
    return sorted(tuple(f.id for f in g) for g in groups)


def generic_encoding(rng, d=3):
    return Encoding(10 ** rng.uniform(-1, 1, d) * np.exp(2j * np.pi * rng.random(d)))


class TestPartitionRays:
    def test_paper_configuration(self, paper_table):
        assert len(paper_table) == 9
        assert all(len(c.members) == 3 for c in paper_table.classes)
        want = [canonicalize_ray(v) for col in PAPER_COLUMNS for v in col]
        got = paper_table.rays
        for w in want:
            assert sum(w == g for g in got) == 1

    def test_agrees_with_brute_force(self, paper_table):
        brute = brute_force_classes(enumerate_functions(3), roots_of_unity_encoding(3))
        assert sorted(tuple(sorted(c.members)) for c in paper_table.classes) == brute

    def test_deutsch(self):
        table = partition_rays(enumerate_functions(2), Encoding([1, -1]))
        assert [c.members for c in table.classes] == [(0, 3), (1, 2)]
        assert table.classes[0].ray == canonicalize_ray((1, 1))
        assert table.classes[1].ray == canonicalize_ray((1, -1))
        assert brute_force_classes(enumerate_functions(2), Encoding([1, -1])) == [(0, 3), (1, 2)]

    def test_generic_encoding_is_mostly_singletons(self, rng):
        # constants always share the all-ones ray; every other class is a singleton
        for _ in range(20):
            enc = generic_encoding(rng)
            table = partition_rays(enumerate_functions(3), enc)
            brute = brute_force_classes(enumerate_functions(3), enc)
            assert sorted(tuple(sorted(c.members)) for c in table.classes) == brute
            assert sorted(len(c.members) for c in table.classes) == [1] * 24 + [3]

    def test_membership_sound(self, paper_table):
        assert sum(len(c.members) for c in paper_table.classes) == 27
        for c in paper_table.classes:
            for fid in c.members:
                v = oracle_vector(DitFunction.from_id(fid, 3), paper_table.encoding).array
                assert canonicalize_ray(v) == c.ray

    def test_classes_are_constant_shifts(self, paper_table):
        for c in paper_table.classes:
            tables = {DitFunction.from_id(m, 3).table for m in c.members}
            base = DitFunction.from_id(c.members[0], 3).table
            assert tables == {tuple((y + s) % 3 for y in base) for s in range(3)}

    def test_inadmissible(self):
        with pytest.raises(InadmissibleEncoding, match="nonzero"):
            partition_rays(enumerate_functions(3), Encoding([0, 1, ALPHA]))
        with pytest.raises(InadmissibleEncoding, match="distinct"):
            partition_rays(enumerate_functions(3), Encoding([1, 1, ALPHA]))


class TestOrthogonalityGraph:
    def test_three_triangles(self, paper_table):
        adj = orthogonality_graph(paper_table)
        assert all(len(a) == 2 for a in adj)
        # brute force over the nine printed vectors
        units = paper_table.units()
        for i, j in itertools.combinations(range(9), 2):
            assert (j in adj[i]) == (abs(np.vdot(units[j], units[i])) < 1e-9)
            assert (j in adj[i]) == (i in adj[j])
        triangles = {frozenset((i, *adj[i])) for i in range(9)}
        assert len(triangles) == 3 and all(len(t) == 3 for t in triangles)

    def test_deutsch_single_edge(self):
        table = partition_rays(enumerate_functions(2), Encoding([1, -1]))
        assert orthogonality_graph(table) == [frozenset({1}), frozenset({0})]

    def test_no_self_loops(self, paper_table):
        assert all(i not in a for i, a in enumerate(orthogonality_graph(paper_table)))


class TestDecompose:
    def test_paper_columns(self, paper_table, paper_decomp):
        assert paper_decomp.feasible and paper_decomp.k == 3
        assert paper_decomp.bases == ((0, 5, 7), (1, 3, 8), (2, 4, 6))
        for basis, col in zip(paper_decomp.bases, PAPER_COLUMNS):
            got = [paper_table.classes[i].ray for i in basis]
            for v in col:
                assert sum(canonicalize_ray(v) == g for g in got) == 1

    def test_deutsch(self):
        table = partition_rays(enumerate_functions(2), Encoding([1, -1]))
        assert decompose_bases(table).bases == ((0, 1),)

    def test_generic_infeasible(self, rng):
        for _ in range(10):
            table = partition_rays(enumerate_functions(3), generic_encoding(rng))
            d = decompose_bases(table)
            assert not d.feasible and d.k is None

    def test_order_insensitive(self, paper_table, paper_decomp, rng):
        want = basis_sets(paper_table, paper_decomp)
        for _ in range(20):
            shuffled = paper_table.permuted(rng.permutation(9))
            assert basis_sets(shuffled, decompose_bases(shuffled)) == want

    def test_feasible_implies_divisible(self):
        for d in (2, 3, 4):
            table = partition_rays(enumerate_functions(d), roots_of_unity_encoding(d))
            dec = decompose_bases(table)
            assert dec.feasible and len(table) % d == 0 and dec.k == len(table) // d
            assert sorted(i for b in dec.bases for i in b) == list(range(len(table)))

    def test_lexicographically_least(self):
        # exhaustive check on d=4 would be large; enumerate all covers for d=3
        table = partition_rays(enumerate_functions(3), roots_of_unity_encoding(3))
        adj = orthogonality_graph(table)
        covers = []
        for a, b, c in itertools.combinations(itertools.combinations(range(9), 3), 3):
            if sorted(a + b + c) != list(range(9)):
                continue
            if all(y in adj[x] for blk in (a, b, c) for x, y in itertools.combinations(blk, 2)):
                covers.append((a, b, c))
        assert decompose_bases(table).bases == min(covers)

    def test_budget(self):
        table = partition_rays(enumerate_functions(4), roots_of_unity_encoding(4))
        with pytest.raises(SearchBudgetExceeded):
            decompose_bases(table, max_nodes=3)


class TestVerifyMub:
    def test_paper_angles(self, paper_table, paper_decomp):
        rep = verify_mub(paper_table, paper_decomp)
        assert len(rep.cross_overlaps) == 27
        assert max(abs(c - math.sqrt(3) / 3) for c in rep.cross_overlaps) < 1e-12
        assert rep.max_intra_deviation < 1e-12
        assert rep.is_mub

    def test_deutsch_vacuous(self):
        table = partition_rays(enumerate_functions(2), Encoding([1, -1]))
        rep = verify_mub(table, decompose_bases(table))
        assert rep.cross_overlaps == () and rep.is_mub

    def test_perturbed_encoding(self):
        eps = 1e-3
        enc = Encoding([ALPHA.conjugate(), 1, ALPHA * np.exp(1j * eps)])
        strict = partition_rays(enumerate_functions(3), enc)
        assert not decompose_bases(strict).feasible
        # at a loose tolerance the structure survives but the angles move
        table = partition_rays(enumerate_functions(3), enc, tol=5e-3)
        dec = decompose_bases(table, tol=5e-3)
        assert dec.feasible and dec.k == 3
        rep = verify_mub(table, dec, tol=5e-3)
        assert rep.max_cross_deviation > 1e-6

    def test_requires_feasible(self, rng):
        table = partition_rays(enumerate_functions(3), generic_encoding(rng))
        with pytest.raises(ValueError):
            verify_mub(table, decompose_bases(table))

    def test_d4_report(self):
        table = partition_rays(enumerate_functions(4), roots_of_unity_encoding(4))
        rep = verify_mub(table, decompose_bases(table))
        assert len(table) == 64
        assert not rep.is_mub
