import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tritstate.algebra import (
    HASH_GRID,
    canonicalize_ray,
    canonicalize_rows,
    cos_angle,
    inner_product,
    is_orthogonal,
    norm,
)
from tritstate.errors import ZeroVectorError

from conftest import ALPHA, ALPHABAR

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
vec3 = st.lists(cplx, min_size=3, max_size=3)


class TestInnerProduct:
    def test_disjoint_support(self):
        assert inner_product((1, 0, 0), (0, 1, 0)) == 0

    def test_column_one_pair_is_orthogonal(self):
        assert abs(inner_product((1, 1, 1), (1, ALPHA, ALPHABAR))) < 1e-15

    def test_cross_column_value(self):
        # 1 + 1 + conj(alpha) = 3/2 - i sqrt(3)/2, modulus sqrt(3)
        z = inner_product((1, 1, 1), (1, 1, ALPHA))
        assert abs(z - complex(1.5, -math.sqrt(3) / 2)) < 1e-15
        assert abs(abs(z) - math.sqrt(3)) < 1e-15
        assert abs(abs(z) / (norm((1, 1, 1)) * norm((1, 1, ALPHA))) - math.sqrt(3) / 3) < 1e-15

    def test_conjugates_second_argument(self):
        assert inner_product((1j,), (1,)) == 1j
        assert inner_product((1,), (1j,)) == -1j

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            inner_product((1, 0), (1, 0, 0))

    @given(vec3, vec3)
    def test_conjugate_symmetry(self, u, v):
        assert inner_product(u, v) == pytest.approx(inner_product(v, u).conjugate(), abs=1e-9)

    @given(vec3, vec3)
    def test_cauchy_schwarz(self, u, v):
        assert abs(inner_product(u, v)) <= norm(u) * norm(v) + 1e-12 * max(1.0, norm(u) * norm(v))


class TestCanonicalize:
    def test_constant_vector(self):
        r = canonicalize_ray((ALPHABAR, ALPHABAR, ALPHABAR))
        assert np.allclose(r.vector, np.ones(3) / math.sqrt(3), atol=1e-15)

    def test_phase_and_scale_removed(self):
        assert np.allclose(canonicalize_ray((0, 0, 2j)).vector, (0, 0, 1), atol=1e-15)

    def test_matches_printed_cell(self):
        r = canonicalize_ray((ALPHABAR, ALPHABAR, 1))
        assert np.allclose(r.vector, np.array((1, 1, ALPHA)) / math.sqrt(3), atol=1e-15)

    def test_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            canonicalize_ray((0, 0, 0))
        with pytest.raises(ZeroVectorError):
            canonicalize_ray((1e-12, 0, 0), tol=1e-9)

    def test_leading_coordinate_positive_real(self, rng):
        for _ in range(200):
            v = rng.normal(size=4) + 1j * rng.normal(size=4)
            v[: rng.integers(0, 3)] = 0
            r = canonicalize_ray(v)
            lead = np.flatnonzero(np.abs(r.vector) > r.tol)[0]
            assert r.unit[lead].real > 0 and r.unit[lead].imag == 0
            assert abs(np.linalg.norm(r.vector) - 1) < 1e-12

    def test_idempotent(self, rng):
        for _ in range(200):
            r = canonicalize_ray(rng.normal(size=3) + 1j * rng.normal(size=3))
            again = canonicalize_ray(r.unit)
            assert again == r
            assert again.hash_key == r.hash_key

    def test_scale_invariance_random(self):
        rng = np.random.default_rng(7)
        vs = rng.normal(size=(10_000, 3)) + 1j * rng.normal(size=(10_000, 3))
        mags = 10.0 ** rng.uniform(-3, 3, size=10_000)
        cs = mags * np.exp(2j * np.pi * rng.random(10_000))
        for v, c in zip(vs, cs):
            assert canonicalize_ray(v) == canonicalize_ray(c * v)

    def test_rows_match_scalar_path(self, rng):
        vs = rng.normal(size=(50, 3)) + 1j * rng.normal(size=(50, 3))
        rows = canonicalize_rows(vs)
        for v, row in zip(vs, rows):
            assert np.allclose(canonicalize_ray(v).vector, row, atol=1e-14)

    def test_hash_key_is_grid_quantized(self):
        r = canonicalize_ray((1, 1, 1))
        assert r.hash_key[0] == round(1 / math.sqrt(3) / HASH_GRID)

    def test_equality_is_tolerance_based(self):
        a = canonicalize_ray((1, 1, 1))
        b = canonicalize_ray((1, 1, 1 + 1e-11))
        c = canonicalize_ray((1, 1, 1 + 1e-6))
        assert a == b
        assert a != c


class TestAngles:
    def test_same_ray(self):
        r = canonicalize_ray((1, ALPHA, 1))
        assert cos_angle(r, r) == pytest.approx(1, abs=1e-15)

    def test_column_pair(self):
        assert cos_angle(canonicalize_ray((1, 1, 1)), canonicalize_ray((1, ALPHA, ALPHABAR))) < 1e-15

    def test_cross_column_angle(self):
        c = cos_angle(canonicalize_ray((1, 1, 1)), canonicalize_ray((1, 1, ALPHA)))
        assert abs(c - 0.5773502692) < 1e-10

    def test_is_orthogonal(self):
        e = [canonicalize_ray(v) for v in ((1, 0, 0), (0, 1, 0))]
        assert is_orthogonal(*e)
        assert is_orthogonal(canonicalize_ray((1, 1, 1)), canonicalize_ray((1, ALPHABAR, ALPHA)))
        assert not is_orthogonal(canonicalize_ray((1, 1, 1)), canonicalize_ray((ALPHA, 1, 1)))

    @settings(max_examples=200)
    @given(vec3, vec3)
    def test_cos_angle_bounded(self, u, v):
        if norm(u) < 1e-6 or norm(v) < 1e-6:
            return
        assert 0 <= cos_angle(canonicalize_ray(u), canonicalize_ray(v)) <= 1 + 1e-9
