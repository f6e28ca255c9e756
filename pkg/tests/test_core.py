import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import ndkit as nd
from ndkit.errors import ReadOnlyError, ShapeError

from conftest import random_array

shapes = st.lists(st.integers(0, 5), min_size=0, max_size=4).map(tuple)


class TestComputeStrides:
    def test_two_axis_float(self):
        assert nd.compute_strides((4, 3), 8, "C") == (24, 8)

    def test_single_axis(self):
        assert nd.compute_strides((5,), 8, "C") == (8,)

    def test_fortran_order(self):
        assert nd.compute_strides((4, 3), 8, "F") == (8, 32)

    def test_zero_extent_axis_still_computed(self):
        assert nd.compute_strides((0, 3), 8, "C") == (24, 8)

    @given(shapes, st.sampled_from([1, 8]))
    def test_c_formula(self, shape, width):
        strides = nd.compute_strides(shape, width, "C")
        for k in range(len(shape)):
            assert strides[k] == width * math.prod(shape[k + 1 :])

    @given(shapes, st.sampled_from([1, 8]))
    def test_f_formula(self, shape, width):
        strides = nd.compute_strides(shape, width, "F")
        for k in range(len(shape)):
            assert strides[k] == width * math.prod(shape[:k])

    def test_bad_width(self):
        with pytest.raises(ValueError):
            nd.compute_strides((2,), 0)


class TestConstructors:
    def test_full_fill(self):
        a = nd.full((2, 2), 0.0, nd.FLOAT64)
        assert a.tolist() == [[0.0, 0.0], [0.0, 0.0]]
        assert a.is_c_contiguous() and a.offset == 0

    def test_full_zero_dim(self):
        a = nd.full((), 7, nd.INT64)
        assert a.shape == () and a.get(()) == 7

    def test_full_zero_extent(self):
        a = nd.full((0, 3), 1.0, nd.FLOAT64)
        assert a.shape == (0, 3) and a.size == 0

    def test_from_values_c_order(self):
        a = nd.from_values([1, 2, 3, 4, 5, 6], (2, 3), nd.INT64)
        assert a.tolist() == [[1, 2, 3], [4, 5, 6]]
        assert nd.slice_view(a, 0).tolist() == [1, 2, 3]

    def test_from_values_zero_dim(self):
        assert nd.from_values([1.5], (), nd.FLOAT64).get(()) == 1.5

    def test_from_values_empty(self):
        a = nd.from_values([], (0,), nd.INT64)
        assert a.size == 0

    def test_from_values_length_mismatch(self):
        with pytest.raises(ShapeError):
            nd.from_values([1, 2, 3], (2, 2), nd.INT64)

    def test_from_values_rejects_narrowing(self):
        with pytest.raises(TypeError):
            nd.from_values([1.5], (1,), nd.INT64)

    def test_arange_basic(self):
        assert nd.arange(0, 5, 1).tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]

    def test_arange_empty(self):
        assert nd.arange(0, 0, 1).size == 0

    def test_arange_negative_step(self):
        assert nd.arange(1, 0, -0.5).tolist() == [1.0, 0.5]

    def test_arange_zero_step(self):
        with pytest.raises(ValueError):
            nd.arange(0, 5, 0)

    def test_fresh_dense_is_c_contiguous(self):
        a = nd.zeros((3, 4, 5))
        assert a.strides == nd.compute_strides((3, 4, 5), 8, "C")


class TestReshape:
    def test_contiguous_gives_view(self):
        a = nd.from_values(list(range(6)), (2, 3), nd.INT64)
        r = nd.reshape(a, (3, 2))
        assert r.is_view
        assert r.array.buffer is a.buffer
        r.array.set((0, 0), 99)
        assert a.get((0, 0)) == 99

    def test_c_order_values(self):
        a = nd.from_values([1, 2, 3, 4, 5, 6], (6,), nd.INT64)
        assert nd.reshape(a, (2, 3)).array.tolist() == [[1, 2, 3], [4, 5, 6]]

    def test_non_contiguous_copies(self):
        a = nd.from_values(list(range(6)), (3, 2), nd.INT64)
        t = nd.transpose(a)
        r = nd.reshape(t, (6,))
        assert not r.is_view
        assert r.array.buffer is not a.buffer
        r.array.set((0,), 42)
        assert a.get((0, 0)) == 0

    def test_count_mismatch(self):
        with pytest.raises(ShapeError):
            nd.reshape(nd.zeros((2, 3)), (7,))

    @given(st.lists(st.integers(1, 4), min_size=1, max_size=3).map(tuple))
    def test_round_trip_identity(self, shape):
        n = math.prod(shape)
        a = nd.from_values(list(range(n)), (n,), nd.INT64)
        back = nd.reshape(nd.reshape(a, shape).array, (n,)).array
        assert back.tolist() == a.tolist()


class TestTranspose:
    def test_default_reverses_and_permutes_strides(self):
        a = nd.zeros((4, 3))
        t = nd.transpose(a)
        assert t.shape == (3, 4)
        assert t.strides == (8, 24)
        assert t.buffer is a.buffer

    def test_one_dim_identity(self):
        a = nd.arange(0, 4, 1)
        t = nd.transpose(a)
        assert t.shape == a.shape and t.strides == a.strides and t.offset == a.offset

    def test_explicit_permutation(self):
        a = nd.zeros((2, 3, 4))
        assert nd.transpose(a, (2, 0, 1)).shape == (4, 2, 3)

    def test_inverse_permutation_restores(self, rng):
        a = random_array(rng, (2, 3, 4))
        perm = (2, 0, 1)
        inverse = tuple(perm.index(k) for k in range(3))
        back = nd.transpose(nd.transpose(a, perm), inverse)
        assert back.shape == a.shape
        assert back.strides == a.strides
        assert back.offset == a.offset

    def test_invalid_permutation(self):
        with pytest.raises(ValueError):
            nd.transpose(nd.zeros((2, 2)), (0, 0))

    def test_no_data_movement(self):
        a = nd.from_values([1, 2, 3, 4, 5, 6], (2, 3), nd.INT64)
        assert nd.transpose(a).tolist() == [[1, 4], [2, 5], [3, 6]]


class TestAllclose:
    def test_identical(self, rng):
        a = random_array(rng, (3, 4))
        assert nd.allclose(a, a, rtol=0.0, atol=0.0)

    def test_relative_tolerance(self):
        assert nd.allclose(nd.scalar(1.0 + 1e-9), nd.scalar(1.0), rtol=1e-7, atol=0.0)
        assert not nd.allclose(nd.scalar(1.0 + 1e-5), nd.scalar(1.0), rtol=1e-7, atol=0.0)

    def test_nan_unequal(self):
        assert not nd.allclose(nd.scalar(float("nan")), nd.scalar(float("nan")), rtol=1.0, atol=1.0)

    def test_broadcasts(self):
        a = nd.from_values([1.0, 1.0, 1.0], (3,))
        assert nd.allclose(a, nd.scalar(1.0), rtol=0.0, atol=0.0)

    def test_incompatible_shapes(self):
        with pytest.raises(nd.BroadcastError):
            nd.allclose(nd.zeros((2, 3)), nd.zeros((4,)))


class TestViewAliasing:
    def test_randomized_probes(self, rng):
        # a view reads the base's strided addresses and writes through to it
        for _ in range(50):
            shape = tuple(rng.randint(1, 5) for _ in range(rng.randint(1, 3)))
            a = random_array(rng, shape, nd.INT64)
            t = nd.transpose(a)
            for _ in range(5):
                idx = tuple(rng.randrange(d) for d in t.shape)
                assert t.get(idx) == a.get(tuple(reversed(idx)))
                probe = rng.randint(-(10**6), 10**6)
                t.set(idx, probe)
                assert a.get(tuple(reversed(idx))) == probe

    def test_copy_never_aliases(self, rng):
        a = random_array(rng, (4, 3), nd.INT64)
        c = a.copy()
        c.set((0, 0), 12345)
        assert a.get((0, 0)) != 12345 or a.tolist() != c.tolist()
        assert c.buffer is not a.buffer


class TestScalarAccess:
    def test_item(self):
        assert nd.scalar(2.5).item() == 2.5
        with pytest.raises(ValueError):
            nd.zeros((3,)).item()

    def test_set_respects_readonly(self):
        view = nd.broadcast_to(nd.scalar(1.0), (2, 2))
        with pytest.raises(ReadOnlyError):
            view.set((0, 0), 2.0)

    def test_int64_range_check(self):
        a = nd.zeros((1,), nd.INT64)
        with pytest.raises(ValueError):
            a.set((0,), 1 << 63)

    def test_bool_strictness(self):
        a = nd.zeros((1,), nd.BOOL)
        with pytest.raises(TypeError):
            a.set((0,), 1)
        a.set((0,), True)
        assert a.get((0,)) is True


class TestOperators:
    def test_sugar_matches_functions(self):
        a = nd.from_values([1.0, 2.0], (2,))
        b = nd.from_values([3.0, 4.0], (2,))
        assert (a + b).tolist() == [4.0, 6.0]
        assert (a - b).tolist() == [-2.0, -2.0]
        assert (a * 2).tolist() == [2.0, 4.0]
        assert (a / 2).tolist() == [0.5, 1.0]
        assert (-a).tolist() == [-1.0, -2.0]
        m = nd.from_values([1.0, 0.0, 0.0, 1.0], (2, 2))
        assert (m @ m).tolist() == [[1.0, 0.0], [0.0, 1.0]]
        assert m.T.shape == (2, 2)
