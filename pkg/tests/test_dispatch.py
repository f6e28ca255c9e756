import pytest

import ndkit as nd
from ndkit.chunked import ChunkedArray, chunked_from_dense, to_dense
from ndkit.dispatch import ArrayBackend, FuncId, dispatch_call
from ndkit.errors import ChunkLayoutError, DispatchError

from conftest import random_array

CHUNK_FUNCS = [
    nd.add,
    nd.sub,
    nd.mul,
    nd.div,
    nd.arctan2,
    nd.maximum,
    nd.sin,
    nd.log,
    nd.exp,
    nd.neg,
    nd.sum,
    nd.mean,
]


class TaggedValue:
    """Foreign value for a toy backend used in dispatch tests."""

    def __init__(self, payload, backend):
        self.payload = payload
        self.array_backend = backend


class ToyBackend(ArrayBackend):
    def __init__(self, name, handled):
        self.name = name
        self._handled = handled
        self.calls = []

    def handles(self, func):
        return func in self._handled

    def call(self, func, args, kwargs):
        self.calls.append(func)
        return ("handled-by", self.name, func)


class TestDispatchCall:
    def test_dense_runs_reference(self):
        a = nd.from_values([1.0, 2.0, 3.0], (3,))
        assert nd.mean(a).get(()) == 2.0

    def test_first_match_wins(self):
        b1 = ToyBackend("one", {FuncId.MEAN})
        b2 = ToyBackend("two", {FuncId.MEAN})
        v1, v2 = TaggedValue(1, b1), TaggedValue(2, b2)
        assert dispatch_call(FuncId.MEAN, (v1, v2)) == ("handled-by", "one", FuncId.MEAN)
        assert dispatch_call(FuncId.MEAN, (v2, v1)) == ("handled-by", "two", FuncId.MEAN)

    def test_scan_skips_incapable_backend(self):
        b1 = ToyBackend("skipme", set())
        b2 = ToyBackend("takes", {FuncId.SUM})
        out = dispatch_call(FuncId.SUM, (TaggedValue(1, b1), TaggedValue(2, b2)))
        assert out == ("handled-by", "takes", FuncId.SUM)
        assert b1.calls == []  # handles() false means call() is never invoked

    def test_unhandled_foreign_raises_named_error(self):
        b = ToyBackend("quux", set())
        with pytest.raises(DispatchError) as exc:
            dispatch_call(FuncId.MATMUL, (TaggedValue(1, b), nd.zeros((2, 2))))
        assert "matmul" in str(exc.value)
        assert "quux" in str(exc.value)

    def test_dense_never_delegates(self):
        b = ToyBackend("greedy", set(FuncId))
        # no foreign value present: reference path even though backend exists
        out = nd.add(nd.scalar(1.0), nd.scalar(2.0))
        assert isinstance(out, nd.ArrayHandle)
        assert b.calls == []

    def test_deterministic_selection(self):
        b1 = ToyBackend("one", {FuncId.MEAN})
        v = TaggedValue(1, b1)
        first = dispatch_call(FuncId.MEAN, (v,))
        second = dispatch_call(FuncId.MEAN, (v,))
        assert first == second


class TestChunkedConstruction:
    def test_extent_split(self):
        a = random_array_10x3()
        c = chunked_from_dense(a, 4)
        assert c.extents == [4, 4, 2]
        assert c.shape == (10, 3)

    def test_single_chunk(self):
        a = nd.arange(0, 5, 1)
        c = chunked_from_dense(a, 99)
        assert c.extents == [5]

    def test_zero_dim_rejected(self):
        with pytest.raises(ValueError):
            chunked_from_dense(nd.scalar(1.0), 2)

    def test_nonpositive_chunk_len(self):
        with pytest.raises(ValueError):
            chunked_from_dense(nd.arange(0, 5, 1), 0)

    def test_round_trip(self, rng):
        for k in (1, 2, 3, 10, 11):
            a = random_array(rng, (10, 3))
            assert to_dense(chunked_from_dense(a, k)).tolist() == a.tolist()

    def test_nested_round_trip(self, rng):
        a = random_array(rng, (12,))
        outer = ChunkedArray(
            [chunked_from_dense(x, 2) for x in _split(a, 6)]
        )
        assert to_dense(outer).tolist() == a.tolist()

    def test_single_chunk_to_dense_copies(self):
        a = nd.arange(0, 4, 1)
        c = chunked_from_dense(a, 4)
        d = to_dense(c)
        d.set((0,), 99.0)
        assert a.get((0,)) == 0.0

    def test_to_dense_rejects_foreign_kinds(self):
        with pytest.raises(TypeError):
            to_dense("not an array")
        with pytest.raises(TypeError):
            to_dense(ChunkedArray([nd.arange(0, 2, 1), "junk"]))  # type: ignore[list-item]

    def test_empty_chunk_list_rejected(self):
        with pytest.raises(ValueError):
            ChunkedArray([])


def _split(a, k):
    return [nd.slice_view(a, slice(r, r + k)) for r in range(0, a.shape[0], k)]


def random_array_10x3():
    import random

    return random_array(random.Random(5), (10, 3))


class TestChunkedHandlers:
    def test_sum_all_axes(self):
        c = chunked_from_dense(nd.arange(1, 11, 1), 4)
        out = nd.sum(c)
        assert isinstance(out, ChunkedArray)
        assert out.shape == ()
        assert to_dense(out).get(()) == 55.0

    def test_sum_int_exact(self):
        a = nd.from_values(list(range(100)), (100,), nd.INT64)
        out = nd.sum(chunked_from_dense(a, 7))
        dense = to_dense(out)
        assert dense.elem_type is nd.INT64
        assert dense.get(()) == sum(range(100))

    def test_mean_weighted_combine(self, rng):
        for k in (1, 3, 7, 10):
            a = random_array(rng, (10, 4))
            got = to_dense(nd.mean(chunked_from_dense(a, k)))
            want = nd.mean(a)
            assert nd.allclose(got, want, rtol=1e-12, atol=0.0)

    def test_reduce_nonzero_axis_keeps_layout(self, rng):
        a = random_array(rng, (10, 4))
        c = chunked_from_dense(a, 3)
        out = nd.sum(c, axes=1)
        assert isinstance(out, ChunkedArray)
        assert out.extents == [3, 3, 3, 1]
        assert nd.allclose(to_dense(out), nd.sum(a, axes=1), rtol=1e-12, atol=0.0)

    def test_keepdims(self, rng):
        a = random_array(rng, (6, 4))
        c = chunked_from_dense(a, 4)
        out = to_dense(nd.sum(c, axes=0, keepdims=True))
        assert out.shape == (1, 4)

    def test_elementwise_unary(self, rng):
        a = random_array(rng, (9, 2))
        c = chunked_from_dense(a, 4)
        out = nd.exp(c)
        assert isinstance(out, ChunkedArray)
        assert out.extents == c.extents
        assert nd.allclose(to_dense(out), nd.exp(a), rtol=1e-12, atol=0.0)

    def test_binary_chunked_chunked(self, rng):
        a, b = random_array(rng, (8, 3)), random_array(rng, (8, 3))
        ca, cb = chunked_from_dense(a, 3), chunked_from_dense(b, 3)
        out = nd.add(ca, cb)
        assert isinstance(out, ChunkedArray)
        assert nd.allclose(to_dense(out), nd.add(a, b), rtol=1e-12, atol=0.0)

    def test_binary_layout_mismatch(self, rng):
        a = random_array(rng, (8, 3))
        with pytest.raises(ChunkLayoutError):
            nd.add(chunked_from_dense(a, 3), chunked_from_dense(a, 4))

    def test_binary_dense_peer_sliced(self, rng):
        a, b = random_array(rng, (8, 3)), random_array(rng, (8, 3))
        c = chunked_from_dense(a, 3)
        out = nd.sub(c, b)
        assert isinstance(out, ChunkedArray)
        assert nd.allclose(to_dense(out), nd.sub(a, b), rtol=1e-12, atol=0.0)
        # reversed operand order preserved
        out2 = nd.sub(b, c)
        assert nd.allclose(to_dense(out2), nd.sub(b, a), rtol=1e-12, atol=0.0)

    def test_binary_scalar_peer(self, rng):
        a = random_array(rng, (7, 2))
        c = chunked_from_dense(a, 2)
        out = nd.mul(c, 2.0)
        assert nd.allclose(to_dense(out), nd.mul(a, 2.0), rtol=1e-12, atol=0.0)

    def test_binary_lower_rank_peer(self, rng):
        a = random_array(rng, (6, 3))
        row = random_array(rng, (3,))
        c = chunked_from_dense(a, 4)
        out = nd.add(c, row)
        assert nd.allclose(to_dense(out), nd.add(a, row), rtol=1e-12, atol=0.0)

    def test_peer_with_more_dims_unsupported(self, rng):
        a = random_array(rng, (4,))
        c = chunked_from_dense(a, 2)
        with pytest.raises(DispatchError):
            nd.add(c, random_array(rng, (2, 4)))

    def test_matmul_not_handled(self, rng):
        a = random_array(rng, (4, 4))
        c = chunked_from_dense(a, 2)
        with pytest.raises(DispatchError) as exc:
            nd.matmul(c, a)
        assert "chunked" in str(exc.value)

    def test_reshape_transpose_not_handled(self, rng):
        c = chunked_from_dense(random_array(rng, (4, 2)), 2)
        with pytest.raises(DispatchError):
            nd.reshape(c, (8,))
        with pytest.raises(DispatchError):
            nd.transpose(c)

    def test_closure_never_densifies(self, rng):
        c = chunked_from_dense(random_array(rng, (5, 2)), 2)
        for fn in [lambda x: nd.sum(x), lambda x: nd.mean(x), lambda x: nd.neg(x), lambda x: nd.add(x, 1.0)]:
            assert isinstance(fn(c), ChunkedArray)

    def test_composition_two_layers(self, rng):
        a = random_array(rng, (12, 2))
        inner = [chunked_from_dense(x, 2) for x in _split(a, 4)]
        outer = ChunkedArray(inner)
        assert isinstance(outer.chunks[0], ChunkedArray)
        got = nd.mean(outer)
        assert isinstance(got, ChunkedArray)
        assert nd.allclose(to_dense(got), nd.mean(a), rtol=1e-12, atol=0.0)
        got_sum = nd.sum(outer, axes=1)
        assert nd.allclose(to_dense(got_sum), nd.sum(a, axes=1), rtol=1e-12, atol=0.0)

    def test_randomized_equivalence(self, rng):
        # dispatch equivalence over random shapes for all supported funcs
        for trial in range(40):
            ndim = rng.randint(1, 3)
            shape = tuple(rng.randint(1, 6) for _ in range(ndim))
            a = random_array(rng, shape)
            b = random_array(rng, shape)
            k = rng.randint(1, shape[0] + 1)
            ca = chunked_from_dense(a, k)
            cb = chunked_from_dense(b, k)
            axes = sorted(rng.sample(range(ndim), rng.randint(0, ndim)))
            checks = [
                (nd.sum(ca, axes=axes), nd.sum(a, axes=axes)),
                (nd.mean(ca, axes=axes), nd.mean(a, axes=axes)),
                (nd.add(ca, cb), nd.add(a, b)),
                (nd.maximum(ca, b), nd.maximum(a, b)),
                (nd.sin(ca), nd.sin(a)),
            ]
            for got, want in checks:
                assert isinstance(got, ChunkedArray)
                assert nd.allclose(to_dense(got), want, rtol=1e-12, atol=0.0)
