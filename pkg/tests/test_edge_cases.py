"""Cross-cutting edge cases and independent value oracles."""

import pytest

import ndkit as nd
from ndkit.broadcasting import broadcast_to
from ndkit.errors import ReadOnlyError
from ndkit.random import MT19937, PCG64, SeedSequence, VariateGenerator
from ndkit.ufuncs import UfuncId

from conftest import all_indices, random_array


def naive_reduce(a, axes, op):
    """Brute-force fold oracle over Python values."""
    axes = set(axes)
    keep = [k for k in range(a.ndim) if k not in axes]
    out_shape = tuple(a.shape[k] for k in keep)
    results = {}
    for idx in all_indices(a.shape):
        key = tuple(idx[k] for k in keep)
        v = a.get(idx)
        if key not in results:
            results[key] = v
        else:
            results[key] = op(results[key], v)
    return out_shape, results


class TestReduceValueOracle:
    @pytest.mark.parametrize("elem_type", ["int", "float"])
    def test_sum_matches_bruteforce(self, rng, elem_type):
        et = nd.INT64 if elem_type == "int" else nd.FLOAT64
        for _ in range(40):
            ndim = rng.randint(1, 4)
            shape = tuple(rng.randint(1, 4) for _ in range(ndim))
            axes = sorted(rng.sample(range(ndim), rng.randint(1, ndim)))
            a = random_array(rng, shape, et)
            got = nd.reduce(UfuncId.ADD, a, axes=axes)
            want_shape, want = naive_reduce(a, axes, lambda x, y: x + y)
            assert got.shape == want_shape
            for key, val in want.items():
                if et is nd.INT64:
                    assert got.get(key) == val
                else:
                    assert abs(got.get(key) - val) <= 1e-12 * max(1.0, abs(val))

    def test_maximum_matches_bruteforce(self, rng):
        for _ in range(30):
            ndim = rng.randint(1, 3)
            shape = tuple(rng.randint(1, 5) for _ in range(ndim))
            axes = sorted(rng.sample(range(ndim), rng.randint(1, ndim)))
            a = random_array(rng, shape, nd.INT64)
            got = nd.reduce(UfuncId.MAXIMUM, a, axes=axes)
            _, want = naive_reduce(a, axes, max)
            for key, val in want.items():
                assert got.get(key) == val

    def test_negative_axes_normalize(self, rng):
        a = random_array(rng, (2, 3, 4), nd.INT64)
        assert nd.reduce(UfuncId.ADD, a, axes=-1).tolist() == nd.reduce(UfuncId.ADD, a, axes=2).tolist()

    def test_mean_on_strided_view(self, rng):
        a = random_array(rng, (6, 4))
        v = nd.slice_view(a, (slice(None, None, -2), slice(1, None)))
        assert nd.allclose(nd.mean(v), nd.mean(v.copy()), rtol=1e-12, atol=0.0)


class TestStrideZeroOperands:
    def test_elementwise_on_broadcast_views(self, rng):
        a = random_array(rng, (3, 1))
        b = random_array(rng, (4,))
        av = broadcast_to(a, (3, 4))
        bv = broadcast_to(b, (3, 4))
        got = nd.add(av, bv)
        want = nd.add(a, b)
        assert got.tolist() == want.tolist()

    def test_reduce_on_broadcast_view(self):
        v = broadcast_to(nd.scalar(2.0), (5,))
        assert nd.sum(v).get(()) == 10.0
        assert nd.reduce(UfuncId.MUL, v, axes=0).get(()) == 32.0

    def test_copy_of_broadcast_view_is_writable(self):
        v = broadcast_to(nd.scalar(1.5), (2, 2))
        c = v.copy()
        c.set((0, 0), 9.0)
        assert c.get((0, 0)) == 9.0 and v.get((0, 0)) == 1.5


class TestReadOnlyPropagation:
    def test_slice_of_broadcast_view(self):
        v = broadcast_to(nd.scalar(1.0), (4, 4))
        s = nd.slice_view(v, (slice(1, 3), 0))
        with pytest.raises(ReadOnlyError):
            s.set((0,), 5.0)

    def test_transpose_of_broadcast_view(self):
        v = broadcast_to(nd.from_values([1.0, 2.0], (2,)), (3, 2))
        with pytest.raises(ReadOnlyError):
            nd.transpose(v).set((0, 0), 5.0)

    def test_reshape_view_of_readonly_stays_readonly(self):
        v = broadcast_to(nd.scalar(1.0), (4,))
        # stride-0 data is not C-contiguous, so this reshape copies and the
        # copy is writable
        r = nd.reshape(v, (2, 2))
        assert not r.is_view
        r.array.set((0, 0), 3.0)


class TestZeroDimChunked:
    def test_sum_of_scalar_chunked(self):
        from ndkit.chunked import ChunkedArray, to_dense

        c = ChunkedArray([nd.scalar(4.5)])
        out = nd.sum(c)
        assert isinstance(out, ChunkedArray)
        assert to_dense(out).get(()) == 4.5

    def test_binary_both_zero_dim(self):
        from ndkit.chunked import ChunkedArray, to_dense

        a = ChunkedArray([nd.scalar(2.0)])
        b = ChunkedArray([nd.scalar(3.0)])
        out = nd.mul(a, b)
        assert isinstance(out, ChunkedArray)
        assert to_dense(out).get(()) == 6.0

    def test_empty_axes_through_chunked(self, rng):
        from ndkit.chunked import chunked_from_dense, to_dense

        a = random_array(rng, (6, 2))
        c = chunked_from_dense(a, 4)
        out = nd.sum(c, axes=())
        assert to_dense(out).tolist() == a.tolist()


class TestGeneratorStateAndSeeds:
    def test_mt_state_round_trip(self):
        a = MT19937(SeedSequence([5]))
        [a.next_u64() for _ in range(10)]
        b = MT19937(SeedSequence([6]))
        b.state = a.state
        assert [a.next_u64() for _ in range(1000)] == [b.next_u64() for _ in range(1000)]

    def test_pcg_accepts_none_seed(self):
        a, b = PCG64(), PCG64()
        assert a.next_u64() != b.next_u64()  # 2^-64 collision chance

    def test_generator_scalar_vs_python_mean(self):
        g = VariateGenerator(PCG64(SeedSequence([50])))
        vals = [g.random_double() for _ in range(2000)]
        assert 0.4 < sum(vals) / len(vals) < 0.6

    def test_spawn_key_chains_through_generations(self):
        root = SeedSequence([1])
        child = root.spawn(1)[0]
        grand = child.spawn(2)[1]
        assert grand.spawn_key == (0, 1)
        again = SeedSequence([1], spawn_key=(0, 1))
        assert grand.pool == again.pool


class TestNdarBoolViews:
    def test_non_contiguous_bool_save(self):
        a = nd.from_values([True, False, True, False, True, False], (2, 3), nd.BOOL)
        t = nd.transpose(a)
        blob_view = _save_bytes(t)
        blob_copy = _save_bytes(t.copy())
        assert blob_view == blob_copy
        back = nd.load(blob_view)
        assert back.tolist() == t.tolist()

    def test_zero_dim_bool(self):
        a = nd.scalar(True, nd.BOOL)
        assert nd.load(_save_bytes(a)).get(()) is True


def _save_bytes(a):
    import io

    sink = io.BytesIO()
    nd.save(a, sink)
    return sink.getvalue()


class TestGatherZeroDim:
    def test_gather_scalar_array(self):
        a = nd.scalar(7, nd.INT64)
        out = nd.gather(a, [])
        assert out.shape == () and out.get(()) == 7
        out.set((), 9)
        assert a.get(()) == 7


class TestCliZeroDim:
    def test_sum_scalar_file(self, tmp_path, capsys):
        from ndkit.cli import run_cli

        p = str(tmp_path / "s.ndar")
        nd.save(nd.scalar(3.25), p)
        assert run_cli(["sum", p]) == 0
        assert capsys.readouterr().out.strip() == "3.25"
