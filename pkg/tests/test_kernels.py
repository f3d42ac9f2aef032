"""Backend parity: compiled kernels against the pure-numpy reference."""

import numpy as np
import pytest

from costwalk import SurrogateConfig, hindcast_corpus, make_rng, surrogate_corpus
from costwalk._kernels import _fallback
from costwalk.stats import derive_rng
from costwalk.surrogate import _replication_errors

try:
    from costwalk._kernels import _native
except ImportError:
    _native = None

needs_native = pytest.mark.skipif(_native is None, reason="compiled kernels unavailable")


def _random_walk(T, seed):
    rng = make_rng(seed)
    return np.concatenate(([0.0], np.cumsum(-0.05 + 0.1 * rng.standard_normal(T - 1))))


@needs_native
class TestHindcastParity:
    @pytest.mark.parametrize("T,m,tau_max", [(10, 4, 100), (40, 5, 20), (100, 40, 20), (7, 5, 3)])
    def test_matches_fallback(self, T, m, tau_max):
        y = _random_walk(T, seed=T + m)
        native = _native.hindcast_errors(y, m, tau_max)
        reference = _fallback.hindcast_errors(y, m, tau_max)
        for i in range(6):
            np.testing.assert_allclose(native[i], reference[i], rtol=1e-12, atol=1e-14)
        assert native[6] == reference[6]

    def test_zero_volatility_skip_matches(self):
        y = np.concatenate((-0.125 * np.arange(6.0), [-1.0, -1.3, -1.1]))
        native = _native.hindcast_errors(y, 5, 50)
        reference = _fallback.hindcast_errors(y, 5, 50)
        assert native[6] == reference[6] == 1
        np.testing.assert_allclose(native[3], reference[3], rtol=1e-12)

    def test_too_short_series(self):
        y = _random_walk(6, seed=3)
        for backend in (_native, _fallback):
            out = backend.hindcast_errors(y, 5, 20)
            assert out[0].size == 0 and out[6] == 0


@needs_native
class TestCorpusParity:
    def test_matches_fallback(self):
        rng = make_rng(11)
        lengths = np.array([12, 25, 8, 40], dtype=np.int64)
        drifts = np.array([-0.1, -0.02, -0.3, -0.05])
        v = 0.1 * rng.standard_normal(int(lengths.sum()))
        native = _native.corpus_norm_errors(lengths, drifts, 0.4, v, 5, 20)
        reference = _fallback.corpus_norm_errors(lengths, drifts, 0.4, v, 5, 20)
        for i in range(3):
            np.testing.assert_allclose(native[i], reference[i], rtol=1e-12, atol=1e-14)
        assert native[3] == reference[3]

    def test_validates_inputs(self):
        lengths = np.array([10], dtype=np.int64)
        for backend in (_native, _fallback):
            with pytest.raises(ValueError):
                backend.corpus_norm_errors(lengths, np.array([0.1]), 0.0, np.zeros(5), 5, 20)
            with pytest.raises(ValueError):
                backend.corpus_norm_errors(lengths, np.array([0.1, 0.2]), 0.0, np.zeros(10), 5, 20)


class TestHotPathConsistency:
    def test_kernel_equals_slow_surrogate_pipeline(self):
        # the kernel path and surrogate_corpus + hindcast_corpus must produce
        # the same normalized errors for the same derived stream
        template = ((20, -0.1, 0.15), (15, -0.05, 0.08), (30, -0.02, 0.03))
        config = SurrogateConfig(
            replications=1, theta=0.6, m=5, tau_max=20, seed=42, template=template
        )
        sidx_fast, tau_fast, norm_fast = _replication_errors(config, derive_rng(42, 0))
        corpus = surrogate_corpus(config, derive_rng(42, 0))
        records = hindcast_corpus(corpus, 5, tau_max=20).records
        # both paths order records by (series, origin, tau) already
        norm_slow = np.array([r.norm_error for r in records])
        tau_slow = np.array([r.tau for r in records])
        np.testing.assert_allclose(norm_fast, norm_slow, rtol=1e-10)
        np.testing.assert_array_equal(tau_fast, tau_slow)
