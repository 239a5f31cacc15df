import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbessel.special import DomainError, QuadratureSpec
from pbessel.quadrature import (
    GK_DEFAULT,
    TS_DEFAULT,
    cosine_zero_breakpoints,
    integrate,
    integrate_split,
)


class TestIntegrate:
    def test_constant(self):
        for spec in (GK_DEFAULT, TS_DEFAULT):
            r = integrate(lambda u: 1.0 + 0 * u, 0.0, 1.0, spec)
            assert r.value == pytest.approx(1.0, abs=1e-13)
            assert not r.flagged

    def test_reversed_interval_rejected(self):
        with pytest.raises(DomainError):
            integrate(lambda u: u, 1.0, 0.0)

    def test_tanh_sinh_endpoint_singularity(self):
        r = integrate(lambda u: mp.power(1 - u, -0.5), 0.0, 1.0, TS_DEFAULT)
        assert r.value == pytest.approx(2.0, abs=1e-12)
        assert not r.flagged

    def test_tanh_sinh_strong_singularity(self):
        # (1-u)^(-3/4): the hardest weight the fractional operators produce
        r = integrate(lambda u: mp.power(1 - u, -0.75), 0.0, 1.0, TS_DEFAULT)
        assert r.value == pytest.approx(4.0, abs=1e-11)

    def test_oscillatory_gk(self):
        r = integrate(lambda u: math.cos(50.0 * u), 0.0, 1.0, GK_DEFAULT)
        assert r.value == pytest.approx(math.sin(50.0) / 50.0, abs=1e-13)

    @given(st.floats(0.5, 20.0))
    @settings(max_examples=20, deadline=None)
    def test_doubled_depth_agrees(self, freq):
        # refinement invariance: doubling max_depth must not move the answer
        spec_lo = QuadratureSpec("adaptive-Gauss-Kronrod", 1e-11, 1e-10, 5)
        spec_hi = QuadratureSpec("adaptive-Gauss-Kronrod", 1e-11, 1e-10, 10)
        f = lambda u: math.sin(freq * u) * math.exp(-u)
        a = integrate(f, 0.0, 1.0, spec_lo)
        b = integrate(f, 0.0, 1.0, spec_hi)
        assert a.value == pytest.approx(b.value, abs=1e-11)


class TestIntegrateSplit:
    def test_oscillatory_with_endpoint_weight(self):
        freq = 200.0
        f = lambda u: np.cos(freq * u) * np.sqrt(np.maximum(1.0 - u, 0.0))
        bps = cosine_zero_breakpoints(freq, 0.0, 1.0)
        r = integrate_split(f, 0.0, 1.0, bps)
        with mp.workdps(30):
            exact = float(mp.quad(lambda u: mp.cos(freq * u) * mp.sqrt(1 - u), [0, 1]))
        assert r.value == pytest.approx(exact, abs=1e-11)

    def test_no_breakpoints_degenerates_gracefully(self):
        r = integrate_split(lambda u: np.exp(-u), 0.0, 1.0, [])
        assert r.value == pytest.approx(1.0 - math.exp(-1.0), abs=1e-11)

    def test_smooth_high_frequency(self):
        freq = 777.0
        f = lambda u: np.cos(freq * u)
        bps = cosine_zero_breakpoints(freq, 0.0, 1.0)
        r = integrate_split(f, 0.0, 1.0, bps, singular_ends=False)
        assert r.value == pytest.approx(math.sin(freq) / freq, abs=1e-13)


class TestBreakpoints:
    def test_zeros_are_zeros(self):
        for freq in (3.0, 17.5, 400.0):
            for u in cosine_zero_breakpoints(freq, 0.0, 1.0):
                assert 0.0 < u < 1.0
                assert abs(math.cos(freq * u)) < 1e-9

    def test_count_matches_frequency(self):
        freq = 100.0
        n = len(cosine_zero_breakpoints(freq, 0.0, 1.0))
        assert abs(n - freq / math.pi) <= 1.0

    def test_phase_shift(self):
        zs = cosine_zero_breakpoints(10.0, 0.0, 1.0, phase=0.7)
        for u in zs:
            assert abs(math.cos(10.0 * u + 0.7)) < 1e-9

    def test_nonpositive_frequency_empty(self):
        assert cosine_zero_breakpoints(0.0) == []
