import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps

from pbessel.special import (
    DomainError,
    PExponent,
    QuadratureSpec,
    ValueWithError,
    Method,
    beta,
    bessel_j_vec,
    classical_bessel_j,
    gamma,
    log_gamma,
)


class TestPExponent:
    def test_from_q(self):
        p = PExponent.from_q(3)
        assert p.p == pytest.approx(2.0 / 3.0)
        assert p.q_odd

    def test_from_rational(self):
        assert PExponent.from_rational("2/3").q == 3
        assert PExponent.from_rational("2").q == 1
        assert PExponent.from_rational("1").q == 2
        assert PExponent.from_rational("1/2").q == 4

    @pytest.mark.parametrize("bad", ["0.7", "3", "4/3", "-2", "0"])
    def test_rejects_non_admissible(self, bad):
        with pytest.raises((DomainError, ValueError)):
            PExponent.from_rational(bad)

    def test_rejects_bad_q(self):
        with pytest.raises(DomainError):
            PExponent(0)
        with pytest.raises(DomainError):
            PExponent(-1)

    def test_str(self):
        assert str(PExponent(3)) == "2/3"
        assert str(PExponent(1)) == "2"


class TestQuadratureSpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(scheme="simpson")
        with pytest.raises(DomainError):
            QuadratureSpec(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_depth=0)


class TestValueWithError:
    def test_negative_error_rejected(self):
        with pytest.raises(DomainError):
            ValueWithError(1.0, -1.0, Method.SERIES)

    def test_real_of_complex(self):
        v = ValueWithError(2.0 + 3.0j, 0.0, Method.SERIES)
        assert v.real == 2.0


class TestGammaBeta:
    def test_log_gamma_known(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-15)

    def test_domain(self):
        for f in (log_gamma, gamma):
            with pytest.raises(DomainError):
                f(0.0)
            with pytest.raises(DomainError):
                f(-1.5)
        with pytest.raises(DomainError):
            beta(1.0, 0.0)

    @given(st.floats(0.1, 30.0), st.floats(0.1, 30.0))
    @settings(max_examples=50, deadline=None)
    def test_beta_symmetry_and_recursion(self, a, b):
        assert beta(a, b) == pytest.approx(beta(b, a), rel=1e-12)
        # B(a+1, b) = B(a, b) * a / (a + b)
        assert beta(a + 1.0, b) == pytest.approx(beta(a, b) * a / (a + b), rel=1e-10)

    def test_beta_large_args_no_overflow(self):
        v = beta(400.0, 300.0)
        assert 0.0 < v < 1.0


class TestClassicalBessel:
    @pytest.mark.parametrize("omega", [0.0, 0.5, 1.0, 2.0, 3.0])
    def test_against_scipy_grid(self, omega):
        r = np.arange(0.0, 50.01, 0.5)
        ours = np.array([classical_bessel_j(omega, float(x)) for x in r])
        ref = sps.jv(omega, r)
        assert np.max(np.abs(ours - ref)) < 1e-12

    def test_switch_region_consistency(self):
        # series and asymptotic branches must agree where they meet
        from pbessel.special import _bessel_asymptotic, _bessel_series_mp

        for r in np.arange(15.0, 21.01, 0.5):
            assert _bessel_series_mp(0.0, float(r)) == pytest.approx(
                _bessel_asymptotic(0.0, float(r)), abs=1e-10
            )

    def test_vectorized_matches_scalar(self):
        r = np.concatenate([np.linspace(0.1, 10, 17), np.linspace(30, 5000, 23)])
        v = bessel_j_vec(1.0, r)
        ref = sps.jv(1.0, r)
        assert np.max(np.abs(v - ref)) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            classical_bessel_j(0.0, -1.0)
        with pytest.raises(DomainError):
            classical_bessel_j(-1.0, 1.0)

    def test_origin(self):
        assert classical_bessel_j(0.0, 0.0) == 1.0
        assert classical_bessel_j(1.0, 0.0) == 0.0
