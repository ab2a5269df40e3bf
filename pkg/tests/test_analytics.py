import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acpurity import analytics as an
from acpurity.bath import OhmicBath, noise_power, spectral_density
from acpurity.core import NO_DRIVE, Axis, DriveSpec, Waveform

mpmath.mp.dps = 40


def bessel_series(n, x, terms=80):
    """High-precision power series J_n(x) = sum (-1)^m (x/2)^(2m+n) / (m! (m+n)!)."""
    x = mpmath.mpf(x)
    return float(mpmath.fsum((-1) ** m * (x / 2) ** (2 * m + n) / (mpmath.factorial(m) * mpmath.factorial(m + n)) for m in range(terms)))


# ---------------------------------------------------------------- Bessel


def test_bessel_examples():
    assert an.bessel_j(0, 0.0) == 1.0
    assert abs(an.bessel_j(0, 2.404825)) < 1e-6
    assert an.bessel_j(0, 1.0) == pytest.approx(0.7651976866, abs=1e-10)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 12), st.floats(0.0, 20.0))
def test_bessel_matches_series_oracle(n, x):
    ref = bessel_series(n, x)
    got = an.bessel_j(n, x)
    # relative where the value is not tiny, absolute near zeros
    assert abs(got - ref) <= 1e-12 * max(abs(ref), 1e-3)


def test_bessel_large_order_and_negative_argument():
    assert an.bessel_j(30, 5.0) == pytest.approx(bessel_series(30, 5.0), rel=1e-12)
    assert an.bessel_j(3, -2.0) == pytest.approx(-an.bessel_j(3, 2.0), rel=1e-15)
    assert an.bessel_j(2, -2.0) == pytest.approx(an.bessel_j(2, 2.0), rel=1e-15)


def test_bessel_overflow_guard():
    with pytest.raises(OverflowError):
        an.bessel_j(0, 1e3)
    with pytest.raises(ValueError):
        an.bessel_j_orders(-1, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 20.0))
def test_bessel_sum_rule(x):
    j = an.bessel_j_orders(80, x)
    assert abs(j[0] ** 2 + 2 * (j[1:] ** 2).sum() - 1) < 1e-10


# ---------------------------------------------------------------- working points


def test_working_points():
    wp = an.working_points(3)
    assert [w.index for w in wp] == [1, 2, 3]
    assert wp[0].ratio == pytest.approx(2.404825557695, abs=1e-12)
    assert wp[1].ratio == pytest.approx(5.5200781103, abs=1e-9)
    assert wp[2].ratio == pytest.approx(8.6537279129, abs=1e-9)
    for w in an.working_points(6):
        assert abs(an.bessel_j(0, w.ratio)) < 1e-12
    with pytest.raises(ValueError):
        an.working_points(0)


# ---------------------------------------------------------------- effective parameters


def test_delta_eff_and_j_perp():
    assert an.delta_eff(1.3, NO_DRIVE) == 1.3
    assert abs(an.delta_eff(1.0, DriveSpec.at_ratio(2.405, 7.0))) < 1e-4
    assert an.delta_eff(1.0, DriveSpec(Waveform.RECTANGULAR, 3.0, 3.0)) == pytest.approx(0.0, abs=1e-15)
    assert an.j_perp(1.0, NO_DRIVE) == 1.0
    assert abs(an.j_perp(1.0, DriveSpec.at_ratio(5.520, 7.0))) < 1e-3
    assert an.j_perp(1.0, DriveSpec.at_ratio(1.0, 7.0)) == pytest.approx(0.7651976866, abs=1e-10)


def test_rectangular_average_matches_quadrature():
    d = DriveSpec(Waveform.RECTANGULAR, 2.3, 1.7)
    ts = (np.arange(20000) + 0.5) / 20000 * d.period
    # phi(t) is the running integral of f
    phi = np.cumsum([d.f(t) for t in ts]) * d.period / 20000
    assert an.cos2phi_average(d) == pytest.approx(np.mean(np.cos(2 * phi)), abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 30), st.floats(0.1, 100), st.sampled_from(list(Waveform)))
def test_j_perp_bounded(a, w, wf):
    assert abs(an.j_perp(1.0, DriveSpec(wf, a, w))) <= 1.0 + 1e-15


# ---------------------------------------------------------------- single qubit


def test_gamma_0():
    zero_t = OhmicBath(0.01, 500.0, 0.0)
    assert an.gamma_0(1.0, zero_t) == pytest.approx(math.pi * 0.01 * math.exp(-1 / 500) / 3, rel=1e-14)
    hot = OhmicBath(0.01, 500.0, 100.0)
    assert an.gamma_0(1.0, hot) == pytest.approx(2 * math.pi / 3 * 0.01 * 100.0, rel=1e-2)
    b = OhmicBath(0.01, 500.0, 1.0)
    assert an.gamma_0(1.0, b) == pytest.approx(noise_power(b, 1.0) / 6, rel=1e-15)
    with pytest.raises(ValueError):
        an.gamma_0(0.0, b)


def test_eta_dd_limits():
    b = OhmicBath(0.01, 500.0, 10.0)
    assert an.eta_dd(1.0, b, DriveSpec.harmonic(0.0, 50.0, axis=Axis.Z)) == pytest.approx(1.0, rel=1e-15)
    assert an.eta_dd(1.0, b, NO_DRIVE) == 1.0
    # well below the cutoff the drive spoils coherence, far above it protects
    assert an.eta_dd(1.0, b, DriveSpec.at_ratio(2.4, 50.0, axis=Axis.Z)) > 1
    assert an.eta_dd(1.0, b, DriveSpec.at_ratio(2.4, 10.0, axis=Axis.Z)) > 1
    assert an.eta_dd(1.0, b, DriveSpec.at_ratio(2.4, 5000.0, axis=Axis.Z)) < 0.1


def test_eta_dd_equals_coefficient_ratio():
    b = OhmicBath(0.01, 500.0, 3.0)
    d = DriveSpec.at_ratio(2.4, 300.0, axis=Axis.Z)
    ratio = an.q_dd_coefficient(1.0, b, d) / (noise_power(b, 1.0) / 8)
    j0sq = an.bessel_j(0, 2.4) ** 2
    # the factor carries e^{-n omega/wc} alone, the coefficient ratio e^{-(n omega - delta)/wc}
    assert an.eta_dd(1.0, b, d) == pytest.approx(j0sq + (ratio - j0sq) * math.exp(-1 / 500), rel=1e-12)


def test_eta_dd_validity_and_waveform():
    b = OhmicBath(0.01, 500.0, 1.0)
    with pytest.warns(an.ValidityWarning):
        an.eta_dd(1.0, b, DriveSpec.at_ratio(2.4, 5.0, axis=Axis.Z))
    with pytest.raises(ValueError):
        an.eta_dd(1.0, b, DriveSpec(Waveform.RECTANGULAR, 2.0, 20.0, axis=Axis.Z))


def test_eta_cdt_examples():
    d0 = DriveSpec.harmonic(0.0, 10.0)
    assert an.eta_cdt(1.0, OhmicBath(0.01, 500.0, 1.0), d0) == 1.0
    cold = OhmicBath(0.01, 1e6, 1e-4)
    d = DriveSpec.at_ratio(1.0, 40.0)
    assert an.eta_cdt(1.0, cold, d) == pytest.approx(an.bessel_j(0, 1.0), rel=1e-4)
    hot = OhmicBath(0.01, 500.0, 100.0)
    assert an.eta_cdt(1.0, hot, d) == pytest.approx(1.0, rel=1e-2)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 20), st.floats(1, 200), st.floats(0, 50), st.floats(1, 1e3), st.sampled_from([Waveform.HARMONIC, Waveform.RECTANGULAR]))
def test_eta_cdt_never_above_one(a, w, temp, wc, wf):
    b = OhmicBath(0.01, wc, temp)
    d = DriveSpec(wf, a, w)
    eta = an.eta_cdt(1.0, b, d)
    # w coth(w/2T) is nondecreasing, so with the cutoff factor stripped the
    # renormalized splitting can only lower the noise
    stripped = eta * math.exp((abs(an.delta_eff(1.0, d)) - 1.0) / wc)
    assert stripped <= 1.0 + 1e-12
    assert eta <= math.exp(1.0 / wc) + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 1.0), st.floats(0.01, 10))
def test_static_limit_continuity(delta, temp):
    b = OhmicBath(0.01, 500.0, temp)
    small = 1e-7
    assert an.eta_dd(delta, b, DriveSpec.at_ratio(small, 100.0, axis=Axis.Z)) == pytest.approx(1.0, abs=1e-6)
    assert an.eta_cdt(delta, b, DriveSpec.at_ratio(small, 100.0)) == pytest.approx(1.0, abs=1e-6)


def test_gamma_single_qubit_is_eight_thirds_of_coefficient():
    b = OhmicBath(0.01, 500.0, 0.5)
    assert an.gamma_single_qubit(1.0, b, NO_DRIVE) == pytest.approx(noise_power(b, 1.0) / 3, rel=1e-14)
    d = DriveSpec.at_ratio(1.0, 40.0)
    assert an.gamma_single_qubit(1.0, b, d) == pytest.approx(8 * an.q_cdt_coefficient(1.0, b, d) / 3, rel=1e-14)


# ---------------------------------------------------------------- qubit pair


def test_gamma_heisenberg():
    cold = OhmicBath(0.01, 1000.0, 0.0)
    assert an.gamma_heisenberg(1.0, cold) == pytest.approx(16 * math.pi * 0.01 * math.exp(-4 / 1000) / 5, rel=1e-14)
    hot = OhmicBath(0.01, 1e5, 200.0)
    assert an.gamma_heisenberg(1.0, hot) == pytest.approx(0.8 * 4 * math.pi * 0.01 * 200.0, rel=1e-3)
    assert an.gamma_heisenberg(1.0, OhmicBath(0.0)) == 0.0


def test_gamma_ising():
    assert an.gamma_ising(OhmicBath(0.01, 100.0, 0.0)) == 0.0
    b = OhmicBath(0.01 / (2 * math.pi), 1000.0, 1.0)
    # (4/5) S(0) with S(0) = 4 pi alpha T
    assert an.gamma_ising(b) == pytest.approx(0.016, rel=1e-12)
    assert an.gamma_ising(b) == pytest.approx(0.8 * noise_power(b, 0.0), rel=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-4, 1e-2))
def test_ising_over_heisenberg_at_low_temperature(temp):
    b = OhmicBath(0.01, 1e6, temp)
    # (4/5) S(0) / ((2/5)(S(0) + S(4J))) -> 2 S(0) / S(4J) = T/J for T << J
    assert an.gamma_ising(b) / an.gamma_heisenberg(1.0, b) == pytest.approx(temp, rel=2e-2)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 12), st.floats(1, 100), st.floats(0, 5))
def test_driven_rate_bounded_below_by_ising(ratio, w, temp):
    b = OhmicBath(0.01, 1000.0, temp)
    d = DriveSpec.at_ratio(ratio, w)
    # S(w) >= S(0) e^{-w/wc}: exact once the cutoff factor is stripped
    cut = math.exp(-4 * abs(an.j_perp(1.0, d)) / b.omega_c)
    assert an.gamma_heisenberg_driven(1.0, b, d) >= an.gamma_ising(b) * (1 + cut) / 2 * (1 - 1e-12)


def test_driven_rate_examples():
    b = OhmicBath(0.01, 1000.0, 0.1)
    assert an.gamma_heisenberg_driven(1.0, b, NO_DRIVE) == an.gamma_heisenberg(1.0, b)
    wp = DriveSpec.at_ratio(an.first_working_point(), 32.0)
    assert an.gamma_heisenberg_driven(1.0, b, wp) == pytest.approx(an.gamma_ising(b), rel=1e-12)
    one = DriveSpec.at_ratio(1.0, 32.0)
    expected = 0.4 * (noise_power(b, 0.0) + noise_power(b, 4 * 0.7651976866))
    assert an.gamma_heisenberg_driven(1.0, b, one) == pytest.approx(expected, rel=1e-9)


def test_interaction_time():
    assert an.interaction_time(1.0) == pytest.approx(math.pi / 4)
    for k in (1, 4, 79):
        assert an.periods_per_gate(1.0, 8.0 * k) == pytest.approx(k, rel=1e-14)
    with pytest.raises(ValueError):
        an.interaction_time(0.0)


def test_no_validity_warning_in_regime():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        an.eta_dd(1.0, OhmicBath(0.01, 500.0, 1.0), DriveSpec.at_ratio(2.4, 50.0, axis=Axis.Z))


def test_spectral_density_used_consistently():
    b = OhmicBath(0.01, 500.0, 0.0)
    # at T = 0 the CDT factor is the ratio of spectral densities
    d = DriveSpec.at_ratio(1.0, 50.0)
    de = abs(an.delta_eff(1.0, d))
    assert an.eta_cdt(1.0, b, d) == pytest.approx(spectral_density(b, de) / spectral_density(b, 1.0), rel=1e-14)
