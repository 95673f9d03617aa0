import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fringe_psa import (
    EmptySpectrum,
    FringeParams,
    FtfSpectrum,
    GridTooCoarse,
    ZeroNormalizer,
    build_linear_psa,
    build_nonlinear_psa,
    custom_window,
    evaluate_ftf,
    fringe_spectrum,
    ftf,
    harmonic_response,
    make_profile,
    quadratic,
    quadrature_check,
    synthesize,
    zero_leakage_residuals,
)
from fringe_psa.psa_design import Psa
from fringe_psa.spectral import frequency_grid, trapezoid_energy

from oracles import ftf_at, leakage


def test_ftf_classical(classical4):
    h = evaluate_ftf(classical4, [math.pi / 2, 0.0])
    assert abs(h[0] - 4) < 1e-12
    assert abs(h[1]) < 1e-12


def test_ftf_grid_shape(classical4):
    spec = ftf(classical4, 64)
    assert spec.omegas[0] == -math.pi and spec.omegas[-1] == math.pi
    assert np.all(np.diff(spec.omegas) > 0)
    with pytest.raises(GridTooCoarse):
        ftf(classical4, 63)


def test_ftf_matches_scalar_oracle(gaussian_psa):
    spec = ftf(gaussian_psa, 257)
    coeffs = list(gaussian_psa.coefficients)
    for k in range(0, 257, 16):
        assert abs(spec.values[k] - ftf_at(coeffs, spec.omegas[k])) < 1e-12


def test_ftf_zero_coefficients():
    psa = Psa(np.zeros(5, complex), "linear", 1.0, d_complex=np.zeros(5, complex))
    assert np.all(ftf(psa, 64).values == 0)


def test_gaussian_dc_regression(gaussian_psa):
    spec = ftf(gaussian_psa, 2049)
    rep = quadrature_check(spec)
    # frozen from the cmath oracle
    assert rep.dc_value == pytest.approx(0.008494016277069564, rel=1e-9)
    assert rep.dc_value < 0.01 * rep.positive_side_max


def test_leakage_ordering(gaussian_psa, square_psa):
    g = quadrature_check(ftf(gaussian_psa, 2048))
    s = quadrature_check(ftf(square_psa, 2048))
    assert g.leakage_ratio < s.leakage_ratio
    neg, pos = leakage(list(gaussian_psa.coefficients))
    assert g.negative_side_max == pytest.approx(neg, rel=1e-12)
    assert g.positive_side_max == pytest.approx(pos, rel=1e-12)


def test_square_regression(square_psa):
    s = quadrature_check(ftf(square_psa, 2048))
    assert s.leakage_ratio == pytest.approx(0.1558541884986967, rel=1e-9)
    assert s.negative_side_max == pytest.approx(1.5905812153810566, rel=1e-9)
    # 2048 points straddle zero; interpolation error is O(grid step**2)
    assert s.dc_value == pytest.approx(1.360067511354214, rel=1e-4)


def test_quadrature_check_synthetic():
    om = frequency_grid(101)
    spec = FtfSpectrum(om, np.where(om > 0, 1.0 + 0j, 0j))
    rep = quadrature_check(spec)
    assert rep.leakage_ratio == 0 and rep.dc_value == 0 and rep.positive_side_max == 1
    with pytest.raises(EmptySpectrum):
        quadrature_check(FtfSpectrum(np.array([]), np.array([], complex)))


def test_fringe_spectrum_three_peaks():
    p = make_profile(math.pi / 2, None, 32)
    spec = fringe_spectrum(synthesize(p, FringeParams(1, 1, 0)), 1025)
    mag = spec.magnitude
    om = spec.omegas
    # finite-N lobes interfere, so allow a tenth of the 2*pi/N main lobe
    tol = 0.1 * 2 * math.pi / 32
    for lo, hi, centre in [(-2.3, -0.8, -math.pi / 2), (-0.8, 0.8, 0.0), (0.8, 2.3, math.pi / 2)]:
        sel = (om > lo) & (om < hi)
        assert abs(om[sel][np.argmax(mag[sel])] - centre) <= tol


def _half_power_width(spec):
    # positive-side extent above half the peak power, away from the DC lobe
    om, mag = spec.omegas, spec.magnitude
    m = mag[om > 0.5]
    return np.count_nonzero(m >= m.max() / math.sqrt(2)) * (om[1] - om[0])


def test_nonlinear_spectrum_is_wider(sec9_profile):
    params = FringeParams(1, 1, 0.3)
    lin = make_profile(sec9_profile.omega0, None, 13)
    w_lin = _half_power_width(fringe_spectrum(synthesize(lin, params), 4096))
    w_nl = _half_power_width(fringe_spectrum(synthesize(sec9_profile, params), 4096))
    assert w_nl > 1.05 * w_lin


def test_harmonics(gaussian_psa, sec9_profile, classical4, linear4):
    r = dict(harmonic_response(gaussian_psa, sec9_profile, [1, -7, -3, 5, 9, 7, 3, -5, -9]))
    assert r[1] == pytest.approx(1.0, abs=1e-15)
    # frozen from the cmath oracle
    assert r[-7] == pytest.approx(0.3608854962525925, rel=1e-9)
    assert r[-3] == pytest.approx(0.5062961542247081, rel=1e-9)
    assert r[5] == pytest.approx(0.5062961542247068, rel=1e-9)
    assert r[9] == pytest.approx(0.3608854962525947, rel=1e-9)
    for k in (-7, -3, 5, 9):
        assert abs(r[k] - r[-k]) > 1e-3
    assert dict(harmonic_response(classical4, linear4, [-1]))[-1] < 1e-15


def test_harmonic_zero_normalizer(sec9_profile):
    psa = Psa(np.zeros(13, complex), "nonlinear", sec9_profile.omega0, profile=sec9_profile)
    with pytest.raises(ZeroNormalizer):
        harmonic_response(psa, sec9_profile, [3])


@settings(max_examples=40, deadline=None)
@given(
    weights=st.lists(st.floats(0.01, 3), min_size=5, max_size=20),
    omega0=st.floats(0.3, 1.2),
    k=st.integers(-9, 9).filter(bool),
)
def test_harmonic_reflection_for_real_windows(weights, omega0, k):
    # real windows respond equally to harmonics k and 2 - k
    p = make_profile(omega0, quadratic(0.01), len(weights))
    psa = build_nonlinear_psa(p, custom_window(weights))
    if 2 - k == 0:
        return
    r = dict(harmonic_response(psa, p, [k, 2 - k]))
    assert r[k] == pytest.approx(r[2 - k], rel=1e-9, abs=1e-12)


def _parseval_check(psa):
    spec = ftf(psa, 4096)
    direct = float(np.sum(np.abs(psa.coefficients) ** 2))
    return trapezoid_energy(spec) / (2 * np.pi), direct


@pytest.mark.parametrize("name", ["classical4", "gaussian_psa", "square_psa"])
def test_parseval(name, request):
    integral, direct = _parseval_check(request.getfixturevalue(name))
    assert integral == pytest.approx(direct, rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(
    re=st.lists(st.floats(-2, 2), min_size=3, max_size=40),
    im=st.lists(st.floats(-2, 2), min_size=40, max_size=40),
    scale=st.floats(-5, 5),
)
def test_parseval_and_linearity_random(re, im, scale):
    d = np.array(re) + 1j * np.array(im[: len(re)])
    psa = build_linear_psa(1.0, d)
    integral, direct = _parseval_check(psa)
    assert integral == pytest.approx(direct, rel=1e-6, abs=1e-12)
    scaled = build_linear_psa(1.0, scale * d)
    np.testing.assert_allclose(ftf(scaled, 64).magnitude, abs(scale) * ftf(psa, 64).magnitude,
                               rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(samples=st.lists(st.floats(-10, 10), min_size=3, max_size=40))
def test_fringe_spectrum_hermitian(samples):
    from fringe_psa.fringe_model import FringeSequence
    p = make_profile(1.0, None, len(samples))
    spec = fringe_spectrum(FringeSequence(np.array(samples), p, FringeParams()), 128)
    np.testing.assert_allclose(spec.values, np.conj(spec.values[::-1]), rtol=0, atol=1e-12)


def test_dc_consistency(gaussian_psa, square_psa, sec9_profile):
    for psa in (gaussian_psa, square_psa):
        dc, _ = zero_leakage_residuals(psa, sec9_profile)
        assert abs(evaluate_ftf(psa, [0.0])[0]) == pytest.approx(abs(dc), rel=1e-12)
