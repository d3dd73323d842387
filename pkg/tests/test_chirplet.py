import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altes.chirplet import (
    ChirpletParams,
    ClassicAltesParams,
    DomainError,
    bandwidth_to_cutoff,
    classic_to_modern,
    homogeneity_constant,
    kc_from_db,
    magnitude_response,
    modern_to_classic,
    response,
    synth_spectrum,
    synth_time,
)
from altes.errors import InvalidParameterError, SingularChirpRateError

EX1 = ClassicAltesParams(nu=-0.55, k=1.8, c=-0.35)
EX2 = ChirpletParams.from_bandwidth(math.pi / 6, math.pi / 5, 0.75)
EX3 = ChirpletParams(math.pi / 10, 9 * math.pi / 10, 0.75)

valid_params = st.builds(
    ChirpletParams,
    omega0=st.floats(0.05, 1.5),
    omega_c=st.just(math.pi),
    lam=st.floats(0.05, 0.95) | st.floats(1.05, 8.0),
)


def test_kc_from_db():
    assert kc_from_db(-40.0) == pytest.approx(0.01, rel=1e-15)


def test_classic_conversion_reference():
    p = classic_to_modern(EX1)
    assert p.lam == pytest.approx(0.1865, abs=5e-4)
    assert p.omega_c == pytest.approx(7.4146, abs=1e-3)
    assert p.bandwidth == pytest.approx(7.3440, abs=1e-3)
    # k**nu evaluated directly, not the transposed 0.7328
    assert p.omega0 == pytest.approx(1.8 ** -0.55, rel=1e-15)
    assert abs(p.omega0 - 0.7328) > 5e-3


@pytest.mark.parametrize("p", [EX2, EX3, ChirpletParams(math.pi / 5, math.pi, 0.5), ChirpletParams(0.3, 2.0, 2.5)])
def test_round_trip_modern(p):
    back = classic_to_modern(modern_to_classic(p), p.kc_level)
    for a, b in [(back.omega0, p.omega0), (back.omega_c, p.omega_c), (back.lam, p.lam)]:
        assert a == pytest.approx(b, rel=1e-12)


def test_round_trip_classic():
    c = modern_to_classic(classic_to_modern(EX1))
    assert (c.nu, c.k, c.c) == pytest.approx((EX1.nu, EX1.k, EX1.c), rel=1e-12)


def test_example3_classic_is_finite():
    c = modern_to_classic(EX3)
    assert all(math.isfinite(x) for x in (c.nu, c.k, c.c, c.a_gain))
    assert c.c < 0  # lam < 1


def test_singular_chirp_rate_rejected():
    with pytest.raises(SingularChirpRateError):
        ChirpletParams(0.5, 1.0, 1.0)


@pytest.mark.parametrize(
    "kw",
    [
        dict(omega0=1.0, omega_c=0.5, lam=0.5),
        dict(omega0=-1.0, omega_c=0.5, lam=0.5),
        dict(omega0=0.5, omega_c=1.0, lam=-0.5),
        dict(omega0=0.5, omega_c=1.0, lam=0.5, kc_level=1.5),
    ],
)
def test_invalid_params(kw):
    with pytest.raises(InvalidParameterError):
        ChirpletParams(**kw)


def test_classic_rejects_bad_values():
    with pytest.raises(InvalidParameterError):
        ClassicAltesParams(nu=0.0, k=0.9, c=1.0)
    with pytest.raises(InvalidParameterError):
        ClassicAltesParams(nu=0.0, k=2.0, c=0.0)


def test_bandwidth_to_cutoff_inverse():
    wc = bandwidth_to_cutoff(math.pi / 6, math.pi / 5)
    p = ChirpletParams(math.pi / 6, wc, 0.75)
    assert p.bandwidth == pytest.approx(math.pi / 5, rel=1e-12)
    assert bandwidth_to_cutoff(classic_to_modern(EX1).omega0, 7.3440) == pytest.approx(7.4146, abs=1e-3)


def test_bandwidth_to_cutoff_small_b_limit():
    w0 = 0.7
    cuts = [bandwidth_to_cutoff(w0, b) for b in (1e-1, 1e-3, 1e-6, 1e-9)]
    assert all(a > b > w0 for a, b in zip(cuts, cuts[1:]))
    assert cuts[-1] - w0 < 1e-8


def test_magnitude_response_levels():
    p = EX2
    assert magnitude_response(p, p.omega0) == 0.0
    assert magnitude_response(p, p.omega_c) == pytest.approx(math.log(0.01), rel=1e-12)
    assert magnitude_response(p, p.omega_c_lower) == pytest.approx(math.log(0.01), rel=1e-12)
    with pytest.raises(DomainError):
        magnitude_response(p, 0.0)


def test_response_zero_off_positive_axis():
    assert np.all(response(EX2, np.array([-1.0, 0.0])) == 0)


def test_spectrum_grid_and_levels():
    p = ChirpletParams(math.pi / 5, math.pi, 0.5)
    s = synth_spectrum(p, 4096)
    assert len(s.values) == 2049
    assert s.omega[-1] == pytest.approx(math.pi)
    assert s.values[0] == 0
    mag = np.abs(s.values)
    assert mag.max() == pytest.approx(1.0, abs=1e-5)
    near_c = int(round(p.omega_c / s.domega))
    assert mag[near_c] == pytest.approx(0.01, abs=1e-3)


@pytest.mark.parametrize("n", [4, 100, 0])
def test_nfft_must_be_power_of_two(n):
    with pytest.raises(InvalidParameterError):
        synth_spectrum(EX2, n)


def test_reciprocal_spectrum_is_conjugate():
    a = synth_spectrum(EX2, 1024).values
    b = synth_spectrum(EX2.reciprocal(), 1024).values
    np.testing.assert_allclose(np.abs(a), np.abs(b), rtol=0, atol=1e-15)
    np.testing.assert_allclose(b, np.conj(a), rtol=0, atol=1e-12)


def test_parseval():
    p = ChirpletParams(math.pi / 5, math.pi, 0.5)
    s = synth_spectrum(p, 1024)
    u = synth_time(p, 1024).samples
    # one-sided values placed in a length-N DFT
    assert np.sum(np.abs(u) ** 2) == pytest.approx(np.sum(np.abs(s.values) ** 2) / 1024, rel=1e-10)


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.75])
def test_time_reversal_conjugation(lam):
    p = ChirpletParams(math.pi / 5, math.pi, lam)
    u = synth_time(p, 1024).samples
    v = synth_time(p.reciprocal(), 1024).samples
    n = np.arange(1024)
    np.testing.assert_allclose(v, np.conj(u[(-n) % 1024]), rtol=0, atol=1e-10 * np.abs(u).max())


def test_homogeneous_identity_plus_sign():
    p = ChirpletParams(math.pi / 5, math.pi, 0.5)
    w = np.linspace(0.05, 3.0, 200)
    for n in (1.0, 2.0, 3.0, 0.5, -1.0):
        lhs = w ** n * response(p, w)
        rhs = homogeneity_constant(p, n) * response(p, w / p.k ** n)
        np.testing.assert_allclose(rhs, lhs, rtol=1e-9)


def test_homogeneous_identity_minus_sign_fails():
    # the same constant with the conjugate phase term does not satisfy the identity
    p = ChirpletParams(math.pi / 5, math.pi, 0.5)
    w = np.linspace(0.05, 3.0, 200)
    c_minus = np.conj(homogeneity_constant(p, 1.0))
    rhs = c_minus * response(p, w / p.k)
    lhs = w * response(p, w)
    assert np.max(np.abs(lhs - rhs) / np.abs(lhs)) > 0.1


@settings(max_examples=40, deadline=None)
@given(valid_params, st.sampled_from([1.0, 2.0, 0.5, -1.0]))
def test_homogeneous_identity_property(p, n):
    w = np.geomspace(p.omega0 / 3, p.omega0 * 3, 50)
    lhs = w ** n * response(p, w)
    rhs = homogeneity_constant(p, n) * response(p, w / p.k ** n)
    np.testing.assert_allclose(rhs, lhs, rtol=1e-9)


@settings(max_examples=40, deadline=None)
@given(valid_params)
def test_round_trip_property(p):
    back = classic_to_modern(modern_to_classic(p))
    assert back.omega0 == pytest.approx(p.omega0, rel=1e-12)
    assert back.lam == pytest.approx(p.lam, rel=1e-12)
    assert back.omega_c == pytest.approx(p.omega_c, rel=1e-12)


def test_from_kappa():
    p = ChirpletParams.from_kappa(0.5, 2.0, 0.5)
    assert p.kappa_c == pytest.approx(2.0, rel=1e-12)
