import cmath
import math

import numpy as np
import pytest
from scipy import integrate as sint
from scipy import special

from uwajam.errors import DomainError
from uwajam.numerics import RandomStream
from uwajam.uwchannel import (EnvironmentConfig, FadingParams, TapProfile,
                              absorption_db_per_km, fading_cdf, lt_fading,
                              noise_power, one_minus_lt_fading, pathloss_db,
                              psi_from_taps, sample_fading)


# --- absorption -------------------------------------------------------------

def test_absorption_low_frequency_limit():
    assert abs(absorption_db_per_km(1e-6) - 0.003) < 1e-9


def test_absorption_at_1_khz():
    # 0.11/2 + 44/4101 + 2.75e-4 + 0.003
    assert abs(absorption_db_per_km(1.0) - 0.069004) < 1e-6


def test_absorption_at_22_khz():
    assert abs(absorption_db_per_km(22.0) - 4.891597) < 1e-6


def test_absorption_strictly_increasing():
    f = np.geomspace(0.01, 500.0, 60)
    vals = [absorption_db_per_km(x) for x in f]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("bad", [0.0, -3.0, math.nan, math.inf])
def test_absorption_domain_errors(bad):
    with pytest.raises(DomainError):
        absorption_db_per_km(bad)


# --- path loss ---------------------------------------------------------------

def test_pathloss_at_reference_distance():
    env = EnvironmentConfig()
    want = absorption_db_per_km(env.frequency_khz) / 1000.0
    assert abs(pathloss_db(env, 1.0) - want) < 1e-12
    assert abs(pathloss_db(env, 1.0) - 0.00489) < 1e-4


def test_pathloss_1km_example():
    env = EnvironmentConfig(frequency_khz=22.0, spreading_factor=1.5)
    assert abs(pathloss_db(env, 1000.0) - (45.0 + 4.8915975)) < 1e-5


def test_pathloss_strictly_increasing():
    env = EnvironmentConfig()
    d = np.geomspace(1.0, 50_000.0, 80)
    vals = [pathloss_db(env, x) for x in d]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_pathloss_below_reference_raises():
    with pytest.raises(DomainError):
        pathloss_db(EnvironmentConfig(), 0.5)


# --- noise -------------------------------------------------------------------

def test_noise_power_at_1_khz_equals_n1():
    env = EnvironmentConfig(frequency_khz=1.0, bandwidth_hz=1.0,
                            noise_level_db=-30.0, dmax_km=10.0)
    assert abs(noise_power(env) - 10.0 ** (-3.0)) < 1e-12


def test_noise_power_decay_example():
    # N1 = 50, tau = 1.8, f = 10 -> in-band level 32 dB
    env = EnvironmentConfig(frequency_khz=10.0, bandwidth_hz=1.0,
                            noise_level_db=50.0, noise_decay=1.8)
    assert abs(noise_power(env) - 10.0 ** 3.2) < 1e-9


def test_noise_power_22khz_example():
    env = EnvironmentConfig(frequency_khz=22.0, bandwidth_hz=1e4,
                            noise_level_db=50.0, noise_decay=1.8)
    assert abs(noise_power(env) - 3.834e6) / 3.834e6 < 1e-3


# --- tap profile / psi --------------------------------------------------------

def test_psi_single_unit_tap():
    taps = TapProfile(taps=((0.37, 1.0),))
    assert abs(psi_from_taps(taps, 22.0).psi - 2.0) < 1e-12


def test_psi_destructive_two_taps():
    f_hz = 22_000.0
    taps = TapProfile(taps=((0.0, 1.0), (0.5 / f_hz, 1.0)))  # phase pi apart
    assert psi_from_taps(taps, 22.0).psi < 1e-20


def test_psi_three_tap_brute_force():
    delays = (0.0, 1e-3, 2e-3)
    gains = (1.0, 0.5, 0.25)
    taps = TapProfile(taps=tuple(zip(delays, gains)))
    total = sum(g * cmath.exp(-2j * math.pi * 22_000.0 * d)
                for d, g in zip(delays, gains))
    want = (2.0 / 3.0) * abs(total) ** 2
    assert abs(psi_from_taps(taps, 22.0).psi - want) < 1e-12


def test_psi_invariant_under_common_delay_offset():
    delays = (0.0, 1.3e-3, 2.9e-3)
    gains = (1.0, 0.7, 0.2)
    base = psi_from_taps(TapProfile(taps=tuple(zip(delays, gains))), 22.0).psi
    shifted = psi_from_taps(
        TapProfile(taps=tuple((d + 0.717e-3, g) for d, g in zip(delays, gains))),
        22.0).psi
    assert abs(base - shifted) < 1e-9 * max(base, 1.0)


def test_tap_profile_invariants():
    with pytest.raises(ValueError):
        TapProfile(taps=())
    with pytest.raises(ValueError):
        TapProfile(taps=((-1e-3, 1.0),))
    with pytest.raises(ValueError):
        TapProfile(taps=((0.0, -0.5),))
    with pytest.raises(ValueError):
        TapProfile(taps=((0.0, 1.0),), per_path_sigma=2.0)


# --- fading samples / cdf ------------------------------------------------------

def test_sample_fading_mean_central():
    rng = RandomStream(11)
    x = rng.fading_squares(0.0, 1_000_000)
    se = x.std() / math.sqrt(x.size)
    assert abs(x.mean() - 2.0) < 3.0 * se


def test_sample_fading_mean_noncentral():
    rng = RandomStream(12)
    x = rng.fading_squares(5.0, 1_000_000)
    se = x.std() / math.sqrt(x.size)
    assert abs(x.mean() - 7.0) < 3.0 * se


def test_scalar_sampler_matches_batch():
    params = FadingParams(psi=2.0)
    a = RandomStream(13)
    scalars = [sample_fading(params, a) for _ in range(100)]
    b = RandomStream(13)
    assert np.allclose(scalars, b.fading_squares(2.0, 100), rtol=0, atol=0)


def test_empirical_cdf_matches_fading_cdf_dkw():
    n = 200_000
    x = RandomStream(14).fading_squares(2.0, n)
    emp = np.count_nonzero(x <= 2.0) / n
    want = fading_cdf(2.0, FadingParams(2.0))
    dkw = math.sqrt(math.log(2.0 / 1e-6) / (2.0 * n))  # conf level 1e-6
    assert abs(emp - want) < dkw


def test_fading_cdf_zero_and_central_case():
    assert fading_cdf(0.0, FadingParams(1.0)) == 0.0
    for x in [0.5, 2.0, 7.0]:
        assert abs(fading_cdf(x, FadingParams(0.0)) - (1 - math.exp(-x / 2))) < 1e-12


def test_fading_cdf_quadrature_oracle():
    psi, x = 2.0, 2.0
    a = math.sqrt(psi)

    def pdf(t):
        st = np.sqrt(t)
        return 0.5 * np.exp(-0.5 * (st - a) ** 2) * special.ive(0, a * st)
    want, err = sint.quad(pdf, 0.0, x, limit=300)
    assert err < 1e-10
    assert abs(fading_cdf(x, FadingParams(psi)) - want) < 1e-8


def test_fading_cdf_monotone_and_limit():
    for psi in [0.0, 2.0, 10.0]:
        xs = np.linspace(0.0, 60.0, 100)
        vals = [fading_cdf(x, FadingParams(psi)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert abs(fading_cdf(1e3, FadingParams(psi)) - 1.0) < 1e-6


def test_fading_cdf_domain_error():
    with pytest.raises(DomainError):
        fading_cdf(-0.1, FadingParams(1.0))


# --- fading Laplace transform ---------------------------------------------------

def test_lt_fading_at_zero_is_one():
    assert lt_fading(0.0, FadingParams(3.0), kappa=2.0) == 1.0


def test_lt_fading_central_closed_form():
    for s in [0.1, 1.0, 7.0]:
        assert abs(lt_fading(s, FadingParams(0.0)) - 1.0 / (1.0 + 2.0 * s)) < 1e-14


def test_lt_fading_spec_point():
    want = math.exp(-2.0 / 3.0) / 3.0
    assert abs(lt_fading(1.0, FadingParams(2.0)) - want) < 1e-9
    assert abs(want - 0.171139) < 1e-6


@pytest.mark.parametrize("psi", [0.0, 0.5, 2.0, 10.0])
def test_lt_fading_monte_carlo_grid(psi):
    x = RandomStream(int(20 + psi)).fading_squares(psi, 1_000_000)
    for s in np.geomspace(1e-3, 1e2, 6):
        emp = np.exp(-s * x)
        se = emp.std() / math.sqrt(emp.size)
        assert abs(lt_fading(s, FadingParams(psi)) - emp.mean()) < 4.0 * se


def test_lt_fading_real_axis_shape():
    s = np.geomspace(1e-3, 1e2, 40)
    for psi in [0.0, 2.0, 10.0]:
        vals = lt_fading(s, FadingParams(psi))
        assert np.all(vals.real > 0.0) and np.all(np.abs(vals.imag) < 1e-300)
        assert np.all(np.diff(vals.real) < 0.0)  # decreasing
        # log-convexity on a uniform grid (plain second differences apply)
        su = np.linspace(1e-3, 100.0, 60)
        logv = np.log(lt_fading(su, FadingParams(psi)).real)
        assert np.all(np.diff(logv, 2) > -1e-10)


def test_lt_fading_analyticity_domain():
    with pytest.raises(DomainError):
        lt_fading(-1.0, FadingParams(1.0), kappa=1.0)
    with pytest.raises(DomainError):
        lt_fading(complex(-5.0, 1.0), FadingParams(1.0), kappa=1.0)


def test_one_minus_lt_consistency():
    for psi in [0.0, 1.5]:
        for kappa in [1e-12, 1e-3, 1.0]:
            for s in [1e-8, 1e-2, 3.0]:
                direct = 1.0 - lt_fading(s, FadingParams(psi), kappa)
                stable = float(one_minus_lt_fading(s, psi, kappa))
                assert abs(direct - stable) <= 1e-15 + 1e-8 * abs(stable)
    # complex path agrees with real path on the real axis
    for s in [1e-6, 0.3]:
        re = float(one_minus_lt_fading(s, 2.0, 0.5))
        cx = complex(one_minus_lt_fading(complex(s, 0.0), 2.0, 0.5))
        assert abs(cx - re) < 1e-15 + 1e-12 * abs(re)


# --- config invariants -----------------------------------------------------------

def test_environment_invariants():
    with pytest.raises(ValueError):
        EnvironmentConfig(frequency_khz=0.0)
    with pytest.raises(ValueError):
        EnvironmentConfig(bandwidth_hz=-1.0)
    with pytest.raises(ValueError):
        EnvironmentConfig(spreading_factor=3.0)
    with pytest.raises(ValueError):
        EnvironmentConfig(depth_km=0.0)
    with pytest.raises(ValueError):
        EnvironmentConfig(depth_km=2.0, dmax_km=1.0)


def test_fading_params_invariant():
    with pytest.raises(ValueError):
        FadingParams(psi=-0.5)
    with pytest.raises(ValueError):
        FadingParams(psi=math.nan)
