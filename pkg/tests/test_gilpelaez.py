import math

import numpy as np
import pytest
from scipy import stats

from uwajam.numerics import QuadratureSpec, gil_pelaez_tail, marcum_q1
from uwajam.uwchannel import FadingParams, fading_cdf


def cf_normal(t):
    return np.exp(-0.5 * t * t).astype(complex)


def cf_chi2_2dof(t):
    return 1.0 / (1.0 - 2.0j * t)


def cf_ncx2(psi, kappa=1.0):
    def cf(t):
        denom = 1.0 - 2.0j * kappa * t
        return np.exp(1j * psi * kappa * t / denom) / denom
    return cf


def test_standard_normal_median():
    assert abs(gil_pelaez_tail(cf_normal, 0.0) - 0.5) < 1e-9


def test_standard_normal_tail():
    assert abs(gil_pelaez_tail(cf_normal, 1.0) - stats.norm.sf(1.0)) < 1e-6


def test_chi_squared_tail():
    assert abs(gil_pelaez_tail(cf_chi2_2dof, 2.0) - math.exp(-1.0)) < 1e-6


@pytest.mark.parametrize("psi", [0.0, 2.0, 10.0])
@pytest.mark.parametrize("u", [0.5, 2.0, 10.0])
def test_noncentral_chi2_grid_vs_marcum(psi, u):
    got = gil_pelaez_tail(cf_ncx2(psi), u)
    want = 1.0 - fading_cdf(u, FadingParams(psi))
    assert abs(got - want) < 1e-6


@pytest.mark.parametrize("kappa,u", [
    (1e5, 1.0), (1e-6, 1e-6), (2e-4, 7.7e-6), (1.0, 1e-9), (1e8, 3.0),
])
def test_scale_separated_arguments(kappa, u):
    # regimes where the CF structure sits many decades from 1/u
    spec = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-9, max_evals=600_000)
    got = gil_pelaez_tail(cf_ncx2(1.5, kappa), u, spec)
    want = marcum_q1(math.sqrt(1.5), math.sqrt(u / kappa))
    assert abs(got - want) < 1e-6


def test_mixture_cf_matches_mixture_tail():
    # 50/50 mixture of two scaled noncentral chi-squareds, scales 1e4 apart
    def cf(t):
        return 0.5 * cf_ncx2(1.0, 1.0)(t) + 0.5 * cf_ncx2(3.0, 1e4)(t)
    u = 5.0
    want = 0.5 * marcum_q1(1.0, math.sqrt(5.0)) \
        + 0.5 * marcum_q1(math.sqrt(3.0), math.sqrt(5.0 / 1e4))
    assert abs(gil_pelaez_tail(cf, u) - want) < 1e-6


def test_result_is_probability():
    for u in [-5.0, 0.0, 30.0]:
        p = gil_pelaez_tail(cf_ncx2(2.0), u)
        assert 0.0 <= p <= 1.0
