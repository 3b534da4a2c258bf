import math

import numpy as np
import pytest
from scipy import integrate as sint
from scipy import special, stats

from uwajam.errors import DomainError
from uwajam.numerics import marcum_q1


def q1_density_quadrature(a, b):
    """Independent oracle: integrate the noncentral chi-squared density.

    pdf of (Z1+a)^2 + Z2^2 at x: 0.5 exp(-(x+a^2)/2) I0(a sqrt(x)); the
    exponentially scaled Bessel keeps the integrand stable at large x.
    """
    def pdf(x):
        sx = np.sqrt(x)
        return 0.5 * np.exp(-0.5 * (sx - a) ** 2) * special.ive(0, a * sx)
    val, err = sint.quad(pdf, b * b, np.inf, limit=500)
    assert err < 1e-10
    return val


def test_b_zero_is_one():
    for a in [0.0, 0.5, 3.0, 50.0]:
        assert marcum_q1(a, 0.0) == 1.0


def test_a_zero_rayleigh_tail():
    for b in [0.1, 1.0, 2.0, 5.0]:
        assert abs(marcum_q1(0.0, b) - math.exp(-b * b / 2.0)) < 1e-14


def test_q1_1_1_against_density_quadrature():
    assert abs(marcum_q1(1.0, 1.0) - q1_density_quadrature(1.0, 1.0)) < 1e-8


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("b", [0.2, 1.0, 3.0, 9.0])
def test_grid_against_density_quadrature(a, b):
    assert abs(marcum_q1(a, b) - q1_density_quadrature(a, b)) < 1e-8


def test_wide_grid_against_scipy():
    for a in [0.0, 0.1, 1.2253, 5.0, 20.0, 35.0, 50.0]:
        for b in [0.0, 0.5, 1.4142, 8.0, 31.6, 60.0, 1e3]:
            ref = stats.ncx2.sf(b * b, 2, a * a) if a > 0 else math.exp(-min(b * b / 2, 700))
            assert abs(marcum_q1(a, b) - ref) < 1e-9, (a, b)


def test_monotone_decreasing_in_b_increasing_in_a():
    bs = np.linspace(0.0, 12.0, 25)
    for a in [0.0, 1.0, 4.0, 10.0]:
        vals = [marcum_q1(a, b) for b in bs]
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))
    as_ = np.linspace(0.0, 12.0, 25)
    for b in [0.5, 2.0, 6.0]:
        vals = [marcum_q1(a, b) for a in as_]
        assert all(y >= x - 1e-12 for x, y in zip(vals, vals[1:]))


def test_domain_errors():
    with pytest.raises(DomainError):
        marcum_q1(-0.1, 1.0)
    with pytest.raises(DomainError):
        marcum_q1(1.0, -0.1)
    with pytest.raises(DomainError):
        marcum_q1(51.0, 1.0)
    with pytest.raises(DomainError):
        marcum_q1(math.nan, 1.0)
    with pytest.raises(DomainError):
        marcum_q1(1.0, math.inf)


def test_result_in_unit_interval():
    for a in [0.0, 2.0, 30.0]:
        for b in [0.0, 1e-8, 5.0, 200.0]:
            v = marcum_q1(a, b)
            assert 0.0 <= v <= 1.0
