import math

import numpy as np
import pytest

from uwajam.errors import DomainError, QuadratureError
from uwajam.numerics import IntegralResult, QuadratureSpec, integrate

EXAMPLES = [
    (lambda x: np.exp(-x), 1.0),
    (lambda x: np.exp(-x * x), math.sqrt(math.pi) / 2.0),
    (lambda x: np.sin(x) * np.exp(-x) / x, math.pi / 4.0),
]


@pytest.mark.parametrize("f,exact", EXAMPLES)
def test_semi_infinite_examples(f, exact):
    res = integrate(f, 0.0, math.inf)
    assert abs(res.value - exact) <= max(1e-10, 1e-6 * exact)


@pytest.mark.parametrize("f,exact", EXAMPLES)
def test_error_estimates_conservative(f, exact):
    res = integrate(f, 0.0, math.inf)
    assert abs(res.value - exact) <= res.error


def test_finite_interval():
    res = integrate(lambda x: x * x, 0.0, 2.0)
    assert abs(res.value - 8.0 / 3.0) < 1e-12


def test_complex_integrand():
    res = integrate(lambda x: np.exp(1j * x), 0.0, 1.0)
    exact = math.sin(1.0) + 1j * (1.0 - math.cos(1.0))
    assert abs(res.value - exact) < 1e-12


def test_transform_scale_reaches_wide_tails():
    # decay scale 1e6: log-compression must be told the scale
    spec = QuadratureSpec(transform_scale=1e6)
    res = integrate(lambda x: np.exp(-x / 1e6), 0.0, math.inf, spec)
    assert abs(res.value - 1e6) / 1e6 < 1e-9


def test_budget_exhaustion_raises_with_diagnostics():
    spec = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300, max_evals=150)
    with pytest.raises(QuadratureError) as exc:
        integrate(lambda x: np.sin(50.0 * x) ** 2 + x, 0.0, 10.0, spec)
    assert exc.value.neval is not None
    assert exc.value.value is not None


def test_non_finite_integrand_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.where(x > 0.5, np.inf, 1.0), 0.0, 1.0)
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        integrate(lambda x: x, 2.0, 1.0)
    with pytest.raises(DomainError):
        integrate(lambda x: x, math.inf, math.inf)
    with pytest.raises(DomainError):
        integrate(lambda x: x, 0.0, math.inf,
                  QuadratureSpec(transform="none"))


def test_spec_invariants():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_evals=50)
    with pytest.raises(ValueError):
        QuadratureSpec(transform="sinh")
    with pytest.raises(ValueError):
        QuadratureSpec(transform_scale=0.0)


def test_result_reports_evaluations():
    res = integrate(lambda x: np.exp(-x), 0.0, math.inf)
    assert isinstance(res, IntegralResult)
    assert res.neval >= 15
