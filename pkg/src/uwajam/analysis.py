"""Analytic link metrics: coverage probability, average rate, energy efficiency.

Coverage inverts the characteristic function of U = zeta - tau*J with the
Gil-Pelaez tail formula; the average rate is the Laplace-domain mutual
information identity (Hamdi's lemma); energy efficiency is bandwidth * rate
over total consumed power.

Distance averaging: the transmitter distance D is uniform with density
1/dmax on (0, dmax]; integrals start at the 1 m path-loss reference, whose
excluded probability mass is <= 1e-4 of the total.  The distance average is
evaluated with the average moved inside the inversion/Laplace integral
(Fubini; both integrals are absolutely convergent), which turns an
O(n_d * n_t) double quadrature into a single transform sweep with the
jamming transform cached across distances.  ``method="direct"`` keeps the
literal outer distance quadrature for cross-checks.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics.gilpelaez import gil_pelaez_tail
from .numerics.marcum import marcum_q1
from .numerics.quadrature import QuadratureSpec, integrate
from .numerics.streams import RandomStream
from .stochgeom import InterferenceTransform, JammerField, interference_transform
from .uwchannel import (EnvironmentConfig, FadingParams, TapProfile,
                        absorption_db_per_km, noise_power, one_minus_lt_fading,
                        psi_from_taps)

MIN_DISTANCE_KM = 1e-3  # 1 m path-loss reference

LN2 = math.log(2.0)

# Inversion/Laplace tolerances sit well below the Monte Carlo noise floor at
# 1e6 trials and below the closed-form agreement criteria.
COVERAGE_SPEC = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-9, max_evals=600_000)
RATE_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-10, max_evals=600_000)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_N_DISTANCE_PANELS = 48


@dataclass(frozen=True)
class LinkConfig:
    """Legitimate transmitter power, target SJNR and static power draw."""

    tx_power: float = 20.0
    sjnr_threshold: float = 2.0
    static_power: float = 1.5

    def __post_init__(self):
        if not self.tx_power > 0.0:
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")
        if not self.sjnr_threshold > 0.0:
            raise ValueError(
                f"sjnr_threshold must be > 0, got {self.sjnr_threshold}")
        if not self.static_power >= 0.0:
            raise ValueError(f"static_power must be >= 0, got {self.static_power}")


@dataclass(frozen=True)
class DistanceLaw:
    """Uniform transmitter distance: density 1/dmax on (0, dmax]."""

    dmax_km: float

    def __post_init__(self):
        if not self.dmax_km > 0.0:
            raise ValueError(f"dmax_km must be > 0, got {self.dmax_km}")

    def density(self) -> float:
        return 1.0 / self.dmax_km


@dataclass(frozen=True)
class Scenario:
    """One water-column configuration: environment, jammers, link, channel."""

    env: EnvironmentConfig = EnvironmentConfig()
    field: JammerField = JammerField()
    link: LinkConfig = LinkConfig()
    taps: TapProfile = TapProfile()

    def __post_init__(self):
        if self.env.depth_km != self.field.depth_km:
            raise ValueError(
                f"environment depth {self.env.depth_km} and jammer depth "
                f"{self.field.depth_km} describe different water columns")

    @property
    def distance_law(self) -> DistanceLaw:
        return DistanceLaw(dmax_km=self.env.dmax_km)


@functools.lru_cache(maxsize=256)
def _derived(scenario: Scenario):
    psi = psi_from_taps(scenario.taps, scenario.env.frequency_khz).psi
    sigma2 = noise_power(scenario.env)
    alpha = absorption_db_per_km(scenario.env.frequency_khz)
    nu10 = scenario.env.spreading_factor * 10.0
    return psi, sigma2, alpha, nu10


def scenario_psi(scenario: Scenario) -> float:
    return _derived(scenario)[0]


def scenario_sigma2(scenario: Scenario) -> float:
    return _derived(scenario)[1]


@functools.lru_cache(maxsize=256)
def resolved_field(scenario: Scenario) -> JammerField:
    """Field with jammer fading defaulted to the legitimate link's psi."""
    if scenario.field.jammer_fading is not None:
        return scenario.field
    return dataclasses.replace(
        scenario.field, jammer_fading=FadingParams(psi=scenario_psi(scenario)))


def _transform(scenario: Scenario) -> InterferenceTransform:
    return interference_transform(resolved_field(scenario), scenario.env)


def received_kappa(scenario: Scenario, d_km):
    """Mean-scale factor of the received power: P_t / PL(d), vectorized."""
    psi, sigma2, alpha, nu10 = _derived(scenario)
    d = np.asarray(d_km, dtype=float)
    pl_db = nu10 * np.log10(d * 1000.0) + d * alpha
    return scenario.link.tx_power * 10.0 ** (-0.1 * pl_db)


@functools.lru_cache(maxsize=256)
def _distance_grid(scenario: Scenario):
    """Composite Gauss-Legendre grid on [1 m, dmax].

    Log-spaced panels resolve the decades of path-loss variation at short
    range; linear ~0.35 km panels resolve the far region where the coverage
    transition sits.  Weights carry the plain dd measure; dividing by dmax
    gives the uniform distance average.  Validated against adaptive
    quadrature in the test suite (~1e-12 agreement).
    """
    dmax = scenario.env.dmax_km
    near_hi = min(1.0, 0.5 * dmax)
    log_edges = np.geomspace(MIN_DISTANCE_KM, near_hi, _N_DISTANCE_PANELS // 2 + 1)
    lin_edges = np.linspace(near_hi, dmax, _N_DISTANCE_PANELS // 2 + 4)
    edges = np.concatenate([log_edges, lin_edges[1:]])
    nodes = []
    weights = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(0.5 * (hi + lo) + half * _GL_NODES)
        weights.append(half * _GL_WEIGHTS)
    d = np.concatenate(nodes)
    w = np.concatenate(weights)
    return d, w, received_kappa(scenario, d)


def _cf_conditional(scenario: Scenario, d_km: float, lam: float):
    """CF of U = zeta - tau*J at fixed distance, vectorized over t."""
    psi = scenario_psi(scenario)
    tau = scenario.link.sjnr_threshold
    kappa = float(received_kappa(scenario, d_km))
    transform = _transform(scenario)

    def cf(t):
        t = np.asarray(t, dtype=float)
        denom = 1.0 - 2.0j * kappa * t
        lt_zeta = np.exp(1j * psi * kappa * t / denom) / denom
        return lt_zeta * transform.lt_many(1j * tau * t, lam)

    return cf


def conditional_coverage(d_km: float, scenario: Scenario,
                         spec: QuadratureSpec | None = None) -> float:
    """P[SJNR >= tau | D = d]."""
    if not MIN_DISTANCE_KM <= d_km <= scenario.env.dmax_km:
        raise DomainError(
            f"distance {d_km} km outside [{MIN_DISTANCE_KM}, "
            f"{scenario.env.dmax_km}] km")
    sigma2 = scenario_sigma2(scenario)
    tau = scenario.link.sjnr_threshold
    lam = scenario.field.intensity_per_km2
    cf = _cf_conditional(scenario, d_km, lam)
    return gil_pelaez_tail(cf, tau * sigma2, spec or COVERAGE_SPEC)


def coverage(scenario: Scenario, spec: QuadratureSpec | None = None,
             method: str = "swapped") -> float:
    """Overall coverage: uniform distance average of conditional coverage."""
    spec = spec or COVERAGE_SPEC
    dmax = scenario.env.dmax_km
    if method == "direct":
        def f(d_arr):
            return np.array([conditional_coverage(float(d), scenario, spec)
                             for d in d_arr])
        outer = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-8, max_evals=40_000,
                               transform="none")
        res = integrate(f, MIN_DISTANCE_KM, dmax, outer)
        return float(res.value) / dmax
    if method != "swapped":
        raise ValueError(f"unknown coverage method {method!r}")

    psi = scenario_psi(scenario)
    sigma2 = scenario_sigma2(scenario)
    tau = scenario.link.sjnr_threshold
    lam = scenario.field.intensity_per_km2
    transform = _transform(scenario)
    d, w, kappas = _distance_grid(scenario)
    mass = float(np.sum(w))  # = dmax - 1 m

    def cf(t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape, dtype=complex)
        for i, ti in enumerate(t):
            denom = 1.0 - 2.0j * kappas * ti
            lt_zeta = np.exp(1j * psi * kappas * ti / denom) / denom
            out[i] = np.sum(w * lt_zeta) / mass
        return out * transform.lt_many(1j * tau * t, lam)

    tail = gil_pelaez_tail(cf, tau * sigma2, spec)
    return tail * mass / dmax


def conditional_rate(d_km: float, scenario: Scenario,
                     spec: QuadratureSpec | None = None) -> float:
    """Spectral efficiency E[log2(1 + SJNR)] at fixed distance, bits/s/Hz."""
    if not MIN_DISTANCE_KM <= d_km <= scenario.env.dmax_km:
        raise DomainError(
            f"distance {d_km} km outside [{MIN_DISTANCE_KM}, "
            f"{scenario.env.dmax_km}] km")
    psi = scenario_psi(scenario)
    sigma2 = scenario_sigma2(scenario)
    lam = scenario.field.intensity_per_km2
    kappa = float(received_kappa(scenario, d_km))
    transform = _transform(scenario)

    def integrand(s):
        s = np.asarray(s, dtype=float)
        bracket = one_minus_lt_fading(s, psi, kappa)
        return (transform.lt_many(s, lam).real * bracket
                * np.exp(-sigma2 * s) / s)

    spec = spec or RATE_SPEC
    spec = dataclasses.replace(spec, transform="log",
                               transform_scale=1.0 / sigma2)
    res = integrate(integrand, 0.0, math.inf, spec)
    return float(res.value) / LN2


def average_rate(scenario: Scenario, spec: QuadratureSpec | None = None,
                 method: str = "swapped") -> float:
    """Distance-averaged spectral efficiency in bits/s/Hz."""
    spec = spec or RATE_SPEC
    dmax = scenario.env.dmax_km
    if method == "direct":
        def f(d_arr):
            return np.array([conditional_rate(float(d), scenario, spec)
                             for d in d_arr])
        outer = QuadratureSpec(rel_tol=1e-6, abs_tol=1e-8, max_evals=40_000,
                               transform="none")
        res = integrate(f, MIN_DISTANCE_KM, dmax, outer)
        return float(res.value) / dmax
    if method != "swapped":
        raise ValueError(f"unknown average_rate method {method!r}")

    psi = scenario_psi(scenario)
    sigma2 = scenario_sigma2(scenario)
    lam = scenario.field.intensity_per_km2
    transform = _transform(scenario)
    d, w, kappas = _distance_grid(scenario)

    def integrand(s):
        s = np.asarray(s, dtype=float)
        out = np.empty(s.shape, dtype=float)
        for i, si in enumerate(s):
            out[i] = float(np.sum(w * one_minus_lt_fading(si, psi, kappas)))
        return (out / dmax) * transform.lt_many(s, lam).real \
            * np.exp(-sigma2 * s) / s

    spec = dataclasses.replace(spec, transform="log",
                               transform_scale=1.0 / sigma2)
    res = integrate(integrand, 0.0, math.inf, spec)
    return float(res.value) / LN2


def energy_efficiency(scenario: Scenario,
                      spec: QuadratureSpec | None = None) -> float:
    """Bits per joule: bandwidth * average rate / (static + transmit power)."""
    total_power = scenario.link.static_power + scenario.link.tx_power
    if not total_power > 0.0:
        raise DomainError("static + transmit power must be positive")
    return (scenario.env.bandwidth_hz * average_rate(scenario, spec)
            / total_power)


def semianalytic_coverage(scenario: Scenario, n_fields: int,
                          rng: RandomStream):
    """Coverage by averaging the Marcum tail over sampled (distance, J) pairs.

    Third, independent estimator: jammer geometry and fading are sampled but
    the legitimate fading is integrated out in closed form.
    """
    from .montecarlo import MetricEstimate, sample_deployments

    if n_fields < 1000:
        raise ValueError(f"n_fields must be >= 1000, got {n_fields}")
    psi = scenario_psi(scenario)
    sigma2 = scenario_sigma2(scenario)
    tau = scenario.link.sjnr_threshold
    pt = scenario.link.tx_power
    sqrt_psi = math.sqrt(psi)

    _, d_km, jam = sample_deployments(scenario, n_fields, rng,
                                      with_fading=False)
    pl_lin = received_kappa(scenario, d_km) / pt  # 1/PL(d)
    b2 = tau * (jam + sigma2) / (pt * pl_lin)
    values = np.array([marcum_q1(sqrt_psi, math.sqrt(v)) for v in b2])
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n_fields))
    half = 1.959963984540054 * stderr
    lo = max(mean - half, 0.0)
    hi = min(mean + half, 1.0)
    return MetricEstimate(value=mean, stderr=stderr, ci95=(lo, hi),
                          n=n_fields)
