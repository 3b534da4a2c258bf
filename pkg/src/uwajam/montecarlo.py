"""Seeded Monte Carlo deployment simulation.

One deployment draws the transmitter distance, the legitimate fading, the
jammer population and every jammer's fading, then reports the resulting
SJNR.  Trial i always consumes substream i of the plan's root stream, so an
estimate is bit-identical no matter how the trial range is partitioned
across workers (``UWAJAM_THREADS`` caps the pool).

Estimators aggregate with exact (fsum) summation; coverage uses the Wald
binomial interval, rates the plain sample standard error.
"""

from __future__ import annotations

import functools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .analysis import Scenario, resolved_field, scenario_psi, scenario_sigma2
from .numerics.streams import RandomStream
from .uwchannel import absorption_db_per_km

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class TrialPlan:
    """A reproducible batch of deployments."""

    n_trials: int
    seed: int
    scenario: Scenario

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")


@dataclass(frozen=True)
class MetricEstimate:
    """Point estimate with standard error and a 95% confidence interval."""

    value: float
    stderr: float
    ci95: tuple[float, float]
    n: int

    def __post_init__(self):
        lo, hi = self.ci95
        if not (lo <= self.value <= hi):
            raise ValueError(f"CI {self.ci95} does not bracket {self.value}")
        if not self.stderr >= 0.0:
            raise ValueError(f"stderr must be >= 0, got {self.stderr}")


def worker_count() -> int:
    raw = os.environ.get("UWAJAM_THREADS", "").strip()
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


@functools.lru_cache(maxsize=256)
def trial_params(scenario: Scenario) -> tuple:
    """Flatten a scenario into the kernel parameter tuple."""
    field = resolved_field(scenario)
    env = scenario.env
    if field.depth_km < 1e-3:
        raise ValueError("jammer depth below the 1 m path-loss reference")
    lam_area = (field.intensity_per_km2 * math.pi
                * field.trunc_radius_km ** 2)
    return (
        env.dmax_km,
        math.sqrt(scenario_psi(scenario)),
        math.sqrt(field.jammer_fading.psi),
        scenario.link.tx_power,
        field.jam_power,
        scenario_sigma2(scenario),
        lam_area,
        field.trunc_radius_km,
        field.depth_km,
        env.spreading_factor * 10.0,
        absorption_db_per_km(env.frequency_khz),
    )


def run_trial(scenario: Scenario, rng: RandomStream) -> tuple[float, float]:
    """One deployment from a live stream; returns (sjnr, distance_km)."""
    from . import _pykernels  # scalar reference path

    params = trial_params(scenario)
    rng._state, sjnr, d_km, _ = _pykernels.trial_draw(rng._state, params, True)
    return sjnr, d_km


def sample_deployments(scenario: Scenario, n: int, rng: RandomStream,
                       with_fading: bool = True):
    """Arrays (sjnr, d_km, jam) for n deployments rooted at rng's identity.

    Deployment i uses substream i of (rng.seed, rng.stream_id); the root
    stream's live state is not consumed.
    """
    params = trial_params(scenario)
    sjnr = np.empty(n, dtype=np.float64)
    d_km = np.empty(n, dtype=np.float64)
    jam = np.empty(n, dtype=np.float64)
    workers = min(worker_count(), max(1, n // 10_000))
    if workers <= 1:
        kernels.simulate_trials(rng.seed, rng.stream_id, 0, n, params,
                                with_fading, sjnr, d_km, jam)
    else:
        bounds = np.linspace(0, n, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(kernels.simulate_trials, rng.seed, rng.stream_id,
                            int(lo), int(hi), params, with_fading,
                            sjnr, d_km, jam)
                for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
            ]
            for fut in futures:
                fut.result()
    return sjnr, d_km, jam


@functools.lru_cache(maxsize=2)
def _run_trials(plan: TrialPlan):
    sjnr, d_km, jam = sample_deployments(plan.scenario, plan.n_trials,
                                         RandomStream(plan.seed), True)
    for arr in (sjnr, d_km, jam):
        arr.flags.writeable = False
    return sjnr, d_km, jam


def estimate_coverage(plan: TrialPlan) -> MetricEstimate:
    """Fraction of trials with SJNR >= threshold, Wald interval."""
    sjnr, _, _ = _run_trials(plan)
    n = plan.n_trials
    hits = int(np.count_nonzero(sjnr >= plan.scenario.link.sjnr_threshold))
    p = hits / n
    stderr = math.sqrt(p * (1.0 - p) / n)
    lo = max(p - _Z95 * stderr, 0.0)
    hi = min(p + _Z95 * stderr, 1.0)
    return MetricEstimate(value=p, stderr=stderr, ci95=(lo, hi), n=n)


def estimate_rate(plan: TrialPlan) -> MetricEstimate:
    """Mean spectral efficiency log2(1 + SJNR) in bits/s/Hz."""
    sjnr, _, _ = _run_trials(plan)
    n = plan.n_trials
    vals = np.log2(1.0 + sjnr)
    mean = math.fsum(vals) / n
    if n > 1:
        var = math.fsum((v - mean) ** 2 for v in vals) / (n - 1)
        stderr = math.sqrt(var / n)
    else:
        stderr = 0.0
    return MetricEstimate(value=mean, stderr=stderr,
                          ci95=(mean - _Z95 * stderr, mean + _Z95 * stderr),
                          n=n)


def estimate_ee(plan: TrialPlan) -> MetricEstimate:
    """Energy efficiency: bandwidth * rate estimate / total power."""
    link = plan.scenario.link
    total_power = link.static_power + link.tx_power
    if not total_power > 0.0:
        raise ValueError("static + transmit power must be positive")
    scale = plan.scenario.env.bandwidth_hz / total_power
    rate = estimate_rate(plan)
    return MetricEstimate(value=rate.value * scale, stderr=rate.stderr * scale,
                          ci95=(rate.ci95[0] * scale, rate.ci95[1] * scale),
                          n=rate.n)
