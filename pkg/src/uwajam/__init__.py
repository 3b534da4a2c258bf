"""Underwater acoustic link performance under a random field of seabed jammers.

Dual analytic / Monte-Carlo engine: coverage probability, average rate and
energy efficiency of a submerged-transmitter-to-surface-receiver link while
Poisson-distributed seabed jammers emit continuous interference.
"""

from ._backend import BACKEND
from .analysis import (DistanceLaw, LinkConfig, Scenario, average_rate,
                       conditional_coverage, conditional_rate, coverage,
                       energy_efficiency, semianalytic_coverage)
from .montecarlo import (MetricEstimate, TrialPlan, estimate_coverage,
                         estimate_ee, estimate_rate, run_trial)
from .numerics import (QuadratureSpec, RandomStream, gil_pelaez_tail,
                       integrate, marcum_q1, sample_poisson, split_stream)
from .stochgeom import (JammerField, JammerRealization, aggregate_interference,
                        jammer_pathloss_db, lt_interference, sample_field)
from .uwchannel import (EnvironmentConfig, FadingParams, TapProfile,
                        absorption_db_per_km, fading_cdf, lt_fading,
                        noise_power, pathloss_db, psi_from_taps, sample_fading)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DistanceLaw",
    "EnvironmentConfig",
    "FadingParams",
    "JammerField",
    "JammerRealization",
    "LinkConfig",
    "MetricEstimate",
    "QuadratureSpec",
    "RandomStream",
    "Scenario",
    "TapProfile",
    "TrialPlan",
    "absorption_db_per_km",
    "aggregate_interference",
    "average_rate",
    "conditional_coverage",
    "conditional_rate",
    "coverage",
    "energy_efficiency",
    "estimate_coverage",
    "estimate_ee",
    "estimate_rate",
    "fading_cdf",
    "gil_pelaez_tail",
    "integrate",
    "jammer_pathloss_db",
    "lt_fading",
    "lt_interference",
    "marcum_q1",
    "noise_power",
    "pathloss_db",
    "psi_from_taps",
    "run_trial",
    "sample_fading",
    "sample_field",
    "sample_poisson",
    "semianalytic_coverage",
    "split_stream",
]
