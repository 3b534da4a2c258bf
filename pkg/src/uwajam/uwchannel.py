"""Underwater acoustic propagation and single-link fading statistics.

Deterministic side: Thorp absorption, spreading+absorption path loss, and
ambient noise power over the operating band.  Statistical side: the channel
gain magnitude-squared |H|^2 is noncentral chi-squared with two degrees of
freedom; its noncentrality psi comes from the multipath tap profile via the
phased tap sum.

Power scale note: transmit/jamming powers, the noise level and every linear
power derived from them live on one consistent relative scale.  The default
noise level bakes the usual ~171 dB source-level offset between watts and
the 50 - 18 log10(f) ambient-noise convention into the noise constant, so
that plain-watt transmit powers can be used directly.  No absolute
micro-pascal calibration is attempted anywhere.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics.marcum import marcum_q1
from .numerics.streams import RandomStream

# Tuned defaults (see README): 22 kHz carrier, 10 kHz band, practical
# spreading, 18 dB/decade ambient noise on the relative power scale.
DEFAULT_FREQUENCY_KHZ = 22.0
DEFAULT_BANDWIDTH_HZ = 1.0e4
DEFAULT_SPREADING_FACTOR = 1.5
DEFAULT_NOISE_LEVEL_DB = -107.0
DEFAULT_NOISE_DECAY = 1.8

DEFAULT_TAP_DELAYS_S = (0.0, 1e-3, 2e-3, 3e-3, 4e-3)
DEFAULT_TAP_GAINS = (1.0, 0.5, 0.25, 0.125, 0.0625)


@dataclass(frozen=True)
class EnvironmentConfig:
    """Acoustic environment of one water-column scenario."""

    frequency_khz: float = DEFAULT_FREQUENCY_KHZ
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    spreading_factor: float = DEFAULT_SPREADING_FACTOR
    noise_level_db: float = DEFAULT_NOISE_LEVEL_DB
    noise_decay: float = DEFAULT_NOISE_DECAY
    depth_km: float = 0.1
    dmax_km: float = math.sqrt(10.0 ** 2 + 0.1 ** 2)

    def __post_init__(self):
        if not (self.frequency_khz > 0.0 and math.isfinite(self.frequency_khz)):
            raise ValueError(f"frequency_khz must be positive, got {self.frequency_khz}")
        if not self.bandwidth_hz > 0.0:
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")
        if not 1.0 <= self.spreading_factor <= 2.0:
            raise ValueError(
                f"spreading_factor must be in [1, 2], got {self.spreading_factor}")
        if not self.depth_km > 0.0:
            raise ValueError(f"depth_km must be positive, got {self.depth_km}")
        if not self.dmax_km >= self.depth_km:
            raise ValueError(
                f"dmax_km ({self.dmax_km}) must be >= depth_km ({self.depth_km})")


@dataclass(frozen=True)
class TapProfile:
    """Multipath taps: (delay seconds, mean gain) pairs, unit per-path sigma."""

    taps: tuple[tuple[float, float], ...] = tuple(
        zip(DEFAULT_TAP_DELAYS_S, DEFAULT_TAP_GAINS))
    per_path_sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "taps",
                           tuple((float(d), float(g)) for d, g in self.taps))
        if len(self.taps) == 0:
            raise ValueError("need at least one tap")
        for delay, gain in self.taps:
            if delay < 0.0:
                raise ValueError(f"negative tap delay {delay}")
            if not (math.isfinite(gain) and gain >= 0.0):
                raise ValueError(f"tap mean gain must be finite and >= 0, got {gain}")
        if self.per_path_sigma != 1.0:
            raise ValueError("per-path sigma is fixed at 1")


@dataclass(frozen=True)
class FadingParams:
    """Noncentrality of the |H|^2 distribution (2-dof noncentral chi-sq)."""

    psi: float

    def __post_init__(self):
        if not (math.isfinite(self.psi) and self.psi >= 0.0):
            raise ValueError(f"psi must be finite and >= 0, got {self.psi}")


def absorption_db_per_km(f_khz: float) -> float:
    """Thorp absorption coefficient in dB/km, frequency in kHz."""
    if not (math.isfinite(f_khz) and f_khz > 0.0):
        raise DomainError(f"frequency must be positive and finite, got {f_khz}")
    f2 = f_khz * f_khz
    return (0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2)
            + 2.75e-4 * f2 + 0.003)


def pathloss_db(env: EnvironmentConfig, d_m: float) -> float:
    """Spreading + absorption path loss in dB at 3-D distance d_m meters.

    The spreading reference distance is 1 m; absorption scales with the
    distance in km.
    """
    if not d_m >= 1.0:
        raise DomainError(f"distance {d_m} m is below the 1 m reference")
    alpha = absorption_db_per_km(env.frequency_khz)
    return (env.spreading_factor * 10.0 * math.log10(d_m)
            + (d_m / 1000.0) * alpha)


def noise_power(env: EnvironmentConfig) -> float:
    """Total ambient noise power over the band, linear relative units."""
    n_db = env.noise_level_db - env.noise_decay * 10.0 * math.log10(env.frequency_khz)
    return env.bandwidth_hz * 10.0 ** (n_db / 10.0)


def psi_from_taps(taps: TapProfile, f_khz: float) -> FadingParams:
    """Noncentrality psi = (2/L) |sum_l e^{-j 2 pi f xi_l} E[h_l]|^2."""
    f_hz = 1000.0 * f_khz
    total = 0.0 + 0.0j
    for delay, gain in taps.taps:
        total += cmath.exp(-2j * math.pi * f_hz * delay) * gain
    L = len(taps.taps)
    return FadingParams(psi=(2.0 / L) * abs(total) ** 2)


def sample_fading(params: FadingParams, rng: RandomStream) -> float:
    """One |H|^2 draw: (Z1 + sqrt(psi))^2 + Z2^2."""
    z1, z2 = rng.normal_pair()
    a = z1 + math.sqrt(params.psi)
    return a * a + z2 * z2


def fading_cdf(x: float, params: FadingParams) -> float:
    """P[|H|^2 <= x] = 1 - Q1(sqrt(psi), sqrt(x))."""
    if not x >= 0.0:
        raise DomainError(f"fading_cdf needs x >= 0, got {x}")
    return 1.0 - marcum_q1(math.sqrt(params.psi), math.sqrt(x))


def lt_fading(s, params: FadingParams, kappa: float = 1.0):
    """Laplace transform E[exp(-s * kappa * |H|^2)].

    Valid on Re(1 + 2*kappa*s) > 0.  Accepts scalar or ndarray s (real or
    complex); with kappa = P/PL this is the transform of the received power.
    """
    if kappa < 0.0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    s_arr = np.asarray(s)
    denom = 1.0 + 2.0 * kappa * s_arr
    if np.any(denom.real <= 0.0):
        raise DomainError("lt_fading argument outside analyticity region "
                          "Re(1 + 2*kappa*s) > 0")
    out = np.exp(-params.psi * kappa * s_arr / denom) / denom
    if np.isscalar(s) or np.ndim(s) == 0:
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def _cexpm1(z):
    """exp(z) - 1 for complex arrays, stable near z = 0.

    Real part expm1(x)cos(y) - 2 sin^2(y/2) and imaginary part e^x sin(y)
    are both free of the 1-ulp cancellation that 1 - exp(z) suffers.
    """
    x = z.real
    y = z.imag
    re = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    return re + 1j * (np.exp(x) * np.sin(y))


def one_minus_lt_fading(s, psi: float, kappa: float):
    """1 - E[exp(-s*kappa*|H|^2)], cancellation-free for small s*kappa.

    Written as (b - expm1(-a))/(1+b) with b = 2*kappa*s and
    a = psi*kappa*s/(1+b), which stays fully accurate when the transform is
    within an ulp of 1 (far jammers, small transform arguments).
    """
    s_arr = np.asarray(s)
    b = 2.0 * kappa * s_arr
    denom = 1.0 + b
    a = psi * kappa * s_arr / denom
    if np.iscomplexobj(s_arr):
        return (b - _cexpm1(-a)) / denom
    return (b - np.expm1(-a)) / denom
