"""Scenario config files and sweep specifications.

Format: flat ``key = value`` lines with ``#`` comments, plus optional
``[scenario.<name>]`` sections holding per-scenario overrides.  Unset keys
fall back to the named water-column preset (shallow / mid / deep) and the
module defaults.

Example::

    preset = shallow
    tx_power = 20
    intensity_per_km2 = 0.01

    [scenario.deep]
    depth_km = 2
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .analysis import LinkConfig, Scenario
from .stochgeom import JammerField
from .uwchannel import EnvironmentConfig, FadingParams, TapProfile

# Water-column presets: seabed depth and the multipath profile of the
# legitimate link.  Shallow columns carry far more coherent boundary-
# reflection energy (strong surface/bottom bounces at short range), so the
# tap gains decay slowly; deep columns are left with a weak late-arrival
# structure.  Jammer channels use the common reference profile (ratio 0.5
# at 22 kHz) in every preset so that scenario differences isolate to the
# legitimate link geometry and channel.
PRESET_DEPTHS_KM = {"shallow": 0.1, "mid": 1.0, "deep": 2.0}
PRESET_TAP_RATIOS = {"shallow": 0.92, "mid": 0.65, "deep": 0.05}
PRESET_TAP_DELAYS_S = (0.0, 1e-3, 2e-3, 3e-3, 4e-3)
REFERENCE_JAMMER_PSI = 1.5015625  # psi of the ratio-0.5 profile at 22 kHz

SWEEP_AXES = ("tx_power", "jam_power", "intensity", "threshold")
ENGINES = ("analytic", "montecarlo", "semianalytic")

_ENV_KEYS = ("frequency_khz", "bandwidth_hz", "spreading_factor",
             "noise_level_db", "noise_decay", "depth_km", "dmax_km")
_FIELD_KEYS = ("intensity_per_km2", "jam_power", "trunc_radius_km",
               "jammer_psi")
_LINK_KEYS = ("tx_power", "sjnr_threshold", "static_power")
_TAP_KEYS = ("tap_delays_ms", "tap_gains")
_SCENARIO_KEYS = set(_ENV_KEYS) | set(_FIELD_KEYS) | set(_LINK_KEYS) \
    | set(_TAP_KEYS) | {"preset"}
_SWEEP_KEYS = {"axis", "values", "scenarios", "engines", "n_trials", "seed"}


class ConfigError(ValueError):
    pass


def _parse_lines(text: str):
    """-> (top: dict, sections: dict[name, dict]); values keep source lineno."""
    top: dict = {}
    sections: dict = {}
    current = top
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not (line.endswith("]") and line.startswith("[scenario.")):
                raise ConfigError(
                    f"line {lineno}: bad section header {line!r} "
                    "(expected [scenario.<name>])")
            name = line[len("[scenario."):-1].strip()
            if not name:
                raise ConfigError(f"line {lineno}: empty scenario name")
            current = sections.setdefault(name, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        current[key] = (value, lineno)
    return top, sections


def _float(key, value, lineno):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be a number, got {value!r}")


def _float_list(key, value, lineno):
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} must be a comma list of "
                          f"numbers, got {value!r}")


def default_scenario(preset: str = "shallow") -> Scenario:
    """The named water-column preset with all defaults filled in."""
    if preset not in PRESET_DEPTHS_KM:
        raise ConfigError(f"unknown preset {preset!r}; "
                          f"choose from {sorted(PRESET_DEPTHS_KM)}")
    depth = PRESET_DEPTHS_KM[preset]
    ratio = PRESET_TAP_RATIOS[preset]
    dmax = math.sqrt(10.0 ** 2 + depth ** 2)
    taps = TapProfile(taps=tuple(
        (d, ratio ** i) for i, d in enumerate(PRESET_TAP_DELAYS_S)))
    return Scenario(
        env=EnvironmentConfig(depth_km=depth, dmax_km=dmax),
        field=JammerField(depth_km=depth,
                          jammer_fading=FadingParams(REFERENCE_JAMMER_PSI)),
        link=LinkConfig(),
        taps=taps,
    )


def _apply_keys(scenario: Scenario, entries: dict) -> Scenario:
    env_kw: dict = {}
    field_kw: dict = {}
    link_kw: dict = {}
    delays = gains = None
    for key, (value, lineno) in entries.items():
        if key == "preset":
            continue
        if key not in _SCENARIO_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key == "tap_delays_ms":
            delays = _float_list(key, value, lineno)
        elif key == "tap_gains":
            gains = _float_list(key, value, lineno)
        elif key == "jammer_psi":
            field_kw["jammer_fading"] = FadingParams(psi=_float(key, value, lineno))
        elif key in _ENV_KEYS:
            env_kw[key] = _float(key, value, lineno)
        elif key in _FIELD_KEYS:
            field_kw[key] = _float(key, value, lineno)
        elif key in _LINK_KEYS:
            link_kw[key] = _float(key, value, lineno)

    env = scenario.env
    field = scenario.field
    link = scenario.link
    taps = scenario.taps
    if "depth_km" in env_kw:
        # one water column: jammers sit on the same seabed
        field_kw.setdefault("depth_km", env_kw["depth_km"])
        env_kw.setdefault(
            "dmax_km", math.sqrt(10.0 ** 2 + env_kw["depth_km"] ** 2))
    try:
        if env_kw:
            env = dataclasses.replace(env, **env_kw)
        if field_kw:
            field = dataclasses.replace(field, **field_kw)
        if link_kw:
            link = dataclasses.replace(link, **link_kw)
        if delays is not None or gains is not None:
            old = taps.taps
            d = delays if delays is not None else tuple(t[0] * 1e3 for t in old)
            g = gains if gains is not None else tuple(t[1] for t in old)
            if len(d) != len(g):
                raise ConfigError("tap_delays_ms and tap_gains differ in length")
            taps = TapProfile(taps=tuple((di * 1e-3, gi) for di, gi in zip(d, g)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return Scenario(env=env, field=field, link=link, taps=taps)


def load_config(path, scenario: str | None = None) -> Scenario:
    """Build a Scenario from a config file.

    Precedence: preset defaults < top-level keys < matching
    ``[scenario.<name>]`` section.  ``scenario`` overrides the file's
    ``preset`` key; default preset is ``shallow``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load_config_text(text, scenario)


def load_config_text(text: str, scenario: str | None = None) -> Scenario:
    top, sections = _parse_lines(text)
    file_preset = top["preset"][0] if "preset" in top else "shallow"
    name = scenario if scenario is not None else file_preset
    base = name if name in PRESET_DEPTHS_KM else file_preset
    built = _apply_keys(default_scenario(base), top)
    if name in sections:
        built = _apply_keys(built, sections[name])
    elif scenario is not None and scenario not in PRESET_DEPTHS_KM:
        raise ConfigError(f"scenario {scenario!r} not defined in config")
    return built


def dump_config(scenario: Scenario) -> str:
    """Serialize the effective configuration; load_config_text round-trips."""
    env, field, link = scenario.env, scenario.field, scenario.link
    lines = [
        "# effective configuration",
        f"frequency_khz = {env.frequency_khz!r}",
        f"bandwidth_hz = {env.bandwidth_hz!r}",
        f"spreading_factor = {env.spreading_factor!r}",
        f"noise_level_db = {env.noise_level_db!r}",
        f"noise_decay = {env.noise_decay!r}",
        f"depth_km = {env.depth_km!r}",
        f"dmax_km = {env.dmax_km!r}",
        f"intensity_per_km2 = {field.intensity_per_km2!r}",
        f"jam_power = {field.jam_power!r}",
        f"trunc_radius_km = {field.trunc_radius_km!r}",
        f"tx_power = {link.tx_power!r}",
        f"sjnr_threshold = {link.sjnr_threshold!r}",
        f"static_power = {link.static_power!r}",
        "tap_delays_ms = " + ",".join(repr(t[0] * 1e3) for t in scenario.taps.taps),
        "tap_gains = " + ",".join(repr(t[1]) for t in scenario.taps.taps),
    ]
    if field.jammer_fading is not None:
        lines.append(f"jammer_psi = {field.jammer_fading.psi!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepSpec:
    """A grid of (scenario, engine, axis value) cells to evaluate."""

    axis: str
    values: tuple[float, ...]
    scenarios: tuple[tuple[str, Scenario], ...]
    engines: tuple[str, ...]
    n_trials: int = 100_000
    seed: int = 1

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one axis value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        if not self.engines:
            raise ConfigError("sweep needs at least one engine")
        for engine in self.engines:
            if engine not in ENGINES:
                raise ConfigError(f"unknown engine {engine!r}")
        if not self.scenarios:
            raise ConfigError("sweep needs at least one scenario")
        if self.n_trials < 1:
            raise ConfigError("n_trials must be >= 1")


def apply_axis(scenario: Scenario, axis: str, value: float) -> Scenario:
    """Scenario with one sweep-axis parameter replaced."""
    if axis == "tx_power":
        return dataclasses.replace(
            scenario, link=dataclasses.replace(scenario.link, tx_power=value))
    if axis == "jam_power":
        return dataclasses.replace(
            scenario, field=dataclasses.replace(scenario.field, jam_power=value))
    if axis == "intensity":
        return dataclasses.replace(
            scenario,
            field=dataclasses.replace(scenario.field, intensity_per_km2=value))
    if axis == "threshold":
        return dataclasses.replace(
            scenario,
            link=dataclasses.replace(scenario.link, sjnr_threshold=value))
    raise ConfigError(f"unknown sweep axis {axis!r}")


def _parse_values(value, lineno):
    if ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise ConfigError(
                f"line {lineno}: range values need start:stop:step, got {value!r}")
        start, stop, step = (_float("values", p, lineno) for p in parts)
        if step <= 0:
            raise ConfigError(f"line {lineno}: range step must be positive")
        out = []
        v = start
        while v <= stop + 1e-12 * max(abs(stop), 1.0):
            out.append(round(v, 12))
            v += step
        return tuple(out)
    return _float_list("values", value, lineno)


def load_sweep(path) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return load_sweep_text(text)


def load_sweep_text(text: str) -> SweepSpec:
    top, sections = _parse_lines(text)
    missing = {"axis", "values"} - set(top)
    if missing:
        raise ConfigError(f"sweep spec missing keys: {sorted(missing)}")

    axis = top.pop("axis")[0]
    values = _parse_values(*top.pop("values"))
    names = tuple(v.strip() for v in top.pop(
        "scenarios", ("shallow,mid,deep", 0))[0].split(","))
    engines = tuple(v.strip() for v in top.pop(
        "engines", ("analytic,montecarlo", 0))[0].split(","))
    n_trials = 100_000
    if "n_trials" in top:
        value, lineno = top.pop("n_trials")
        n_trials = int(_float("n_trials", value, lineno))
    seed = 1
    if "seed" in top:
        value, lineno = top.pop("seed")
        seed = int(_float("seed", value, lineno))

    scenario_entries = {k: v for k, v in top.items() if k in _SCENARIO_KEYS}
    unknown = set(top) - _SCENARIO_KEYS - _SWEEP_KEYS
    if unknown:
        lineno = min(top[k][1] for k in unknown)
        raise ConfigError(f"line {lineno}: unknown sweep keys {sorted(unknown)}")

    built = []
    for name in names:
        base = default_scenario(name if name in PRESET_DEPTHS_KM else "shallow")
        scn = _apply_keys(base, scenario_entries)
        if name in sections:
            scn = _apply_keys(scn, sections[name])
        elif name not in PRESET_DEPTHS_KM:
            raise ConfigError(f"sweep scenario {name!r} is neither a preset "
                              "nor a [scenario.*] section")
        built.append((name, scn))
    return SweepSpec(axis=axis, values=values, scenarios=tuple(built),
                     engines=engines, n_trials=n_trials, seed=seed)
