"""INI-style run configuration with explicit unit suffixes.

An empty file gives the paper's reference device: LiTaO3 at 632.8 nm,
30 um waist, 10 mm length, 20 interfaces, 1.3 widening, +/-1 kV on 150 um.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace

from .design import WIDENING_MODES, DesignParams
from .domains import EXTERIORS
from .errors import ConfigError
from .optics import BeamSpec, DriveSpec, MaterialSpec, poling_safety
from .raster import GridSpec

UNITS = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9},
    "voltage": {"V": 1.0, "kV": 1e3},
    "eo": {"m/V": 1.0, "pm/V": 1e-12},
    "field": {"V/m": 1.0, "kV/mm": 1e6, "V/um": 1e6, "V/µm": 1e6, "kV/m": 1e3},
}
BASE_UNIT = {"length": "m", "voltage": "V", "eo": "m/V", "field": "V/m"}

_NUM = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


@dataclass(frozen=True)
class RunConfig:
    material: MaterialSpec = field(default_factory=MaterialSpec)
    drive: DriveSpec = field(default_factory=DriveSpec)
    voltages: tuple[float, ...] = (-1e3, -500.0, 0.0, 500.0, 1e3)
    sweep_points: int = 11
    beam: BeamSpec = field(default_factory=BeamSpec)
    design: DesignParams = field(default_factory=DesignParams)
    grid: GridSpec = field(default_factory=GridSpec)
    widening_mode: str = "selfconsistent"
    exterior: str = "unbiased"
    comparator: bool = True
    workers: int = 1
    record_every: int = 10


# (section, key) -> (attribute path, kind); kind is a unit family or a plain type
SCHEMA = {
    ("material", "n_e"): ("material.n_e", float),
    ("material", "r33"): ("material.r33", "eo"),
    ("material", "poling_field"): ("material.E_pole", "field"),
    ("material", "safety_fraction"): ("material.safety_fraction", float),
    ("drive", "voltage"): ("drive.voltage", "voltage"),
    ("drive", "thickness"): ("drive.thickness", "length"),
    ("drive", "voltages"): ("voltages", "voltage_list"),
    ("drive", "sweep_points"): ("sweep_points", int),
    ("beam", "wavelength"): ("beam.lambda0", "length"),
    ("beam", "waist_radius"): ("beam.waist_radius", "length"),
    ("design", "length"): ("design.length", "length"),
    ("design", "n_interfaces"): ("design.n_interfaces", int),
    ("design", "widening"): ("design.widening", float),
    ("design", "ode_steps"): ("design.ode_steps", int),
    ("design", "widening_mode"): ("widening_mode", str),
    ("design", "exterior"): ("exterior", str),
    ("grid", "x_span"): ("grid.x_span", "length"),
    ("grid", "nx"): ("grid.nx", int),
    ("grid", "dz"): ("grid.dz", "length"),
    ("grid", "absorber_fraction"): ("grid.absorber_fraction", float),
    ("run", "comparator"): ("comparator", bool),
    ("run", "workers"): ("workers", int),
    ("run", "record_every"): ("record_every", int),
}


def parse_quantity(text: str, kind: str, where: str) -> float:
    m = _NUM.match(text)
    if not m:
        raise ConfigError(f"{where}: cannot parse {text!r} as a number with unit")
    value, unit = float(m.group(1)), m.group(2)
    table = UNITS[kind]
    if not unit:
        raise ConfigError(
            f"{where}: {text!r} needs a unit suffix (one of {', '.join(table)})"
        )
    if unit not in table:
        raise ConfigError(f"{where}: unknown {kind} unit {unit!r} (expected one of {', '.join(table)})")
    return value * table[unit]


def _convert(raw: str, kind, where: str):
    if kind == "voltage_list":
        items = [s for s in (p.strip() for p in raw.split(",")) if s]
        if not items:
            raise ConfigError(f"{where}: empty voltage list")
        vals = [parse_quantity(s, "voltage", where) for s in items]
        if len(set(vals)) != len(vals):
            raise ConfigError(f"{where}: duplicate voltages")
        return tuple(sorted(vals))
    if kind is bool:
        v = raw.strip().lower()
        if v in ("true", "yes", "on", "1"):
            return True
        if v in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"{where}: expected a boolean, got {raw!r}")
    if kind is int:
        try:
            return int(raw.strip())
        except ValueError:
            raise ConfigError(f"{where}: expected an integer, got {raw!r}") from None
    if kind is float:
        try:
            return float(raw.strip())
        except ValueError:
            raise ConfigError(f"{where}: expected a dimensionless number, got {raw!r}") from None
    if kind is str:
        return raw.strip()
    return parse_quantity(raw, kind, where)


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text; missing keys take the defaults."""
    cp = configparser.ConfigParser(interpolation=None, strict=True, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep key case
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    values: dict[str, object] = {}
    for section in cp.sections():
        for key, raw in cp.items(section, raw=True):
            where = f"[{section}] {key}"
            if (section, key) not in SCHEMA:
                raise ConfigError(f"{where}: unknown key")
            path, kind = SCHEMA[(section, key)]
            values[path] = _convert(raw, kind, where)
    return _assemble(values)


def _assemble(values: dict) -> RunConfig:
    base = RunConfig()
    groups: dict[str, dict] = {"material": {}, "drive": {}, "beam": {}, "design": {}, "grid": {}}
    top: dict = {}
    for path, v in values.items():
        if "." in path:
            g, attr = path.split(".")
            groups[g][attr] = v
        else:
            top[path] = v
    try:
        sub = {g: replace(getattr(base, g), **kw) for g, kw in groups.items()}
        cfg = replace(base, **sub, **top)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.widening_mode not in WIDENING_MODES:
        raise ConfigError(
            f"[design] widening_mode: {cfg.widening_mode!r} not in {', '.join(WIDENING_MODES)}"
        )
    if cfg.exterior not in EXTERIORS:
        raise ConfigError(f"[design] exterior: {cfg.exterior!r} not in {', '.join(EXTERIORS)}")
    if cfg.workers < 1:
        raise ConfigError("[run] workers: must be >= 1")
    if cfg.sweep_points < 2:
        raise ConfigError("[drive] sweep_points: must be >= 2")
    if cfg.record_every < 0:
        raise ConfigError("[run] record_every: must be >= 0")
    for v in (cfg.drive.voltage, *cfg.voltages):
        check = poling_safety(cfg.material, DriveSpec(v, cfg.drive.thickness))
        if not check.passed:
            raise ConfigError(
                f"[drive] voltage {v:g} V on {cfg.drive.thickness:g} m: field is "
                f"{check.ratio:.2f} of the poling field, limit {check.limit:.3f}"
            )
    return cfg


def _get(cfg: RunConfig, path: str):
    obj = cfg
    for part in path.split("."):
        obj = getattr(obj, part)
    return obj


def format_config(cfg: RunConfig) -> str:
    """Emit every key in SI base units; parse_config inverts this exactly."""
    lines: list[str] = []
    current = None
    for (section, key), (path, kind) in SCHEMA.items():
        if section != current:
            if current is not None:
                lines.append("")
            lines.append(f"[{section}]")
            current = section
        v = _get(cfg, path)
        if kind == "voltage_list":
            text = ", ".join(f"{x!r} V" for x in v)
        elif kind is bool:
            text = "true" if v else "false"
        elif kind in (int, str):
            text = str(v)
        elif kind is float:
            text = repr(float(v))
        else:
            text = f"{float(v)!r} {BASE_UNIT[kind]}"
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
