"""Command-line entry point: ``hornscan design|simulate|compare|sweep``.

Exit codes: 0 success, 1 filesystem failure, 2 bad config, 3 numerical or
geometry error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import io as hio
from .bpm import SimReport, simulate_scan
from .config import RunConfig, format_config, parse_config
from .design import (
    Comparison,
    ScannerProfile,
    compare_designs,
    integrate_trajectory,
    rect_comparator,
)
from .domains import build_domain_pattern
from .errors import ConfigError, HornscanError
from .optics import DriveSpec, far_field_divergence, index_contrast, poling_safety, resolvable_spots

log = logging.getLogger("hornscan")


@dataclass
class OutputBundle:
    out_dir: Path
    report: Path | None = None
    geometry: Path | None = None
    profile_table: Path | None = None
    fan_table: Path | None = None
    fan_plot: Path | None = None
    field_images: list[Path] = field(default_factory=list)
    config_echo: Path | None = None


def _angles(theta: float) -> dict:
    return {"rad": theta, "mrad": 1e3 * theta}


def _design(cfg: RunConfig, mode: str | None = None):
    mode = mode or cfg.widening_mode
    dn = index_contrast(cfg.material, DriveSpec(abs(cfg.drive.voltage), cfg.drive.thickness))
    profile = integrate_trajectory(cfg.design, dn, cfg.material, cfg.beam, mode=mode)
    pattern = build_domain_pattern(profile, cfg.design.n_interfaces, cfg.exterior)
    return dn, profile, pattern


def _comparison(cfg: RunConfig, profile: ScannerProfile) -> Comparison:
    rect = rect_comparator(profile.theta_int, profile.length, cfg.material, cfg.beam)
    return compare_designs(profile, rect, cfg.beam)


def _comparison_block(cmp: Comparison, cfg: RunConfig, profile: ScannerProfile) -> dict:
    dtheta = far_field_divergence(cfg.beam)
    spots = resolvable_spots(abs(profile.theta_ext), dtheta)
    return {
        "theta_int": _angles(cmp.theta_int),
        "horn": {
            "index_contrast": cmp.horn_dn,
            "entrance_width_m": cmp.horn_entrance_width,
            "exit_width_m": cmp.horn_exit_width,
            "voltage_V": abs(cfg.drive.voltage),
            "spots_total": spots,
        },
        "rectangle": {
            "width_m": cmp.rect_width,
            "index_contrast": cmp.rect_dn,
            "voltage_V": abs(cfg.drive.voltage) * cmp.voltage_ratio,
            "spots_total": spots,
        },
        "voltage_ratio": cmp.voltage_ratio,
        "sensitivity_ratio": cmp.sensitivity_ratio,
    }


def _header(cfg: RunConfig, command: str, dn: float) -> dict:
    check = poling_safety(cfg.material, cfg.drive)
    return {
        "command": command,
        "widening_mode": cfg.widening_mode,
        "exterior": cfg.exterior,
        "drive": {"voltage_V": cfg.drive.voltage, "thickness_m": cfg.drive.thickness},
        "index_contrast": dn,
        "poling": {"ratio": check.ratio, "limit": check.limit, "pass": check.passed},
    }


def _prepare(out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_design(cfg: RunConfig, out_dir) -> OutputBundle:
    out = _prepare(out_dir)
    dn, profile, pattern = _design(cfg)
    other = "design" if cfg.widening_mode == "selfconsistent" else "selfconsistent"
    alt = integrate_trajectory(cfg.design, dn, cfg.material, cfg.beam, mode=other)
    dtheta = far_field_divergence(cfg.beam)
    report = _header(cfg, "design", dn)
    report["profile"] = {
        "entrance_width_walls_m": profile.entrance_width,
        "exit_width_walls_m": profile.exit_width,
        "entrance_width_design_m": float(profile.width_design[0]),
        "exit_width_design_m": float(profile.width_design[-1]),
        "exit_offset_m": float(profile.x[-1]),
        "widening": profile.gamma,
        "samples": len(profile.z),
    }
    report["deflection"] = {
        "theta_int": _angles(profile.theta_int),
        "theta_ext": _angles(profile.theta_ext),
        "by_mode": {
            profile.mode: _angles(profile.theta_ext),
            alt.mode: _angles(alt.theta_ext),
        },
    }
    report["spots"] = {
        "delta_theta": _angles(dtheta),
        "spots_total": resolvable_spots(abs(profile.theta_ext), dtheta),
    }
    report["pattern"] = {
        "n_interfaces": pattern.n_interfaces,
        "n_prisms": len(pattern.prisms),
        "area_m2": pattern.area(),
    }
    if cfg.comparator and dn > 0:
        report["comparator"] = _comparison_block(_comparison(cfg, profile), cfg, profile)

    b = OutputBundle(
        out_dir=out,
        report=hio.confined(out, "design_report.json"),
        geometry=hio.confined(out, "geometry.svg"),
        profile_table=hio.confined(out, "profile.csv"),
    )
    hio.write_text(b.profile_table, hio.profile_table(profile))
    hio.write_text(b.geometry, hio.pattern_svg(pattern))
    hio.write_text(b.report, hio.report_json(report))
    return b


def _sim_entry(r: SimReport) -> dict:
    return {
        "voltage_V": r.voltage,
        "theta_int": _angles(r.theta_int),
        "theta_ext": _angles(r.theta_ext),
        "exit_1e2_radius_m": r.exit_1e2_radius,
        "exit_centroid_m": r.exit_centroid,
        "truncation_loss": float(r.truncation_loss),
        "spots_total": r.spots_total,
    }


def linear_fit(reports: list[SimReport]) -> dict:
    """Best-fit line through the origin of theta_ext against voltage."""
    v = np.array([r.voltage for r in reports])
    t = np.array([r.theta_ext for r in reports])
    nz = v != 0
    slope = float(np.dot(v, t) / np.dot(v, v)) if np.any(nz) else 0.0
    dev = float(np.max(np.abs(t[nz] - slope * v[nz]) / np.abs(slope * v[nz]))) if np.any(nz) and slope else 0.0
    return {"slope_rad_per_V": slope, "max_relative_deviation": dev}


def _scan(cfg: RunConfig, out: Path, voltages, command: str, images: bool) -> OutputBundle:
    dn, profile, pattern = _design(cfg)
    results = simulate_scan(
        pattern, cfg.material, cfg.beam, voltages, cfg.drive.thickness, cfg.grid,
        workers=cfg.workers, record_every=cfg.record_every if images else 0,
    )
    reports = [r for r, _ in results]
    b = OutputBundle(
        out_dir=out,
        report=hio.confined(out, f"{command}_report.json"),
        fan_table=hio.confined(out, "fan.csv"),
        fan_plot=hio.confined(out, "fan.svg"),
    )
    if images:
        for r, hist in results:
            if hist is None:
                continue
            tag = ("p" if r.voltage > 0 else "m" if r.voltage < 0 else "") + f"{abs(r.voltage):g}V"
            p = hio.confined(out, f"field_{tag}.pgm")
            hio.write_bytes(p, hio.pgm_bytes(hist[::-1]))  # entrance at the bottom
            b.field_images.append(p)
    top = max(reports, key=lambda r: (abs(r.voltage), r.voltage))
    report = _header(cfg, command, dn)
    report["design_prediction"] = {"theta_ext": _angles(profile.theta_ext)}
    report["reports"] = [_sim_entry(r) for r in reports]
    report["full_drive"] = {
        "voltage_V": top.voltage,
        "theta_ext": _angles(top.theta_ext),
        "spots_total": top.spots_total,
        "truncation_loss": float(top.truncation_loss),
    }
    report["linearity"] = linear_fit(reports)
    hio.write_text(b.fan_table, hio.fan_table(reports))
    hio.write_text(b.fan_plot, hio.fan_svg(reports))
    hio.write_text(b.report, hio.report_json(report))
    return b


def run_simulate(cfg: RunConfig, out_dir) -> OutputBundle:
    return _scan(cfg, _prepare(out_dir), cfg.voltages, "simulate", images=True)


def run_sweep(cfg: RunConfig, out_dir) -> OutputBundle:
    vmax = abs(cfg.drive.voltage)
    voltages = np.linspace(-vmax, vmax, cfg.sweep_points).tolist()
    return _scan(cfg, _prepare(out_dir), voltages, "sweep", images=False)


def run_compare(cfg: RunConfig, out_dir) -> OutputBundle:
    out = _prepare(out_dir)
    dn, profile, _ = _design(cfg)
    cmp = _comparison(cfg, profile)
    report = _header(cfg, "compare", dn)
    report["comparison"] = _comparison_block(cmp, cfg, profile)
    b = OutputBundle(out_dir=out, report=hio.confined(out, "compare_report.json"))
    hio.write_text(b.report, hio.report_json(report))
    return b


COMMANDS = {
    "design": run_design,
    "simulate": run_simulate,
    "compare": run_compare,
    "sweep": run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hornscan", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS) + ["defaults"])
    ap.add_argument("--config", type=Path, help="INI config; omitted means paper defaults")
    ap.add_argument("--out", type=Path, default=Path("out"))
    ap.add_argument("--widening-mode", choices=["design", "selfconsistent"])
    ap.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s"
    )
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text)
        if args.widening_mode:
            cfg = replace(cfg, widening_mode=args.widening_mode)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    if args.command == "defaults":
        sys.stdout.write(format_config(cfg))
        return 0
    try:
        bundle = COMMANDS[args.command](cfg, args.out)
    except HornscanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"filesystem error at {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    log.info("wrote %s", bundle.report)
    for p in bundle.field_images:
        log.info("wrote %s", p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
