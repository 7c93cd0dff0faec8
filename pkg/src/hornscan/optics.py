"""Closed-form electrooptic and Gaussian-beam relations.

All quantities are SI (meters, volts, radians).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SafetyError


@dataclass(frozen=True)
class MaterialSpec:
    """Crystal constants. Defaults are z-cut LiTaO3 at 632.8 nm."""

    n_e: float = 2.1807
    r33: float = 30.5e-12  # m/V
    E_pole: float = 21e6  # V/m, i.e. 21 kV/mm
    safety_fraction: float = 1.0 / 3.0

    def __post_init__(self):
        if not self.n_e > 1:
            raise ValueError(f"n_e must exceed 1, got {self.n_e}")
        if not self.r33 > 0:
            raise ValueError(f"r33 must be positive, got {self.r33}")
        if not self.E_pole > 0:
            raise ValueError(f"E_pole must be positive, got {self.E_pole}")
        if not 0 < self.safety_fraction <= 1:
            raise ValueError(f"safety_fraction must be in (0, 1], got {self.safety_fraction}")


@dataclass(frozen=True)
class DriveSpec:
    voltage: float = 1e3
    thickness: float = 150e-6

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError(f"thickness must be positive, got {self.thickness}")
        if not math.isfinite(self.voltage / self.thickness):
            raise ValueError("drive field is not finite")

    @property
    def field(self) -> float:
        return self.voltage / self.thickness


@dataclass(frozen=True)
class BeamSpec:
    """Gaussian input beam; the waist sits at the scanner exit plane z = L."""

    lambda0: float = 0.6328e-6
    waist_radius: float = 30e-6

    def __post_init__(self):
        if not self.lambda0 > 0:
            raise ValueError(f"lambda0 must be positive, got {self.lambda0}")
        if not self.waist_radius > 0:
            raise ValueError(f"waist_radius must be positive, got {self.waist_radius}")


@dataclass(frozen=True)
class SafetyCheck:
    ratio: float
    limit: float

    @property
    def passed(self) -> bool:
        return self.ratio <= self.limit


def poling_safety(material: MaterialSpec, drive: DriveSpec) -> SafetyCheck:
    """Ratio |V/d| / E_pole; passes when at most ``material.safety_fraction``."""
    return SafetyCheck(abs(drive.field) / material.E_pole, material.safety_fraction)


def index_contrast(material: MaterialSpec, drive: DriveSpec) -> float:
    """Full index step across an inverted-domain wall.

    Each side shifts by n_e^3 r33 E / 2 with opposite sign, so the step is
    n_e^3 r33 E. Sign follows the drive voltage.
    """
    check = poling_safety(material, drive)
    if not check.passed:
        raise SafetyError(check.ratio, check.limit)
    return material.n_e**3 * material.r33 * drive.field


def snell_magnify(theta_int: float, material: MaterialSpec) -> float:
    """Small-angle refraction at the exit facet; valid for |theta| < 0.2 rad."""
    return material.n_e * theta_int


def rayleigh_range(beam: BeamSpec, material: MaterialSpec) -> float:
    """In-crystal Rayleigh range pi n_e w0^2 / lambda0."""
    return math.pi * material.n_e * beam.waist_radius**2 / beam.lambda0


def gaussian_radius(beam: BeamSpec, material: MaterialSpec, z, L: float):
    """1/e^2 intensity radius at z of a beam focused to its waist at z = L.

    Works on scalars and numpy arrays alike.
    """
    zr = rayleigh_range(beam, material)
    return beam.waist_radius * ((1 + ((z - L) / zr) ** 2) ** 0.5)


def far_field_divergence(beam: BeamSpec) -> float:
    """External full 1/e^2 angular diameter 2 lambda0 / (pi w0)."""
    return 2 * beam.lambda0 / (math.pi * beam.waist_radius)


def resolvable_spots(theta_max_one_side: float, delta_theta: float) -> int:
    """Bipolar spot count, center spot included, for spots one ``delta_theta`` apart."""
    if theta_max_one_side < 0:
        raise ValueError("theta_max_one_side must be non-negative")
    if not delta_theta > 0:
        raise ValueError("delta_theta must be positive")
    return 2 * math.floor(theta_max_one_side / delta_theta) + 1
