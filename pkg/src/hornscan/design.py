"""Horn outline synthesis and the rectangular-scanner comparator.

The beam centroid obeys x'' = (dn / n_e) / W(z) where the local width W is
twice the centroid offset plus the Gaussian radius. Two widening
conventions are supported:

``design``
    integrate with the bare width, then scale the walls by gamma.
``selfconsistent``
    the walls that are actually built (gamma * W) set the deflection
    inside the ODE, so the prediction matches what the widened device does.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ComparisonError, ConvergenceError
from .ode import rk4
from .optics import BeamSpec, MaterialSpec, gaussian_radius, rayleigh_range

WIDENING_MODES = ("design", "selfconsistent")


@dataclass(frozen=True)
class DesignParams:
    length: float = 10e-3
    n_interfaces: int = 20
    widening: float = 1.3
    ode_steps: int = 10_000

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.n_interfaces < 1:
            raise ValueError(f"n_interfaces must be >= 1, got {self.n_interfaces}")
        if not self.widening >= 1:
            raise ValueError(f"widening must be >= 1, got {self.widening}")
        if self.ode_steps < 100:
            raise ValueError(f"ode_steps must be >= 100, got {self.ode_steps}")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ScannerProfile:
    """Sampled horn outline. Walls sit at +/- width_walls / 2."""

    z: np.ndarray
    x: np.ndarray
    slope: np.ndarray
    omega: np.ndarray
    width_design: np.ndarray
    width_walls: np.ndarray
    dn: float = 0.0
    n_e: float = 1.0
    gamma: float = 1.0
    mode: str = "design"

    def __post_init__(self):
        for name in ("z", "x", "slope", "omega", "width_design", "width_walls"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def length(self) -> float:
        return float(self.z[-1])

    @property
    def entrance_width(self) -> float:
        return float(self.width_walls[0])

    @property
    def exit_width(self) -> float:
        return float(self.width_walls[-1])

    @property
    def theta_int(self) -> float:
        return float(self.slope[-1])

    @property
    def theta_ext(self) -> float:
        return self.n_e * self.theta_int

    def half_width(self, z):
        """Wall half-width, linearly interpolated between samples."""
        return 0.5 * np.interp(z, self.z, self.width_walls)

    def area(self) -> float:
        """Trapezoidal area between the walls."""
        w = self.width_walls
        return float(np.sum(0.5 * (w[1:] + w[:-1]) * np.diff(self.z)))


def _solve(dn, material, beam, L, steps, scale, width_override):
    k = dn / material.n_e
    zr = rayleigh_range(beam, material)
    w0 = beam.waist_radius

    if callable(width_override):
        def rhs(z, y):
            return (y[1], k / width_override(z))
    elif width_override is not None:
        W = float(width_override)

        def rhs(z, y):
            return (y[1], k / W)
    else:
        def rhs(z, y):
            u = (z - L) / zr
            return (y[1], k / (scale * 2.0 * (y[0] + w0 * math.sqrt(1.0 + u * u))))

    return rk4(rhs, (0.0, 0.0), 0.0, L, steps)


def integrate_trajectory(
    params: DesignParams,
    dn: float,
    material: MaterialSpec,
    beam: BeamSpec,
    mode: str = "selfconsistent",
    width_override: float | Callable[[float], float] | None = None,
    check_convergence: bool = True,
) -> ScannerProfile:
    """Synthesize the horn profile for an index step ``dn``.

    Parameters
    ----------
    mode : {"design", "selfconsistent"}
        Whether the widening ``params.widening`` enters the ODE.
    width_override : float or callable, optional
        Freeze the width, either at a constant (rectangular device, the
        closed-form oracle) or as a fixed function of z (tracing a ray
        through an already-built horn at another drive). The profile walls
        are then that width.
    check_convergence : bool
        Re-integrate at half the step and raise ConvergenceError if x(L)
        moves by more than 1e-3 relative.
    """
    if mode not in WIDENING_MODES:
        raise ValueError(f"unknown widening mode {mode!r}")
    if dn < 0:
        raise ValueError("dn must be non-negative; design for |V|")
    L = params.length
    gamma = params.widening
    scale = gamma if mode == "selfconsistent" else 1.0
    z, y = _solve(dn, material, beam, L, params.ode_steps, scale, width_override)

    if check_convergence and dn > 0:
        _, y2 = _solve(dn, material, beam, L, 2 * params.ode_steps, scale, width_override)
        xl, xl2 = y[-1, 0], y2[-1, 0]
        if abs(xl - xl2) > 1e-3 * abs(xl2):
            raise ConvergenceError(
                f"x(L) changed by {abs(xl - xl2) / abs(xl2):.2e} relative on step halving"
            )

    omega = gaussian_radius(beam, material, z, L)
    if callable(width_override):
        width_design = np.array([width_override(zz) for zz in z])
        width_walls = width_design
    elif width_override is not None:
        width_design = np.full_like(z, float(width_override))
        width_walls = width_design
    else:
        width_design = 2.0 * (y[:, 0] + omega)
        width_walls = gamma * width_design
    return ScannerProfile(
        z=z, x=y[:, 0], slope=y[:, 1], omega=omega,
        width_design=width_design, width_walls=width_walls,
        dn=dn, n_e=material.n_e, gamma=1.0 if width_override is not None else gamma,
        mode=mode,
    )


def widen_profile(profile: ScannerProfile, gamma: float) -> ScannerProfile:
    """Return a copy whose walls are ``gamma`` times the design width."""
    if not gamma >= 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    return ScannerProfile(
        z=profile.z, x=profile.x, slope=profile.slope, omega=profile.omega,
        width_design=profile.width_design, width_walls=gamma * profile.width_design,
        dn=profile.dn, n_e=profile.n_e, gamma=gamma, mode=profile.mode,
    )


def rect_required_width(theta_max_int: float, L: float, beam: BeamSpec) -> float:
    """Width a rectangle needs so a beam pivoting about its center clears the walls."""
    if theta_max_int < 0:
        raise ValueError("theta_max_int must be non-negative")
    return theta_max_int * L + 2 * beam.waist_radius


def rect_required_index(theta_int: float, material: MaterialSpec, L: float, W: float) -> float:
    if not (W > 0 and L > 0):
        raise ValueError("W and L must be positive")
    return theta_int * material.n_e * W / L


@dataclass(frozen=True)
class RectComparator:
    width: float
    required_dn: float
    length: float
    waist_radius: float
    n_e: float
    theta_int: float
    voltage_ratio: float | None = None

    def __post_init__(self):
        if not self.width > 2 * self.waist_radius and self.theta_int > 0:
            raise ValueError("rectangle must be wider than the beam diameter")


def rect_comparator(theta_int: float, L: float, material: MaterialSpec, beam: BeamSpec) -> RectComparator:
    W = rect_required_width(theta_int, L, beam)
    return RectComparator(
        width=W, required_dn=rect_required_index(theta_int, material, L, W),
        length=L, waist_radius=beam.waist_radius, n_e=material.n_e, theta_int=theta_int,
    )


@dataclass(frozen=True)
class Comparison:
    horn_dn: float
    rect_dn: float
    horn_entrance_width: float
    horn_exit_width: float
    rect_width: float
    theta_int: float
    voltage_ratio: float
    sensitivity_ratio: float
    spots_total: int = field(default=0)


def compare_designs(
    horn: ScannerProfile,
    rect: RectComparator,
    beam: BeamSpec,
    rtol: float = 1e-9,
) -> Comparison:
    """Voltage needed by the rectangle relative to the horn at equal max angle.

    Sensitivity is deflection per unit index step, so its ratio (horn over
    rectangle) equals the voltage ratio when both reach the same angle.
    """
    def close(a, b):
        return math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)

    mismatched = [
        name for name, a, b in (
            ("length", horn.length, rect.length),
            ("n_e", horn.n_e, rect.n_e),
            ("waist_radius", float(horn.omega[-1]), rect.waist_radius),
            ("theta_int", horn.theta_int, rect.theta_int),
        ) if not close(a, b)
    ]
    if mismatched:
        raise ComparisonError(f"designs disagree on {', '.join(mismatched)}")
    if not horn.dn > 0:
        raise ComparisonError("horn index step must be positive to compare")
    ratio = rect.required_dn / horn.dn
    return Comparison(
        horn_dn=horn.dn, rect_dn=rect.required_dn,
        horn_entrance_width=horn.entrance_width, horn_exit_width=horn.exit_width,
        rect_width=rect.width, theta_int=horn.theta_int,
        voltage_ratio=ratio,
        sensitivity_ratio=(horn.theta_int / horn.dn) / (rect.theta_int / rect.required_dn),
    )


def convergence_study(
    params: DesignParams,
    dn: float,
    material: MaterialSpec,
    beam: BeamSpec,
    steps=(100, 200, 400, 800),
    reference_steps: int = 20_000,
    mode: str = "selfconsistent",
) -> tuple[float, list[float]]:
    """Observed order of the integrator on x(L), against a fine reference run."""
    from .ode import convergence_order

    scale = params.widening if mode == "selfconsistent" else 1.0
    L = params.length
    ref = _solve(dn, material, beam, L, reference_steps, scale, None)[1][-1, 0]
    errors = [abs(_solve(dn, material, beam, L, s, scale, None)[1][-1, 0] - ref) for s in steps]
    return convergence_order(errors, steps), errors


def trace_in_profile(
    profile: ScannerProfile, dn: float, material: MaterialSpec, beam: BeamSpec, steps: int = 2000
) -> ScannerProfile:
    """Ray through the fixed walls of ``profile`` driven at index step ``dn``."""
    def walls(z, _z=profile.z, _w=profile.width_walls):
        return float(np.interp(z, _z, _w))

    params = DesignParams(length=profile.length, widening=1.0, ode_steps=steps)
    return integrate_trajectory(
        params, abs(dn), material, beam, width_override=walls, check_convergence=False
    )
