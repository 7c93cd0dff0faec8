"""2-D scalar paraxial split-step beam propagation.

The carrier exp(i k0 n_e z) is factored out; the envelope u(x, z) sees
diffraction in a uniform n_e background plus the phase k0 * dn(x, z) * dz
from the domain map.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .domains import DomainPattern
from .errors import HornscanError, MetricsError, NumericalBlowupError, GeometryError
from .optics import (
    BeamSpec,
    DriveSpec,
    MaterialSpec,
    far_field_divergence,
    gaussian_radius,
    index_contrast,
    rayleigh_range,
    resolvable_spots,
)
from .raster import GridSpec, IndexMap, rasterize_polarity


@dataclass(eq=False)
class FieldState:
    u: np.ndarray
    grid: GridSpec
    z: float = 0.0
    absorbed: float = 0.0
    # rows of |u|^2 recorded during propagation, for field images
    history: np.ndarray | None = field(default=None, repr=False)

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.u) ** 2) * self.grid.dx)


@dataclass(frozen=True)
class SimReport:
    voltage: float
    theta_int: float
    theta_ext: float
    exit_1e2_radius: float
    exit_centroid: float
    truncation_loss: float
    spots_total: int

    @property
    def theta_ext_mrad(self) -> float:
        return 1e3 * self.theta_ext


def absorber_mask(grid: GridSpec) -> np.ndarray:
    """Raised-cosine amplitude taper over ``absorber_fraction`` of each side."""
    m = np.ones(grid.nx)
    nb = int(round(grid.absorber_fraction * grid.nx))
    if nb > 0:
        s = (np.arange(nb) + 0.5) / nb  # 0 at inner edge, 1 at the window edge
        taper = 0.5 * (1 + np.cos(np.pi * s))
        m[-nb:] = taper
        m[:nb] = taper[::-1]
    return m


def launch_field(beam: BeamSpec, material: MaterialSpec, grid: GridSpec, L: float) -> FieldState:
    """Gaussian envelope at z = 0 that focuses to the waist at z = L.

    With the exp(+i k z) carrier the envelope is exp(i k x^2 / (2 q)) with
    q(z) = z - L - i z_R, so its radius at z = 0 is the design clearance
    radius and it narrows to the waist at z = L.
    """
    w_launch = float(gaussian_radius(beam, material, 0.0, L))
    if w_launch > grid.x_span / 4:
        raise GeometryError(
            f"launch radius {w_launch:.3e} m exceeds a quarter of the window"
        )
    k = 2 * math.pi / beam.lambda0 * material.n_e
    q0 = complex(-L, -rayleigh_range(beam, material))
    x = grid.x
    u = np.exp(1j * k * x**2 / (2 * q0))
    u /= math.sqrt(np.sum(np.abs(u) ** 2) * grid.dx)
    return FieldState(u=u, grid=grid, z=0.0)


def propagate(
    fld: FieldState,
    index_map: IndexMap,
    beam: BeamSpec,
    material: MaterialSpec,
    absorber: bool = True,
    record_every: int = 0,
) -> FieldState:
    """Symmetric split-step propagation over the whole map.

    Each step: half diffraction, full material phase, half diffraction,
    then the boundary absorber. Power removed by the absorber accumulates
    in ``absorbed``.
    """
    grid = index_map.grid
    if fld.grid != grid:
        raise ValueError("field and index map use different grids")
    dz = index_map.dz
    k0 = 2 * math.pi / beam.lambda0
    kx = grid.kx
    half = np.exp(-1j * kx**2 * (dz / 2) / (2 * k0 * material.n_e))
    mask = absorber_mask(grid) if absorber else None
    phase_scale = k0 * index_map.dn_e * dz
    pol = index_map.polarity

    u = fld.u.astype(complex, copy=True)
    dx = grid.dx
    absorbed = fld.absorbed
    rows = []
    for i in range(index_map.n_steps):
        u = np.fft.ifft(np.fft.fft(u) * half)
        if phase_scale != 0.0:
            u *= np.exp(1j * phase_scale * pol[i])
        u = np.fft.ifft(np.fft.fft(u) * half)
        if mask is not None:
            p_before = np.sum(np.abs(u) ** 2) * dx
            u *= mask
            p_after = np.sum(np.abs(u) ** 2) * dx
            if not math.isfinite(p_after):
                raise NumericalBlowupError(f"non-finite field at step {i} (z = {(i + 1) * dz:.6e} m)")
            absorbed += p_before - p_after
        elif not np.isfinite(u[0]) or (i % 64 == 0 and not np.all(np.isfinite(u))):
            raise NumericalBlowupError(f"non-finite field at step {i} (z = {(i + 1) * dz:.6e} m)")
        if record_every and (i % record_every == 0 or i == index_map.n_steps - 1):
            rows.append(np.abs(u) ** 2)
    if not np.all(np.isfinite(u)):
        raise NumericalBlowupError(f"non-finite field at step {index_map.n_steps - 1}")
    history = np.array(rows) if rows else None
    return FieldState(u=u, grid=grid, z=fld.z + index_map.length, absorbed=absorbed, history=history)


def spectral_centroid(fld: FieldState) -> float:
    """Intensity-weighted mean transverse wavenumber of the discrete spectrum."""
    P = np.abs(np.fft.fft(fld.u)) ** 2
    return float(np.sum(fld.grid.kx * P) / np.sum(P))


def exit_metrics(
    fld: FieldState,
    material: MaterialSpec,
    beam: BeamSpec,
    voltage: float = 0.0,
    launched_power: float = 1.0,
) -> SimReport:
    I = np.abs(fld.u) ** 2
    total = float(np.sum(I) * fld.grid.dx)
    if total < 1e-6:
        raise MetricsError(f"exit power {total:.2e} too small; beam fully absorbed")
    k0 = 2 * math.pi / beam.lambda0
    theta_int = spectral_centroid(fld) / (k0 * material.n_e)
    theta_ext = material.n_e * theta_int
    x = fld.grid.x
    xc = float(np.sum(x * I) / np.sum(I))
    var = float(np.sum((x - xc) ** 2 * I) / np.sum(I))
    loss = min(max(fld.absorbed / launched_power, 0.0), 1.0)
    return SimReport(
        voltage=voltage,
        theta_int=theta_int,
        theta_ext=theta_ext,
        exit_1e2_radius=2.0 * math.sqrt(var),
        exit_centroid=xc,
        truncation_loss=loss,
        spots_total=resolvable_spots(abs(theta_ext), far_field_divergence(beam)),
    )


class ScanError(HornscanError):
    def __init__(self, voltage: float, cause: Exception):
        self.voltage = voltage
        self.cause = cause
        super().__init__(f"at V = {voltage:g} V: {cause}")


@dataclass(frozen=True)
class _Job:
    polarity: np.ndarray
    length: float
    grid: GridSpec
    material: MaterialSpec
    beam: BeamSpec
    thickness: float
    voltage: float
    record_every: int


def _run_one(job: _Job) -> tuple[SimReport, np.ndarray | None]:
    try:
        dn = index_contrast(job.material, DriveSpec(job.voltage, job.thickness))
        imap = IndexMap(job.grid, job.polarity, dn / 2, job.length)
        f0 = launch_field(job.beam, job.material, job.grid, job.length)
        out = propagate(f0, imap, job.beam, job.material, record_every=job.record_every)
        return exit_metrics(out, job.material, job.beam, voltage=job.voltage), out.history
    except HornscanError as exc:
        raise ScanError(job.voltage, exc) from exc


def simulate_scan(
    pattern: DomainPattern,
    material: MaterialSpec,
    beam: BeamSpec,
    voltages,
    thickness: float,
    grid: GridSpec,
    workers: int = 1,
    record_every: int = 0,
) -> list[tuple[SimReport, np.ndarray | None]]:
    """One full propagation per voltage, sorted by voltage, V = 0 always included.

    Returns (report, intensity history) pairs; history is None unless
    ``record_every`` is set.
    """
    vs = sorted(set(float(v) for v in voltages) | {0.0})
    for v in vs:
        # fail fast before any propagation
        try:
            index_contrast(material, DriveSpec(v, thickness))
        except HornscanError as exc:
            raise ScanError(v, exc) from exc
    pol = rasterize_polarity(pattern, grid)
    jobs = [_Job(pol, pattern.length, grid, material, beam, thickness, v, record_every) for v in vs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]
