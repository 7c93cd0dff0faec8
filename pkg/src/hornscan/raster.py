"""Point-in-polygon rasterization of a domain pattern onto the BPM grid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import DomainPattern
from .errors import GeometryError


@dataclass(frozen=True)
class GridSpec:
    x_span: float = 2048e-6
    nx: int = 2048
    dz: float = 2.5e-6
    absorber_fraction: float = 0.1

    def __post_init__(self):
        if self.nx < 64 or self.nx & (self.nx - 1):
            raise ValueError(f"nx must be a power of two >= 64, got {self.nx}")
        if not self.x_span > 0:
            raise ValueError("x_span must be positive")
        if not self.dz > 0:
            raise ValueError("dz must be positive")
        if not 0 <= self.absorber_fraction < 0.5:
            raise ValueError("absorber_fraction must be in [0, 0.5)")

    @property
    def dx(self) -> float:
        return self.x_span / self.nx

    @property
    def x(self) -> np.ndarray:
        # symmetric about 0 so that x -> -x maps samples onto samples exactly
        return (np.arange(self.nx) - (self.nx - 1) / 2) * self.dx

    @property
    def kx(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.nx, self.dx)

    def n_steps(self, L: float) -> int:
        return max(1, int(round(L / self.dz)))


def point_in_polygon(x: float, z: float, poly: np.ndarray) -> bool:
    """Even-odd ray casting along +x for a single point."""
    inside = False
    n = len(poly)
    for i in range(n):
        x1, z1 = poly[i]
        x2, z2 = poly[(i + 1) % n]
        if (z1 <= z) != (z2 <= z):
            if z1 > z2:
                x1, z1, x2, z2 = x2, z2, x1, z1
            xc = x1 + (z - z1) * (x2 - x1) / (z2 - z1)
            if xc < x:
                inside = not inside
    return inside


def scanline_mask(poly: np.ndarray, xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Boolean (len(zs), len(xs)) mask of sample centers inside ``poly``.

    Same even-odd rule as :func:`point_in_polygon`, evaluated one row at a
    time. Edges are oriented bottom-to-top before intersecting so that a
    mirrored polygon yields exactly negated crossings.
    """
    a = poly
    b = np.roll(poly, -1, axis=0)
    swap = a[:, 1] > b[:, 1]
    lo = np.where(swap[:, None], b, a)
    hi = np.where(swap[:, None], a, b)
    flat = lo[:, 1] == hi[:, 1]
    lo, hi = lo[~flat], hi[~flat]

    mask = np.zeros((len(zs), len(xs)), dtype=bool)
    if len(lo) == 0:
        return mask
    zmin, zmax = lo[:, 1].min(), hi[:, 1].max()
    rows = np.nonzero((zs >= zmin) & (zs < zmax))[0]
    if rows.size == 0:
        return mask
    zr = zs[rows][:, None]
    cross = (lo[None, :, 1] <= zr) & (hi[None, :, 1] > zr)
    with np.errstate(invalid="ignore", divide="ignore"):
        xc = lo[None, :, 0] + (zr - lo[None, :, 1]) * (hi[None, :, 0] - lo[None, :, 0]) / (
            hi[None, :, 1] - lo[None, :, 1]
        )
    xc = np.where(cross, xc, np.inf)
    xc.sort(axis=1)
    for r, row in zip(rows, xc):
        c = row[np.isfinite(row)]
        if c.size == 0:
            continue
        count = np.searchsorted(c, xs, side="left")
        mask[r] = (count % 2) == 1
    return mask


@dataclass(frozen=True, eq=False)
class IndexMap:
    """Per-step, per-sample index offset.

    ``polarity`` holds +1/-1 (0 for an unbiased exterior) per (z step, x sample); the actual offset is
    ``dn_e * polarity`` where ``dn_e`` is half the domain-wall contrast.
    """

    grid: GridSpec
    polarity: np.ndarray
    dn_e: float
    length: float

    @property
    def n_steps(self) -> int:
        return self.polarity.shape[0]

    @property
    def dz(self) -> float:
        return self.length / self.n_steps

    @property
    def z_centers(self) -> np.ndarray:
        return (np.arange(self.n_steps) + 0.5) * self.dz

    def row(self, i: int) -> np.ndarray:
        return self.dn_e * self.polarity[i]

    def delta_n(self) -> np.ndarray:
        return self.dn_e * self.polarity

    def with_contrast(self, dn_e: float) -> "IndexMap":
        return IndexMap(self.grid, self.polarity, dn_e, self.length)


def uniform_map(grid: GridSpec, L: float, dn_e: float = 0.0) -> IndexMap:
    """Map with the same offset everywhere (free-space and phase checks)."""
    p = np.ones((grid.n_steps(L), grid.nx), dtype=np.int8)
    p.setflags(write=False)
    return IndexMap(grid, p, dn_e, L)


def rasterize_polarity(pattern: DomainPattern, grid: GridSpec) -> np.ndarray:
    if pattern.max_half_width >= grid.x_span / 2:
        raise GeometryError(
            f"pattern half-width {pattern.max_half_width:.3e} m exceeds the "
            f"window half-span {grid.x_span / 2:.3e} m"
        )
    xs = grid.x
    zs = (np.arange(grid.n_steps(pattern.length)) + 0.5) * (
        pattern.length / grid.n_steps(pattern.length)
    )
    pol = np.full((len(zs), len(xs)), pattern.background, dtype=np.int8)
    for prism in pattern.prisms:
        pol[scanline_mask(prism.vertices, xs, zs)] = prism.polarity
    pol.setflags(write=False)
    return pol


def rasterize_index(pattern: DomainPattern, grid: GridSpec, dn_e: float) -> IndexMap:
    """Sample each grid point's prism polarity; outside the walls use the pattern background."""
    return IndexMap(grid, rasterize_polarity(pattern, grid), dn_e, pattern.length)
