"""Zigzag decomposition of the horn into alternating-polarity prisms."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import ScannerProfile
from .errors import GeometryError


def polygon_area(poly: np.ndarray) -> float:
    """Signed shoelace area (positive for counter-clockwise in (x, z))."""
    x, z = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(z, -1)) - np.dot(np.roll(x, -1), z))


@dataclass(frozen=True, eq=False)
class Prism:
    vertices: np.ndarray  # (n, 2) columns x, z; implicitly closed
    polarity: int

    @property
    def area(self) -> float:
        return abs(polygon_area(self.vertices))


@dataclass(frozen=True, eq=False)
class DomainPattern:
    """Ordered prisms plus the two wall polylines.

    ``background`` is the polarity outside the walls: 0 when the drive
    electrode covers only the horn, -1 when the whole face is biased and the
    exterior behaves like the un-inverted prisms. It flips together with
    the prisms under :func:`negate`.
    """

    prisms: tuple[Prism, ...]
    wall_z: np.ndarray
    wall_half: np.ndarray
    length: float
    background: int = 0
    x_offset: float = 0.0

    @property
    def n_interfaces(self) -> int:
        return len(self.prisms) - 1

    @property
    def max_half_width(self) -> float:
        return float(np.max(self.wall_half)) + abs(self.x_offset)

    def area(self) -> float:
        return sum(p.area for p in self.prisms)

    def walls(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower (-x) and upper (+x) wall curves as (n, 2) arrays."""
        lo = np.column_stack([self.x_offset - self.wall_half, self.wall_z])
        hi = np.column_stack([self.x_offset + self.wall_half, self.wall_z])
        return lo, hi


def _drop_collinear(v: np.ndarray) -> np.ndarray:
    # exact test only: curved walls keep every sample
    prev = np.roll(v, 1, axis=0)
    nxt = np.roll(v, -1, axis=0)
    cross = (v[:, 0] - prev[:, 0]) * (nxt[:, 1] - v[:, 1]) - (v[:, 1] - prev[:, 1]) * (nxt[:, 0] - v[:, 0])
    return v[cross != 0]


EXTERIORS = {"unbiased": 0, "substrate": -1}


def build_domain_pattern(
    profile: ScannerProfile, n_interfaces: int, exterior: str = "unbiased"
) -> DomainPattern:
    """Split the horn into ``n_interfaces + 1`` prisms with straight walls.

    Interface k runs from one wall at z_k = k L / N to the opposite wall at
    z_{k+1}; the first rises from the -x wall, and prism 0 has polarity +1
    so a positive index step deflects toward +x.
    """
    if n_interfaces < 1:
        raise GeometryError("need at least one interface")
    if exterior not in EXTERIORS:
        raise ValueError(f"exterior must be one of {', '.join(EXTERIORS)}, got {exterior!r}")
    N = int(n_interfaces)
    L = profile.length
    zs = profile.z
    half = 0.5 * profile.width_walls
    zk = L * np.arange(N + 1) / N
    zk[-1] = L
    hk = np.interp(zk, zs, half)

    def wall_run(side: float, za: float, zb: float) -> list[tuple[float, float]]:
        # wall points from za to zb inclusive, samples strictly inside
        inner = (zs > za) & (zs < zb)
        pts = [(side * float(np.interp(za, zs, half)), za)]
        pts += [(side * h, z) for h, z in zip(half[inner], zs[inner])]
        pts.append((side * float(np.interp(zb, zs, half)), zb))
        return pts

    def corner(side: float, k: int) -> tuple[float, float]:
        return (side * hk[k], zk[k])

    # interface k starts on side a_k = -(-1)**k ... -1, +1, -1, ...
    side = [(-1.0 if k % 2 == 0 else 1.0) for k in range(N)]
    prisms = []
    # prism 0: entrance face, the +x wall up to z_1, back along interface 0
    pts = [corner(-1.0, 0)] + wall_run(1.0, zk[0], zk[1])
    prisms.append(pts)
    for j in range(1, N):
        a = side[j - 1]
        # base along wall a from z_{j-1} to z_{j+1}, apex on the other wall at z_j
        pts = wall_run(a, zk[j - 1], zk[j + 1]) + [corner(-a, j)]
        prisms.append(pts)
    a = side[N - 1]
    pts = wall_run(a, zk[N - 1], zk[N]) + [corner(-a, N)]
    prisms.append(pts)

    out = []
    for j, pts in enumerate(prisms):
        v = np.array(pts, dtype=float)
        # drop consecutive duplicates, which appear when a corner coincides with a sample
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = np.any(np.diff(v, axis=0) != 0, axis=1)
        v = v[keep]
        if np.all(v[0] == v[-1]) and len(v) > 1:
            v = v[:-1]
        v = _drop_collinear(v)
        if polygon_area(v) < 0:
            v = v[::-1].copy()
        prism = Prism(vertices=v, polarity=1 if j % 2 == 0 else -1)
        if not prism.area > 0:
            raise GeometryError(f"prism {j} has zero area")
        v.setflags(write=False)
        out.append(prism)
    return DomainPattern(
        prisms=tuple(out), wall_z=np.array(zs), wall_half=np.array(half), length=L,
        background=EXTERIORS[exterior],
    )


def negate(pattern: DomainPattern) -> DomainPattern:
    """Flip every polarity, background included."""
    return DomainPattern(
        prisms=tuple(Prism(p.vertices, -p.polarity) for p in pattern.prisms),
        wall_z=pattern.wall_z, wall_half=pattern.wall_half, length=pattern.length,
        background=-pattern.background, x_offset=pattern.x_offset,
    )


def mirror(pattern: DomainPattern) -> DomainPattern:
    """Reflect the geometry about the propagation axis (x -> -x)."""
    prisms = []
    for p in pattern.prisms:
        v = p.vertices * np.array([-1.0, 1.0])
        prisms.append(Prism(v[::-1].copy(), p.polarity))
    return DomainPattern(
        prisms=tuple(prisms), wall_z=pattern.wall_z, wall_half=pattern.wall_half,
        length=pattern.length, background=pattern.background,
        x_offset=-pattern.x_offset,
    )


def translate(pattern: DomainPattern, dx: float) -> DomainPattern:
    prisms = tuple(
        Prism(p.vertices + np.array([dx, 0.0]), p.polarity) for p in pattern.prisms
    )
    return DomainPattern(
        prisms=prisms, wall_z=pattern.wall_z, wall_half=pattern.wall_half,
        length=pattern.length, background=pattern.background,
        x_offset=pattern.x_offset + dx,
    )
