"""File writers and readers: CSV tables, SVG geometry and fan plots, PGM images, JSON reports.

Nothing here embeds timestamps, so identical inputs give identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .bpm import SimReport
from .design import ScannerProfile
from .domains import DomainPattern

PROFILE_HEADER = ("z_m", "x_m", "slope", "omega_m", "width_design_m", "width_walls_m")
FAN_HEADER = ("voltage_V", "theta_int_rad", "theta_ext_rad", "loss")


def confined(out_dir: Path, name: str) -> Path:
    """Resolve ``name`` inside ``out_dir``; refuse anything that escapes it."""
    root = Path(out_dir).resolve()
    p = (root / name).resolve()
    if root != p and root not in p.parents:
        raise ValueError(f"{name!r} escapes output directory {root}")
    return p


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def table_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def profile_table(profile: ScannerProfile) -> str:
    cols = np.column_stack([
        profile.z, profile.x, profile.slope, profile.omega,
        profile.width_design, profile.width_walls,
    ])
    return table_text(PROFILE_HEADER, cols)


def fan_table(reports: list[SimReport]) -> str:
    return table_text(
        FAN_HEADER,
        [(r.voltage, r.theta_int, r.theta_ext, r.truncation_loss) for r in reports],
    )


def read_table(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)


def pattern_svg(pattern: DomainPattern, px_width: int = 600, px_height: int = 900) -> str:
    """One <polygon> per prism, class ``pos``/``neg`` by polarity.

    Drawing units are micrometres, z up the page (entrance at the bottom).
    The transverse and axial scales differ, and the root element states
    both in ``data-um-per-px-x`` / ``data-um-per-px-z``.
    """
    um = 1e6
    lo, hi = pattern.walls()
    xmax = max(np.max(np.abs(lo[:, 0])), np.max(np.abs(hi[:, 0]))) * um * 1.05
    L = pattern.length * um
    sx = 2 * xmax / px_width
    sz = L / px_height

    def pt(x, z):
        return f"{x * um:.4f},{L - z * um:.4f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{px_width}" height="{px_height}" '
        f'viewBox="{-xmax:.4f} 0 {2 * xmax:.4f} {L:.4f}" preserveAspectRatio="none" '
        f'data-um-per-px-x="{sx:.6g}" data-um-per-px-z="{sz:.6g}" '
        f'data-aspect="{sz / sx:.6g}" data-n-interfaces="{pattern.n_interfaces}">',
        "<style>.pos{fill:#c33}.neg{fill:#36c}.wall{fill:none;stroke:#000}</style>",
    ]
    for i, p in enumerate(pattern.prisms):
        cls = "pos" if p.polarity > 0 else "neg"
        pts = " ".join(pt(x, z) for x, z in p.vertices)
        out.append(
            f'<polygon id="prism{i}" class="{cls}" data-polarity="{p.polarity:+d}" '
            f'vector-effect="non-scaling-stroke" points="{pts}"/>'
        )
    for name, w in (("wall-lo", lo), ("wall-hi", hi)):
        pts = " ".join(pt(x, z) for x, z in w[:: max(1, len(w) // 500)])
        pts += " " + pt(*w[-1])
        out.append(
            f'<polyline id="{name}" class="wall" vector-effect="non-scaling-stroke" points="{pts}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def fan_svg(reports: list[SimReport], size: int = 600) -> str:
    """Exit rays from the facet, one <line> per voltage, angles to scale."""
    cx, cy = size / 2, size - 20
    r = size - 60
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" data-aspect="1">',
    ]
    for rep in reports:
        th = rep.theta_ext
        x2 = cx + r * math.sin(th)
        y2 = cy - r * math.cos(th)
        label = f"{rep.voltage:g} V, {1e3 * th:.2f} mrad"
        out.append(
            f'<line class="ray" x1="{cx:.3f}" y1="{cy:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
            f'stroke="#000" data-voltage="{_fmt(rep.voltage)}" data-theta-ext="{_fmt(th)}">'
            f"<title>{label}</title></line>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def pgm_bytes(image: np.ndarray) -> bytes:
    """Binary 8-bit graymap, linear in intensity, peak mapped to 255."""
    img = np.asarray(image, dtype=float)
    peak = img.max()
    scaled = img / peak if peak > 0 else img
    data = np.round(np.clip(scaled, 0, 1) * 255).astype(np.uint8)
    h, w = data.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + data.tobytes()


def read_pgm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    maxval = int(parts[2])
    data = np.frombuffer(parts[3], dtype=np.uint8)
    if data.size != w * h or maxval != 255:
        raise ValueError("truncated or unsupported PGM")
    return data.reshape(h, w)


def report_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_text(path: Path, text: str):
    path.write_text(text, encoding="utf-8")


def write_bytes(path: Path, data: bytes):
    path.write_bytes(data)
