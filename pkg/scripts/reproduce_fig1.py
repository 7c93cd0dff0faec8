"""Design the paper's horn, run the BPM at the paper voltages and print a summary.

    python scripts/reproduce_fig1.py --out runs/fig1
"""
import argparse
import json
from pathlib import Path

from hornscan.cli import run_design, run_simulate
from hornscan.config import parse_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path)
    ap.add_argument("--out", type=Path, default=Path("runs/fig1"))
    args = ap.parse_args()

    cfg = parse_config(args.config.read_text() if args.config else "")
    d = run_design(cfg, args.out)
    s = run_simulate(cfg, args.out)

    design = json.loads(d.report.read_text())
    sim = json.loads(s.report.read_text())
    prof = design["profile"]
    print(f"entrance / exit wall width: {prof['entrance_width_walls_m'] * 1e6:.1f} / "
          f"{prof['exit_width_walls_m'] * 1e6:.1f} um")
    for mode, ang in design["deflection"]["by_mode"].items():
        print(f"ray prediction ({mode}): {ang['mrad']:.2f} mrad")
    print(f"{'V':>8} {'theta_ext mrad':>15} {'spots':>6} {'loss':>9}")
    for r in sim["reports"]:
        print(f"{r['voltage_V']:8.0f} {r['theta_ext']['mrad']:15.3f} {r['spots_total']:6d} "
              f"{r['truncation_loss']:9.2e}")
    print(f"field images: {', '.join(p.name for p in s.field_images)}")


if __name__ == "__main__":
    main()
