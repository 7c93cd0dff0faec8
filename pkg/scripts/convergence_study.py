"""Integrator order and BPM grid sensitivity for the paper design."""
import argparse

from hornscan import BeamSpec, DesignParams, DriveSpec, GridSpec, MaterialSpec
from hornscan import build_domain_pattern, index_contrast, integrate_trajectory
from hornscan.bpm import simulate_scan
from hornscan.design import convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--skip-bpm", action="store_true")
    args = ap.parse_args()

    m, b, p = MaterialSpec(), BeamSpec(), DesignParams()
    dn = index_contrast(m, DriveSpec(1e3, 150e-6))
    for mode in ("design", "selfconsistent"):
        slope, errs = convergence_study(p, dn, m, b, steps=(50, 100, 200, 400, 800), mode=mode)
        print(f"RK4 {mode:>14}: observed order {slope:.3f}, errors " +
              " ".join(f"{e:.2e}" for e in errs))
    if args.skip_bpm:
        return

    pattern = build_domain_pattern(integrate_trajectory(p, dn, m, b), p.n_interfaces)
    grids = {
        "default": GridSpec(),
        "dz/2": GridSpec(dz=1.25e-6),
        "nx*2": GridSpec(nx=4096),
        "dz*2": GridSpec(dz=5e-6),
        "nx/2": GridSpec(nx=1024),
    }
    base = None
    for name, g in grids.items():
        r = simulate_scan(pattern, m, b, [1000.0], 150e-6, g)[-1][0]
        base = base or r.theta_ext
        print(f"BPM {name:>8}: theta_ext {1e3 * r.theta_ext:.3f} mrad "
              f"({100 * (r.theta_ext / base - 1):+.3f}%)")


if __name__ == "__main__":
    main()
