"""Classical, converted and quantum eraser coincidence rates for the three polarizer cases."""
import argparse
import math

from twophoton.experiments import EraserConfig, eraser_coincidence, eraser_mc


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--phi-deg", type=float, default=90.0)
    ap.add_argument("--theta1-deg", type=float, default=45.0)
    ap.add_argument("--theta2-deg", type=float, default=-45.0)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    phi, t1, t2 = (math.radians(x) for x in (args.phi_deg, args.theta1_deg, args.theta2_deg))
    configs = {
        "a": EraserConfig(phi),
        "b": EraserConfig(phi, t1),
        "c": EraserConfig(phi, t1, t2),
    }
    print(f"{'case':<5}{'classical':>12}{'mc':>12}{'stderr':>10}{'converted':>12}{'quantum':>10}")
    for case, cfg in configs.items():
        mc = eraser_mc(cfg, args.samples, args.seed)
        print(f"{case:<5}{eraser_coincidence(cfg, 'classical'):12.6f}{mc.value:12.6f}{mc.stderr:10.1e}"
              f"{eraser_coincidence(cfg, 'converted'):12.6f}{eraser_coincidence(cfg, 'quantum'):10.6f}")


if __name__ == "__main__":
    main()
