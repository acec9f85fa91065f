"""Decay of the two-photon overlap integral with displacement, both quadrature paths."""
import argparse
import math

import numpy as np

from twophoton.errors import QuadratureNotConverged
from twophoton.spectral import OverlapKernel, SpectralAmplitude, overlap_integral


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sigma", type=float, default=0.3, help="spectral width sigma_k (rad/um)")
    ap.add_argument("--k-p", type=float, default=10.0)
    ap.add_argument("--max-widths", type=float, default=20.0)
    args = ap.parse_args()

    amp = SpectralAmplitude(args.k_p / 2, args.sigma)
    kern = OverlapKernel(amp, amp, args.k_p)
    print(f"{'sigma*d':>8}{'|I| shifted':>14}{'|I| real axis':>16}{'exp(-x^2/2)':>14}")
    for x in np.linspace(0, args.max_widths, 11):
        d = x / args.sigma
        shifted = abs(overlap_integral(kern, d))
        try:
            real = f"{abs(overlap_integral(kern, d, path='real')):16.4e}"
        except QuadratureNotConverged:
            real = f"{'no convergence':>16}"
        print(f"{x:8.1f}{shifted:14.4e}{real}{math.exp(-x * x / 2):14.4e}")


if __name__ == "__main__":
    main()
