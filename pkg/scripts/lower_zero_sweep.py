#!/usr/bin/env python3
"""Sweep the endpoint jump of the triangular-profile family and track the
purely imaginary lower zero.

For total mass F(0) strictly between 0 and the left-limit mass the transform
has exactly one zero below the real axis, purely imaginary; outside that open
window it has none.  Prints one line per mass value with the located zero and
the argument-principle count that confirms it.
"""

import argparse
import sys

import numpy as np

from hbfourier import Rectangle, count_zeros, find_imaginary_zero, from_pd_profile


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--masses", type=str, default="-0.25,0,0.25,0.5,0.75,1.0,1.25")
    args = parser.parse_args()
    masses = [float(v) for v in args.masses.split(",")]

    sys.stdout.write("F0,y_star,lower_count\n")
    for f0 in masses:
        m = from_pd_profile([0.0, 1.0], [1.0, 0.0], f0 - 1.0)
        y_star = find_imaginary_zero(m)
        y_min = -6.0 if y_star is None else min(-6.0, 1.5 * y_star)
        count = count_zeros(m, Rectangle(-20.0, 20.0, y_min, -1e-3)).count
        sys.stdout.write(f"{f0!r},{'' if y_star is None else repr(y_star)},{count}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
