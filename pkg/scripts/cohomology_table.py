"""Dimensions of H^0 and H^1 of d = [Π, ·] on cyclic multivector words."""

import argparse

from kvcalc import dbrackets
from kvcalc.necklace import SurfaceAlgebra


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=int, default=1)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--weights", type=int, nargs=2, default=[-2, 4], metavar=("LOW", "HIGH"))
    args = ap.parse_args()
    S = SurfaceAlgebra(args.g, args.n)
    print("degree weight  ker  im  H")
    for degree in (0, 1):
        for w in range(args.weights[0], args.weights[1] + 1):
            r = dbrackets.cohomology(S, degree, w)
            print(f"{degree:6d} {w:6d} {r['dim_ker']:4d} {r['dim_im']:3d} {r['dim_H']:2d}")


if __name__ == "__main__":
    main()
