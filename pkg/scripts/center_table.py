"""Dimension of the computed center against the predicted span, per test window."""

import argparse

from kvcalc import linalg, necklace

SURFACES = [(1, 0), (0, 2), (1, 1), (0, 3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-weight", type=int, default=6)
    ap.add_argument("--windows", type=int, nargs="+", default=[6, 8])
    args = ap.parse_args()
    print("g n  k  predicted  " + "  ".join(f"found(<={w})" for w in args.windows))
    for g, n in SURFACES:
        S = necklace.SurfaceAlgebra(g, n)
        for k in range(0, args.max_weight + 1, 2):
            pred = necklace.predicted_center(S, k)
            cells = []
            for w in args.windows:
                found = necklace.center_component(S, k, range(1, w + 1))
                mark = "" if necklace.same_span(found, pred) else "*"
                cells.append(f"{len(found)}{mark}".rjust(11))
            dim = linalg.rank([c.terms for c in pred])
            print(f"{g} {n} {k:2d}  {dim:9d}  " + "  ".join(cells))
    print("* computed kernel differs from the predicted span")


if __name__ == "__main__":
    main()
