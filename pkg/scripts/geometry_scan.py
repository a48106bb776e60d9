"""Scan Einstein and Killing residuals of the lifted metric over random points.

Prints one row per nu with the worst residual of each check.
"""

import argparse

import numpy as np

from schwarzlab.verify import geometry_errors


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nus", type=float, nargs="+", default=[0.0, 0.5, 1.0, -1.0, 2.0, 5.0])
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    rows = [(nu, geometry_errors((nu,), args.points, args.seed)) for nu in args.nus]
    keys = list(rows[0][1])
    print("nu".ljust(6) + "".join(k.ljust(24) for k in keys))
    for nu, w in rows:
        print(f"{nu:<6g}" + "".join(f"{w[k]:<24.3e}" for k in keys))
    worst = max(max(v for k, v in w.items() if k != "signature_mismatches") for _, w in rows)
    print(f"\nworst residual {worst:.3e}; float64 eps {np.finfo(float).eps:.3e}")


if __name__ == "__main__":
    main()
