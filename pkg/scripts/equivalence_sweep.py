"""Sweep (lambda, nu) and compare the third-order, Lagrangian and Hamiltonian flows.

    python scripts/equivalence_sweep.py --lambdas -4 -2 0 2 --nus 0 1 -1 2 --step 1e-3
"""

import argparse
import csv
import sys

from schwarzlab.dynamics import equivalence_check
from schwarzlab.errors import SchwarzError
from schwarzlab.integrators import IntegratorConfig

FIELDS = ("lambda", "nu", "max_deviation", "max_exact_error", "energy_error", "s_drift_lagrange",
          "s_drift_hamilton", "p_rho_drift", "status")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambdas", type=float, nargs="+", default=[-4.0, -2.0, 0.0, 1.0, 2.0])
    ap.add_argument("--nus", type=float, nargs="+", default=[0.0, 1.0, -1.0, 2.0])
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--t-end", type=float, default=1.0)
    args = ap.parse_args(argv)

    cfg = IntegratorConfig(h=args.step, t_end=args.t_end)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(FIELDS)
    for lam in args.lambdas:
        for nu in args.nus:
            try:
                rep = equivalence_check(lam, nu, cfg)
            except SchwarzError as exc:
                w.writerow([lam, nu] + [""] * 6 + [type(exc).__name__])
                continue
            w.writerow([lam, nu] + [format(getattr(rep, f), ".3e") for f in FIELDS[2:-1]] + ["ok"])


if __name__ == "__main__":
    main()
