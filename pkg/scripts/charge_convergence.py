"""Charge drift of the third-order flow versus step size (fourth-order check).

    python scripts/charge_convergence.py --lambda 2 --steps 0.02 0.01 0.005 0.0025
"""

import argparse

from schwarzlab.dynamics import (
    SchwarzState,
    drift,
    exact_solution,
    integrate_schwarz,
    schwarz_charge_columns,
    schwarz_state_from_jet,
)
from schwarzlab.integrators import IntegratorConfig
from schwarzlab.jets import Mobius


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", dest="lam", type=float, default=2.0)
    ap.add_argument("--steps", type=float, nargs="+", default=[0.02, 0.01, 0.005, 0.0025])
    ap.add_argument("--t-end", type=float, default=1.0)
    args = ap.parse_args(argv)

    st: SchwarzState = schwarz_state_from_jet(exact_solution(args.lam, Mobius.identity(), 0.0))
    prev = None
    print(f"{'h':>10} {'max drift':>12} {'ratio':>8}")
    for h in args.steps:
        tr = integrate_schwarz(st, args.lam, IntegratorConfig(h=h, t_end=args.t_end))
        d = max(drift(c) for c in schwarz_charge_columns(*tr.y.T, args.lam))
        ratio = "" if prev is None else f"{prev / d:8.2f}"
        print(f"{h:10.4g} {d:12.3e} {ratio}")
        prev = d


if __name__ == "__main__":
    main()
