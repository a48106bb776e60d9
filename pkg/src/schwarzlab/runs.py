"""Simulation runs, CSV tables and charge-drift summaries used by the CLI."""

from __future__ import annotations

import csv
import math
from typing import Optional

import numpy as np

from . import dynamics, geometry
from .config import STATE_LEN, RunConfig
from .errors import SchwarzError
from .integrators import Trajectory
from .jets import Jet3, Mobius, jexp, jtan

COLUMNS = {
    "schwarz": ("t", "rho", "rho_dot", "rho_ddot", "S_of_rho", "P", "D", "K", "casimir_residual"),
    "lagrange": ("t", "rho", "rho_dot", "s", "s_dot", "H", "P", "D", "K"),
    "hamilton": ("t", "rho", "s", "p_rho", "p_s", "H2d"),
    "geodesic": ("t_affine", "t", "v", "rho", "s", "p_t", "p_v", "p_rho", "p_s", "H4d"),
}


class SchemaError(ValueError):
    pass


def seed_jet(cfg: RunConfig) -> Jet3:
    t0 = cfg.seed.t0
    x = Jet3.variable(t0)
    kind = cfg.seed.kind
    if kind == "exact":
        return dynamics.exact_solution(cfg.lam, Mobius(*cfg.seed.mobius), t0)
    if kind == "line":
        return x
    if kind == "tan":
        return jtan(x)
    if kind == "exp":
        return jexp(x * 2.0)
    raise ValueError(f"seed kind {kind!r} has no jet")


def initial_state(cfg: RunConfig):
    """Initial state object for ``cfg.mode``."""
    t0, nu = cfg.seed.t0, cfg.nu
    if cfg.seed.kind == "state":
        v = cfg.seed.state
        if cfg.mode == "schwarz":
            return dynamics.SchwarzState(t0, *v)
        if cfg.mode == "lagrange":
            return dynamics.LagrangeState(t0, *v)
        if cfg.mode == "hamilton":
            return dynamics.HamiltonState(t0, *v)
        return geometry.GeodesicPhase(geometry.Coord4(*v[:4]), np.array(v[4:]))

    st = dynamics.schwarz_state_from_jet(seed_jet(cfg))
    if cfg.mode == "schwarz":
        return st
    ls = dynamics.lagrange_from_schwarz(st, cfg.lam, nu)
    if cfg.mode == "lagrange":
        return ls
    hs = dynamics.legendre(ls, nu)
    if cfg.mode == "hamilton":
        return hs
    return geometry.null_initial_data(geometry.Coord4(t0, 0.0, hs.rho, hs.s), 1.0, hs.p_rho, hs.p_s, nu)


def integrate_mode(cfg: RunConfig, init) -> Trajectory:
    c = cfg.integrator
    if cfg.mode == "schwarz":
        return dynamics.integrate_schwarz(init, cfg.lam, c)
    if cfg.mode == "lagrange":
        return dynamics.integrate_lagrange(init, cfg.nu, c)
    if cfg.mode == "hamilton":
        return dynamics.integrate_hamilton(init, cfg.nu, c)
    return geometry.geodesic_flow(init, cfg.nu, c, affine0=cfg.seed.t0)


def build_table(mode: str, traj: Trajectory, lam: float, nu: float) -> dict:
    t, y = traj.t, traj.y
    if mode == "schwarz":
        rho, rd, rdd = y.T
        P, D, K = dynamics.schwarz_charge_columns(rho, rd, rdd, lam)
        if len(t) >= 5:
            S = dynamics.fd_schwarzian_column(t, rd, rdd)
        else:
            S = np.full(len(t), np.nan)
        cols = (t, rho, rd, rdd, S, P, D, K, dynamics.casimir_residual(P, D, K, lam))
    elif mode == "lagrange":
        cols = (t, *y.T, *dynamics.lagrange_charge_columns(*y.T, nu))
    elif mode == "hamilton":
        cols = (t, *y.T, dynamics.h2d_columns(y[:, 1], y[:, 2], y[:, 3], nu))
    else:
        cols = (t, *y.T, geometry.h4d_columns(y[:, 3], *y[:, 4:].T, nu))
    return {name: np.asarray(c, dtype=float) for name, c in zip(COLUMNS[mode], cols)}


def simulate(cfg: RunConfig) -> tuple[dict, Optional[SchwarzError]]:
    """Run ``cfg``; on a numerical failure return the partial table and the error."""
    try:
        traj = integrate_mode(cfg, initial_state(cfg))
        err = None
    except SchwarzError as exc:
        traj = getattr(exc, "partial", None)
        if traj is None:
            traj = Trajectory(np.zeros(0), np.zeros((0, STATE_LEN[cfg.mode])))
        err = exc
    return build_table(cfg.mode, traj, cfg.lam, cfg.nu), err


# CSV

def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_rows(fh, table: dict) -> None:
    names = list(table)
    n = len(table[names[0]]) if names else 0
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(names)
    for i in range(n):
        w.writerow([fmt(table[k][i]) for k in names])


def write_csv(path: str, table: dict) -> None:
    with open(path, "w", newline="") as fh:
        write_rows(fh, table)


def read_csv(path: str) -> tuple[str, dict]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError("empty file")
    header = tuple(rows[0])
    mode = next((m for m, cols in COLUMNS.items() if cols == header), None)
    if mode is None:
        raise SchemaError(f"header {list(header)} matches no known schema")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise SchemaError(f"non-numeric entry: {exc}") from exc
    if data.size and data.shape[1] != len(header):
        raise SchemaError("ragged rows")
    if len(data) == 0:
        raise SchemaError("no data rows")
    return mode, {name: data[:, k] for k, name in enumerate(header)}


# charge summaries

def _finite(x: float):
    return float(x) if math.isfinite(x) else None


def _drift(col: np.ndarray) -> dict:
    dev = np.abs(col - col[0])
    i = int(np.nanargmax(dev)) if np.any(np.isfinite(dev)) else 0
    return {"max": _finite(dev[i]), "row": i}


def _peak(col: np.ndarray) -> dict:
    a = np.abs(col)
    i = int(np.nanargmax(a)) if np.any(np.isfinite(a)) else 0
    return {"max": _finite(a[i]), "row": i}


def charge_summary(mode: str, table: dict, lam: float, nu: float) -> dict:
    """Recompute conserved quantities from state columns and report drift.

    Row indices count data rows from 0.
    """
    out = {"schema": mode, "rows": len(table[COLUMNS[mode][0]]), "lambda": lam, "nu": nu}
    if out["rows"] == 0:
        out["drift"] = {}
        return out
    if mode == "schwarz":
        P, D, K = dynamics.schwarz_charge_columns(table["rho"], table["rho_dot"], table["rho_ddot"], lam)
        out["drift"] = {"P": _drift(P), "D": _drift(D), "K": _drift(K)}
        out["casimir_residual"] = _peak(
            dynamics.casimir_residual(table["P"], table["D"], table["K"], lam)
        )
        out["column_mismatch"] = _peak(
            np.maximum.reduce([np.abs(P - table["P"]), np.abs(D - table["D"]), np.abs(K - table["K"])])
        )
    elif mode == "lagrange":
        H, P, D, K = dynamics.lagrange_charge_columns(
            table["rho"], table["rho_dot"], table["s"], table["s_dot"], nu
        )
        out["drift"] = {"H": _drift(H), "P": _drift(P), "D": _drift(D), "K": _drift(K)}
        out["energy_error"] = _peak(H - (0.5 * lam + nu * nu))
        Dn = D + nu
        out["casimir_residual"] = _peak(P * K - Dn * Dn - 0.5 * lam)
    elif mode == "hamilton":
        H = dynamics.h2d_columns(table["s"], table["p_rho"], table["p_s"], nu)
        out["drift"] = {"H2d": _drift(H), "p_rho": _drift(table["p_rho"])}
    else:
        H = geometry.h4d_columns(table["s"], table["p_t"], table["p_v"], table["p_rho"], table["p_s"], nu)
        out["drift"] = {
            "H4d": _drift(H),
            "p_t": _drift(table["p_t"]),
            "p_v": _drift(table["p_v"]),
            "p_rho": _drift(table["p_rho"]),
        }
        out["null_residual"] = _peak(H)
    return out


def max_drift(summary: dict) -> float:
    vals = [d["max"] for d in summary.get("drift", {}).values() if d["max"] is not None]
    for key in ("casimir_residual", "column_mismatch", "energy_error"):
        if key in summary and summary[key]["max"] is not None:
            vals.append(summary[key]["max"])
    return max(vals, default=0.0)
