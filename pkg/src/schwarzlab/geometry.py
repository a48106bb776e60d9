"""Eisenhart lift of Schwarzian mechanics: a 4d ultrahyperbolic metric.

Coordinates are ordered (t, v, rho, s), indices 0..3:

    ds^2 = 2 (dt dv - 2 nu s dt drho + s^2 drho^2 + drho ds)

Conventions:
    Gamma^P_MN = 1/2 g^PQ (d_M g_QN + d_N g_QM - d_Q g_MN)
    R^P_QMN    = d_M Gamma^P_NQ - d_N Gamma^P_MQ
                 + Gamma^P_ML Gamma^L_NQ - Gamma^P_NL Gamma^L_MQ
    R_QN       = R^P_QPN

With these, G_MN = 8 pi T_MN holds for the stress tensor built from the
Killing fields d_v and d_t.  Array layouts follow the index order of the
symbols, e.g. ``gamma[P, M, N]`` and ``riemann[P, Q, M, N]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BlowUp, SchwarzError
from .integrators import IntegratorConfig, Trajectory, integrate

T, V, RHO, S = 0, 1, 2, 3
DIM = 4


@dataclass(frozen=True)
class Coord4:
    t: float
    v: float
    rho: float
    s: float

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.v, self.rho, self.s])


@dataclass(frozen=True)
class MetricPoint:
    x: Coord4
    nu: float
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray  # dg[P, M, N] = d_P g_MN
    ddg: np.ndarray  # ddg[Q, P, M, N] = d_Q d_P g_MN
    dg_inv: np.ndarray  # dg_inv[P, M, N] = d_P g^MN


def _metric_arrays(s: float, nu: float):
    g = np.zeros((DIM, DIM))
    g[T, V] = g[V, T] = 1.0
    g[T, RHO] = g[RHO, T] = -2.0 * nu * s
    g[RHO, RHO] = 2.0 * s * s
    g[RHO, S] = g[S, RHO] = 1.0

    gi = np.zeros((DIM, DIM))
    gi[T, V] = gi[V, T] = 1.0
    gi[V, S] = gi[S, V] = 2.0 * nu * s
    gi[RHO, S] = gi[S, RHO] = 1.0
    gi[S, S] = -2.0 * s * s
    return g, gi


def metric_at(x: Coord4, nu: float) -> MetricPoint:
    g, gi = _metric_arrays(x.s, nu)

    dg = np.zeros((DIM, DIM, DIM))
    dg[S, T, RHO] = dg[S, RHO, T] = -2.0 * nu
    dg[S, RHO, RHO] = 4.0 * x.s

    ddg = np.zeros((DIM,) * 4)
    ddg[S, S, RHO, RHO] = 4.0

    dgi = np.zeros((DIM, DIM, DIM))
    dgi[S, V, S] = dgi[S, S, V] = 2.0 * nu
    dgi[S, S, S] = -4.0 * x.s
    return MetricPoint(x, nu, g, gi, dg, ddg, dgi)


def signature(mp: MetricPoint) -> tuple[int, int]:
    """(number of positive, number of negative) eigenvalues of g."""
    ev = np.linalg.eigvalsh(mp.g)
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def _first_kind(dg: np.ndarray) -> np.ndarray:
    # [Q, M, N] = 1/2 (d_M g_QN + d_N g_QM - d_Q g_MN)
    return 0.5 * (
        np.einsum("mqn->qmn", dg) + np.einsum("nqm->qmn", dg) - dg
    )


def christoffel(mp: MetricPoint) -> np.ndarray:
    """Gamma[P, M, N]."""
    return np.einsum("pq,qmn->pmn", mp.g_inv, _first_kind(mp.dg))


def christoffel_derivative(mp: MetricPoint) -> np.ndarray:
    """dGamma[L, P, M, N] = d_L Gamma^P_MN, analytic."""
    first = _first_kind(mp.dg)
    dfirst = np.stack([_first_kind(mp.ddg[L]) for L in range(DIM)])
    return np.einsum("lpq,qmn->lpmn", mp.dg_inv, first) + np.einsum(
        "pq,lqmn->lpmn", mp.g_inv, dfirst
    )


def christoffel_derivative_fd(x: Coord4, nu: float, h: float = 1e-5) -> np.ndarray:
    """Central differences with one Richardson extrapolation step."""

    def gamma_at(y):
        return christoffel(metric_at(Coord4(*y), nu))

    base = x.as_array()
    out = np.zeros((DIM,) * 4)
    for L in range(DIM):
        e = np.zeros(DIM)
        e[L] = 1.0
        d_h = (gamma_at(base + h * e) - gamma_at(base - h * e)) / (2 * h)
        d_2h = (gamma_at(base + 2 * h * e) - gamma_at(base - 2 * h * e)) / (4 * h)
        out[L] = (4.0 * d_h - d_2h) / 3.0
    return out


@dataclass(frozen=True)
class Curvature:
    riemann: np.ndarray  # R^P_QMN
    ricci: np.ndarray
    scalar: float
    einstein: np.ndarray

    def riemann_lowered(self, g: np.ndarray) -> np.ndarray:
        return np.einsum("ap,pqmn->aqmn", g, self.riemann)


def curvature(x: Coord4, nu: float, method: str = "analytic") -> Curvature:
    mp = metric_at(x, nu)
    gam = christoffel(mp)
    if method == "analytic":
        dgam = christoffel_derivative(mp)
    elif method == "fd":
        dgam = christoffel_derivative_fd(x, nu)
    else:
        raise ValueError(f"unknown method {method!r}")
    riem = (
        np.einsum("mpnq->pqmn", dgam)
        - np.einsum("npmq->pqmn", dgam)
        + np.einsum("pml,lnq->pqmn", gam, gam)
        - np.einsum("pnl,lmq->pqmn", gam, gam)
    )
    ric = np.einsum("pqpn->qn", riem)
    R = float(np.einsum("mn,mn->", mp.g_inv, ric))
    G = ric - 0.5 * mp.g * R
    return Curvature(riem, ric, R, G)


def killing_covectors(x: Coord4, nu: float) -> tuple[np.ndarray, np.ndarray]:
    """xi_M = g_Mv and chi_M = g_Mt (index-lowered d_v and d_t)."""
    g = metric_at(x, nu).g
    return g[:, V].copy(), g[:, T].copy()


def stress_tensor(x: Coord4, nu: float) -> np.ndarray:
    xi, chi = killing_covectors(x, nu)
    return -(nu * nu / (4 * math.pi)) * np.outer(xi, xi) - (1 / (4 * math.pi)) * (
        np.outer(xi, chi) + np.outer(chi, xi)
    )


def einstein_residual(x: Coord4, nu: float, method: str = "analytic") -> float:
    G = curvature(x, nu, method).einstein
    return float(np.max(np.abs(G - 8 * math.pi * stress_tensor(x, nu))))


def riemann_symmetry_residual(x: Coord4, nu: float) -> dict[str, float]:
    """Index symmetries and the first Bianchi identity of R_PQMN."""
    mp = metric_at(x, nu)
    Rl = curvature(x, nu).riemann_lowered(mp.g)
    return {
        "antisym_12": float(np.max(np.abs(Rl + Rl.transpose(1, 0, 2, 3)))),
        "antisym_34": float(np.max(np.abs(Rl + Rl.transpose(0, 1, 3, 2)))),
        "pair_sym": float(np.max(np.abs(Rl - Rl.transpose(2, 3, 0, 1)))),
        "bianchi": float(
            np.max(np.abs(Rl + Rl.transpose(0, 2, 3, 1) + Rl.transpose(0, 3, 1, 2)))
        ),
    }


# Killing fields: components k^M and Jacobian jac[M, N] = d_M k^N

@dataclass(frozen=True)
class KillingField:
    name: str
    components: Callable[[Coord4, float], np.ndarray]
    jacobian: Callable[[Coord4, float], np.ndarray]


def _zero_jac(x, nu):
    return np.zeros((DIM, DIM))


def _dilatation(x, nu):
    return np.array([0.0, 0.0, x.rho, -x.s])


def _dilatation_jac(x, nu):
    j = np.zeros((DIM, DIM))
    j[RHO, RHO] = 1.0
    j[S, S] = -1.0
    return j


def _special(x, nu):
    return np.array([0.0, 2 * nu * x.rho, x.rho**2, 1.0 - 2.0 * x.rho * x.s])


def _special_jac(x, nu):
    j = np.zeros((DIM, DIM))
    j[RHO, V] = 2 * nu
    j[RHO, RHO] = 2 * x.rho
    j[RHO, S] = -2 * x.s
    j[S, S] = -2 * x.rho
    return j


def _unit(i):
    def comp(x, nu):
        e = np.zeros(DIM)
        e[i] = 1.0
        return e

    return comp


KILLING_FIELDS = {
    "xi": KillingField("xi", _unit(V), _zero_jac),  # d_v
    "chi": KillingField("chi", _unit(T), _zero_jac),  # d_t
    "phi": KillingField("phi", _unit(RHO), _zero_jac),  # d_rho
    "psi": KillingField("psi", _dilatation, _dilatation_jac),  # rho d_rho - s d_s
    "zeta": KillingField("zeta", _special, _special_jac),
}


def covariant_derivative_covector(k: KillingField, x: Coord4, nu: float) -> np.ndarray:
    """nabla_M k_N with k_N = g_NP k^P."""
    mp = metric_at(x, nu)
    kup = k.components(x, nu)
    klow = mp.g @ kup
    # d_M k_N = d_M g_NP k^P + g_NP d_M k^P
    dk = np.einsum("mnp,p->mn", mp.dg, kup) + k.jacobian(x, nu) @ mp.g
    return dk - np.einsum("pmn,p->mn", christoffel(mp), klow)


def killing_residual(k: KillingField, x: Coord4, nu: float) -> float:
    nk = covariant_derivative_covector(k, x, nu)
    return float(np.max(np.abs(nk + nk.T)))


def lie_derivative_metric(k: KillingField, x: Coord4, nu: float) -> np.ndarray:
    """(L_k g)_MN from partial derivatives only; independent of the connection."""
    mp = metric_at(x, nu)
    kup = k.components(x, nu)
    jac = k.jacobian(x, nu)
    return (
        np.einsum("p,pmn->mn", kup, mp.dg)
        + np.einsum("mp,pn->mn", jac, mp.g)
        + np.einsum("np,mp->mn", jac, mp.g)
    )


def covariant_constancy_residual(x: Coord4, nu: float) -> float:
    """max |nabla_M xi_N| for xi = d_v."""
    return float(np.max(np.abs(covariant_derivative_covector(KILLING_FIELDS["xi"], x, nu))))


# geodesics

@dataclass(frozen=True)
class GeodesicPhase:
    x: Coord4
    p: np.ndarray  # (p_t, p_v, p_rho, p_s)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x.as_array(), np.asarray(self.p, dtype=float)])


def h4d(x: Coord4, p, nu: float) -> float:
    gi = metric_at(x, nu).g_inv
    p = np.asarray(p, dtype=float)
    return 0.5 * float(p @ gi @ p)


def h4d_columns(s, p_t, p_v, p_rho, p_s, nu):
    """Closed form of H_4d; works on arrays."""
    return p_s * (p_rho - s * s * p_s + 2.0 * nu * s * p_v) + p_t * p_v


def geodesic_rhs(y: np.ndarray, nu: float) -> np.ndarray:
    """Canonical equations of H_4d = 1/2 g^MN p_M p_N."""
    x = Coord4(*y[:4])
    p = y[4:]
    mp = metric_at(x, nu)
    xdot = mp.g_inv @ p
    pdot = -0.5 * np.einsum("lmn,m,n->l", mp.dg_inv, p, p)
    return np.concatenate([xdot, pdot])


def null_initial_data(x: Coord4, p_v: float, p_rho: float, p_s: float, nu: float) -> GeodesicPhase:
    """Solve H_4d = 0 for p_t."""
    if p_v == 0.0:
        raise ValueError("p_v must be nonzero to solve the null condition for p_t")
    rest = p_s * (p_rho - x.s * x.s * p_s + 2.0 * nu * x.s * p_v)
    return GeodesicPhase(x, np.array([-rest / p_v, p_v, p_rho, p_s]))


class NotReducible(SchwarzError):
    """Null reduction along v requires p_v != 0."""


def geodesic_flow(
    init: GeodesicPhase,
    nu: float,
    cfg: IntegratorConfig,
    require_reducible: bool = False,
    affine0: float = 0.0,
) -> Trajectory:
    """Columns of ``y``: t, v, rho, s, p_t, p_v, p_rho, p_s; ``traj.t`` is the affine parameter."""
    if require_reducible and init.p[1] == 0.0:
        raise NotReducible("p_v = 0: v decouples and the run cannot be null-reduced")

    def guard(lam, y):
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > 1e12:
            raise BlowUp(f"geodesic runaway at affine parameter {lam}")

    return integrate(lambda a, y: geodesic_rhs(y, nu), affine0, init.as_array(), cfg, guard=guard)


def reduced_lambda(p_t: float, nu: float) -> float:
    """Coupling reproduced by null reduction with p_v = 1: H_2d = -p_t = lambda/2 + nu^2."""
    return -2.0 * p_t - 2.0 * nu * nu


def random_coord(rng: np.random.Generator, scale: float = 2.0) -> Coord4:
    return Coord4(*rng.uniform(-scale, scale, size=4))
