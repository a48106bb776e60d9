"""Schwarzian mechanics S(rho) = lambda in three equivalent formulations.

* third order:  rho''' = lambda rho' + (3/2) rho''^2 / rho'
* Lagrangian:   L = rho' (s' + s^2 rho' - 2 nu s), fields (rho, s)
* Hamiltonian:  H2d = p_s (p_rho - s^2 p_s + 2 nu s)

plus the conserved charges of each picture.  Functions that only do
arithmetic on state components accept numpy arrays as well as floats, so
whole trajectories can be evaluated column-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUp, PoleCrossing, VelocityVanishes
from .integrators import IntegratorConfig, Trajectory, integrate
from .jets import EPS_VELOCITY, Jet3, Mobius, jexp, jtan, mobius_apply, schwarzian_jet

BLOWUP = 1e12


@dataclass(frozen=True)
class SchwarzState:
    t: float
    rho: float
    rho_dot: float
    rho_ddot: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.rho_dot, self.rho_ddot])


@dataclass(frozen=True)
class LagrangeState:
    t: float
    rho: float
    rho_dot: float
    s: float
    s_dot: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.rho_dot, self.s, self.s_dot])


@dataclass(frozen=True)
class HamiltonState:
    t: float
    rho: float
    s: float
    p_rho: float
    p_s: float

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.s, self.p_rho, self.p_s])


@dataclass(frozen=True)
class Charges:
    H: float
    P: float
    D: float
    K: float


# third-order formulation

def schwarz_rhs(st: SchwarzState, lam: float, eps_velocity: float = EPS_VELOCITY):
    rd, rdd = st.rho_dot, st.rho_ddot
    if abs(rd) <= eps_velocity:
        raise VelocityVanishes(f"|rho_dot| = {abs(rd):.3g} at t={st.t}")
    return rd, rdd, lam * rd + 1.5 * rdd * rdd / rd


def _schwarz_guard(t, y):
    if abs(y[1]) <= EPS_VELOCITY:
        raise VelocityVanishes(f"|rho_dot| = {abs(y[1]):.3g} at t={t}")
    if not np.all(np.isfinite(y)) or abs(y[0]) > BLOWUP or abs(y[1]) > BLOWUP:
        raise BlowUp(f"runaway: rho={y[0]:.3g}, rho_dot={y[1]:.3g} at t={t}")


def integrate_schwarz(init: SchwarzState, lam: float, cfg: IntegratorConfig) -> Trajectory:
    """Columns of ``y``: rho, rho_dot, rho_ddot."""

    def rhs(t, y):
        return np.array(schwarz_rhs(SchwarzState(t, *y), lam))

    return integrate(rhs, init.t, init.as_array(), cfg, guard=_schwarz_guard)


def exact_solution(lam: float, m: Mobius, t: float) -> Jet3:
    """Jet at ``t`` of the closed-form solution m o phi_lambda.

    phi_lambda is tan(sqrt(lambda/2) t), t, or exp(sqrt(-2 lambda) t)
    for positive, zero and negative lambda.
    """
    x = Jet3.variable(t)
    if lam > 0:
        seed = jtan(x * math.sqrt(lam / 2.0))
    elif lam < 0:
        seed = jexp(x * math.sqrt(-2.0 * lam))
    else:
        seed = x
    return mobius_apply(m, seed)


def schwarz_state_from_jet(j: Jet3) -> SchwarzState:
    return SchwarzState(j.x0, j.f, j.f1, j.f2)


def rho_triple_jet(st: SchwarzState, lam: float) -> Jet3:
    """Full jet of rho with the third derivative supplied by the equation of motion."""
    _, _, r3 = schwarz_rhs(st, lam)
    return Jet3(st.t, st.rho, st.rho_dot, st.rho_ddot, r3)


def schwarz_charge_columns(rho, rho_dot, rho_ddot, lam):
    """P, D, K of the third-order equation; works on arrays."""
    q = rho_ddot / rho_dot
    P = (lam + 0.5 * q * q) / (2.0 * rho_dot)
    D = rho * P - 0.5 * q
    K = rho * rho * P + rho_dot - rho * q
    return P, D, K


def charges_schwarz(st: SchwarzState, lam: float) -> Charges:
    """Integrals of motion of S(rho) = lambda.

    H is reported as lambda / 2: nu is not a datum of this formulation.
    """
    if abs(st.rho_dot) <= EPS_VELOCITY:
        raise VelocityVanishes(f"|rho_dot| = {abs(st.rho_dot):.3g} at t={st.t}")
    P, D, K = schwarz_charge_columns(st.rho, st.rho_dot, st.rho_ddot, lam)
    return Charges(0.5 * lam, P, D, K)


def casimir_residual(P, D, K, lam):
    return P * K - D * D - 0.5 * lam


# Lagrangian formulation

def lagrange_rhs(st: LagrangeState, nu: float):
    rd, s, sd = st.rho_dot, st.s, st.s_dot
    rdd = 2.0 * s * rd * rd - 2.0 * nu * rd
    sdd = -4.0 * s * sd * rd - 2.0 * s * s * rdd + 2.0 * nu * sd
    return rd, rdd, sd, sdd


def lagrangian(st: LagrangeState, nu: float) -> float:
    return st.rho_dot * (st.s_dot + st.s * st.s * st.rho_dot - 2.0 * nu * st.s)


def lagrange_charge_columns(rho, rho_dot, s, s_dot, nu):
    H = rho_dot * (s_dot + s * s * rho_dot)
    P = s_dot + 2.0 * s * s * rho_dot - 2.0 * nu * s
    D = rho * P - s * rho_dot
    K = rho * rho * P + (1.0 - 2.0 * s * rho) * rho_dot + 2.0 * nu * rho
    return H, P, D, K


def charges_lagrange(st: LagrangeState, nu: float) -> Charges:
    return Charges(*lagrange_charge_columns(st.rho, st.rho_dot, st.s, st.s_dot, nu))


def lagrange_casimir_residual(ch: Charges, lam: float, nu: float) -> float:
    """P K - (D + nu)^2 - lambda/2.

    The Noether dilatation charge of the Lagrangian carries an extra
    constant -nu on shell relative to the third-order D.
    """
    Dn = ch.D + nu
    return ch.P * ch.K - Dn * Dn - 0.5 * lam


def lagrange_from_schwarz(st: SchwarzState, lam: float, nu: float) -> LagrangeState:
    """On-shell Lagrangian data: s from the s-equation, s_dot from its time derivative."""
    r1, r2 = st.rho_dot, st.rho_ddot
    _, _, r3 = schwarz_rhs(st, lam)
    s = nu / r1 + r2 / (2.0 * r1 * r1)
    s_dot = -nu * r2 / r1**2 + r3 / (2.0 * r1**2) - r2 * r2 / r1**3
    return LagrangeState(st.t, st.rho, r1, s, s_dot)


def _lagrange_guard(t, y):
    if not np.all(np.isfinite(y)) or abs(y[0]) > BLOWUP or abs(y[1]) > BLOWUP:
        raise BlowUp(f"runaway: rho={y[0]:.3g}, rho_dot={y[1]:.3g} at t={t}")


def integrate_lagrange(init: LagrangeState, nu: float, cfg: IntegratorConfig) -> Trajectory:
    """Columns of ``y``: rho, rho_dot, s, s_dot."""

    def rhs(t, y):
        return np.array(lagrange_rhs(LagrangeState(t, *y), nu))

    return integrate(rhs, init.t, init.as_array(), cfg, guard=_lagrange_guard)


def schwarzian_lagrange_columns(rho_dot, s, s_dot, nu):
    """S(rho) along Lagrangian data, with rho'' and rho''' from the flow."""
    rdd = 2.0 * s * rho_dot**2 - 2.0 * nu * rho_dot
    rddd = 2.0 * s_dot * rho_dot**2 + 4.0 * s * rho_dot * rdd - 2.0 * nu * rdd
    q = rdd / rho_dot
    return rddd / rho_dot - 1.5 * q * q


# Hamiltonian formulation

def h2d(st: HamiltonState, nu: float):
    return st.p_s * (st.p_rho - st.s * st.s * st.p_s + 2.0 * nu * st.s)


def h2d_columns(s, p_rho, p_s, nu):
    return p_s * (p_rho - s * s * p_s + 2.0 * nu * s)


def hamilton_rhs(st: HamiltonState, nu: float):
    s, pr, ps = st.s, st.p_rho, st.p_s
    return (
        ps,
        pr - 2.0 * s * s * ps + 2.0 * nu * s,
        0.0,
        2.0 * s * ps * ps - 2.0 * nu * ps,
    )


def legendre(st: LagrangeState, nu: float) -> HamiltonState:
    p_rho = st.s_dot + 2.0 * st.s * st.s * st.rho_dot - 2.0 * nu * st.s
    return HamiltonState(st.t, st.rho, st.s, p_rho, st.rho_dot)


def inverse_legendre(st: HamiltonState, nu: float) -> LagrangeState:
    s_dot = st.p_rho - 2.0 * st.s * st.s * st.p_s + 2.0 * nu * st.s
    return LagrangeState(st.t, st.rho, st.p_s, st.s, s_dot)


def _hamilton_guard(t, y):
    if not np.all(np.isfinite(y)) or abs(y[0]) > BLOWUP or abs(y[3]) > BLOWUP:
        raise BlowUp(f"runaway: rho={y[0]:.3g}, p_s={y[3]:.3g} at t={t}")


def integrate_hamilton(init: HamiltonState, nu: float, cfg: IntegratorConfig) -> Trajectory:
    """Columns of ``y``: rho, s, p_rho, p_s."""

    def rhs(t, y):
        return np.array(hamilton_rhs(HamiltonState(t, *y), nu))

    return integrate(rhs, init.t, init.as_array(), cfg, guard=_hamilton_guard)


def schwarzian_hamilton_columns(s, p_rho, p_s, nu, p_v=1.0):
    """S(rho) along canonical data (p_v = 1 for the 2d system)."""
    s_dot = p_rho - 2.0 * s * s * p_s + 2.0 * nu * s * p_v
    ps_dot = 2.0 * s * p_s * p_s - 2.0 * nu * p_v * p_s
    ps_ddot = 2.0 * s_dot * p_s * p_s + 4.0 * s * p_s * ps_dot - 2.0 * nu * p_v * ps_dot
    q = ps_dot / p_s
    return ps_ddot / p_s - 1.5 * q * q


# diagnostics

def fd_derivative(t: np.ndarray, f: np.ndarray) -> np.ndarray:
    """df/dt from samples: 4th-order stencils on uniform grids, np.gradient otherwise."""
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    n = len(t)
    dt = np.diff(t)
    if n < 5:
        raise ValueError("need at least 5 samples")
    h = (t[-1] - t[0]) / (n - 1)
    if np.max(np.abs(dt - h)) > 1e-9 * abs(h):
        return np.gradient(f, t, edge_order=2)
    d = np.empty(n)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def fd_schwarzian_column(t, rho_dot, rho_ddot) -> np.ndarray:
    """S(rho) with rho''' estimated by differencing the sampled rho''."""
    rddd = fd_derivative(t, rho_ddot)
    q = rho_ddot / rho_dot
    return rddd / rho_dot - 1.5 * q * q


def drift(col: np.ndarray) -> float:
    return float(np.max(np.abs(col - col[0])))


@dataclass
class EquivalenceReport:
    lam: float
    nu: float
    max_deviation: float  # max pairwise |rho_i - rho_j| over common samples
    deviations: dict = field(default_factory=dict)
    max_exact_error: float = 0.0  # vs. closed-form solution, when the seed has one
    s_drift_lagrange: float = 0.0  # max |S(rho(t)) - S(rho(0))| along the Lagrangian flow
    s_drift_hamilton: float = 0.0
    energy_error: float = 0.0  # max |H - (lambda/2 + nu^2)| along the Lagrangian flow
    p_rho_drift: float = 0.0


def equivalence_check(
    lam: float,
    nu: float,
    cfg: IntegratorConfig,
    m: Mobius | None = None,
    t0: float = 0.0,
) -> EquivalenceReport:
    """Integrate all three formulations from matched data and compare rho(t).

    Initial data come from the closed-form solution m o phi_lambda at t0,
    mapped to (s, s_dot) through the s-equation and then through the
    Legendre map.
    """
    if cfg.method != "rk4":
        raise ValueError("equivalence_check compares samples on a common fixed grid; use rk4")
    m = Mobius.identity() if m is None else m
    st0 = schwarz_state_from_jet(exact_solution(lam, m, t0))
    ls0 = lagrange_from_schwarz(st0, lam, nu)
    hs0 = legendre(ls0, nu)

    tr_s = integrate_schwarz(st0, lam, cfg)
    tr_l = integrate_lagrange(ls0, nu, cfg)
    tr_h = integrate_hamilton(hs0, nu, cfg)
    rho = {"schwarz": tr_s.y[:, 0], "lagrange": tr_l.y[:, 0], "hamilton": tr_h.y[:, 0]}
    devs = {
        "schwarz-lagrange": float(np.max(np.abs(rho["schwarz"] - rho["lagrange"]))),
        "schwarz-hamilton": float(np.max(np.abs(rho["schwarz"] - rho["hamilton"]))),
        "lagrange-hamilton": float(np.max(np.abs(rho["lagrange"] - rho["hamilton"]))),
    }
    try:
        exact = np.array([exact_solution(lam, m, t).f for t in tr_s.t])
        exact_err = float(np.max(np.abs(exact - rho["schwarz"])))
    except PoleCrossing:
        exact_err = float("nan")

    S_l = schwarzian_lagrange_columns(tr_l.y[:, 1], tr_l.y[:, 2], tr_l.y[:, 3], nu)
    S_h = schwarzian_hamilton_columns(tr_h.y[:, 1], tr_h.y[:, 2], tr_h.y[:, 3], nu)
    H, *_ = lagrange_charge_columns(*tr_l.y.T, nu)
    return EquivalenceReport(
        lam=lam,
        nu=nu,
        max_deviation=max(devs.values()),
        deviations=devs,
        max_exact_error=exact_err,
        s_drift_lagrange=drift(S_l),
        s_drift_hamilton=drift(S_h),
        energy_error=float(np.max(np.abs(H - (0.5 * lam + nu * nu)))),
        p_rho_drift=drift(tr_h.y[:, 2]),
    )


def on_shell_energy_error(st: SchwarzState, lam: float, nu: float) -> float:
    ch = charges_lagrange(lagrange_from_schwarz(st, lam, nu), nu)
    return abs(ch.H - (0.5 * lam + nu * nu))


def schwarzian_of_state(st: SchwarzState, lam: float) -> float:
    return schwarzian_jet(rho_triple_jet(st, lam))
