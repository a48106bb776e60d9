"""SL(2,R) x R nonlinear realization on the Goldstone fields (rho, s, u).

The generators act as first-order differential operators
``i q(rho) d/drho`` (P, D, K) and ``i d/dt`` (H).  Test polynomials in
``(t, rho)`` carry Gaussian-integer coefficients so brackets are checked
in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExponentOverflow, NegativeArgument, VelocityVanishes
from .jets import EPS_VELOCITY, Jet3, schwarzian_jet

MAX_TEST_DEGREE = 8
_T_DEG = 2  # t-degree of test monomials, only needed to probe H


@dataclass(frozen=True)
class Generator:
    name: str
    axis: int  # 0 -> d/dt, 1 -> d/drho
    coeffs: tuple[int, ...]  # q(rho) = sum coeffs[k] rho^k

    def act(self, poly: np.ndarray) -> np.ndarray:
        """Apply ``i q(rho) d/d(axis)`` to a Gaussian-integer polynomial.

        ``poly`` has shape (2, nt, nr): real and imaginary coefficient
        grids indexed by powers of t and rho.
        """
        _, nt, nr = poly.shape
        d = np.zeros_like(poly)
        if self.axis == 0:
            k = np.arange(1, nt, dtype=np.int64)
            d[:, :-1, :] = poly[:, 1:, :] * k[None, :, None]
        else:
            k = np.arange(1, nr, dtype=np.int64)
            d[:, :, :-1] = poly[:, :, 1:] * k[None, None, :]
        out = np.zeros_like(poly)
        for p, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if p:
                if np.any(d[:, :, nr - p:]):
                    raise OverflowError("test polynomial grid too small")
                out[:, :, p:] += c * d[:, :, : nr - p]
            else:
                out += c * d
        # multiply by i: (re, im) -> (-im, re)
        return np.stack([-out[1], out[0]])


H = Generator("H", 0, (1,))
P = Generator("P", 1, (1,))
D = Generator("D", 1, (0, 1))
K = Generator("K", 1, (0, 0, 1))
GENERATORS = {"H": H, "P": P, "D": D, "K": K}

# [X, Y] = i * coeff * Z; Z is None for commuting pairs
STRUCTURE = {
    ("P", "D"): (1, "P"),
    ("P", "K"): (2, "D"),
    ("D", "K"): (1, "K"),
    ("H", "P"): (0, None),
    ("H", "D"): (0, None),
    ("H", "K"): (0, None),
}


def _monomial(a: int, k: int, nt: int, nr: int) -> np.ndarray:
    poly = np.zeros((2, nt, nr), dtype=np.int64)
    poly[0, a, k] = 1
    return poly


def _times_i(poly: np.ndarray) -> np.ndarray:
    return np.stack([-poly[1], poly[0]])


def commutator(x: Generator, y: Generator, poly: np.ndarray) -> np.ndarray:
    return x.act(y.act(poly)) - y.act(x.act(poly))


def bracket_residuals(max_degree: int = MAX_TEST_DEGREE) -> dict[str, int]:
    """Max integer deviation of each structure relation over test monomials."""
    nt, nr = _T_DEG + 1, max_degree + 3
    out = {}
    for (xn, yn), (c, zn) in STRUCTURE.items():
        x, y = GENERATORS[xn], GENERATORS[yn]
        worst = 0
        for a in range(_T_DEG + 1):
            for k in range(max_degree + 1):
                f = _monomial(a, k, nt, nr)
                lhs = commutator(x, y, f)
                rhs = np.zeros_like(f) if zn is None else c * _times_i(GENERATORS[zn].act(f))
                worst = max(worst, int(np.max(np.abs(lhs - rhs))))
        out[f"[{xn},{yn}]"] = worst
    return out


def bracket_check(max_degree: int = MAX_TEST_DEGREE) -> int:
    return max(bracket_residuals(max_degree).values())


@dataclass(frozen=True)
class GoldstonePoint:
    t: float
    rho: float
    s: float
    u: float
    rho_dot: float
    s_dot: float
    u_dot: float


@dataclass(frozen=True)
class GroupParams:
    """Infinitesimal parameters of exp(i sigma H) exp(i alpha P) exp(i gamma K) exp(i beta D)."""

    sigma: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def scaled(self, k: float) -> "GroupParams":
        return GroupParams(k * self.sigma, k * self.alpha, k * self.beta, k * self.gamma)


@dataclass(frozen=True)
class MCForms:
    omega_H: float
    omega_P: float
    omega_K: float
    omega_D: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.omega_H, self.omega_P, self.omega_K, self.omega_D)


def act_infinitesimal(g: GroupParams, p: GoldstonePoint) -> GoldstonePoint:
    """Left action to first order in the parameters.

    Fields are carried as scalars (rho'(t') = rho(t) for the time shift);
    the derivative entries are the t-derivatives of the transformed fields.
    """
    al, be, ga = g.alpha, g.beta, g.gamma
    r, s, rd, sd = p.rho, p.s, p.rho_dot, p.s_dot
    return GoldstonePoint(
        t=p.t + g.sigma,
        rho=r + al + be * r + ga * r * r,
        s=s - be * s + ga * (1.0 - 2.0 * r * s),
        u=p.u + be + 2.0 * ga * r,
        rho_dot=rd + be * rd + 2.0 * ga * r * rd,
        s_dot=sd - be * sd - 2.0 * ga * (rd * s + r * sd),
        u_dot=p.u_dot + 2.0 * ga * rd,
    )


def maurer_cartan(p: GoldstonePoint) -> MCForms:
    if abs(p.u) > 700.0:
        raise ExponentOverflow(f"|u| = {abs(p.u):.3g} > 700")
    eu = math.exp(p.u)
    return MCForms(
        omega_H=1.0,
        omega_P=p.rho_dot / eu,
        omega_K=eu * (p.s_dot + p.s * p.s * p.rho_dot),
        omega_D=p.u_dot - 2.0 * p.s * p.rho_dot,
    )


def invariance_residual(g: GroupParams, p: GoldstonePoint) -> float:
    before = maurer_cartan(p).as_tuple()
    after = maurer_cartan(act_infinitesimal(g, p)).as_tuple()
    return max(abs(x - y) for x, y in zip(after, before))


def impose_constraints(
    j: Jet3, mu: float, nu: float, eps_velocity: float = EPS_VELOCITY
) -> tuple[float, float, float, float]:
    """Solve omega_P = mu, omega_D = -2 nu for the redundant fields.

    Returns ``(u, s, s_dot, u_dot)`` at the base point of the rho-jet.
    """
    if mu == 0.0:
        raise ValueError("mu must be nonzero")
    r1, r2, r3 = j.f1, j.f2, j.f3
    if abs(r1) <= eps_velocity:
        raise VelocityVanishes(f"|rho_dot| = {abs(r1):.3g} at t={j.x0}")
    if r1 / mu <= 0.0:
        raise NegativeArgument(f"rho_dot/mu = {r1 / mu:.3g} is not positive")
    u = math.log(r1 / mu)
    s = nu / r1 + r2 / (2.0 * r1 * r1)
    u_dot = r2 / r1
    s_dot = -nu * r2 / r1**2 + r3 / (2.0 * r1**2) - r2 * r2 / r1**3
    return u, s, s_dot, u_dot


def constrained_point(j: Jet3, mu: float, nu: float) -> GoldstonePoint:
    u, s, s_dot, u_dot = impose_constraints(j, mu, nu)
    return GoldstonePoint(j.x0, j.f, s, u, j.f1, s_dot, u_dot)


def reduced_invariant(j: Jet3, mu: float, nu: float) -> float:
    """Coefficient of dt in 2 mu omega_K - 2 nu^2 omega_H on the constraint surface."""
    w = maurer_cartan(constrained_point(j, mu, nu))
    return 2.0 * mu * w.omega_K - 2.0 * nu * nu * w.omega_H


def random_goldstone_point(rng: np.random.Generator) -> GoldstonePoint:
    """Generic point with O(1) entries; used by property sweeps."""
    v = rng.uniform(-2.0, 2.0, size=7)
    return GoldstonePoint(*v)


def reduction_error(j: Jet3, mu: float, nu: float) -> float:
    """|reduced_invariant - S(rho)| scaled by max(1, |S|)."""
    S = schwarzian_jet(j)
    return abs(reduced_invariant(j, mu, nu) - S) / max(1.0, abs(S))
