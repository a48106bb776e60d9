"""Verification suites with fixed seeds, sample counts and tolerances."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import __version__, coset, dynamics, geometry
from .integrators import IntegratorConfig
from .jets import (
    Jet3,
    Mobius,
    jexp,
    jpoly,
    jsinh,
    jtan,
    mobius_apply,
    mobius_lifted,
    schwarzian_compose_law_residual,
    schwarzian_jet,
)

SUITES = ("algebra", "invariance", "reduction", "dynamics", "geometry")
GEOMETRY_NUS = (0.0, 1.0, -1.0, 2.0)
SEED = 20181119


@dataclass
class Check:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        d = {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.detail:
            d["detail"] = self.detail
        return d


def _le(name, value, tol, **detail) -> Check:
    value = float(value)
    return Check(name, value, tol, bool(value <= tol), detail)


@dataclass
class VerifyReport:
    suite: str
    checks: list
    config: dict
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {
            "suite": self.suite,
            "version": self.version,
            "config": self.config,
            "pass": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


# random well-conditioned samples

def random_jet(rng: np.random.Generator) -> Jet3:
    sign = rng.choice([-1.0, 1.0])
    return Jet3(
        float(rng.uniform(-1, 1)),
        float(rng.uniform(-2, 2)),
        float(sign * rng.uniform(0.2, 3.0)),
        float(rng.uniform(-3, 3)),
        float(rng.uniform(-3, 3)),
    )


def random_mobius_for(rng: np.random.Generator, j: Jet3, min_den: float = 0.25) -> Mobius:
    """Random matrix with |det| >= 0.1, |entries| <= 2 and |c f + d| >= min_den."""
    while True:
        a, b, c, d = rng.uniform(-2, 2, size=4)
        if abs(a * d - b * c) >= 0.1 and abs(c * j.f + d) >= min_den:
            return Mobius(float(a), float(b), float(c), float(d))


def composition_catalog():
    """(name, outer map on jets, inner jet) triples of closed-form functions."""
    m = Mobius(2.0, -1.0, 0.5, 1.5)
    outers = {
        "tan": jtan,
        "exp": jexp,
        "sinh": jsinh,
        "mobius": mobius_lifted(m),
        "cubic": lambda j: jpoly([0.3, 1.0, 0.5, 0.2], j),
        "quintic": lambda j: jpoly([0.0, 2.0, -0.3, 0.1, 0.05, -0.01], j),
    }
    inners = {
        "2t@0": Jet3.variable(0.0) * 2.0,
        "exp@0": jexp(Jet3.variable(0.0)),
        "sinh(t/2)@0.3": jsinh(Jet3.variable(0.3) * 0.5),
        "quadratic@0.2": jpoly([0.1, 1.0, 0.4], Jet3.variable(0.2)),
        "tan(t/3)@0.5": jtan(Jet3.variable(0.5) / 3.0),
    }
    return [(f"{fo}∘{gi}", outers[fo], inners[gi]) for fo in outers for gi in inners]


def check_algebra():
    res = coset.bracket_residuals()
    return [_le(f"bracket {k}", v, 0.0) for k, v in res.items()]


def mobius_invariance_error(n: int = 1000, seed: int = SEED) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        j = random_jet(rng)
        m = random_mobius_for(rng, j)
        S = schwarzian_jet(j)
        err = abs(schwarzian_jet(mobius_apply(m, j)) - S) / (1.0 + abs(S))
        worst = max(worst, err)
    return worst


def composition_law_error() -> float:
    return max(schwarzian_compose_law_residual(f, g) for _, f, g in composition_catalog())


def mc_invariance_ratios(n: int = 100, seed: int = SEED, eps=(1e-3, 5e-4, 2.5e-4)):
    """Per point: residual(eps_k)/eps_k^2 and halving ratios."""
    rng = np.random.default_rng(seed + 1)
    scaled, ratios = [], []
    for _ in range(n):
        p = coset.random_goldstone_point(rng)
        direction = coset.GroupParams(*rng.uniform(-1, 1, size=4))
        r = [coset.invariance_residual(direction.scaled(e), p) for e in eps]
        scaled.append([ri / e**2 for ri, e in zip(r, eps)])
        ratios.append([r[k] / r[k + 1] for k in range(len(r) - 1)])
    return np.array(scaled), np.array(ratios)


def check_invariance():
    scaled, ratios = mc_invariance_ratios()
    spread = float(np.max(scaled.max(axis=1) / scaled.min(axis=1)))
    ratio_dev = float(np.max(np.abs(ratios - 4.0)))
    return [
        _le("mobius invariance (1000 pairs, relative)", mobius_invariance_error(), 1e-9),
        _le("composition law (catalog)", composition_law_error(), 1e-10),
        _le("maurer-cartan halving ratio |r - 4|", ratio_dev, 0.5,
            min_ratio=float(ratios.min()), max_ratio=float(ratios.max())),
        # residual/eps^2 stays within a factor 1.5 across the three eps values
        _le("maurer-cartan residual/eps^2 spread", spread, 1.5),
    ]


def constraint_and_reduction_errors(n_jets: int = 100, n_pairs: int = 10, seed: int = SEED):
    rng = np.random.default_rng(seed + 2)
    constraint, reduction, mu_nu_spread = 0.0, 0.0, 0.0
    pairs = []
    while len(pairs) < n_pairs:
        mu, nu = rng.uniform(-3, 3, size=2)
        if abs(mu) > 0.1:
            pairs.append((float(mu), float(nu)))
    for _ in range(n_jets):
        j = random_jet(rng)
        values = []
        for mu, nu in pairs:
            if j.f1 / mu <= 0:
                mu = -mu
            w = coset.maurer_cartan(coset.constrained_point(j, mu, nu))
            constraint = max(constraint, abs(w.omega_P - mu), abs(w.omega_D + 2 * nu))
            reduction = max(reduction, coset.reduction_error(j, mu, nu))
            values.append(coset.reduced_invariant(j, mu, nu))
        S = schwarzian_jet(j)
        mu_nu_spread = max(mu_nu_spread, (max(values) - min(values)) / max(1.0, abs(S)))
    return constraint, reduction, mu_nu_spread


def check_reduction():
    c, r, spread = constraint_and_reduction_errors()
    return [
        _le("constraints omega_P = mu, omega_D = -2 nu", c, 1e-12),
        _le("2 mu omega_K - 2 nu^2 = S (relative)", r, 1e-12),
        _le("(mu, nu) independence (relative spread)", spread, 1e-12),
    ]


def schwarz_tan_run(h: float = 1e-3):
    cfg = IntegratorConfig(h=h, t_end=1.0)
    tr = dynamics.integrate_schwarz(dynamics.SchwarzState(0.0, 0.0, 1.0, 0.0), 2.0, cfg)
    P, D, K = dynamics.schwarz_charge_columns(*tr.y.T, 2.0)
    return tr, P, D, K


def charge_drift(P, D, K) -> float:
    return max(
        dynamics.drift(c) / max(1.0, abs(float(c[0]))) for c in (P, D, K)
    )


def check_dynamics():
    tr, P, D, K = schwarz_tan_run(1e-3)
    checks = [
        _le("integrate_schwarz vs tan t", np.max(np.abs(tr.y[:, 0] - np.tan(tr.t))), 1e-8),
        _le("P, D, K drift (relative)", charge_drift(P, D, K), 1e-8),
        _le("casimir PK - D^2 - lambda/2", np.max(np.abs(dynamics.casimir_residual(P, D, K, 2.0))), 1e-8),
    ]
    d1 = charge_drift(*schwarz_tan_run(1e-2)[1:])
    d2 = charge_drift(*schwarz_tan_run(5e-3)[1:])
    checks.append(Check("charge drift O(h^4): ratio under halving in [12, 20]",
                        d1 / d2, 20.0, bool(12.0 <= d1 / d2 <= 20.0)))
    for lam, nu in ((0.0, 1.0), (2.0, 0.0), (-2.0, 1.0)):
        rep = dynamics.equivalence_check(lam, nu, IntegratorConfig(h=1e-3))
        checks.append(_le(f"three-formulation rho deviation (lambda={lam:g}, nu={nu:g})", rep.max_deviation, 1e-6))
        checks.append(_le(f"on-shell H - (lambda/2 + nu^2) (lambda={lam:g}, nu={nu:g})", rep.energy_error, 1e-8))
        checks.append(_le(f"S(rho) drift along Lagrangian flow (lambda={lam:g}, nu={nu:g})", rep.s_drift_lagrange, 1e-7))
    return checks


def null_geodesic_run(lam: float, nu: float, h: float = 1e-3):
    st0 = dynamics.schwarz_state_from_jet(dynamics.exact_solution(lam, Mobius.identity(), 0.0))
    hs = dynamics.legendre(dynamics.lagrange_from_schwarz(st0, lam, nu), nu)
    init = geometry.null_initial_data(
        geometry.Coord4(0.0, 0.0, hs.rho, hs.s), 1.0, hs.p_rho, hs.p_s, nu
    )
    tr = geometry.geodesic_flow(init, nu, IntegratorConfig(h=h), require_reducible=True)
    return init, tr


def null_reduction_errors(lam: float, nu: float):
    init, tr = null_geodesic_run(lam, nu)
    y = tr.y
    S = dynamics.schwarzian_hamilton_columns(y[:, 3], y[:, 6], y[:, 7], nu, y[:, 5])
    H4 = geometry.h4d_columns(y[:, 3], y[:, 4], y[:, 5], y[:, 6], y[:, 7], nu)
    lam_red = geometry.reduced_lambda(init.p[0], nu)
    # rho'' at the start is dp_s/dt of the projected canonical flow
    rho_ddot0 = dynamics.hamilton_rhs(
        dynamics.HamiltonState(0.0, y[0, 2], y[0, 3], y[0, 6], y[0, 7]), nu
    )[3]
    ref = dynamics.integrate_schwarz(
        dynamics.SchwarzState(0.0, y[0, 2], y[0, 7], rho_ddot0), lam_red, IntegratorConfig(h=1e-3)
    )
    return {
        "S_drift": dynamics.drift(S),
        "S_vs_reduced_lambda": float(np.max(np.abs(S - lam_red))),
        "H4d_drift": dynamics.drift(H4),
        "rho_vs_schwarz": float(np.max(np.abs(y[:, 2] - ref.y[:, 0]))),
        "t_equals_affine": float(np.max(np.abs(y[:, 0] - tr.t))),
        "lambda_reduced": lam_red,
    }


def geometry_errors(nus=GEOMETRY_NUS, n_points: int = 100, seed: int = SEED):
    rng = np.random.default_rng(seed + 3)
    worst = {
        "signature_mismatches": 0,
        "einstein": 0.0,
        "covariant_constancy_dv": 0.0,
        "riemann_symmetries": 0.0,
        **{f"killing_{k}": 0.0 for k in geometry.KILLING_FIELDS},
    }
    for nu in nus:
        for _ in range(n_points):
            x = geometry.random_coord(rng)
            mp = geometry.metric_at(x, nu)
            if geometry.signature(mp) != (2, 2):
                worst["signature_mismatches"] += 1
            worst["einstein"] = max(worst["einstein"], geometry.einstein_residual(x, nu))
            for name, k in geometry.KILLING_FIELDS.items():
                key = f"killing_{name}"
                worst[key] = max(worst[key], geometry.killing_residual(k, x, nu))
            worst["covariant_constancy_dv"] = max(
                worst["covariant_constancy_dv"], geometry.covariant_constancy_residual(x, nu)
            )
            worst["riemann_symmetries"] = max(
                worst["riemann_symmetries"], *geometry.riemann_symmetry_residual(x, nu).values()
            )
    return worst


def check_geometry(nus=GEOMETRY_NUS):
    w = geometry_errors(nus)
    checks = [
        _le("signature (2,2) mismatches", w["signature_mismatches"], 0),
        _le("einstein G - 8 pi T", w["einstein"], 1e-8),
        _le("d_v covariantly constant", w["covariant_constancy_dv"], 1e-9),
        _le("riemann symmetries and bianchi", w["riemann_symmetries"], 1e-9),
    ]
    for name in geometry.KILLING_FIELDS:
        checks.append(_le(f"killing equation {name}", w[f"killing_{name}"], 1e-9))
    for nu in nus:
        nr = null_reduction_errors(2.0, nu)
        checks.append(_le(f"null reduction S(rho) constant (nu={nu:g})", nr["S_drift"], 1e-6))
        checks.append(_le(f"null reduction S = -2 p_t - 2 nu^2 (nu={nu:g})", nr["S_vs_reduced_lambda"], 1e-6))
        checks.append(_le(f"H_4d drift (nu={nu:g})", nr["H4d_drift"], 1e-10))
    return checks


def run_suite(suite: str, nu: float | None = None) -> VerifyReport:
    if suite not in SUITES + ("all",):
        raise ValueError(f"unknown suite {suite!r}")
    nus = GEOMETRY_NUS if nu is None else (float(nu),)
    runners = {
        "algebra": check_algebra,
        "invariance": check_invariance,
        "reduction": check_reduction,
        "dynamics": check_dynamics,
        "geometry": lambda: check_geometry(nus),
    }
    names = SUITES if suite == "all" else (suite,)
    checks = []
    for name in names:
        for c in runners[name]():
            c.name = f"{name}: {c.name}"
            checks.append(c)
    config = {"suite": suite, "seed": SEED, "geometry_nu": list(nus)}
    return VerifyReport(suite, checks, config)
