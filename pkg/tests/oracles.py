"""Independent reference computations (sympy) for frozen test values."""

import math

import sympy as sp

T = sp.symbols("t")


def sym_jet(expr, t0):
    """Value and first three derivatives of a sympy expression in t at t0."""
    return tuple(float(sp.diff(expr, T, k).subs(T, t0)) for k in range(4))


def sym_schwarzian(expr, t0):
    d1, d2, d3 = (sp.diff(expr, T, k) for k in (1, 2, 3))
    return float((d3 / d1 - sp.Rational(3, 2) * (d2 / d1) ** 2).subs(T, t0))


# 2x2 real representation of the algebra: iP -> p, iD -> d, iK -> k with
# [p, d] = -p, [p, k] = -2 d, [d, k] = -k (equivalent to [P,D] = iP etc.)
P2 = sp.Matrix([[0, 1], [0, 0]])
D2 = sp.Matrix([[sp.Rational(1, 2), 0], [0, -sp.Rational(1, 2)]])
K2 = sp.Matrix([[0, 0], [-1, 0]])


def coset_matrix(rho, s, u):
    """exp(rho p) exp(s k) exp(u d) as an explicit 2x2 matrix."""
    return (sp.eye(2) + rho * P2) * (sp.eye(2) + s * K2) * sp.diag(sp.exp(u / 2), sp.exp(-u / 2))


def decompose_coset(M):
    """Inverse of coset_matrix for a numeric 2x2 array with M[1,1] > 0."""
    m22 = M[1][1]
    return M[0][1] / m22, -M[1][0] * m22, -2.0 * math.log(m22)


def symbolic_mc_forms():
    """(omega_P, omega_K, omega_D) from g^{-1} dg/dt, as sympy expressions in t."""
    rho, s, u = (sp.Function(n)(T) for n in ("rho", "s", "u"))
    g = coset_matrix(rho, s, u)
    w = sp.simplify(g.inv() * g.diff(T))
    # w = wP p + wK k + wD d
    wP = w[0, 1]
    wK = -w[1, 0]
    wD = 2 * w[0, 0]
    assert sp.simplify(w[1, 1] + w[0, 0]) == 0
    return (rho, s, u), (sp.simplify(wP), sp.simplify(wK), sp.simplify(wD))
