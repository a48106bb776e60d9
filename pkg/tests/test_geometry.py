import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzlab import dynamics, geometry
from schwarzlab.geometry import (
    KILLING_FIELDS,
    Coord4,
    christoffel,
    curvature,
    einstein_residual,
    h4d,
    metric_at,
    null_initial_data,
)
from schwarzlab.integrators import IntegratorConfig

NUS = (0.0, 1.0, -1.0, 2.0)
coord = st.builds(Coord4, *(st.floats(-2, 2) for _ in range(4)))


# symbolic oracle: curvature and Lie derivatives straight from the line element

@pytest.fixture(scope="module")
def sym():
    t, v, rho, s, nu = sp.symbols("t v rho s nu")
    X = (t, v, rho, s)
    g = sp.Matrix([
        [0, 1, -2 * nu * s, 0],
        [1, 0, 0, 0],
        [-2 * nu * s, 0, 2 * s**2, 1],
        [0, 0, 1, 0],
    ])
    gi = sp.simplify(g.inv())
    n = 4
    Gam = [[[sp.simplify(sum(gi[p, q] * (sp.diff(g[q, m], X[k]) + sp.diff(g[q, k], X[m]) - sp.diff(g[m, k], X[q]))
                             for q in range(n)) / 2) for k in range(n)] for m in range(n)] for p in range(n)]

    def riem(p, q, m, k):
        expr = sp.diff(Gam[p][k][q], X[m]) - sp.diff(Gam[p][m][q], X[k])
        expr += sum(Gam[p][m][l] * Gam[l][k][q] - Gam[p][k][l] * Gam[l][m][q] for l in range(n))
        return expr

    ric = sp.Matrix(n, n, lambda q, k: sp.simplify(sum(riem(p, q, p, k) for p in range(n))))
    R = sp.simplify(sum(gi[a, b] * ric[a, b] for a in range(n) for b in range(n)))
    G = sp.simplify(ric - g * R / 2)

    fields = {
        "xi": [0, 1, 0, 0],
        "chi": [1, 0, 0, 0],
        "phi": [0, 0, 1, 0],
        "psi": [0, 0, rho, -s],
        "zeta": [0, 2 * nu * rho, rho**2, 1 - 2 * rho * s],
    }

    def lie(k):
        return sp.Matrix(n, n, lambda a, b: sp.simplify(
            sum(k[c] * sp.diff(g[a, b], X[c]) + g[c, b] * sp.diff(k[c], X[a]) + g[a, c] * sp.diff(k[c], X[b])
                for c in range(n))))

    return {
        "args": (t, v, rho, s, nu),
        "gi": sp.lambdify((t, v, rho, s, nu), gi),
        "ricci": sp.lambdify((t, v, rho, s, nu), ric),
        "R": R,
        "G": sp.lambdify((t, v, rho, s, nu), G),
        "lie": {name: lie(k) for name, k in fields.items()},
    }


def test_metric_examples():
    g = metric_at(Coord4(0, 0, 0, 0), 0.0).g
    expected = np.zeros((4, 4))
    expected[0, 1] = expected[1, 0] = 1
    expected[2, 3] = expected[3, 2] = 1
    np.testing.assert_array_equal(g, expected)
    g = metric_at(Coord4(5, -3, 7, 1), 1.0).g
    assert g[0, 2] == -2 and g[2, 2] == 2 and g[2, 3] == 1 and g[0, 1] == 1


@given(coord, st.floats(-3, 3))
def test_inverse_metric(x, nu):
    mp = metric_at(x, nu)
    np.testing.assert_allclose(mp.g @ mp.g_inv, np.eye(4), atol=1e-12)


@given(coord, st.floats(-3, 3))
def test_split_signature(x, nu):
    assert geometry.signature(metric_at(x, nu)) == (2, 2)


def test_inverse_metric_matches_symbolic(sym, rng):
    for _ in range(20):
        x, nu = geometry.random_coord(rng), float(rng.uniform(-2, 2))
        np.testing.assert_allclose(metric_at(x, nu).g_inv, sym["gi"](*x.as_array(), nu), atol=1e-13)


@given(coord, st.floats(-3, 3), *(st.floats(-3, 3) for _ in range(4)))
def test_h4d_closed_form(x, nu, pt, pv, pr, ps):
    p = (pt, pv, pr, ps)
    closed = geometry.h4d_columns(x.s, pt, pv, pr, ps, nu)
    assert h4d(x, p, nu) == pytest.approx(closed, abs=1e-10 * (1 + max(map(abs, p)) ** 2 * (1 + x.s * x.s)))


@given(coord, st.floats(-2, 2))
def test_h4d_projects_to_h2d(x, nu):
    # at p_t = 0, p_v = 1 the quadratic form is H_2d
    pr, ps = 0.7, -1.3
    h = geometry.h4d_columns(x.s, 0.0, 1.0, pr, ps, nu)
    assert h == pytest.approx(dynamics.h2d_columns(x.s, pr, ps, nu), abs=1e-12)


# connection

@given(coord, st.floats(-3, 3))
def test_christoffel_symmetric(x, nu):
    gam = christoffel(metric_at(x, nu))
    np.testing.assert_array_equal(gam, gam.transpose(0, 2, 1))


@given(coord, st.floats(-3, 3))
@settings(max_examples=30)
def test_metric_compatibility(x, nu):
    # nabla_L g_MN = d_L g_MN - Gamma^P_LM g_PN - Gamma^P_LN g_MP, d_L g by central differences
    h = 1e-6
    mp = metric_at(x, nu)
    dg = np.zeros((4, 4, 4))
    for L in range(4):
        e = np.zeros(4)
        e[L] = h
        dg[L] = (metric_at(Coord4(*(x.as_array() + e)), nu).g - metric_at(Coord4(*(x.as_array() - e)), nu).g) / (2 * h)
    gam = christoffel(mp)
    nab = dg - np.einsum("plm,pn->lmn", gam, mp.g) - np.einsum("pln,mp->lmn", gam, mp.g)
    assert np.max(np.abs(nab)) <= 1e-8


@given(coord, st.floats(-2, 2))
@settings(max_examples=30)
def test_christoffel_derivative_fd_agrees(x, nu):
    mp = metric_at(x, nu)
    np.testing.assert_allclose(
        geometry.christoffel_derivative(mp), geometry.christoffel_derivative_fd(x, nu), atol=1e-8
    )


# curvature

def test_curvature_matches_symbolic(sym, rng):
    for _ in range(25):
        x, nu = geometry.random_coord(rng), float(rng.uniform(-2, 2))
        c = curvature(x, nu)
        args = (*x.as_array(), nu)
        np.testing.assert_allclose(c.ricci, np.array(sym["ricci"](*args), dtype=float), atol=1e-12)
        np.testing.assert_allclose(c.einstein, np.array(sym["G"](*args), dtype=float), atol=1e-12)


def test_scalar_curvature(sym):
    assert sym["R"] == 4
    for nu in NUS:
        assert curvature(Coord4(0.3, -1, 0.5, 1.7), nu).scalar == pytest.approx(4.0, abs=1e-13)


def test_ricci_entries():
    r = curvature(Coord4(0, 0, 0, 0.5), 1.5).ricci
    assert r[0, 0] == pytest.approx(-2 * 1.5**2)
    assert r[2, 2] == pytest.approx(4 * 0.25)
    assert r[2, 3] == pytest.approx(2.0)
    mask = np.ones((4, 4), bool)
    mask[0, 0] = mask[2, 2] = mask[2, 3] = mask[3, 2] = False
    assert np.all(np.abs(r[mask]) <= 1e-14)


@pytest.mark.parametrize("nu", NUS)
def test_einstein_equation(nu, rng):
    for _ in range(100):
        x = geometry.random_coord(rng)
        assert einstein_residual(x, nu) <= 1e-10
        assert einstein_residual(x, nu, method="fd") <= 1e-6


@given(coord, st.floats(-2, 2))
def test_trace_relation(x, nu):
    # in four dimensions the trace of G = 8 pi T gives R = -8 pi tr T
    mp = metric_at(x, nu)
    trT = float(np.einsum("mn,mn->", mp.g_inv, geometry.stress_tensor(x, nu)))
    assert curvature(x, nu).scalar == pytest.approx(-8 * math.pi * trT, abs=1e-10)


@given(coord, st.floats(-2, 2))
def test_riemann_symmetries(x, nu):
    for name, val in geometry.riemann_symmetry_residual(x, nu).items():
        assert val <= 1e-12, name


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_einstein_residual_independent_of_t_v_rho(t, v, rho, nu):
    base = curvature(Coord4(0, 0, 0, 0.8), nu).einstein
    np.testing.assert_allclose(curvature(Coord4(t, v, rho, 0.8), nu).einstein, base, atol=1e-13)


def test_stress_tensor_contractions(rng):
    for _ in range(20):
        x, nu = geometry.random_coord(rng), float(rng.uniform(-2, 2))
        gi = metric_at(x, nu).g_inv
        xi, chi = geometry.killing_covectors(x, nu)
        assert xi @ gi @ xi == pytest.approx(0.0, abs=1e-13)
        assert xi @ gi @ chi == pytest.approx(1.0, abs=1e-13)
        T = geometry.stress_tensor(x, nu)
        np.testing.assert_allclose(T, T.T)


def test_corrupted_metric_is_detected(monkeypatch):
    x = Coord4(0.1, 0.2, 0.3, 0.9)
    assert einstein_residual(x, 1.0) <= 1e-12
    honest = geometry.metric_at

    def corrupted(pt, nu):
        # g_rho_rho = 2.2 s^2 instead of 2 s^2, with consistent derivatives
        mp = honest(pt, nu)
        g, dg, ddg = mp.g.copy(), mp.dg.copy(), mp.ddg.copy()
        g[2, 2] *= 1.1
        dg[3, 2, 2] *= 1.1
        ddg[3, 3, 2, 2] *= 1.1
        gi = np.linalg.inv(g)
        dgi = -np.einsum("am,lmn,nb->lab", gi, dg, gi)
        return geometry.MetricPoint(mp.x, nu, g, gi, dg, ddg, dgi)

    monkeypatch.setattr(geometry, "metric_at", corrupted)
    assert einstein_residual(x, 1.0) > 1e-3


# Killing fields

@pytest.mark.parametrize("name", sorted(KILLING_FIELDS))
def test_killing_fields_symbolic(sym, name):
    assert sym["lie"][name] == sp.zeros(4, 4)


@pytest.mark.parametrize("name", sorted(KILLING_FIELDS))
@given(x=coord, nu=st.floats(-2, 2))
def test_killing_covariant_and_lie_agree(name, x, nu):
    k = KILLING_FIELDS[name]
    nk = geometry.covariant_derivative_covector(k, x, nu)
    lie = geometry.lie_derivative_metric(k, x, nu)
    np.testing.assert_allclose(nk + nk.T, lie, atol=1e-11)
    assert geometry.killing_residual(k, x, nu) <= 1e-10
    assert np.max(np.abs(lie)) <= 1e-10


def test_non_killing_field_rejected():
    bad = geometry.KillingField("s_dir", geometry._unit(geometry.S), geometry._zero_jac)
    x = Coord4(0, 0, 0, 1.0)
    assert geometry.killing_residual(bad, x, 1.0) > 1.0


@given(coord, st.floats(-2, 2))
def test_dv_covariantly_constant(x, nu):
    assert geometry.covariant_constancy_residual(x, nu) <= 1e-12


# geodesics and null reduction

@given(coord, st.floats(-2, 2), *(st.floats(-2, 2) for _ in range(4)))
def test_geodesic_rhs_projects_to_hamilton(x, nu, pt, pr, ps, dummy):
    y = np.concatenate([x.as_array(), [pt, 1.0, pr, ps]])
    dy = geometry.geodesic_rhs(y, nu)
    two = dynamics.hamilton_rhs(dynamics.HamiltonState(0, x.rho, x.s, pr, ps), nu)
    np.testing.assert_allclose(dy[[2, 3, 6, 7]], two, atol=1e-12)
    assert dy[0] == 1.0
    assert dy[4] == 0.0 and dy[5] == 0.0


def test_null_initial_data():
    init = null_initial_data(Coord4(0, 0, 0.2, 0.4), 1.0, 1.0, 0.5, 1.0)
    assert h4d(init.x, init.p, 1.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        null_initial_data(Coord4(0, 0, 0, 0), 0.0, 1.0, 1.0, 1.0)


def test_p_v_zero_is_not_reducible():
    init = geometry.GeodesicPhase(Coord4(0, 0, 0, 0), np.array([0.0, 0.0, 1.0, 1.0]))
    with pytest.raises(geometry.NotReducible):
        geometry.geodesic_flow(init, 1.0, IntegratorConfig(), require_reducible=True)
    tr = geometry.geodesic_flow(init, 1.0, IntegratorConfig(h=1e-2))
    assert np.all(tr.y[:, 0] == 0.0)  # t frozen when p_v = 0


@pytest.mark.parametrize("lam, nu", [(2.0, 0.0), (2.0, 1.0), (-2.0, 1.0), (0.5, -1.0)])
def test_null_reduction(lam, nu):
    from schwarzlab.verify import null_reduction_errors

    err = null_reduction_errors(lam, nu)
    assert err["lambda_reduced"] == pytest.approx(lam, abs=1e-12)
    assert err["S_drift"] <= 1e-8
    assert err["S_vs_reduced_lambda"] <= 1e-8
    assert err["H4d_drift"] <= 1e-9
    assert err["rho_vs_schwarz"] <= 1e-6
    assert err["t_equals_affine"] <= 1e-12


def test_reduced_lambda():
    assert geometry.reduced_lambda(-1.0, 0.0) == 2.0
    assert geometry.reduced_lambda(-2.0, 1.0) == 2.0
