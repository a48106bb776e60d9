"""Third-order jets, Mobius maps and the Schwarzian derivative.

A :class:`Jet3` holds a value and its first three derivatives at a base
point.  Arithmetic on jets is truncated Taylor algebra, so the Schwarzian
of any closed-form expression built from jets is exact up to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import IndexOutOfStencil, PoleCrossing, VelocityVanishes

EPS_VELOCITY = 1e-10
EPS_POLE = 1e-10


@dataclass(frozen=True)
class Jet3:
    x0: float
    f: float
    f1: float = 0.0
    f2: float = 0.0
    f3: float = 0.0

    def __post_init__(self):
        vals = (self.x0, self.f, self.f1, self.f2, self.f3)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite jet entries: {vals}")

    @classmethod
    def variable(cls, x0: float) -> "Jet3":
        """Jet of the identity map t -> t at ``x0``."""
        return cls(x0, x0, 1.0, 0.0, 0.0)

    @classmethod
    def constant(cls, x0: float, value: float) -> "Jet3":
        return cls(x0, value, 0.0, 0.0, 0.0)

    def derivs(self) -> tuple[float, float, float, float]:
        return (self.f, self.f1, self.f2, self.f3)

    def _coerce(self, other) -> "Jet3":
        if isinstance(other, Jet3):
            return other
        return Jet3.constant(self.x0, float(other))

    def __add__(self, other):
        o = self._coerce(other)
        return Jet3(self.x0, self.f + o.f, self.f1 + o.f1, self.f2 + o.f2, self.f3 + o.f3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(self.x0, -self.f, -self.f1, -self.f2, -self.f3)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet3):
            k = float(other)
            return Jet3(self.x0, k * self.f, k * self.f1, k * self.f2, k * self.f3)
        a, b = self, other
        return Jet3(
            self.x0,
            a.f * b.f,
            a.f1 * b.f + a.f * b.f1,
            a.f2 * b.f + 2.0 * a.f1 * b.f1 + a.f * b.f2,
            a.f3 * b.f + 3.0 * a.f2 * b.f1 + 3.0 * a.f1 * b.f2 + a.f * b.f3,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet3":
        y = self.f
        if y == 0.0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        return lift(self, (1.0 / y, -1.0 / y**2, 2.0 / y**3, -6.0 / y**4))

    def __truediv__(self, other):
        if not isinstance(other, Jet3):
            return self * (1.0 / float(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()


def lift(inner: Jet3, outer: tuple[float, float, float, float]) -> Jet3:
    """Jet of F(inner) given F and its first three derivatives at inner.f.

    Faa di Bruno's formula truncated at order three.
    """
    F0, F1, F2, F3 = outer
    g1, g2, g3 = inner.f1, inner.f2, inner.f3
    return Jet3(
        inner.x0,
        F0,
        F1 * g1,
        F2 * g1 * g1 + F1 * g2,
        F3 * g1**3 + 3.0 * F2 * g1 * g2 + F1 * g3,
    )


def compose(outer: Jet3, inner: Jet3) -> Jet3:
    """Jet of (F o g) from the jet of F taken at g(x0) and the jet of g."""
    if not math.isclose(outer.x0, inner.f, rel_tol=1e-12, abs_tol=1e-12):
        raise ValueError("outer jet must be based at the value of the inner jet")
    return lift(inner, outer.derivs())


# closed-form elementary functions on jets

def jexp(j: Jet3) -> Jet3:
    e = math.exp(j.f)
    return lift(j, (e, e, e, e))


def jlog(j: Jet3) -> Jet3:
    y = j.f
    if y <= 0.0:
        raise ValueError("log of non-positive jet value")
    return lift(j, (math.log(y), 1.0 / y, -1.0 / y**2, 2.0 / y**3))


def jtan(j: Jet3) -> Jet3:
    T = math.tan(j.f)
    sec2 = 1.0 + T * T
    return lift(j, (T, sec2, 2.0 * T * sec2, 2.0 * sec2 * (1.0 + 3.0 * T * T)))


def jsinh(j: Jet3) -> Jet3:
    sh, ch = math.sinh(j.f), math.cosh(j.f)
    return lift(j, (sh, ch, sh, ch))


def jpoly(coeffs, j: Jet3) -> Jet3:
    """Evaluate sum(coeffs[k] * j**k) by Horner's rule on jets."""
    out = Jet3.constant(j.x0, 0.0)
    for c in reversed(list(coeffs)):
        out = out * j + float(c)
    return out


# Schwarzian

def schwarzian_jet(j: Jet3, eps_velocity: float = EPS_VELOCITY) -> float:
    if abs(j.f1) <= eps_velocity:
        raise VelocityVanishes(f"|f'| = {abs(j.f1):.3g} <= {eps_velocity:g} at x0={j.x0}")
    q = j.f2 / j.f1
    return j.f3 / j.f1 - 1.5 * q * q


@dataclass(frozen=True)
class Mobius:
    """Real 2x2 matrix acting by x -> (a x + b) / (c x + d).

    Stored as given; overall scale is irrelevant for the action and
    :meth:`normalize` is never applied implicitly.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.det == 0.0 or not math.isfinite(self.det):
            raise ValueError(f"degenerate Mobius matrix, det={self.det}")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def normalize(self) -> "Mobius":
        k = 1.0 / math.sqrt(abs(self.det))
        return Mobius(k * self.a, k * self.b, k * self.c, k * self.d)

    def scaled(self, k: float) -> "Mobius":
        return Mobius(k * self.a, k * self.b, k * self.c, k * self.d)

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, x: float, eps_pole: float = EPS_POLE) -> float:
        den = self.c * x + self.d
        if abs(den) <= eps_pole:
            raise PoleCrossing(f"denominator {den:.3g} at x={x}")
        return (self.a * x + self.b) / den

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])


def mobius_apply(m: Mobius, j: Jet3, eps_pole: float = EPS_POLE) -> Jet3:
    """Jet of t -> (a rho(t) + b) / (c rho(t) + d)."""
    den = j * m.c + m.d
    if abs(den.f) <= eps_pole:
        raise PoleCrossing(f"denominator {den.f:.3g} at x0={j.x0}")
    return (j * m.a + m.b) / den


def mobius_lifted(m: Mobius) -> Callable[[Jet3], Jet3]:
    return lambda j: mobius_apply(m, j)


def schwarzian_compose_law_residual(
    f_outer: Callable[[Jet3], Jet3], g: Jet3, eps_velocity: float = EPS_VELOCITY
) -> float:
    """|S(f o g) - (S(f)(g) g'^2 + S(g))| at the base point of ``g``.

    ``f_outer`` maps an inner jet to the jet of f composed with it, e.g.
    :func:`jtan` or ``mobius_lifted(m)``.
    """
    s_fg = schwarzian_jet(f_outer(g), eps_velocity)
    s_f = schwarzian_jet(f_outer(Jet3.variable(g.f)), eps_velocity)
    s_g = schwarzian_jet(g, eps_velocity)
    return abs(s_fg - (s_f * g.f1 * g.f1 + s_g))


@dataclass(frozen=True)
class SampledPath:
    t: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if t.ndim != 1 or t.shape != y.shape:
            raise ValueError("t and y must be 1-d arrays of equal length")
        if len(t) < 7:
            raise ValueError("need at least 7 samples")
        dt = np.diff(t)
        h = dt.mean()
        if h <= 0 or np.max(np.abs(dt - h)) > 1e-12 * abs(h):
            raise ValueError("samples must be uniformly spaced with h > 0")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    @property
    def h(self) -> float:
        return float((self.t[-1] - self.t[0]) / (len(self.t) - 1))


def fd_derivatives(p: SampledPath, i: int) -> tuple[float, float, float]:
    """Second-order central differences of orders 1-3 at sample ``i``."""
    n = len(p.y)
    if not 3 <= i <= n - 4:
        raise IndexOutOfStencil(f"index {i} outside [3, {n - 4}]")
    y, h = p.y, p.h
    d1 = (y[i + 1] - y[i - 1]) / (2 * h)
    d2 = (y[i + 1] - 2 * y[i] + y[i - 1]) / h**2
    d3 = (y[i + 2] - 2 * y[i + 1] + 2 * y[i - 1] - y[i - 2]) / (2 * h**3)
    return d1, d2, d3


def schwarzian_sampled(p: SampledPath, i: int, eps_velocity: float = EPS_VELOCITY) -> float:
    d1, d2, d3 = fd_derivatives(p, i)
    return schwarzian_jet(Jet3(float(p.t[i]), float(p.y[i]), d1, d2, d3), eps_velocity)
