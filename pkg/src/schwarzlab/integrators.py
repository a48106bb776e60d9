"""Fixed-step RK4 and adaptive RK45 drivers with per-step guards."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import RK45

from .errors import SchwarzError, StepLimitExceeded

Rhs = Callable[[float, np.ndarray], np.ndarray]
Guard = Callable[[float, np.ndarray], None]


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"  # "rk4" or "rk45_adaptive"
    h: float = 1e-3
    t_end: float = 1.0
    atol: float = 1e-12
    rtol: float = 1e-12
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.method not in ("rk4", "rk45_adaptive"):
            raise ValueError(f"unknown integrator method {self.method!r}")
        if self.h <= 0:
            raise ValueError("step h must be positive")
        if self.atol <= 0 or self.rtol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # shape (n_samples, dim)

    def __len__(self):
        return len(self.t)


def rk4_step(rhs: Rhs, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _fail(exc: SchwarzError, ts, ys, t, width: int):
    exc.time = t
    exc.partial = Trajectory(np.array(ts, dtype=float), np.array(ys, dtype=float).reshape(len(ys), width))
    raise exc


def integrate(
    rhs: Rhs, t0: float, y0, cfg: IntegratorConfig, guard: Optional[Guard] = None
) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` from t0 to cfg.t_end.

    ``guard`` is called on every accepted state; if it raises a
    :class:`SchwarzError`, the exception is re-raised with ``time`` and
    the ``partial`` trajectory (up to and including the last good state)
    attached.
    """
    y = np.asarray(y0, dtype=float).copy()
    ts, ys = [t0], [y.copy()]
    try:
        if guard is not None:
            guard(t0, y)
    except SchwarzError as exc:
        _fail(exc, [], [], t0, y.size)

    span = cfg.t_end - t0
    if cfg.method == "rk4":
        n = int(np.ceil(abs(span) / cfg.h - 1e-9)) if span else 0
        if n > cfg.max_steps:
            _fail(StepLimitExceeded(f"{n} steps needed, max_steps={cfg.max_steps}"), ts, ys, t0, y.size)
        h = span / n if n else 0.0
        for k in range(1, n + 1):
            t_prev = t0 + (k - 1) * h
            try:
                y = rk4_step(rhs, t_prev, y, h)
                tk = t0 + k * h
                if guard is not None:
                    guard(tk, y)
            except SchwarzError as exc:
                _fail(exc, ts, ys, t_prev, y.size)
            ts.append(tk)
            ys.append(y.copy())
        return Trajectory(np.array(ts), np.array(ys))

    solver = RK45(rhs, t0, y, cfg.t_end, rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.h)
    steps = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            _fail(StepLimitExceeded(f"max_steps={cfg.max_steps} reached"), ts, ys, ts[-1], y.size)
        try:
            msg = solver.step()
            if solver.status == "failed":
                raise SchwarzError(f"RK45 failed: {msg}")
            if guard is not None:
                guard(solver.t, solver.y)
        except SchwarzError as exc:
            _fail(exc, ts, ys, ts[-1], y.size)
        steps += 1
        ts.append(solver.t)
        ys.append(solver.y.copy())
    return Trajectory(np.array(ts), np.array(ys))
