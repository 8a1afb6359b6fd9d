"""Memristive systems ``x' = f(x, u, t)``, ``y = g(x, u, t) u`` integrated with RK4.

The trajectory maps onto a stimulus/state/response machine as
``S(t) = u(t)``, ``Q(t) = x(t)``, ``R(t) = y(t)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..exceptions import DivergenceError


@dataclass(frozen=True)
class MemristiveTrajectory:
    t: np.ndarray
    u: np.ndarray
    x: np.ndarray
    y: np.ndarray

    # machine-model names
    @property
    def S(self):
        return self.u

    @property
    def Q(self):
        return self.x

    @property
    def R(self):
        return self.y


def _input_fn(u, dt):
    if callable(u):
        return u
    samples = np.asarray(u, dtype=float)
    if samples.ndim == 0:
        value = float(samples)
        return lambda t: value

    def held(t):
        # zero-order hold on the sample grid
        k = min(int(np.floor(t / dt + 1e-9)), samples.size - 1)
        return samples[max(k, 0)]

    return held


def simulate_memristive(
    f: Callable, g: Callable, x0, u, dt: float, steps: int, t0: float = 0.0
) -> MemristiveTrajectory:
    """Integrate with classic fourth-order Runge-Kutta.

    Parameters
    ----------
    f : callable ``f(x, u, t) -> dx/dt``
    g : callable ``g(x, u, t)``, the state-dependent gain
    x0 : float or array_like
    u : callable ``u(t)``, a constant, or samples taken every ``dt``
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    uf = _input_fn(u, dt)
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    ts = t0 + dt * np.arange(steps + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        return _integrate(f, g, uf, x, ts, dt, steps)


def _integrate(f, g, uf, x, ts, dt, steps):
    xs = np.empty((steps + 1, x.size))
    us = np.empty(steps + 1)
    ys = np.empty(steps + 1)
    for k, t in enumerate(ts):
        if not np.all(np.isfinite(x)):
            raise DivergenceError("memristive state became non-finite", step=k)
        uk = uf(t)
        xs[k], us[k] = x, uk
        ys[k] = np.asarray(g(x, uk, t), dtype=float).item() * uk
        if k == steps:
            break
        k1 = np.asarray(f(x, uf(t), t), dtype=float)
        k2 = np.asarray(f(x + 0.5 * dt * k1, uf(t + 0.5 * dt), t + 0.5 * dt), dtype=float)
        k3 = np.asarray(f(x + 0.5 * dt * k2, uf(t + 0.5 * dt), t + 0.5 * dt), dtype=float)
        k4 = np.asarray(f(x + dt * k3, uf(t + dt), t + dt), dtype=float)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if xs.shape[1] == 1:
        xs = xs[:, 0]
    return MemristiveTrajectory(ts, us, xs, ys)


def window_memristor(r_on: float = 100.0, r_off: float = 16e3, mobility: float = 1.0):
    """Linear-drift memristor with a Joglekar window, as ``(f, g)``.

    ``x`` is the doped fraction in [0, 1]; ``g`` is the memristance.
    """

    def f(x, u, t):
        return mobility * u * (1 - (2 * x - 1) ** 2)

    def g(x, u, t):
        return r_on * x + r_off * (1 - x)

    return f, g
