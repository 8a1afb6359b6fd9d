"""Two spring-coupled pendulums and general oscillator chains."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..bargmann import BargmannSpace
from ..exceptions import DivergenceError
from ..gates import expectation, standard_gate
from ..holostate import HoloPoly

TABLE_GATES = ("X", "Y", "Z", "I", "H")


@dataclass(frozen=True)
class PendulumParams:
    """``omega0 = sqrt(g/l)`` in rad/s, ``coupling = s/M`` in 1/s^2."""

    omega0: float = 1.0
    coupling: float = 0.0
    alpha: complex = 1.0
    beta: complex = 1.0
    phi: float = 0.0
    varphi: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if not self.coupling >= 0:
            raise ValueError(f"coupling must be nonnegative, got {self.coupling}")

    @property
    def omega(self) -> float:
        """Frequency of the antisymmetric normal mode."""
        return math.sqrt(self.omega0**2 + 2 * self.coupling)

    def frequency_matrix(self) -> np.ndarray:
        """Squared-frequency matrix of ``x'' + W x = 0`` for the two pendulum angles."""
        w2, k = self.omega0**2, self.coupling
        return np.array([[w2 + k, -k], [-k, w2 + k]])


@dataclass(frozen=True)
class PendulumState:
    state: HoloPoly
    omega0: float
    omega: float
    z1: complex
    z2: complex

    @property
    def value(self) -> complex:
        """The state function evaluated at the current phase point."""
        return self.state(self.z1, self.z2)


def pendulum_state(params: PendulumParams, time: float = 0.0) -> PendulumState:
    """Product state ``alpha*beta*z1*z2`` with the normal-mode phases at ``time``.

    ``z1 = exp(i(omega0 t + phi))`` and ``z2 = exp(i(omega t + varphi))``.
    """
    f = HoloPoly(2, 2, {(1, 1): complex(params.alpha) * complex(params.beta)})
    z1 = cmath.exp(1j * (params.omega0 * time + params.phi))
    z2 = cmath.exp(1j * (params.omega * time + params.varphi))
    return PendulumState(f, params.omega0, params.omega, z1, z2)


@dataclass(frozen=True)
class GateRow:
    gate: str
    image: HoloPoly
    expectation: complex


def pendulum_gate_table(params: PendulumParams, space: BargmannSpace | None = None) -> list:
    """Images and normalized expectations of X, Y, Z, I, H on the pendulum state."""
    space = space or BargmannSpace(2, 1.0)
    f = pendulum_state(params).state
    rows = []
    for name in TABLE_GATES:
        L = standard_gate(name)
        rows.append(GateRow(name, L(f), expectation(space, L, f)))
    return rows


def normal_modes(freq_matrix, tol: float = 1e-10) -> np.ndarray:
    """Eigenfrequencies (ascending) of ``x'' + W x = 0`` for symmetric PSD ``W``."""
    W = np.asarray(freq_matrix, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"frequency matrix must be square, got shape {W.shape}")
    if not np.allclose(W, W.T, atol=1e-12):
        raise ValueError("frequency matrix must be symmetric")
    ev = np.linalg.eigvalsh(W)
    if ev[0] < -tol:
        raise DivergenceError(f"unstable mode: eigenvalue {ev[0]:.3g} < 0")
    return np.sqrt(np.clip(ev, 0.0, None))


def chain_frequency_matrix(n: int, omega0: float, coupling: float) -> np.ndarray:
    """``n`` identical oscillators with nearest-neighbour springs and free ends."""
    W = np.diag(np.full(n, omega0**2))
    for i in range(n - 1):
        W[i, i] += coupling
        W[i + 1, i + 1] += coupling
        W[i, i + 1] -= coupling
        W[i + 1, i] -= coupling
    return W
