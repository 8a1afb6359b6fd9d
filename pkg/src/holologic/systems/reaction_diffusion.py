"""1-D FitzHugh-Nagumo reaction-diffusion and its Segal-Bargmann lift."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from ..bargmann import BargmannSpace, sb_coefficients, sb_transform
from ..exceptions import DivergenceError
from ..holostate import HoloPoly, tensor_product


@dataclass(frozen=True)
class RDConfig:
    """Grid, diffusion and reaction constants for an explicit-Euler run.

    Reaction terms: ``f(a, b) = a - a^3 - b + alpha``, ``g(a, b) = beta (a - b)``.
    """

    n: int = 128
    dx: float = 1.0
    Da: float = 1.0
    Db: float = 0.0
    alpha: float = 0.0
    beta: float = 1.0
    dt: float = 0.01
    steps: int = 1000

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 cells for a periodic Laplacian")
        if not (self.dx > 0 and self.dt > 0):
            raise ValueError("dx and dt must be positive")
        if self.Da < 0 or self.Db < 0:
            raise ValueError("diffusion coefficients must be nonnegative")
        dmax = max(self.Da, self.Db)
        if dmax > 0 and self.dt > self.dx**2 / (4 * dmax):
            raise ValueError(
                f"dt={self.dt} violates the stability bound dx^2/(4 max(Da, Db)) = "
                f"{self.dx**2 / (4 * dmax):.6g}"
            )


def load_rd_config(path) -> tuple[RDConfig, dict]:
    """Parse ``key = value`` lines; returns the config and any extra keys.

    Blank lines and ``#`` comments are ignored. Keys that are not RDConfig
    fields (e.g. ``init``, ``seed``, ``amplitude``) are returned separately.
    """
    types = {f.name: f.type for f in fields(RDConfig)}
    known, extra = {}, {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = key.strip(), value.strip()
        if key in types:
            known[key] = int(value) if types[key] in (int, "int") else float(value)
        else:
            extra[key] = value
    return RDConfig(**known), extra


def fhn_reaction(a, b, alpha, beta):
    return a - a**3 - b + alpha, beta * (a - b)


def _laplacian(u, dx):
    return (np.roll(u, 1) - 2 * u + np.roll(u, -1)) / (dx * dx)


def simulate_fhn(config: RDConfig, a0, b0):
    """Explicit Euler in time, periodic central differences in space.

    Returns the fields ``(a, b)`` after ``config.steps`` steps.
    """
    a = np.array(a0, dtype=float)
    b = np.array(b0, dtype=float)
    if a.shape != (config.n,) or b.shape != (config.n,):
        raise ValueError(f"initial fields must have shape ({config.n},)")
    c = config
    # overflow is caught by the finiteness check below
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, c.steps + 1):
            fa, gb = fhn_reaction(a, b, c.alpha, c.beta)
            a_new = a + c.dt * (c.Da * _laplacian(a, c.dx) + fa)
            b_new = b + c.dt * (c.Db * _laplacian(b, c.dx) + gb)
            a, b = a_new, b_new
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise DivergenceError("FitzHugh-Nagumo fields became non-finite", step=step)
    return a, b


def homogeneous_fixed_point(alpha: float) -> float:
    """Uniform steady state ``a = b`` with ``a^3 = alpha``."""
    return math.copysign(abs(alpha) ** (1 / 3), alpha)


def fields_to_state(space: BargmannSpace, x, a, b, z1, z2, weights=None) -> complex:
    """Joint holomorphic state ``B a(z1) * B b(z2)`` of two sampled fields."""
    return sb_transform(space, x, a, z1, weights) * sb_transform(space, x, b, z2, weights)


def fields_to_poly(space: BargmannSpace, x, a, b, degree: int, weights=None) -> HoloPoly:
    """Truncated Taylor expansion of the joint state in ``(z1, z2)``."""
    fa = sb_coefficients(space, x, a, degree, weights)
    fb = sb_coefficients(space, x, b, degree, weights)
    return tensor_product([fa, fb])
