"""
Information measures over ensembles of holomorphic states.

Channel probabilities are norm fractions ``p_i = <f_i|f_i> / sum_j <f_j|f_j>``.
All logarithms are natural (nats).

The entropy change ``S_out - S_in`` produced by a gate has no fixed sign: a
non-unitary diagonal gate such as ``diag(1, 2)`` on ``(z1, z2)`` lowers it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bargmann import BargmannSpace, norm_squared
from .exceptions import DimensionError, SupportError, ZeroStateError
from .gates import DiffOp, apply
from .holostate import HoloPoly

PROB_TOL = 1e-12


@dataclass(frozen=True)
class ChannelEnsemble:
    """Ordered component states ``(f_1, ..., f_N)`` in one Bargmann space."""

    space: BargmannSpace
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("an ensemble needs at least one component")
        self.space.check(*self.components)

    def norms(self) -> np.ndarray:
        return np.array([norm_squared(self.space, f) for f in self.components])

    def map(self, L: DiffOp) -> "ChannelEnsemble":
        """Ensemble of gate outputs ``(L f_1, ..., L f_N)``."""
        return ChannelEnsemble(self.space, tuple(apply(L, f) for f in self.components))


def as_prob_vector(p) -> np.ndarray:
    """Validate and return ``p`` as a float array."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("a probability vector must be a non-empty 1-D array")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > PROB_TOL * max(1, p.size):
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def channel_probabilities(ens: ChannelEnsemble) -> np.ndarray:
    norms = ens.norms()
    total = norms.sum()
    if total == 0:
        raise ZeroStateError("every component of the ensemble is zero")
    return norms / total


def shannon_entropy(p) -> float:
    """``-sum p log p`` with ``0 log 0 = 0``."""
    p = as_prob_vector(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


@dataclass(frozen=True)
class EntropyReport:
    s_in: float
    s_out: float

    @property
    def delta(self) -> float:
        return self.s_out - self.s_in


def entropy_report(ens: ChannelEnsemble, L: DiffOp) -> EntropyReport:
    s_in = shannon_entropy(channel_probabilities(ens))
    out = ens.map(L)
    try:
        s_out = shannon_entropy(channel_probabilities(out))
    except ZeroStateError:
        raise ZeroStateError("the gate annihilates every component") from None
    return EntropyReport(s_in, s_out)


def entropy_change(ens: ChannelEnsemble, L: DiffOp) -> float:
    """``S_out - S_in``. Can be negative."""
    return entropy_report(ens, L).delta


def kl_divergence(p, q) -> float:
    """``sum p log(p/q)``; raises SupportError if some ``q_i = 0 < p_i``."""
    p, q = as_prob_vector(p), as_prob_vector(q)
    if p.shape != q.shape:
        raise DimensionError(f"distributions differ in length: {p.size} vs {q.size}")
    bad = (q == 0) & (p > 0)
    if np.any(bad):
        raise SupportError(f"q vanishes where p does not, at indices {np.flatnonzero(bad).tolist()}")
    m = p > 0
    return float(np.sum(p[m] * np.log(p[m] / q[m])))


def mutual_information(joint) -> float:
    J = np.asarray(joint, dtype=float)
    if J.ndim != 2:
        raise ValueError("joint distribution must be a matrix")
    as_prob_vector(J.ravel())
    r, c = J.sum(axis=1), J.sum(axis=0)
    m = J > 0
    outer = np.outer(r, c)
    return float(np.sum(J[m] * np.log(J[m] / outer[m])))
