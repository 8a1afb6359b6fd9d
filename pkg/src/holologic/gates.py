"""
Logic gates as differential operators in the Weyl algebra.

A :class:`DiffOp` is a finite sum ``sum c * z^alpha d^beta`` kept in normal
order (every multiplication to the left of every derivative). Normal order
is unique, so operators compare term by term. A 2x2 (or NxN) matrix ``M``
maps to ``sum_jk M[j, k] z_j d_k``; on the span of the variables this is
exactly matrix-vector multiplication.

Multi-qubit gates use the one-hot encoding: the basis state
``|b_1 ... b_n>`` corresponds to the single variable ``z_{1 + binary(b)}``.
"""
from __future__ import annotations

import math
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .bargmann import BargmannSpace, inner_product, norm_squared
from .exceptions import AliasingError, DimensionError, ZeroStateError
from .holostate import (
    HoloPoly,
    evaluate_many,
    format_complex,
    multiply_by_variable,
)

OP_TOL = 1e-12


def _falling(a: int, k: int) -> int:
    """``a! / (a - k)!``"""
    return math.perm(a, k)


class DiffOp:
    """Normal-ordered element of the Weyl algebra in ``dim`` variables.

    ``terms`` maps ``(alpha, beta)`` multi-index pairs to complex
    coefficients, meaning ``c * z^alpha * d^beta``.
    """

    __slots__ = ("_dim", "_terms")

    def __init__(self, dim: int, terms: Mapping | None = None):
        if int(dim) < 1:
            raise DimensionError(f"dimension must be positive, got {dim}")
        self._dim = int(dim)
        clean = {}
        for (alpha, beta), c in (terms or {}).items():
            alpha, beta = tuple(int(a) for a in alpha), tuple(int(b) for b in beta)
            if len(alpha) != dim or len(beta) != dim:
                raise DimensionError(f"term {(alpha, beta)} does not match dimension {dim}")
            if min(alpha + beta) < 0:
                raise DimensionError(f"negative exponent in term {(alpha, beta)}")
            c = complex(c)
            if c != 0:
                clean[(alpha, beta)] = clean.get((alpha, beta), 0j) + c
        self._terms = MappingProxyType(dict(sorted((k, v) for k, v in clean.items() if v != 0)))

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Mapping:
        return self._terms

    @property
    def order(self) -> int:
        """Highest derivative order; 0 for multiplication operators."""
        return max((sum(b) for _, b in self._terms), default=0)

    def is_first_order(self) -> bool:
        """Every term is ``c * z_j d_k``."""
        return bool(self._terms) and all(sum(a) == 1 and sum(b) == 1 for a, b in self._terms)

    def _same(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if other._dim != self._dim:
            raise DimensionError(f"dimension mismatch: {self._dim} vs {other._dim}")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0j) + c
        return DiffOp(self._dim, out)

    def __neg__(self):
        return DiffOp(self._dim, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return DiffOp(self._dim, {k: complex(other) * c for k, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * (1 / complex(other))
        return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        if isinstance(other, HoloPoly):
            return apply(self, other)
        return NotImplemented

    def __call__(self, f: HoloPoly) -> HoloPoly:
        return apply(self, f)

    def isclose(self, other: "DiffOp", tol: float = OP_TOL) -> bool:
        if not isinstance(other, DiffOp) or other._dim != self._dim:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= tol for k in keys)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        ordered = sorted(
            self._terms.items(), key=lambda kv: ([-a for a in kv[0][0]], [-b for b in kv[0][1]])
        )
        for (alpha, beta), c in ordered:
            factors = [f"z{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(alpha) if a]
            factors += [f"d{i + 1}" + (f"^{b}" if b > 1 else "") for i, b in enumerate(beta) if b]
            word = "*".join(factors)
            if not word:
                s = format_complex(c)
            elif c == 1:
                s = word
            elif c == -1:
                s = "-" + word
            elif c.real != 0 and c.imag != 0:
                s = f"({format_complex(c)})*{word}"
            else:
                s = f"{format_complex(c)}*{word}"
            out.append(s if not out or s.startswith("-") else "+" + s)
        return "".join(out)

    def __repr__(self):
        return f"DiffOp(dim={self._dim}, {str(self)!r})"


# construction ---------------------------------------------------------------


def _unit(dim, i):
    e = [0] * dim
    e[i] = 1
    return tuple(e)


def first_order(dim: int, entries: Mapping) -> DiffOp:
    """``sum c * z_j d_k`` from ``{(j, k): c}`` with 0-based ``j, k``."""
    return DiffOp(dim, {(_unit(dim, j), _unit(dim, k)): c for (j, k), c in entries.items()})


def matrix_to_operator(M) -> DiffOp:
    """``sum_jk M[j, k] z_j d_k``: rows multiply, columns differentiate."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    return first_order(n, {(j, k): M[j, k] for j in range(n) for k in range(n)})


def operator_to_matrix(L: DiffOp) -> np.ndarray:
    """Inverse of :func:`matrix_to_operator` for first-order operators."""
    M = np.zeros((L.dim, L.dim), dtype=complex)
    for (alpha, beta), c in L.terms.items():
        if sum(alpha) != 1 or sum(beta) != 1:
            raise ValueError(f"term z^{alpha} d^{beta} is not of the form z_j d_k")
        M[alpha.index(1), beta.index(1)] += c
    return M


def identity(dim: int) -> DiffOp:
    """``sum_i z_i d_i``; acts as the total-degree (number) operator."""
    return first_order(dim, {(i, i): 1.0 for i in range(dim)})


def hamiltonian(dim: int = 1) -> DiffOp:
    """Oscillator Hamiltonian ``sum z_i d_i + d/2``; eigenvalue ``n + d/2`` on degree ``n``."""
    return identity(dim) + DiffOp(dim, {((0,) * dim, (0,) * dim): dim / 2})


def permutation_operator(perm: Sequence[int]) -> DiffOp:
    """``sum_k z_{perm[k]} d_k``: sends ``z_k`` to ``z_{perm[k]}``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of 0..{n - 1}")
    return first_order(n, {(perm[k], k): 1.0 for k in range(n)})


_S2 = 1 / math.sqrt(2)
_MATRICES = {
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
    "I": [[1, 0], [0, 1]],
    "H": [[_S2, _S2], [_S2, -_S2]],
    "S": [[1, 0], [0, 1j]],
}

# one-hot basis permutations (0-based variables)
_PERMUTATIONS = {
    "CNOT": [0, 1, 3, 2],
    "SWAP": [0, 2, 1, 3],
    "TOFFOLI": [0, 1, 2, 3, 4, 5, 7, 6],
    # z5 <-> z7 as written for Fredkin, with z6 kept fixed so the map stays a bijection
    "FREDKIN": [0, 1, 2, 3, 6, 5, 4, 7],
}

GATE_NAMES = ("X", "Y", "Z", "I", "H", "S", "RX", "RY", "RZ", *_PERMUTATIONS, "IDENTITY_N")


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    axis = axis.upper()
    if axis == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "RZ":
        return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    raise ValueError(f"unknown rotation {axis!r}")


def standard_gate(name: str, theta: float | None = None, n: int | None = None) -> DiffOp:
    """Named gate as a differential operator.

    Parameters
    ----------
    name : str
        One of ``GATE_NAMES`` (case-insensitive).
    theta : float
        Rotation angle in radians for ``Rx``, ``Ry``, ``Rz``.
    n : int
        Number of variables for ``IDENTITY_N``.
    """
    key = name.upper()
    if key in _MATRICES:
        return matrix_to_operator(_MATRICES[key])
    if key in ("RX", "RY", "RZ"):
        if theta is None or not math.isfinite(theta):
            raise ValueError(f"{name} needs a finite angle")
        return matrix_to_operator(rotation_matrix(key, theta))
    if key in _PERMUTATIONS:
        return permutation_operator(_PERMUTATIONS[key])
    if key == "IDENTITY_N":
        if n is None or n < 1:
            raise ValueError("IDENTITY_N needs a positive dimension n")
        return identity(n)
    raise ValueError(f"unknown gate {name!r}; expected one of {', '.join(GATE_NAMES)}")


def gate_from_label(label: str) -> DiffOp:
    """Parse ``'X'``, ``'rx:0.785'``, ``'IDENTITY_N:4'`` and similar labels."""
    name, _, arg = label.strip().partition(":")
    key = name.upper()
    if key in ("RX", "RY", "RZ"):
        if not arg:
            raise ValueError(f"rotation label {label!r} needs an angle, e.g. Rx:0.5")
        return standard_gate(key, theta=float(arg))
    if key == "IDENTITY_N":
        return standard_gate(key, n=int(arg) if arg else None)
    if arg:
        raise ValueError(f"gate {name!r} takes no parameter")
    return standard_gate(key)


# algebra --------------------------------------------------------------------


def apply(L: DiffOp, f: HoloPoly) -> HoloPoly:
    """Action of ``L`` on a state; the result keeps ``f.max_degree``."""
    if L.dim != f.dim:
        raise DimensionError(f"operator acts on {L.dim} variables, state has {f.dim}")
    acc = {}
    for (alpha, beta), c in L.terms.items():
        for gamma, fc in f.terms.items():
            if any(g < b for g, b in zip(gamma, beta)):
                continue
            w = c * fc * math.prod(_falling(g, b) for g, b in zip(gamma, beta))
            idx = tuple(g - b + a for g, b, a in zip(gamma, beta, alpha))
            acc[idx] = acc.get(idx, 0j) + w
    return HoloPoly(f.dim, f.max_degree, acc)


def compose(L1: DiffOp, L2: DiffOp) -> DiffOp:
    """Normal-ordered product ``L1 o L2``.

    Moving ``d_i^b`` past ``z_i^a`` uses the closed form of repeated
    ``d_i z_i = z_i d_i + 1``:
    ``d^b z^a = sum_k C(b, k) a!/(a-k)! z^(a-k) d^(b-k)``.
    """
    if L1.dim != L2.dim:
        raise DimensionError(f"dimension mismatch: {L1.dim} vs {L2.dim}")
    acc = {}
    for (a1, b1), c1 in L1.terms.items():
        for (a2, b2), c2 in L2.terms.items():
            # per-variable expansions of d^b1_i z^a2_i
            partial = [((), (), c1 * c2)]
            for i in range(L1.dim):
                nxt = []
                for za, db, w in partial:
                    for k in range(min(b1[i], a2[i]) + 1):
                        coef = math.comb(b1[i], k) * _falling(a2[i], k)
                        nxt.append((za + (a2[i] - k,), db + (b1[i] - k,), w * coef))
                partial = nxt
            for za, db, w in partial:
                alpha = tuple(x + y for x, y in zip(a1, za))
                beta = tuple(x + y for x, y in zip(db, b2))
                acc[(alpha, beta)] = acc.get((alpha, beta), 0j) + w
    return DiffOp(L1.dim, acc)


def commutator(L1: DiffOp, L2: DiffOp) -> DiffOp:
    return compose(L1, L2) - compose(L2, L1)


def jordan_schwinger(component: str, halved: bool = False) -> DiffOp:
    """Two-mode spin operators.

    ``component`` is ``'x'``, ``'y'``, ``'z'`` or ``'squared'``. The first
    three return the Pauli-normalized operators (``sigma``) unless
    ``halved`` is set, in which case ``J = sigma / 2``. ``'squared'`` always
    returns ``Jx^2 + Jy^2 + Jz^2``, which equals ``(N/2)(N/2 + 1)`` on
    states of total degree ``N``.
    """
    key = component.lower()
    if key in ("squared", "squared-total", "total"):
        J = [jordan_schwinger(c, halved=True) for c in "xyz"]
        return compose(J[0], J[0]) + compose(J[1], J[1]) + compose(J[2], J[2])
    if key not in ("x", "y", "z"):
        raise ValueError(f"unknown spin component {component!r}")
    op = standard_gate(key.upper())
    return op / 2 if halved else op


# expectation values ---------------------------------------------------------


def matrix_element(space: BargmannSpace, bra: HoloPoly, L: DiffOp, ket: HoloPoly) -> complex:
    """``<bra | L ket>`` with the exact inner product."""
    return inner_product(space, bra, apply(L, ket))


def expectation(space: BargmannSpace, L: DiffOp, f: HoloPoly, normalization: str = "normalized") -> complex:
    """Expectation value of ``L`` in state ``f``.

    ``normalization='normalized'`` divides ``<f|Lf>`` by ``<f|f>`` (scale
    invariant); ``'sqrt'`` divides by ``sqrt(<f|f>)``.
    """
    n2 = norm_squared(space, f)
    if n2 == 0:
        raise ZeroStateError("expectation value in the zero state is undefined")
    raw = matrix_element(space, f, L, f)
    if normalization == "normalized":
        return raw / n2
    if normalization == "sqrt":
        return raw / math.sqrt(n2)
    raise ValueError(f"normalization must be 'normalized' or 'sqrt', got {normalization!r}")


# contour-integral application -----------------------------------------------


def _derivative_by_contour(f: HoloPoly, k: int, radius: float, nodes: int, lattice: int) -> HoloPoly:
    """Reconstruct ``d_k f`` from Cauchy integrals sampled on a roots-of-unity lattice.

    At every lattice point ``z`` (each coordinate an ``lattice``-th root of
    unity) ``d_k f(z) = (1/2 pi i) oint f(..., xi, ...) / (xi - z_k)^2 dxi``
    on ``|xi - z_k| = radius``, discretized by the trapezoid rule. The
    polynomial is then recovered by an inverse DFT over the lattice.
    """
    d = f.dim
    omega = np.exp(2j * np.pi * np.arange(lattice) / lattice)
    grids = np.meshgrid(*([omega] * d), indexing="ij")
    pts = np.stack(grids, axis=-1)  # (lattice,)*d + (d,)
    phase = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    shifted = np.repeat(pts[..., None, :], nodes, axis=-2)  # (..., nodes, d)
    shifted[..., k] = pts[..., k, None] + radius * phase
    vals = evaluate_many(f, shifted)
    # (1/2 pi i) oint g/(xi-z)^2 dxi with xi = z + r e^{i phi}: mean of g / (r e^{i phi})
    deriv = np.mean(vals / (radius * phase), axis=-1)
    coeffs = np.fft.fftn(deriv) / lattice**d
    acc = {}
    bound = f.max_degree - 1
    for idx in np.ndindex(*coeffs.shape):
        c = coeffs[idx]
        if sum(idx) > bound:
            if abs(c) > 1e-8 * max(1.0, np.abs(coeffs).max()):
                raise AliasingError(f"contour reconstruction produced degree {sum(idx)} > {bound}")
            continue
        acc[idx] = c
    scale = max((abs(c) for c in acc.values()), default=0.0)
    # drop round-off noise so the sparse structure matches the exact derivative
    acc = {i: c for i, c in acc.items() if abs(c) > 1e-13 * max(scale, 1.0)}
    return HoloPoly(d, f.max_degree, acc)


def apply_via_cauchy(L: DiffOp, f: HoloPoly, radius: float = 1.0, nodes: int = 64) -> HoloPoly:
    """Apply a first-order gate using Cauchy integrals for every derivative.

    Agrees with :func:`apply` to quadrature round-off. ``nodes`` must be at
    least ``2 * (max_degree + 2)`` and at least 16.
    """
    if L.dim != f.dim:
        raise DimensionError(f"operator acts on {L.dim} variables, state has {f.dim}")
    if not L.is_first_order():
        raise ValueError("apply_via_cauchy requires a first-order operator (terms c z_j d_k)")
    if nodes < 16 or nodes < 2 * (f.max_degree + 2):
        raise AliasingError(
            f"{nodes} contour nodes cannot resolve degree {f.max_degree}; "
            f"need at least {max(16, 2 * (f.max_degree + 2))}"
        )
    if radius <= 0:
        raise ValueError("contour radius must be positive")
    M = operator_to_matrix(L)
    out = HoloPoly(f.dim, f.max_degree)
    if f.max_degree == 0:
        return out
    lattice = f.max_degree + 1
    derivs = {}
    for j, k in zip(*np.nonzero(M)):
        if k not in derivs:
            derivs[k] = _derivative_by_contour(f, int(k), radius, nodes, lattice)
        out = out + M[j, k] * multiply_by_variable(derivs[k], int(j))
    return out
