"""
Sparse truncated power series in several complex variables.

A :class:`HoloPoly` is the state representation used everywhere in the
package: a finite map from multi-indices to complex coefficients together
with the number of variables ``dim`` and a truncation bound ``max_degree``.
Values are immutable. Every operation that would push a term past the bound
raises :class:`~holologic.exceptions.DegreeOverflowError` instead of
silently dropping it.

Variables are indexed from 0 in the API and printed from 1 (``z1, z2, ...``).
"""
from __future__ import annotations

import json
import math
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import DegreeOverflowError, DimensionError, ZeroStateError

MultiIndex = tuple  # tuple[int, ...], one exponent per variable

COEFF_TOL = 1e-12


def _check_index(idx, dim, max_degree):
    idx = tuple(int(a) for a in idx)
    if len(idx) != dim:
        raise DimensionError(f"multi-index {idx} has length {len(idx)}, expected {dim}")
    if any(a < 0 for a in idx):
        raise DimensionError(f"multi-index {idx} has a negative exponent")
    if sum(idx) > max_degree:
        raise DegreeOverflowError(idx, max_degree)
    return idx


class HoloPoly:
    """Truncated multivariate power series with complex coefficients.

    Parameters
    ----------
    dim : int
        Number of complex variables.
    max_degree : int
        Truncation bound on the total degree of every term.
    terms : mapping, optional
        ``{multi_index: coefficient}``. Exact zeros are dropped.
    """

    __slots__ = ("_dim", "_max_degree", "_terms")

    def __init__(self, dim: int, max_degree: int, terms: Mapping | None = None):
        if int(dim) < 1:
            raise DimensionError(f"dimension must be positive, got {dim}")
        if int(max_degree) < 0:
            raise ValueError(f"max_degree must be nonnegative, got {max_degree}")
        self._dim = int(dim)
        self._max_degree = int(max_degree)
        clean = {}
        for idx, c in (terms or {}).items():
            idx = _check_index(idx, self._dim, self._max_degree)
            c = complex(c)
            if c != 0:
                clean[idx] = c
        self._terms = MappingProxyType(dict(sorted(clean.items())))

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def terms(self) -> Mapping:
        return self._terms

    @property
    def degree(self) -> int:
        """Largest total degree present; -1 for the zero polynomial."""
        return max((sum(idx) for idx in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, idx) -> complex:
        return self._terms.get(tuple(idx), 0j)

    def with_max_degree(self, max_degree: int) -> "HoloPoly":
        """Same polynomial under a different truncation bound."""
        return HoloPoly(self._dim, max_degree, self._terms)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if not isinstance(other, HoloPoly):
            return NotImplemented
        if other._dim != self._dim:
            raise DimensionError(f"dimension mismatch: {self._dim} vs {other._dim}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for idx, c in other._terms.items():
            out[idx] = out.get(idx, 0j) + c
        return HoloPoly(self._dim, max(self._max_degree, other._max_degree), out)

    def __neg__(self):
        return HoloPoly(self._dim, self._max_degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HoloPoly):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            s = complex(other)
            return HoloPoly(self._dim, self._max_degree, {k: s * c for k, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * (1 / complex(other))
        return NotImplemented

    def isclose(self, other: "HoloPoly", tol: float = COEFF_TOL) -> bool:
        """Coefficient-wise comparison with absolute tolerance ``tol``."""
        if not isinstance(other, HoloPoly) or other._dim != self._dim:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= tol for k in keys)

    def __eq__(self, other):
        if not isinstance(other, HoloPoly):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __call__(self, *point):
        if len(point) == 1 and np.ndim(point[0]) == 1:
            point = tuple(point[0])
        return evaluate(self, point)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"HoloPoly(dim={self._dim}, max_degree={self._max_degree}, {format_poly(self)!r})"

    # serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self._dim,
            "max_degree": self._max_degree,
            "terms": [
                {"idx": list(idx), "re": c.real + 0.0, "im": c.imag + 0.0} for idx, c in self._terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "HoloPoly":
        try:
            entries = [
                (t["idx"], complex(t.get("re", 0.0), t.get("im", 0.0))) for t in data["terms"]
            ]
            return poly_from_terms(int(data["dim"]), int(data["max_degree"]), entries)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed HoloPoly JSON: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "HoloPoly":
        return cls.from_dict(json.loads(text))


# constructors ---------------------------------------------------------------


def poly_from_terms(dim: int, max_degree: int, entries: Iterable) -> HoloPoly:
    """Build a HoloPoly from ``(multi_index, coefficient)`` pairs, summing duplicates."""
    acc = {}
    for idx, c in entries:
        idx = _check_index(idx, dim, max_degree)
        acc[idx] = acc.get(idx, 0j) + complex(c)
    return HoloPoly(dim, max_degree, acc)


def zero(dim: int, max_degree: int) -> HoloPoly:
    return HoloPoly(dim, max_degree)


def constant(dim: int, max_degree: int, value: complex = 1.0) -> HoloPoly:
    return HoloPoly(dim, max_degree, {(0,) * dim: value})


def monomial(idx: Sequence[int], coeff: complex = 1.0, max_degree: int | None = None) -> HoloPoly:
    """``coeff * z**idx``; the bound defaults to the monomial's own degree."""
    idx = tuple(idx)
    return HoloPoly(len(idx), sum(idx) if max_degree is None else max_degree, {idx: coeff})


def variable(i: int, dim: int, max_degree: int = 1) -> HoloPoly:
    idx = [0] * dim
    if not 0 <= i < dim:
        raise DimensionError(f"variable index {i} out of range for dimension {dim}")
    idx[i] = 1
    return HoloPoly(dim, max_degree, {tuple(idx): 1.0})


def from_coefficients(coeffs: Sequence[complex], max_degree: int | None = None) -> HoloPoly:
    """One-variable series ``sum_n coeffs[n] z**n``."""
    D = len(coeffs) - 1 if max_degree is None else max_degree
    return HoloPoly(1, max(D, 0), {(n,): c for n, c in enumerate(coeffs)})


# linear structure -----------------------------------------------------------


def linear_combine(coeffs: Sequence[complex], polys: Sequence[HoloPoly]) -> HoloPoly:
    """``sum_k coeffs[k] * polys[k]``; all inputs must share dimension and bound."""
    if len(coeffs) != len(polys):
        raise ValueError("coeffs and polys differ in length")
    if not polys:
        raise ValueError("linear_combine needs at least one polynomial")
    dim, D = polys[0].dim, polys[0].max_degree
    acc = {}
    for a, p in zip(coeffs, polys):
        if p.dim != dim or p.max_degree != D:
            raise DimensionError(
                f"mismatched polynomials: (dim={p.dim}, D={p.max_degree}) vs (dim={dim}, D={D})"
            )
        for idx, c in p.terms.items():
            acc[idx] = acc.get(idx, 0j) + complex(a) * c
    return HoloPoly(dim, D, acc)


# Weyl generators ------------------------------------------------------------


def partial_derivative(f: HoloPoly, i: int) -> HoloPoly:
    """Exact derivative with respect to variable ``i``."""
    if not 0 <= i < f.dim:
        raise DimensionError(f"variable index {i} out of range for dimension {f.dim}")
    out = {}
    for idx, c in f.terms.items():
        if idx[i]:
            new = list(idx)
            new[i] -= 1
            out[tuple(new)] = c * idx[i]
    return HoloPoly(f.dim, f.max_degree, out)


def multiply_by_variable(f: HoloPoly, i: int) -> HoloPoly:
    """``z_i * f``; raises DegreeOverflowError rather than truncating."""
    if not 0 <= i < f.dim:
        raise DimensionError(f"variable index {i} out of range for dimension {f.dim}")
    out = {}
    for idx, c in f.terms.items():
        new = list(idx)
        new[i] += 1
        out[tuple(new)] = c
    return HoloPoly(f.dim, f.max_degree, out)


def multiply(f: HoloPoly, g: HoloPoly, max_degree: int | None = None) -> HoloPoly:
    """Polynomial product. The bound defaults to ``f.max_degree + g.max_degree``."""
    if f.dim != g.dim:
        raise DimensionError(f"dimension mismatch: {f.dim} vs {g.dim}")
    D = f.max_degree + g.max_degree if max_degree is None else max_degree
    acc = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            idx = tuple(x + y for x, y in zip(a, b))
            acc[idx] = acc.get(idx, 0j) + ca * cb
    return HoloPoly(f.dim, D, acc)


def embed(f: HoloPoly, dim: int, offset: int) -> HoloPoly:
    """Place ``f`` on variables ``offset .. offset+f.dim-1`` of a ``dim``-variable space."""
    if offset < 0 or offset + f.dim > dim:
        raise DimensionError(f"cannot embed a {f.dim}-variable state at offset {offset} in {dim}")
    pad_l, pad_r = (0,) * offset, (0,) * (dim - offset - f.dim)
    return HoloPoly(dim, f.max_degree, {pad_l + idx + pad_r: c for idx, c in f.terms.items()})


def tensor_product(factors: Sequence[HoloPoly]) -> HoloPoly:
    """Joint state of independent subsystems on disjoint, consecutive variable blocks."""
    if not factors:
        raise ValueError("tensor_product needs at least one factor")
    dim = sum(f.dim for f in factors)
    out, offset = None, 0
    for f in factors:
        e = embed(f, dim, offset)
        out = e if out is None else multiply(out, e)
        offset += f.dim
    return out


def translate(f: HoloPoly, shift: Sequence[complex]) -> HoloPoly:
    """Re-expand around a new center: returns ``g`` with ``g(w) = f(w + shift)``."""
    shift = [complex(s) for s in shift]
    if len(shift) != f.dim:
        raise DimensionError(f"shift has length {len(shift)}, expected {f.dim}")
    acc = {}
    for idx, c in f.terms.items():
        # product over variables of binomial expansions of (w_i + s_i)^k_i
        partial = {(): c}
        for k, s in zip(idx, shift):
            nxt = {}
            for head, v in partial.items():
                for j in range(k + 1):
                    term = v * math.comb(k, j) * s ** (k - j)
                    if term != 0:
                        key = head + (j,)
                        nxt[key] = nxt.get(key, 0j) + term
            partial = nxt
        for key, v in partial.items():
            acc[key] = acc.get(key, 0j) + v
    return HoloPoly(f.dim, f.max_degree, acc)


# evaluation -----------------------------------------------------------------


def evaluate(f: HoloPoly, point: Sequence[complex]) -> complex:
    """Value of ``f`` at a point of ``C^d``."""
    point = tuple(point)
    if len(point) != f.dim:
        raise DimensionError(f"point has length {len(point)}, expected {f.dim}")
    total = 0j
    for idx, c in f.terms.items():
        term = c
        for z, a in zip(point, idx):
            if a:
                term *= complex(z) ** a
        total += term
    return total


def evaluate_many(f: HoloPoly, points) -> np.ndarray:
    """Vectorized evaluation; ``points`` has shape ``(..., d)``."""
    pts = np.asarray(points, dtype=complex)
    if pts.shape[-1] != f.dim:
        raise DimensionError(f"points have trailing size {pts.shape[-1]}, expected {f.dim}")
    out = np.zeros(pts.shape[:-1], dtype=complex)
    # powers per variable computed once up to the degree actually present
    top = max(f.degree, 0)
    powers = [pts[..., i, None] ** np.arange(top + 1) for i in range(f.dim)]
    for idx, c in f.terms.items():
        term = np.full(pts.shape[:-1], c, dtype=complex)
        for i, a in enumerate(idx):
            if a:
                term = term * powers[i][..., a]
        out += term
    return out


# entanglement structure -----------------------------------------------------


def _check_partition(f: HoloPoly, partition):
    A, B = (tuple(sorted(int(i) for i in part)) for part in partition)
    if set(A) & set(B) or set(A) | set(B) != set(range(f.dim)):
        raise DimensionError(f"invalid partition {A} | {B} of {f.dim} variables")
    return A, B


def coefficient_matrix(f: HoloPoly, partition):
    """Coefficients of ``f`` arranged by (exponents on A, exponents on B).

    Returns
    -------
    matrix : ndarray of complex
    rows, cols : list of tuple
        The restricted multi-indices labelling rows and columns, sorted.
    """
    A, B = _check_partition(f, partition)
    rows = sorted({tuple(idx[i] for i in A) for idx in f.terms})
    cols = sorted({tuple(idx[i] for i in B) for idx in f.terms})
    r_pos = {k: n for n, k in enumerate(rows)}
    c_pos = {k: n for n, k in enumerate(cols)}
    M = np.zeros((len(rows), len(cols)), dtype=complex)
    for idx, c in f.terms.items():
        M[r_pos[tuple(idx[i] for i in A)], c_pos[tuple(idx[i] for i in B)]] = c
    return M, rows, cols


def is_product_state(f: HoloPoly, partition, tol: float = 1e-10) -> bool:
    """True when the coefficient matrix across ``partition`` has numerical rank one."""
    if f.is_zero():
        raise ZeroStateError("product structure of the zero state is undefined")
    M, _, _ = coefficient_matrix(f, partition)
    s = np.linalg.svd(M, compute_uv=False)
    return bool(len(s) < 2 or s[1] <= tol * s[0])


# formatting -----------------------------------------------------------------


def format_real(x: float) -> str:
    """Shortest round-trip repr, with integral values printed without ``.0``."""
    x = float(x)
    if x == 0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return format_real(c.real)
    im = format_real(abs(c.imag)) + "j"
    if c.real == 0:
        return ("-" if c.imag < 0 else "") + im
    return f"{format_real(c.real)}{'-' if c.imag < 0 else '+'}{im}"


def _format_monomial(idx) -> str:
    parts = []
    for i, a in enumerate(idx):
        if a == 1:
            parts.append(f"z{i + 1}")
        elif a > 1:
            parts.append(f"z{i + 1}^{a}")
    return "*".join(parts)


def format_poly(f: HoloPoly) -> str:
    """Human-readable form, e.g. ``z1^2+z2^2`` or ``-1j*z1^2+1j*z2^2``."""
    if f.is_zero():
        return "0"
    out = []
    # descending total degree, then lexicographic, so the text reads like algebra
    for idx, c in sorted(f.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-a for a in kv[0]))):
        mono = _format_monomial(idx)
        if not mono:
            s = format_complex(c)
        elif c == 1:
            s = mono
        elif c == -1:
            s = "-" + mono
        elif c.imag != 0 and c.real != 0:
            s = f"({format_complex(c)})*{mono}"
        else:
            s = f"{format_complex(c)}*{mono}"
        if out and not s.startswith("-"):
            s = "+" + s
        out.append(s)
    return "".join(out)
