"""
Segal-Bargmann space over ``C^d`` with Gaussian weight ``exp(-|z|^2 / t)``.

The exact inner product follows from orthogonality of monomials,
``<z^a, z^b> = delta_ab * a! * t^|a|``, and is the path used by every other
module. :func:`inner_product_quadrature` and the kernel routines integrate
against a tensor-product polar rule instead and serve as an independent
numerical check of the exact formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .exceptions import DimensionError, DivergenceError, PoleError, ZeroStateError
from .holostate import HoloPoly, from_coefficients, translate

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class BargmannSpace:
    """``dim`` complex variables, Gaussian scale ``t`` (``t = hbar`` for quantized states)."""

    dim: int = 1
    t: float = 1.0

    def __post_init__(self):
        if int(self.dim) < 1:
            raise DimensionError(f"dimension must be >= 1, got {self.dim}")
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValueError(f"scale t must be positive and finite, got {self.t}")

    def check(self, *polys: HoloPoly):
        for p in polys:
            if p.dim != self.dim:
                raise DimensionError(f"state has dimension {p.dim}, space has {self.dim}")


@dataclass(frozen=True)
class QuadratureGrid:
    """Polar rule per complex variable: Gauss-Legendre in ``r``, trapezoid in angle.

    ``radius=None`` means ``10 * sqrt(t)`` for whichever space the grid is used with.
    """

    n_radial: int = 128
    n_angular: int = 128
    radius: float | None = None

    def __post_init__(self):
        if self.n_radial < 4 or self.n_angular < 4:
            raise ValueError("quadrature grids need at least 4 nodes in each direction")
        if self.radius is not None and not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def cutoff(self, space: BargmannSpace) -> float:
        return 10.0 * math.sqrt(space.t) if self.radius is None else float(self.radius)


# exact inner product --------------------------------------------------------


def _monomial_norm2(idx, t) -> float:
    return math.prod(math.factorial(a) for a in idx) * t ** sum(idx)


def inner_product(space: BargmannSpace, f: HoloPoly, g: HoloPoly) -> complex:
    """``<f|g>``, conjugate-linear in ``f``."""
    space.check(f, g)
    small, large = (f, g) if len(f) <= len(g) else (g, f)
    total = 0j
    for idx, c in small.terms.items():
        d = large.coefficient(idx)
        if d:
            cf, cg = (c, d) if small is f else (d, c)
            total += cf.conjugate() * cg * _monomial_norm2(idx, space.t)
    return total


def norm_squared(space: BargmannSpace, f: HoloPoly) -> float:
    space.check(f)
    return sum(abs(c) ** 2 * _monomial_norm2(idx, space.t) for idx, c in f.terms.items())


def normalize(space: BargmannSpace, f: HoloPoly) -> HoloPoly:
    n2 = norm_squared(space, f)
    if n2 == 0:
        raise ZeroStateError("cannot normalize the zero state")
    return f / math.sqrt(n2)


def basis_state(space: BargmannSpace, idx: Sequence[int], max_degree: int | None = None) -> HoloPoly:
    """Unit vector ``z^idx / sqrt(idx! t^|idx|)``."""
    idx = tuple(idx)
    if len(idx) != space.dim:
        raise DimensionError(f"index {idx} does not match dimension {space.dim}")
    D = sum(idx) if max_degree is None else max_degree
    return HoloPoly(space.dim, D, {idx: 1 / math.sqrt(_monomial_norm2(idx, space.t))})


# quadrature oracle ----------------------------------------------------------


@lru_cache(maxsize=32)
def _polar_rule(t: float, n_radial: int, n_angular: int, radius: float):
    """Nodes ``w`` and weights ``W`` with ``sum W h(w) ~ (pi t)^-1 int h exp(-|w|^2/t) dA``."""
    x, wx = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * radius * (x + 1.0)
    wr = 0.5 * radius * wx
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    radial = wr * r * np.exp(-r * r / t) / (np.pi * t) * (2.0 * np.pi / n_angular)
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(radial, n_angular)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def polar_rule(space: BargmannSpace, grid: QuadratureGrid):
    """The one-variable rule used by every quadrature routine (nodes, weights)."""
    return _polar_rule(float(space.t), grid.n_radial, grid.n_angular, grid.cutoff(space))


def gaussian_integral(space: BargmannSpace, integrand: Callable, grid: QuadratureGrid) -> complex:
    """``(pi t)^-d int h(z) exp(-|z|^2/t) dz`` for a vectorized callable ``h(z_1, ..., z_d)``.

    Builds the full tensor grid, so keep ``d`` and the grid small.
    """
    w, W = polar_rule(space, grid)
    axes = np.meshgrid(*([w] * space.dim), indexing="ij", sparse=True)
    weights = W
    for _ in range(space.dim - 1):
        weights = np.multiply.outer(weights, W)
    return complex(np.sum(weights * integrand(*axes)))


def _moments(space, grid, a_max, b_max):
    """Table ``M[a, b] = sum W conj(w)^a w^b`` for one variable."""
    w, W = polar_rule(space, grid)
    pa = np.conj(w)[None, :] ** np.arange(a_max + 1)[:, None]
    pb = w[None, :] ** np.arange(b_max + 1)[:, None]
    return (pa * W[None, :]) @ pb.T


def inner_product_quadrature(
    space: BargmannSpace, f: HoloPoly, g: HoloPoly, grid: QuadratureGrid | None = None
) -> complex:
    """``<f|g>`` by the tensor-product polar rule.

    The integrand is a sum of products of one-variable factors, so the
    tensor rule is applied factor by factor; this is the same quadrature sum
    without materialising the ``d``-fold grid.
    """
    grid = grid or QuadratureGrid()
    space.check(f, g)
    if f.is_zero() or g.is_zero():
        return 0j
    M = _moments(space, grid, f.degree, g.degree)
    total = 0j
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            total += ca.conjugate() * cb * math.prod(M[i, j] for i, j in zip(a, b))
    return complex(total)


# reproducing kernel ---------------------------------------------------------


def _point(space, z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (space.dim,):
        raise DimensionError(f"point has shape {z.shape}, expected ({space.dim},)")
    return z


def kernel_eval(space: BargmannSpace, z, w) -> complex:
    """``K(z, w) = exp(z . conj(w) / t)``."""
    z, w = _point(space, z), _point(space, w)
    return complex(np.exp(np.sum(z * np.conj(w)) / space.t))


def kernel_reproduce(space: BargmannSpace, f: HoloPoly, z, grid: QuadratureGrid | None = None) -> complex:
    """``int K(z, w) f(w) dmu_t(w)`` by quadrature; equals ``f(z)`` up to grid error."""
    grid = grid or QuadratureGrid()
    space.check(f)
    z = _point(space, z)
    w, W = polar_rule(space, grid)
    top = max(f.degree, 0)
    # per variable: q[i][k] = sum W exp(z_i conj(w)/t) w^k
    q = []
    for zi in z:
        kern = W * np.exp(zi * np.conj(w) / space.t)
        q.append((w[None, :] ** np.arange(top + 1)[:, None]) @ kern)
    total = 0j
    for idx, c in f.terms.items():
        total += c * math.prod(q[i][a] for i, a in enumerate(idx))
    return complex(total)


def kernel_semigroup(space: BargmannSpace, z, w, grid: QuadratureGrid | None = None) -> complex:
    """``int K(z, u) K(u, w) dmu_t(u)`` by quadrature; equals ``K(z, w)`` up to grid error."""
    grid = grid or QuadratureGrid()
    z, w = _point(space, z), _point(space, w)
    u, W = polar_rule(space, grid)
    out = 1 + 0j
    for zi, wi in zip(z, w):
        out *= np.sum(W * np.exp(zi * np.conj(u) / space.t) * np.exp(u * np.conj(wi) / space.t))
    return complex(out)


# Segal-Bargmann transform ---------------------------------------------------


def trapezoid_weights(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ValueError("sample abscissae must be a strictly increasing 1-D array")
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def _sb_kernel(t, z, x):
    return np.exp((-(z * z) + 2.0 * math.sqrt(2.0) * z * x - x * x) / (2.0 * t))


def sb_transform(space: BargmannSpace, x, fx, z, weights=None):
    """Segal-Bargmann transform of real-line samples, evaluated at ``z``.

    Parameters
    ----------
    x, fx : array_like
        Abscissae and sampled values of the real-line function.
    z : complex or array_like
        Evaluation point(s); the result has the same shape.
    weights : array_like, optional
        Quadrature weights for ``x``; trapezoidal when omitted.

    Raises
    ------
    DivergenceError
        If the integrand at either end of the rule exceeds ``1e-12`` in
        magnitude, i.e. the rule does not cover the Gaussian envelope.
    """
    x = np.asarray(x, dtype=float)
    fx = np.asarray(fx, dtype=complex)
    if fx.shape != x.shape:
        raise DimensionError(f"samples have shape {fx.shape}, abscissae {x.shape}")
    w = trapezoid_weights(x) if weights is None else np.asarray(weights, dtype=float)
    zz = np.asarray(z, dtype=complex)
    integrand = _sb_kernel(space.t, zz[..., None], x) * fx
    tails = np.abs(integrand[..., [0, -1]])
    if np.any(tails > TAIL_TOL):
        raise DivergenceError(
            f"sample tails not negligible: max endpoint integrand {tails.max():.3g} > {TAIL_TOL}"
        )
    out = (math.pi * space.t) ** -0.25 * (integrand @ w)
    return complex(out) if out.ndim == 0 else out


def sb_coefficients(space: BargmannSpace, x, fx, degree: int, weights=None) -> HoloPoly:
    """Taylor coefficients of the transform up to ``degree``.

    Uses the Hermite generating function
    ``exp(2us - s^2) = sum H_n(u) s^n / n!`` with ``u = x/sqrt(t)``,
    ``s = z/sqrt(2t)``, so that coefficient ``n`` is a Hermite moment of the
    samples. This is an independent route from :func:`sb_transform`.
    """
    x = np.asarray(x, dtype=float)
    fx = np.asarray(fx, dtype=complex)
    w = trapezoid_weights(x) if weights is None else np.asarray(weights, dtype=float)
    t = space.t
    u = x / math.sqrt(t)
    env = np.exp(-x * x / (2 * t)) * fx * w
    if np.any(np.abs(env[[0, -1]]) > TAIL_TOL):
        raise DivergenceError("sample tails not negligible for the Hermite projection")
    coeffs = []
    h_prev, h = np.zeros_like(u), np.ones_like(u)
    for n in range(degree + 1):
        moment = np.sum(h * env)
        coeffs.append((math.pi * t) ** -0.25 * moment / ((2 * t) ** (n / 2) * math.factorial(n)))
        h_prev, h = h, 2 * u * h - 2 * n * h_prev
    return from_coefficients(coeffs, max_degree=degree)


# derivatives ----------------------------------------------------------------


def derivative_at(space: BargmannSpace, f: HoloPoly, n: int, z0: complex = 0.0) -> complex:
    """``n``-th derivative of a one-variable state at ``z0`` as an inner product.

    ``f`` is re-expanded in powers of ``w = z - z0`` and the result is
    ``<w^n | f(w + z0)> / t^n``. Since ``<w^n|w^n> = n! t^n`` this is
    ``n!`` times the Taylor coefficient, i.e. ``f^(n)(z0)``; for ``t = 1`` and
    ``z0 = 0`` it is literally ``<z^n|f>``.
    """
    if n < 0:
        raise ValueError(f"derivative order must be nonnegative, got {n}")
    space.check(f)
    if space.dim != 1:
        raise DimensionError("derivative_at is defined for one-variable states")
    if n > f.max_degree:
        return 0j
    g = translate(f, [z0]) if z0 != 0 else f
    probe = HoloPoly(1, f.max_degree, {(n,): 1.0})
    return inner_product(space, probe, g) / space.t**n


def forward_difference(f, z0: complex, h: complex, order: int = 1) -> complex:
    """First or second forward difference of a callable (or HoloPoly) at ``z0``."""
    if h == 0:
        raise ValueError("step h must be nonzero")
    if order == 1:
        return (f(z0 + h) - f(z0)) / h
    if order == 2:
        return (f(z0 + 2 * h) - 2 * f(z0 + h) + f(z0)) / (h * h)
    raise ValueError(f"order must be 1 or 2, got {order}")


# hypergeometric coefficients ------------------------------------------------


def pochhammer(x: float, n: int) -> float:
    """Rising factorial ``(x)_n``, with ``(x)_0 = 1``."""
    if n < 0:
        raise ValueError("Pochhammer order must be nonnegative")
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def _ratio(p_params, q_params, n):
    num = math.prod(pochhammer(a, n) for a in p_params)
    den = math.prod(pochhammer(b, n) for b in q_params)
    return num / den


def hypergeometric_series(p_params, q_params, degree: int) -> HoloPoly:
    """``pFq`` truncated at ``degree``."""
    for b in q_params:
        if float(b).is_integer() and -(degree - 1) <= b <= 0 and degree > 0:
            raise PoleError(f"lower parameter {b} is a pole of the series up to degree {degree}")
    return from_coefficients(
        [_ratio(p_params, q_params, k) / math.factorial(k) for k in range(degree + 1)]
    )


def hypergeometric_coefficient_routes(p_params, q_params, n: int):
    """Return ``(pochhammer_ratio, inner_product_value)`` for order ``n``."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    for b in q_params:
        if float(b).is_integer() and -(n - 1) <= b <= 0 and n > 0:
            raise PoleError(f"lower parameter {b} gives (b)_k = 0 for some k <= {n}")
    direct = _ratio(p_params, q_params, n)
    series = hypergeometric_series(p_params, q_params, n)
    via_ip = inner_product(BargmannSpace(1, 1.0), HoloPoly(1, n, {(n,): 1.0}), series)
    return direct, via_ip.real


def hypergeometric_coefficient(p_params, q_params, n: int) -> float:
    """``(a_1)_n...(a_p)_n / ((b_1)_n...(b_q)_n)``, cross-checked against ``<z^n|pFq>``.

    Raises ``ArithmeticError`` if the two routes disagree beyond ``1e-10`` relative.
    """
    direct, via_ip = hypergeometric_coefficient_routes(p_params, q_params, n)
    if abs(direct - via_ip) > 1e-10 * max(abs(direct), 1e-300):
        raise ArithmeticError(f"Pochhammer ratio {direct} disagrees with inner product {via_ip}")
    return direct


# oracle agreement suite -----------------------------------------------------


def oracle_agreement_rows(
    max_degree: int = 6,
    scales: Sequence[float] = (0.5, 1.0, 2.0),
    dims: Sequence[int] = (1, 2),
    grid: QuadratureGrid | None = None,
):
    """Exact vs quadrature inner products over monomial pairs.

    Yields ``(test, exact, quad, rel_err)``. In one variable every pair of
    monomials up to ``max_degree`` is checked; in more variables only the
    diagonal, plus the kernel reproducing and semigroup properties at a few
    points inside the unit polydisc.
    """
    from itertools import product

    grid = grid or QuadratureGrid()
    rows = []

    def rel(q, e):
        return abs(q - e) / abs(e) if e != 0 else abs(q - e)

    for t in scales:
        for d in dims:
            space = BargmannSpace(d, t)
            idxs = [a for a in product(range(max_degree + 1), repeat=d) if sum(a) <= max_degree]
            pairs = [(a, b) for a in idxs for b in idxs] if d == 1 else [(a, a) for a in idxs]
            for a, b in pairs:
                fa = HoloPoly(d, max_degree, {a: 1.0})
                fb = HoloPoly(d, max_degree, {b: 1.0})
                e = inner_product(space, fa, fb)
                q = inner_product_quadrature(space, fa, fb, grid)
                rows.append((f"ip d={d} t={t:g} {list(a)}|{list(b)}", e, q, rel(q, e)))
        space = BargmannSpace(1, t)
        for z in (0.0, 0.5, 0.6 + 0.8j, -1j):
            f = HoloPoly(1, 3, {(0,): 1.0, (1,): -0.5, (3,): 0.25j})
            e = f(z)
            q = kernel_reproduce(space, f, [z], grid)
            rows.append((f"reproduce t={t:g} z={z}", e, q, rel(q, e)))
            w = 0.3 - 0.4j
            e = kernel_eval(space, [z], [w])
            q = kernel_semigroup(space, [z], [w], grid)
            rows.append((f"semigroup t={t:g} z={z} w={w}", e, q, rel(q, e)))
    return rows
