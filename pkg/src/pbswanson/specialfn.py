"""Hermite and Laguerre polynomials, Hermite functions and quadrature rules.

Quadrature here is only a cross-check integrator; exact overlaps of
polynomial-times-Gaussian functions live in :mod:`pbswanson.polygauss`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from numbers import Number
from typing import Sequence

import mpmath as mp
import numpy as np


class Polynomial:
    """Polynomial with coefficients in ascending degree order.

    Coefficients may be any numeric type (int, Fraction, float, complex,
    mpmath numbers); arithmetic is done in whatever type they carry.
    Trailing exact zeros are dropped, the zero polynomial is ``(0,)``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Number] = (0,)):
        c = list(coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def monomial(cls, n: int, coef: Number = 1) -> "Polynomial":
        return cls([0] * n + [coef])

    @classmethod
    def affine(cls, slope: Number, intercept: Number) -> "Polynomial":
        return cls([intercept, slope])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            a, b = self.coeffs, other.coeffs
            out = [0 * a[0] * b[0]] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j, bj in enumerate(b):
                    out[i + j] = out[i + j] + ai * bj
            return Polynomial(out)
        return Polynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0 * self.coeffs[0]])
        return Polynomial([i * c for i, c in enumerate(self.coeffs) if i > 0])

    def conjugate(self) -> "Polynomial":
        return Polynomial([_conj(c) for c in self.coeffs])

    def compose_affine(self, slope, intercept) -> "Polynomial":
        """Return ``x -> self(slope*x + intercept)`` (Horner on polynomials)."""
        inner = Polynomial.affine(slope, intercept)
        acc = Polynomial([0 * slope])
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def max_abs(self):
        return max(abs(c) for c in self.coeffs)


def _conj(c):
    if isinstance(c, (int, float)):
        return c
    return c.conjugate()


# -- Hermite ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _hermite_coeffs(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    if n == 1:
        return (0, 2)
    hm1, h = _hermite_coeffs(n - 2), _hermite_coeffs(n - 1)
    out = [0] * (n + 1)
    for i, c in enumerate(h):
        out[i + 1] += 2 * c
    for i, c in enumerate(hm1):
        out[i] -= 2 * (n - 1) * c
    return tuple(out)


def hermite(n: int) -> Polynomial:
    """Physicists' Hermite polynomial H_n with exact integer coefficients."""
    if n < 0:
        raise ValueError("n must be non-negative")
    # fill the cache bottom-up so deep n does not recurse
    for m in range(0, n, 64):
        _hermite_coeffs(m)
    return Polynomial(_hermite_coeffs(n))


def hermite_eval(n: int, x):
    """H_n(x) by the three-term recurrence (stable for values, any numeric x)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    h_prev, h = 0 * x + 1, 2 * x
    if n == 0:
        return h_prev
    for m in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * m * h_prev
    return h


def hermite_function(n: int, x):
    """Normalized Hermite function e_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).

    Uses the normalized recurrence, which never forms H_n or n! explicitly.
    Accepts scalars or numpy arrays.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    e_prev = np.zeros_like(x)
    e = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    for m in range(n):
        e_prev, e = e, math.sqrt(2.0 / (m + 1)) * x * e - math.sqrt(m / (m + 1)) * e_prev
    return e if e.ndim else float(e)


def hermite_generating_sum(t: complex, x: float, L: int) -> complex:
    """Partial sum of t^l H_l(x) / l! for l = 0..L.

    Terms are propagated as h_l = t^l H_l(x) / l! so nothing overflows;
    the limit L -> inf is exp(-t^2 + 2 t x).
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    t = complex(t)
    h_prev, h = 0j, 1 + 0j
    total = h
    for l in range(L):
        h_prev, h = h, (2 * x * t * h - 2 * t * t * h_prev) / (l + 1)
        total += h
    return total


# -- Laguerre ---------------------------------------------------------------


def laguerre_eval(n: int, x):
    """L_n(x) from (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    l_prev, l = 0 * x + 1, 1 - x
    if n == 0:
        return l_prev
    for m in range(1, n):
        l_prev, l = l, ((2 * m + 1 - x) * l - m * l_prev) / (m + 1)
    return l


def laguerre_asymptotic(n: int, x: float) -> float:
    """Leading large-n behaviour of L_n(x) for x < 0 (Szego).

    L_n(x) ~ exp(x/2) / (2 sqrt(pi) (-x)^(1/4)) * exp(2 sqrt(-n x)) / n^(1/4)
    """
    if x >= 0:
        raise ValueError("asymptotic form only holds for x < 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    return (
        math.exp(x / 2)
        / (2 * math.sqrt(math.pi) * (-x) ** 0.25)
        * math.exp(2 * math.sqrt(-n * x))
        / n ** 0.25
    )


# -- quadrature -------------------------------------------------------------


class QuadratureKind(str, Enum):
    GAUSS_HERMITE = "gauss_hermite"
    DISK_POLAR = "disk_polar"


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights.

    For ``gauss_hermite`` the nodes are real and the rule integrates
    ``f(x) exp(-x^2)``. For ``disk_polar`` the nodes are complex points of a
    disk and the weights already include the ``r dr dtheta`` Jacobian.
    """

    nodes: tuple
    weights: tuple
    kind: QuadratureKind

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if any(not w > 0 for w in self.weights):
            raise ValueError("quadrature weights must be positive")
        if self.kind is QuadratureKind.GAUSS_HERMITE:
            if any(not b > a for a, b in zip(self.nodes, self.nodes[1:])):
                raise ValueError("Gauss-Hermite nodes must be strictly increasing")

    def __len__(self):
        return len(self.nodes)


def default_node_count(max_degree: int) -> int:
    return 2 * max_degree + 8


def gauss_hermite(n: int, dps: int | None = None) -> QuadratureRule:
    """n-point Gauss-Hermite rule for weight exp(-x^2).

    With ``dps`` set, the numpy nodes are polished by Newton iteration on
    H_n in mpmath and the weights recomputed at that precision.
    """
    if n < 1:
        raise ValueError("need at least one node")
    x, w = np.polynomial.hermite.hermgauss(n)
    if dps is None:
        return QuadratureRule(tuple(float(v) for v in x), tuple(float(v) for v in w),
                              QuadratureKind.GAUSS_HERMITE)
    with mp.workdps(dps + 10):
        # weights: 2^(n-1) n! sqrt(pi) / (n^2 H_{n-1}(x)^2), written with
        # normalized Hermite functions to avoid huge intermediates
        nodes, weights = [], []
        for x0 in x:
            xi = mp.mpf(x0)
            for _ in range(100):
                hn, hn1 = _normalized_hermite_pair(n, xi)
                # d/dx of normalized h_n is sqrt(2n) h_{n-1}
                step = hn / (mp.sqrt(2 * n) * hn1)
                xi -= step
                if abs(step) < mp.mpf(10) ** (-dps - 5):
                    break
            _, hn1 = _normalized_hermite_pair(n, xi)
            nodes.append(+xi)
            weights.append(1 / (n * hn1 ** 2))
    with mp.workdps(dps):
        return QuadratureRule(tuple(+v for v in nodes), tuple(+v for v in weights),
                              QuadratureKind.GAUSS_HERMITE)


def _normalized_hermite_pair(n, x):
    # h_k = H_k / sqrt(2^k k! sqrt(pi)) without the Gaussian factor
    h_prev, h = mp.mpf(0), 1 / mp.sqrt(mp.sqrt(mp.pi))
    for m in range(n):
        h_prev, h = h, mp.sqrt(mp.mpf(2) / (m + 1)) * x * h - mp.sqrt(mp.mpf(m) / (m + 1)) * h_prev
    return h, h_prev


def disk_polar(R: float, n_r: int, n_theta: int) -> QuadratureRule:
    """Tensor rule on the disk |z| <= R: Gauss-Legendre in r, trapezoid in theta.

    Weights include the polar Jacobian r dr dtheta.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    if n_r < 1 or n_theta < 1:
        raise ValueError("grid sizes must be positive")
    t, wt = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * R * (t + 1)
    wr = 0.5 * R * wt
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    dtheta = 2 * np.pi / n_theta
    nodes, weights = [], []
    for ri, wi in zip(r, wr):
        for th in theta:
            nodes.append(complex(cmath.rect(ri, th)))
            weights.append(float(wi * ri * dtheta))
    return QuadratureRule(tuple(nodes), tuple(weights), QuadratureKind.DISK_POLAR)
