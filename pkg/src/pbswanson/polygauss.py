"""Functions of the form P(x) exp(-(q x^2 + l x + c)) with exact overlaps.

Every state, operator image and bi-coherent state in the package lives in
this class. Inner products are evaluated exactly by contracting the
polynomial coefficients against Gaussian moments, so the only error is the
working precision of mpmath (see :mod:`pbswanson.precision`).
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import mpmath as mp
import numpy as np

from .specialfn import Polynomial
from .precision import DPS


class NotIntegrableError(ArithmeticError):
    """Combined quadratic exponent is not positive."""


class RepresentationError(ValueError):
    """Operation would leave the PolyGauss class (e.g. mismatched exponents)."""


@dataclass(frozen=True)
class PolyGauss:
    """``poly(x) * exp(-(quad x^2 + lin x + const_term))``.

    ``quad > 0`` puts the function in L^2 and, since exp(s x) f stays square
    integrable for every real s, in the dense test set on which the
    eigenfamilies act as quasi-bases. Construction does not enforce it; the
    overlap routines do.
    """

    poly: Polynomial
    quad: Number
    lin: Number = 0
    const_term: Number = 0

    def __post_init__(self):
        if not isinstance(self.poly, Polynomial):
            object.__setattr__(self, "poly", Polynomial(self.poly))

    @property
    def exponent(self) -> tuple:
        return (self.quad, self.lin, self.const_term)

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def in_test_space(self) -> bool:
        return self.quad > 0

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __call__(self, x):
        return eval_at(self, x)

    def values(self, xs) -> np.ndarray:
        """Evaluate on a grid, returning complex128.

        Evaluation runs at no less than the standard working precision, since
        high-degree prefactors cancel heavily before the Gaussian tames them.
        """
        with mp.workdps(max(mp.mp.dps, DPS["standard"])):
            return np.array([complex(eval_at(self, mp.mpf(float(x)))) for x in np.ravel(xs)])

    def with_poly(self, poly: Polynomial) -> "PolyGauss":
        return PolyGauss(poly, self.quad, self.lin, self.const_term)

    def scale(self, s) -> "PolyGauss":
        return scale(self, s)

    def __add__(self, other: "PolyGauss") -> "PolyGauss":
        return add(self, other)

    def __sub__(self, other: "PolyGauss") -> "PolyGauss":
        return add(self, scale(other, -1))

    def __mul__(self, s) -> "PolyGauss":
        return scale(self, s)

    __rmul__ = __mul__

    def __neg__(self) -> "PolyGauss":
        return scale(self, -1)


def eval_at(f: PolyGauss, x):
    """P(x) exp(-(q x^2 + l x + c)); Horner for P."""
    return f.poly(x) * mp.exp(-(f.quad * x * x + f.lin * x + f.const_term))


def scale(f: PolyGauss, s) -> PolyGauss:
    return f.with_poly(f.poly * s)


def add(f: PolyGauss, g: PolyGauss) -> PolyGauss:
    if f.exponent != g.exponent:
        raise RepresentationError(
            "cannot add PolyGauss values with different exponents "
            f"{f.exponent} vs {g.exponent}"
        )
    return f.with_poly(f.poly + g.poly)


def zero_like(f: PolyGauss) -> PolyGauss:
    return f.with_poly(Polynomial([0]))


@dataclass(frozen=True)
class GaussianMomentTable:
    """M_k = integral of x^k exp(-a x^2 - b x) over the real line, k = 0..len-1."""

    a: Number
    b: Number
    moments: tuple

    def __len__(self):
        return len(self.moments)

    def __getitem__(self, k):
        return self.moments[k]


def gaussian_moments(a, b, k_max: int) -> GaussianMomentTable:
    """Moments up to order ``k_max`` by the two-term recursion.

    M_0 = sqrt(pi/a) exp(b^2/(4a)), M_1 = -b/(2a) M_0,
    M_{k+1} = -b/(2a) M_k + k/(2a) M_{k-1}.
    """
    if not a > 0:
        raise NotIntegrableError(f"quadratic coefficient {a} is not positive: not integrable")
    a = mp.mpf(a)
    b = mp.mpmathify(b)
    shift = -b / (2 * a)
    m = [mp.sqrt(mp.pi / a) * mp.exp(b * b / (4 * a))]
    if k_max >= 1:
        m.append(shift * m[0])
    for k in range(1, k_max):
        m.append(shift * m[k] + k / (2 * a) * m[k - 1])
    return GaussianMomentTable(a, b, tuple(m))


def _contract(fc: Sequence, gc: Sequence, moments: Sequence):
    # sum_i conj(f_i) sum_j g_j M_{i+j}
    total = mp.mpc(0)
    n = len(gc)
    for i, fi in enumerate(fc):
        if fi == 0:
            continue
        total += mp.conj(fi) * mp.fdot(gc, moments[i:i + n])
    return total


def inner_product(f: PolyGauss, g: PolyGauss):
    """<f, g> = integral of conj(f) g, exact up to working precision."""
    a = f.quad + g.quad
    if not a > 0:
        raise NotIntegrableError("combined quadratic exponent is not positive: not integrable")
    b = mp.conj(f.lin) + g.lin
    table = gaussian_moments(a, b, f.degree + g.degree)
    c = mp.conj(f.const_term) + g.const_term
    return _contract(f.poly.coeffs, g.poly.coeffs, table.moments) * mp.exp(-c)


def inner_product_matrix(fs: Sequence[PolyGauss], gs: Sequence[PolyGauss]) -> list[list]:
    """Matrix of <f_i, g_j>; one moment table when each side shares an exponent."""
    if not fs or not gs:
        return [[] for _ in fs]
    shared = all(f.exponent == fs[0].exponent for f in fs) and all(
        g.exponent == gs[0].exponent for g in gs
    )
    if not shared:
        return [[inner_product(f, g) for g in gs] for f in fs]
    f0, g0 = fs[0], gs[0]
    a = f0.quad + g0.quad
    if not a > 0:
        raise NotIntegrableError("combined quadratic exponent is not positive: not integrable")
    dmax_f = max(f.degree for f in fs)
    dmax_g = max(g.degree for g in gs)
    table = gaussian_moments(a, mp.conj(f0.lin) + g0.lin, dmax_f + dmax_g)
    factor = mp.exp(-(mp.conj(f0.const_term) + g0.const_term))
    mom = table.moments
    # hankel action H g_j, reused by every row
    hg = [
        [mp.fdot(g.poly.coeffs, mom[i:i + len(g.poly)]) for i in range(dmax_f + 1)]
        for g in gs
    ]
    out = []
    for f in fs:
        fc = [mp.conj(c) for c in f.poly.coeffs]
        out.append([mp.fdot(fc, h[:len(fc)]) * factor for h in hg])
    return out


def norm(f: PolyGauss):
    return mp.sqrt(mp.re(inner_product(f, f)))


def gaussian(quad, lin=0, const_term=0, coef=1) -> PolyGauss:
    """Convenience constructor for a pure Gaussian."""
    return PolyGauss(Polynomial([mp.mpmathify(coef)]), mp.mpf(quad), mp.mpmathify(lin),
                     mp.mpmathify(const_term))
