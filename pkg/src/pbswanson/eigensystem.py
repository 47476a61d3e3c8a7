"""Biorthonormal eigenfamilies of N = BA and N^dag.

The families are built two independent ways: by the derivative recursion for
the polynomial prefactors, and from Hermite polynomials in the shifted,
rescaled variable exp(theta0) (x + k). All overlaps use the exact Gaussian
moment engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import mpmath as mp
import numpy as np

from .operators import model_pb_data, theta_polynomial
from .params import DerivedParams
from .polygauss import PolyGauss, inner_product, inner_product_matrix
from .specialfn import Polynomial, hermite, laguerre_eval


class Flavor(str, Enum):
    PHI = "phi"  # eigenvectors of N = BA, vacuum of A
    PSI = "psi"  # eigenvectors of N^dag, vacuum of B^dag


class Method(str, Enum):
    RECURSION = "recursion"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class EigenFamily:
    states: tuple[PolyGauss, ...]
    flavor: Flavor
    method: Method
    params: DerivedParams

    def __len__(self):
        return len(self.states)

    def __getitem__(self, n) -> PolyGauss:
        return self.states[n]

    @property
    def n_max(self) -> int:
        return len(self.states) - 1


def _gamma(d: DerivedParams, flavor: Flavor):
    return d.gamma_a if Flavor(flavor) is Flavor.PHI else d.gamma_b


def _norm_constant(d: DerivedParams, flavor: Flavor):
    return d.n_phi if Flavor(flavor) is Flavor.PHI else d.n_psi


def vacuum(d: DerivedParams, flavor: Flavor = Flavor.PHI) -> PolyGauss:
    """N exp(-(Theta+/2Theta-) x^2 - (gamma/Theta-) x), gamma = gamma_A or gamma_B."""
    with mp.workdps(d.dps):
        return PolyGauss(
            Polynomial([_norm_constant(d, flavor)]),
            d.vacuum_quad,
            _gamma(d, flavor) / d.theta_minus,
            mp.mpf(0),
        )


def _recursion_polys(d: DerivedParams, flavor: Flavor, n_max: int) -> list[Polynomial]:
    alpha_a, alpha_b, beta_a, beta_b = model_pb_data(d)
    theta = theta_polynomial(alpha_a, alpha_b, beta_a, beta_b)
    # alphas are constant, so their derivatives drop out of the multiplier
    if Flavor(flavor) is Flavor.PHI:
        mult, dcoef = theta * (1 / alpha_a), alpha_b
    else:
        mult, dcoef = (theta * (1 / alpha_b)).conjugate(), mp.conj(alpha_a)
    polys = [Polynomial([mp.mpf(1)])]
    for _ in range(n_max):
        prev = polys[-1]
        polys.append(mult * prev - prev.derivative() * dcoef)
    return polys


def _closed_form_polys(d: DerivedParams, n_max: int) -> list[Polynomial]:
    # H_n(e^{theta0} (x + k)) / sqrt(2^n)
    slope = 1 / (mp.sqrt(2) * d.theta_minus)
    return [
        hermite(n).compose_affine(slope, slope * d.k) * (1 / mp.sqrt(mp.mpf(2) ** n))
        for n in range(n_max + 1)
    ]


def build_family(d: DerivedParams, flavor: Flavor | str = Flavor.PHI,
                 method: Method | str = Method.RECURSION, n_max: int = 30) -> EigenFamily:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    flavor, method = Flavor(flavor), Method(method)
    with mp.workdps(d.dps):
        vac = vacuum(d, flavor)
        if method is Method.RECURSION:
            polys = _recursion_polys(d, flavor, n_max)
        else:
            polys = _closed_form_polys(d, n_max)
        nrm = _norm_constant(d, flavor)
        states = tuple(
            vac.with_poly(p * (nrm / mp.sqrt(mp.factorial(n)))) for n, p in enumerate(polys)
        )
    return EigenFamily(states, flavor, method, d)


def gram_matrix(phi: EigenFamily, psi: EigenFamily) -> np.ndarray:
    """G[n, m] = <phi_n, psi_m> by exact moments (complex128 result)."""
    if len(phi) != len(psi):
        raise ValueError("families must have the same n_max")
    with mp.workdps(max(phi.params.dps, psi.params.dps)):
        g = inner_product_matrix(phi.states, psi.states)
        return np.array([[complex(v) for v in row] for row in g])


@dataclass(frozen=True)
class NormTable:
    norms: tuple[float, ...]  # ||f_n|| from the exact self overlap
    ratios: tuple[float, ...]  # ||f_n||^2 / ||f_0||^2
    laguerre: tuple[float, ...]  # L_n(-(gamma_B - gamma_A)^2), candidate for the ratio
    prefactor_candidate: float  # exp((7 gA^2 - gB^2 - 2 gA gB)/2), candidate for ||f_0||^2

    @property
    def max_ratio_discrepancy(self) -> float:
        return max(abs(r / l - 1) for r, l in zip(self.ratios, self.laguerre))


def norm_table(fam: EigenFamily, n_max: int | None = None) -> NormTable:
    d = fam.params
    n_max = fam.n_max if n_max is None else n_max
    if n_max > fam.n_max:
        raise ValueError(f"family only built up to n={fam.n_max}")
    with mp.workdps(d.dps):
        sq = [mp.re(inner_product(f, f)) for f in fam.states[: n_max + 1]]
        x = -((d.gamma_b - d.gamma_a) ** 2)
        lag = [laguerre_eval(n, x) for n in range(n_max + 1)]
        ga, gb = (d.gamma_a, d.gamma_b) if fam.flavor is Flavor.PHI else (d.gamma_b, d.gamma_a)
        pref = mp.exp((7 * ga ** 2 - gb ** 2 - 2 * ga * gb) / 2)
        return NormTable(
            tuple(float(mp.sqrt(s)) for s in sq),
            tuple(float(s / sq[0]) for s in sq),
            tuple(float(v) for v in lag),
            float(pref),
        )


def norm_products(phi: EigenFamily, psi: EigenFamily, n_max: int | None = None) -> list[float]:
    """||phi_n|| ||psi_n||; unbounded growth means neither family is a basis."""
    a, b = norm_table(phi, n_max), norm_table(psi, n_max)
    return [x * y for x, y in zip(a.norms, b.norms)]


def growth_fit(fam: EigenFamily, n_list: Sequence[int]) -> float:
    """Least-squares slope of log ||f_n|| against sqrt(n)."""
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be increasing")
    if n_list[-1] > fam.n_max:
        raise ValueError(f"family only built up to n={fam.n_max}")
    with mp.workdps(fam.params.dps):
        logs = [float(mp.log(mp.re(inner_product(fam[n], fam[n]))) / 2) for n in n_list]
    xs = np.sqrt(np.array(n_list, dtype=float))
    slope, _ = np.polyfit(xs, np.array(logs), 1)
    return float(slope)


class QuasiBasisSum(NamedTuple):
    direct: complex  # sum <f, phi_n><psi_n, g>
    mirrored: complex  # sum <f, psi_n><phi_n, g>
    exact: complex  # <f, g>
    relative_error: float  # both errors are taken before rounding to complex128
    ordering_gap: float


def quasi_basis_partial_sum(f: PolyGauss, g: PolyGauss, phi: EigenFamily, psi: EigenFamily,
                            N: int) -> QuasiBasisSum:
    if not (f.in_test_space and g.in_test_space):
        raise ValueError("test functions need a positive quadratic exponent")
    if N > min(phi.n_max, psi.n_max):
        raise ValueError("families are shorter than the requested truncation")
    with mp.workdps(max(phi.params.dps, psi.params.dps)):
        direct = mirrored = mp.mpc(0)
        for n in range(N + 1):
            direct += inner_product(f, phi[n]) * inner_product(psi[n], g)
            mirrored += inner_product(f, psi[n]) * inner_product(phi[n], g)
        exact = inner_product(f, g)
        return QuasiBasisSum(complex(direct), complex(mirrored), complex(exact),
                             float(abs(direct - exact) / abs(exact)),
                             float(abs(direct - mirrored) / abs(exact)))


def quasi_basis_errors(f, g, phi, psi, Ns: Sequence[int]) -> list[float]:
    """Relative error of the direct partial sum at each truncation in ``Ns``."""
    with mp.workdps(max(phi.params.dps, psi.params.dps)):
        exact = inner_product(f, g)
        terms = [inner_product(f, phi[n]) * inner_product(psi[n], g) for n in range(max(Ns) + 1)]
        out, acc = [], mp.mpc(0)
        for n, t in enumerate(terms):
            acc += t
            if n in Ns:
                out.append(float(abs(acc - exact) / abs(exact)))
        return out


def hermite_argument_scale(d: DerivedParams):
    """The slope 1/(sqrt(2) Theta-) of the Hermite argument, equal to exp(theta0)."""
    with mp.workdps(d.dps):
        return 1 / (mp.sqrt(2) * d.theta_minus)
