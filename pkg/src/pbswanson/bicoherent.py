"""Bi-coherent states phi(z; x), psi(z; x) and their resolution of the identity.

Four constructions are provided: the truncated coherent series over the
eigenfamilies, the Gaussian closed form obtained from the Hermite generating
function, the solution of the first-order eigenvalue ODE, and the truncated
exponential of -conj(z) A + z B acting on the vacuum. They agree up to an
x-independent phase; comparisons are therefore done on moduli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import mpmath as mp
import numpy as np

from .eigensystem import Flavor, Method as FamilyMethod, build_family, vacuum
from .operators import apply, model_operators
from .params import DerivedParams
from .polygauss import PolyGauss, add, inner_product, scale
from .specialfn import Polynomial, disk_polar

RESIDUAL_GRID = np.linspace(-5.0, 5.0, 41)


class StateMethod(str, Enum):
    SERIES = "series"
    CLOSED_FORM = "closed_form"
    ODE = "ode"
    DISPLACEMENT = "displacement"


@dataclass(frozen=True)
class BiCoherentState:
    z: complex
    flavor: Flavor
    method: StateMethod
    repr: PolyGauss
    truncation: int | None = None

    def __call__(self, x):
        return self.repr(x)

    def values(self, xs) -> np.ndarray:
        return self.repr.values(xs)


def normalization(z: complex) -> float:
    """N(|z|) = exp(-|z|^2 / 2) for the sequence alpha_n = sqrt(n)."""
    return math.exp(-abs(z) ** 2 / 2)


def normalization_series(z: complex, K: int = 200) -> float:
    """(sum_k |z|^{2k} / (alpha_k!)^2)^(-1/2) with alpha_k! = sqrt(k!), truncated at K."""
    r2 = abs(z) ** 2
    term, total = 1.0, 1.0
    for k in range(1, K + 1):
        term *= r2 / k
        total += term
    return total ** -0.5


def _z(z) -> mp.mpc:
    return mp.mpc(complex(z).real, complex(z).imag)


def series_state(d: DerivedParams, flavor: Flavor | str, z: complex, L: int = 60,
                 family=None) -> BiCoherentState:
    """exp(-|z|^2/2) sum_{l<=L} z^l / sqrt(l!) f_l, merged into one PolyGauss."""
    if L < 0:
        raise ValueError("L must be non-negative")
    flavor = Flavor(flavor)
    if family is None:
        family = build_family(d, flavor, FamilyMethod.RECURSION, L)
    with mp.workdps(d.dps):
        zz = _z(z)
        poly = Polynomial([mp.mpc(0)])
        coef = mp.mpc(1)
        for l in range(L + 1):
            if l:
                coef = coef * zz / mp.sqrt(l)
            poly = poly + family[l].poly * coef
        poly = poly * mp.exp(-abs(zz) ** 2 / 2)
        return BiCoherentState(complex(z), flavor, StateMethod.SERIES, family[0].with_poly(poly), L)


def closed_form_state(d: DerivedParams, flavor: Flavor | str, z: complex) -> BiCoherentState:
    """Gaussian closed form of the coherent series.

    exp(-i zr zi + i zi (x+k)/Theta-) / ((2 pi)^(1/4) sqrt(Theta-))
      * exp(-k^2/(4 Theta-^2) - zr^2 - (Theta+/2Theta-) x^2 - (gamma/Theta-) x + (zr/Theta-)(x+k))
    """
    flavor = Flavor(flavor)
    with mp.workdps(d.dps):
        zz = _z(z)
        zr, zi = zz.real, zz.imag
        tm, k = d.theta_minus, d.k
        gamma = d.gamma_a if flavor is Flavor.PHI else d.gamma_b
        pref = 1 / ((2 * mp.pi) ** mp.mpf(0.25) * mp.sqrt(tm))
        # exponent written as -(q x^2 + lin x + c)
        lin = gamma / tm - zr / tm - 1j * zi / tm
        c = k ** 2 / (4 * tm ** 2) + zr ** 2 - zr * k / tm + 1j * zr * zi - 1j * zi * k / tm
        rep = PolyGauss(Polynomial([pref]), d.vacuum_quad, mp.mpc(lin), mp.mpc(c))
        return BiCoherentState(complex(z), flavor, StateMethod.CLOSED_FORM, rep)


def ode_state(d: DerivedParams, flavor: Flavor | str, z: complex) -> BiCoherentState:
    """K exp((1/Theta-)((z - gamma) x - Theta+ x^2 / 2)) with the real K fixing <phi~, psi~> = 1."""
    flavor = Flavor(flavor)
    with mp.workdps(d.dps):
        zz = _z(z)
        tm, k = d.theta_minus, d.k
        gamma = d.gamma_a if flavor is Flavor.PHI else d.gamma_b
        K = mp.exp(-zz.real ** 2 + zz.real * k / tm - k ** 2 / (4 * tm ** 2)) / (
            (2 * mp.pi) ** mp.mpf(0.25) * mp.sqrt(tm)
        )
        rep = PolyGauss(Polynomial([K]), d.vacuum_quad, -(zz - gamma) / tm, mp.mpc(0))
        return BiCoherentState(complex(z), flavor, StateMethod.ODE, rep)


def displacement_state(d: DerivedParams, flavor: Flavor | str, z: complex,
                       L: int = 60) -> BiCoherentState:
    """sum_{l<=L} (1/l!) T^l f_0 with T = -conj(z) A + z B (phi) or -conj(z) B^dag + z A^dag (psi)."""
    if L < 0:
        raise ValueError("L must be non-negative")
    flavor = Flavor(flavor)
    ops = model_operators(d)
    lower, raise_ = (ops.A, ops.B) if flavor is Flavor.PHI else (ops.B_dag, ops.A_dag)
    with mp.workdps(d.dps):
        zz = _z(z)
        term = vacuum(d, flavor)
        total = term
        for l in range(1, L + 1):
            term = add(scale(apply(lower, term), -mp.conj(zz) / l), scale(apply(raise_, term), zz / l))
            total = add(total, term)
        return BiCoherentState(complex(z), flavor, StateMethod.DISPLACEMENT, total, L)


def build_state(d: DerivedParams, flavor, z, method: StateMethod | str, L: int = 60) -> BiCoherentState:
    method = StateMethod(method)
    if method is StateMethod.SERIES:
        return series_state(d, flavor, z, L)
    if method is StateMethod.CLOSED_FORM:
        return closed_form_state(d, flavor, z)
    if method is StateMethod.ODE:
        return ode_state(d, flavor, z)
    return displacement_state(d, flavor, z, L)


def eigen_residual(d: DerivedParams, state: BiCoherentState, grid=RESIDUAL_GRID) -> float:
    """sup_x |(A - z) phi(z; x)| / sup_x |phi(z; x)| on a fixed grid (B^dag for psi)."""
    ops = model_operators(d)
    lower = ops.A if state.flavor is Flavor.PHI else ops.B_dag
    with mp.workdps(d.dps):
        f = state.repr
        res = add(apply(lower, f), scale(f, -_z(state.z)))
        xs = [mp.mpf(float(x)) for x in grid]
        num = max(abs(res(x)) for x in xs)
        den = max(abs(f(x)) for x in xs)
        return float(num / den)


def modulus_ratio_spread(s1: BiCoherentState, s2: BiCoherentState, xs) -> float:
    """Relative spread of |s1|/|s2| over ``xs``; zero iff they agree up to a constant."""
    a = np.abs(s1.values(xs))
    b = np.abs(s2.values(xs))
    ratio = a / b
    return float(np.max(np.abs(ratio / ratio.mean() - 1)))


def modulus_discrepancy(s1: BiCoherentState, s2: BiCoherentState, xs) -> float:
    """max_x ||s1| - |s2|| / max_x |s2|."""
    a = np.abs(s1.values(xs))
    b = np.abs(s2.values(xs))
    return float(np.max(np.abs(a - b)) / np.max(b))


def fitted_constant(s1: BiCoherentState, s2: BiCoherentState, xs) -> complex:
    """Least-squares c with s1 ~ c s2 on ``xs`` (phase and modulus)."""
    a = s1.values(xs)
    b = s2.values(xs)
    return complex(np.vdot(b, a) / np.vdot(b, b))


# -- convergence radius and the measure -------------------------------------


class ConvergenceParameterError(ValueError):
    pass


@dataclass(frozen=True)
class ConvergenceSpec:
    A_phi: float
    A_psi: float
    r_phi: float
    r_psi: float
    M_phi: float
    M_psi: float
    alpha_bar: float
    rho: float


def ratio_limit(seq: Callable[[int], float]) -> float:
    """lim M_n / M_{n+1} for a closed-form sequence, by Richardson extrapolation."""
    val = mp.limit(lambda n: mp.mpf(seq(n)) / seq(n + 1), mp.inf)
    return float(val)


def convergence_radius(A_phi: float, A_psi: float, r_phi: float, r_psi: float,
                       M_phi, M_psi, alpha_bar: float) -> ConvergenceSpec:
    """rho = alpha_bar * min(1, M(phi)/r_phi, M(psi)/r_psi).

    ``M_phi`` / ``M_psi`` are the ratio limits (possibly ``inf``) or callables
    n -> M_n whose ratio limit is extrapolated.
    """
    if callable(M_phi):
        M_phi = ratio_limit(M_phi)
    if callable(M_psi):
        M_psi = ratio_limit(M_psi)
    for name, v in (("A_phi", A_phi), ("A_psi", A_psi), ("r_phi", r_phi), ("r_psi", r_psi),
                    ("M_phi", M_phi), ("M_psi", M_psi), ("alpha_bar", alpha_bar)):
        if not v > 0:
            raise ConvergenceParameterError(f"{name} must be strictly positive, got {v}")
    m = min(1.0, M_phi / r_phi, M_psi / r_psi)
    rho = math.inf if math.isinf(alpha_bar) else alpha_bar * m
    return ConvergenceSpec(A_phi, A_psi, r_phi, r_psi, M_phi, M_psi, alpha_bar, rho)


def model_convergence(d: DerivedParams, n_max: int = 30) -> ConvergenceSpec:
    """Instantiate the bound for the model: M_n = n^(-1/8), r = exp(|gamma_A - gamma_B|).

    A_phi, A_psi are the smallest constants making ||f_n|| <= A r^n M_n hold on
    n <= n_max (measured, not assumed). alpha_n = sqrt(n) is unbounded, so rho = inf.
    """
    from .eigensystem import norm_table

    r = math.exp(float(d.gamma_gap))

    def M(n):
        return max(n, 1) ** -0.125

    A = []
    for flavor in (Flavor.PHI, Flavor.PSI):
        norms = norm_table(build_family(d, flavor, FamilyMethod.RECURSION, n_max)).norms
        A.append(max(nv / (r ** n * M(n)) for n, nv in enumerate(norms)))
    return convergence_radius(A[0], A[1], r, r, M, M, math.inf)


@dataclass(frozen=True)
class MomentCheck:
    k: int
    integral: float
    expected: float

    @property
    def error(self) -> float:
        return abs(self.integral - self.expected)


def moment_measure_check(k_max: int) -> list[MomentCheck]:
    """Check that d lambda(r) = (1/pi) r exp(-r^2) dr has moments k!/(2 pi).

    The integral is done by quadrature; u = r^2 reduces it to Gamma(k+1)/(2 pi).
    """
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    out = []
    with mp.workdps(30):
        for k in range(k_max + 1):
            val = mp.quad(lambda r: r * mp.exp(-r * r) * r ** (2 * k) / mp.pi, [0, mp.inf])
            expected = mp.gamma(k + 1) / (2 * mp.pi)
            out.append(MomentCheck(k, float(val), float(expected)))
    return out


# -- resolution of the identity ------------------------------------------------


def _overlap_factory(d: DerivedParams, method: StateMethod, L: int):
    if method is StateMethod.CLOSED_FORM:
        return lambda flavor, z: closed_form_state(d, flavor, z).repr
    if method is StateMethod.SERIES:
        fams = {fl: build_family(d, fl, FamilyMethod.RECURSION, L) for fl in Flavor}
        return lambda flavor, z: series_state(d, flavor, z, L, family=fams[flavor]).repr
    raise ValueError(f"resolution of identity supports series or closed_form, not {method}")


@dataclass(frozen=True)
class IdentityResult:
    value: complex  # integral of <f, psi(z)><phi(z), g> d nu
    mirrored: complex  # integral of <f, phi(z)><psi(z), g> d nu
    exact: complex

    @property
    def relative_error(self) -> float:
        return abs(self.value - self.exact) / abs(self.exact)

    @property
    def ordering_gap(self) -> float:
        return abs(self.value - self.mirrored) / abs(self.exact)


def resolution_of_identity(d: DerivedParams, f: PolyGauss, g: PolyGauss, R: float = 6.0,
                           L: int = 60, grid: tuple[int, int] = (96, 96),
                           method: StateMethod | str = StateMethod.CLOSED_FORM) -> IdentityResult:
    """Integrate the coherent-state overlaps against (1/pi) r dr dtheta on |z| <= R.

    Overlaps are exact; only the z integral is quadrature. Nodes are summed in
    a fixed order so repeated runs are bit-identical.
    """
    method = StateMethod(method)
    rule = disk_polar(R, grid[0], grid[1])
    state = _overlap_factory(d, method, L)
    with mp.workdps(d.dps):
        total = mirrored = mp.mpc(0)
        for z, w in zip(rule.nodes, rule.weights):
            phi_z = state(Flavor.PHI, z)
            psi_z = state(Flavor.PSI, z)
            total += w * inner_product(f, psi_z) * inner_product(phi_z, g)
            mirrored += w * inner_product(f, phi_z) * inner_product(psi_z, g)
        exact = inner_product(f, g)
        return IdentityResult(complex(total / mp.pi), complex(mirrored / mp.pi), complex(exact))
