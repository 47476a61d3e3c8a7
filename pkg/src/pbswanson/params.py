"""Model parameters and every constant derived from them."""

from __future__ import annotations

from dataclasses import dataclass, replace

import mpmath as mp

from .polygauss import PolyGauss, inner_product
from .precision import dps_for
from .specialfn import Polynomial


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Raw inputs of H = omega b a + lambda (b^2 + a^2) with a = c + alpha, b = c^dag + beta."""

    omega: float
    lam: float
    alpha: float
    beta: float

    def validate(self) -> None:
        if not self.omega > 0:
            raise ParameterError(f"omega must be positive, got {self.omega}")
        if not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if not self.omega > 2 * self.lam:
            raise ParameterError(
                f"need omega > 2*lambda (atanh argument {2 * self.lam / self.omega} >= 1)"
            )

    @property
    def degenerate(self) -> bool:
        """alpha == beta: b is the adjoint of a and H is self-adjoint."""
        return self.alpha == self.beta

    def swapped(self) -> "ModelParams":
        return replace(self, alpha=self.beta, beta=self.alpha)


PRESETS: dict[str, ModelParams] = {
    "fig1-a": ModelParams(0.5, 0.1, 0.3, 0.31),
    "fig1-b": ModelParams(0.5, 0.1, 0.3, 0.35),
    "fig1-c": ModelParams(0.5, 0.1, 0.3, 0.5),
    "fig1-d": ModelParams(0.5, 0.1, 0.3, 1.0),
}


@dataclass(frozen=True)
class DerivedParams:
    model: ModelParams
    theta0: mp.mpf
    Omega: mp.mpf
    gamma: mp.mpf
    theta_plus: mp.mpf
    theta_minus: mp.mpf
    gamma_a: mp.mpf
    gamma_b: mp.mpf
    k: mp.mpf
    n_phi: mp.mpf
    n_psi: mp.mpf
    dps: int

    @property
    def vacuum_quad(self):
        """Coefficient Theta+/(2 Theta-) = exp(2 theta0)/2 of x^2 in the vacua."""
        return self.theta_plus / (2 * self.theta_minus)

    @property
    def degenerate(self) -> bool:
        return self.model.degenerate

    @property
    def gamma_gap(self):
        """|gamma_A - gamma_B|, the exponential growth rate of the norms in sqrt(n)."""
        return abs(self.gamma_a - self.gamma_b)

    def swapped(self) -> "DerivedParams":
        """Exchange gamma_A and gamma_B (k, Theta and normalizations are invariant)."""
        return replace(self, model=self.model.swapped(), gamma_a=self.gamma_b, gamma_b=self.gamma_a)

    def as_dict(self) -> dict:
        keys = ("theta0", "Omega", "gamma", "theta_plus", "theta_minus", "gamma_a",
                "gamma_b", "k", "n_phi", "n_psi")
        return {key: float(getattr(self, key)) for key in keys}


def derive(p: ModelParams, precision: str = "standard") -> DerivedParams:
    p.validate()
    dps = dps_for(precision)
    with mp.workdps(dps):
        omega, lam = mp.mpf(p.omega), mp.mpf(p.lam)
        alpha, beta = mp.mpf(p.alpha), mp.mpf(p.beta)
        theta0 = mp.atanh(2 * lam / omega) / 2
        ch, sh = mp.cosh(theta0), mp.sinh(theta0)
        Omega = omega / mp.cosh(2 * theta0)
        gamma = -omega * sh ** 2 / mp.cosh(2 * theta0)
        theta_plus = (ch + sh) / mp.sqrt(2)
        theta_minus = (ch - sh) / mp.sqrt(2)
        gamma_a = alpha * ch + beta * sh
        gamma_b = beta * ch + alpha * sh
        k = theta_minus * (gamma_a + gamma_b)

        # normalization is fixed by integrating the two bare vacua against each other
        q = theta_plus / (2 * theta_minus)
        one = Polynomial([mp.mpf(1)])
        bare_phi = PolyGauss(one, q, gamma_a / theta_minus, mp.mpf(0))
        bare_psi = PolyGauss(one, q, gamma_b / theta_minus, mp.mpf(0))
        overlap = mp.re(inner_product(bare_phi, bare_psi))
        n_vac = 1 / mp.sqrt(overlap)

        return DerivedParams(p, theta0, Omega, gamma, theta_plus, theta_minus, gamma_a,
                             gamma_b, k, n_vac, n_vac, dps)


def spectrum(d: DerivedParams, n_max: int) -> list[float]:
    """Eigenvalues E_n = Omega n + gamma, n = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    with mp.workdps(d.dps):
        return [float(d.Omega * n + d.gamma) for n in range(n_max + 1)]


def normalization_candidates(d: DerivedParams) -> dict:
    """Closed-form normalization candidates next to the enforced one.

    ``product_candidate`` is exp(-k^2/(4 Theta-)) / ((2 pi)^(1/4) sqrt(Theta-)),
    offered for N_phi N_psi; ``individual_candidate`` is
    exp(-k^2/Theta-) / (sqrt(2 pi) Theta-), offered for each of N_phi, N_psi;
    ``gaussian_closed_form`` is exp(-k^2/(4 Theta-^2)) / ((2 pi)^(1/4) sqrt(Theta-)),
    the prefactor that appears in the closed-form bi-coherent states.
    Only the enforced value makes <phi_0, psi_0> = 1.
    """
    with mp.workdps(d.dps):
        tm, k = d.theta_minus, d.k
        product_candidate = mp.exp(-k ** 2 / (4 * tm)) / ((2 * mp.pi) ** 0.25 * mp.sqrt(tm))
        individual = mp.exp(-k ** 2 / tm) / (mp.sqrt(2 * mp.pi) * tm)
        closed = mp.exp(-k ** 2 / (4 * tm ** 2)) / ((2 * mp.pi) ** 0.25 * mp.sqrt(tm))
        return {
            "enforced_n_phi": float(d.n_phi),
            "enforced_product": float(d.n_phi * d.n_psi),
            "product_candidate": float(product_candidate),
            "individual_candidate": float(individual),
            "individual_candidate_product": float(individual ** 2),
            "gaussian_closed_form": float(closed),
        }
