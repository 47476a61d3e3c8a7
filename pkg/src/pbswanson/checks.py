"""Named verification checks grouped into suites (driven by ``pbswanson verify``)."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import mpmath as mp
import numpy as np

from . import bicoherent as bc
from .eigensystem import (
    Flavor,
    Method,
    build_family,
    gram_matrix,
    norm_products,
    norm_table,
    quasi_basis_partial_sum,
)
from .operators import (
    HamiltonianForm,
    QuadraticHamiltonian,
    apply,
    commutator_residual,
    hamiltonian_apply,
    model_operators,
    model_pb_data,
    pb_conditions_check,
)
from .params import DerivedParams
from .polygauss import PolyGauss, gaussian, inner_product, norm
from .specialfn import Polynomial

SUITES = ("algebra", "eigensystem", "coherent", "identity")
COHERENT_TEST_POINTS = (0, 1, 1j, 1 + 1j, 2 - 1j, -1.5)


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{tag}  {self.name:<44s} measured={self.measured:.3e}  tol={self.tolerance:.1e}{extra}"

    def as_dict(self) -> dict:
        return asdict(self)


def _le(name, measured, tol, note="") -> Check:
    measured = float(measured)
    return Check(name, measured, tol, bool(measured <= tol), note)


def random_polygauss(rng: np.random.Generator, max_degree: int = 10) -> PolyGauss:
    deg = int(rng.integers(0, max_degree + 1))
    coeffs = [mp.mpc(*rng.normal(size=2)) for _ in range(deg + 1)]
    if coeffs[-1] == 0:
        coeffs[-1] = mp.mpc(1)
    return PolyGauss(
        Polynomial(coeffs),
        mp.mpf(rng.uniform(0.2, 2.0)),
        mp.mpc(*rng.normal(scale=0.5, size=2)),
        mp.mpc(*rng.normal(scale=0.2, size=2)),
    )


def coeff_residual(f: PolyGauss) -> float:
    return float(f.poly.max_abs())


def coeff_rel_diff(f: PolyGauss, g: PolyGauss) -> float:
    scale_ = max(f.poly.max_abs(), g.poly.max_abs())
    diff = (f.poly - g.poly).max_abs()
    return float(diff / scale_) if scale_ else float(diff)


# -- suites ------------------------------------------------------------------------


def algebra_suite(d: DerivedParams, seed: int = 0, n_ladder: int = 25) -> list[Check]:
    rng = np.random.default_rng(seed)
    ops = model_operators(d)
    out = []
    with mp.workdps(d.dps):
        samples = [random_polygauss(rng) for _ in range(20)]
        for name, (x, y) in {"[A,B]": (ops.A, ops.B), "[a,b]": (ops.a, ops.b),
                             "[c,c†]": (ops.c, ops.c_dag)}.items():
            worst = max(coeff_residual(commutator_residual(x, y, f)) for f in samples)
            out.append(_le(f"commutator {name} = 1 on 20 random inputs", worst, 1e-13))

        gap = d.gamma_b - d.gamma_a
        worst = max(
            coeff_residual(apply(ops.B, f) - apply(ops.A_dag, f) - f.scale(gap)) for f in samples
        )
        out.append(_le("B - A† = (gamma_B - gamma_A) 1", worst, 1e-13))

        ok = pb_conditions_check(*model_pb_data(d))
        out.append(Check("constant-alpha pseudo-boson condition", 0.0 if ok else 1.0, 0.0, ok))

        H1 = QuadraticHamiltonian(HamiltonianForm.PSEUDO_BOSONIC, d)
        H2 = QuadraticHamiltonian(HamiltonianForm.DIAGONAL, d)
        worst = max(coeff_rel_diff(hamiltonian_apply(H1, f), hamiltonian_apply(H2, f))
                    for f in samples[:10])
        out.append(_le("Hamiltonian forms agree (10 random inputs)", worst, 1e-12))

        phi = build_family(d, Flavor.PHI, Method.RECURSION, n_ladder + 1)
        psi = build_family(d, Flavor.PSI, Method.RECURSION, n_ladder + 1)
        worst = 0.0
        for n in range(21):
            hf = hamiltonian_apply(H1, phi[n])
            worst = max(worst, coeff_rel_diff(hf, phi[n].scale(d.Omega * n + d.gamma)))
        out.append(_le("H phi_n = (Omega n + gamma) phi_n, n <= 20", worst, 1e-11))

        worst = 0.0
        for n in range(n_ladder + 1):
            r = [coeff_rel_diff(apply(ops.B, phi[n]), phi[n + 1].scale(mp.sqrt(n + 1))),
                 coeff_rel_diff(apply(ops.A_dag, psi[n]), psi[n + 1].scale(mp.sqrt(n + 1))),
                 coeff_rel_diff(apply(ops.B, apply(ops.A, phi[n])), phi[n].scale(n)) if n else
                 coeff_residual(apply(ops.A, phi[0])),
                 coeff_rel_diff(apply(ops.A_dag, apply(ops.B_dag, psi[n])), psi[n].scale(n)) if n else
                 coeff_residual(apply(ops.B_dag, psi[0]))]
            if n:
                r += [coeff_rel_diff(apply(ops.A, phi[n]), phi[n - 1].scale(mp.sqrt(n))),
                      coeff_rel_diff(apply(ops.B_dag, psi[n]), psi[n - 1].scale(mp.sqrt(n)))]
            worst = max(worst, *r)
        out.append(_le(f"ladder and number relations, n <= {n_ladder}", worst, 1e-11))
    return out


def eigensystem_suite(d: DerivedParams, n_max: int = 30) -> list[Check]:
    out = []
    n_cross = min(25, n_max)
    worst = 0.0
    for fl in Flavor:
        rec = build_family(d, fl, Method.RECURSION, n_cross)
        cf = build_family(d, fl, Method.CLOSED_FORM, n_cross)
        with mp.workdps(d.dps):
            worst = max(worst, *(coeff_rel_diff(a, b) for a, b in zip(rec.states, cf.states)))
    out.append(_le(f"recursion vs Hermite closed form, n <= {n_cross}", worst, 1e-10))

    n_big = max(n_max, 60)
    phi = build_family(d, Flavor.PHI, Method.RECURSION, n_big)
    psi = build_family(d, Flavor.PSI, Method.RECURSION, n_big)
    sub = lambda fam, m: type(fam)(fam.states[: m + 1], fam.flavor, fam.method, fam.params)  # noqa: E731
    G = gram_matrix(sub(phi, n_max), sub(psi, n_max))
    out.append(_le(f"biorthonormality {n_max + 1}x{n_max + 1}",
                   np.max(np.abs(G - np.eye(n_max + 1))), 1e-10))

    nt = norm_table(phi, n_max)
    out.append(_le("||phi_n||^2/||phi_0||^2 = L_n(-(gB-gA)^2)", nt.max_ratio_discrepancy, 1e-10))

    prods = norm_products(phi, psi, 50)
    if d.degenerate:
        dev = max(abs(p - 1) for p in prods)
        out.append(_le("degenerate: ||phi_n|| ||psi_n|| = 1 (bounded)", dev, 1e-10,
                       "alpha = beta, bosonic limit"))
    else:
        steps = np.diff(prods[5:51])
        least = float(np.min(steps / np.array(prods[5:50])))
        out.append(Check("||phi_n|| ||psi_n|| strictly increasing, 5 <= n <= 50",
                         least, 0.0, least > 0, "smallest relative step, must exceed tol"))

    f = gaussian(0.5)
    g = gaussian(1.0)
    with mp.workdps(d.dps):
        qb = quasi_basis_partial_sum(f, g, phi, psi, 60)
    out.append(_le("quasi-basis partial sum N=60", qb.relative_error, 1e-6))
    out.append(_le("quasi-basis orderings agree N=60", qb.ordering_gap, 1e-9))
    return out


def coherent_suite(d: DerivedParams, L: int = 60) -> list[Check]:
    out = []
    xs = np.linspace(-4, 4, 41)
    fams = {fl: build_family(d, fl, Method.RECURSION, L) for fl in Flavor}
    worst_mod, worst_cf, worst_series, worst_ode = 0.0, 0.0, 0.0, 0.0
    for z in COHERENT_TEST_POINTS:
        for fl in Flavor:
            cf = bc.closed_form_state(d, fl, z)
            states = [bc.series_state(d, fl, z, L, family=fams[fl]), bc.ode_state(d, fl, z),
                      bc.displacement_state(d, fl, z, L)]
            worst_mod = max(worst_mod, *(bc.modulus_discrepancy(s, cf, xs) for s in states))
            worst_cf = max(worst_cf, bc.eigen_residual(d, cf))
            if abs(z) <= 2:
                worst_series = max(worst_series, bc.eigen_residual(d, states[0]))
        with mp.workdps(d.dps):
            ov = inner_product(bc.ode_state(d, Flavor.PHI, z).repr, bc.ode_state(d, Flavor.PSI, z).repr)
        worst_ode = max(worst_ode, float(abs(ov - 1)))
    out.append(_le(f"four constructions agree in modulus (L={L})", worst_mod, 1e-6))
    out.append(_le("closed form: (A - z) phi(z) = 0, (B† - z) psi(z) = 0", worst_cf, 1e-10))
    out.append(_le(f"series (L={L}) eigen residual, |z| <= 2", worst_series, 1e-7))
    out.append(_le("ODE states: <phi~(z), psi~(z)> = 1", worst_ode, 1e-10))

    worst = max(abs(bc.normalization_series(r * np.exp(0.7j)) - bc.normalization(r))
                for r in np.linspace(0, 3, 13))
    out.append(_le("N(|z|) series = exp(-|z|^2/2), |z| <= 3", worst, 1e-12))

    mc = bc.moment_measure_check(5)
    out.append(_le("measure moments = k!/(2 pi), k <= 5", max(m.error for m in mc), 1e-12))

    spec = bc.model_convergence(d, 30)
    out.append(Check("convergence radius is infinite", 0.0, 0.0, spec.rho == float("inf")))
    return out


def identity_suite(d: DerivedParams, R: float = 6.0, grid=(96, 96)) -> list[Check]:
    out = []
    with mp.workdps(d.dps):
        f = gaussian(0.5, coef=mp.pi ** -0.25)
        odd = PolyGauss(Polynomial([0, mp.sqrt(2) * mp.pi ** -0.25]), mp.mpf(0.5))
        res = bc.resolution_of_identity(d, f, f, R=R, grid=grid)
        out.append(_le(f"resolution of identity, R={R:g}, grid {grid[0]}x{grid[1]}",
                       res.relative_error, 1e-3))
        out.append(_le("resolution orderings agree", res.ordering_gap, 2e-3))
        par = bc.resolution_of_identity(d, f, odd, R=R, grid=grid)
        bound = float(norm(f) * norm(odd))
        out.append(_le("resolution of identity, parity-orthogonal pair",
                       abs(par.value) / bound, 1e-3))
    return out


def run_suite(name: str, d: DerivedParams, *, n_max: int = 30, L: int = 60, R: float = 6.0,
              seed: int = 0) -> list[Check]:
    if name == "algebra":
        return algebra_suite(d, seed=seed)
    if name == "eigensystem":
        return eigensystem_suite(d, n_max=n_max)
    if name == "coherent":
        return coherent_suite(d, L=L)
    if name == "identity":
        return identity_suite(d, R=R)
    if name == "all":
        return [c for s in SUITES for c in run_suite(s, d, n_max=n_max, L=L, R=R, seed=seed)]
    raise ValueError(f"unknown suite {name!r}")
