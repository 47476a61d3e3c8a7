"""Ladder operators and the two forms of the Hamiltonian acting on PolyGauss.

Every operator of the model is ``deriv_coef d/dx + mult_lin x + mult_const``
with constant coefficients, which maps the PolyGauss class into itself
without changing the exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import mpmath as mp

from .params import DerivedParams
from .polygauss import PolyGauss, add, scale
from .specialfn import Polynomial


@dataclass(frozen=True)
class LadderOp:
    deriv_coef: object
    mult_lin: object
    mult_const: object
    name: str = ""

    def __call__(self, f: PolyGauss) -> PolyGauss:
        return apply(self, f)

    def adjoint(self) -> "LadderOp":
        # real coefficients: (d/dx)^dag = -d/dx, multiplication is self-adjoint
        name = self.name[:-1] if self.name.endswith("†") else (self.name + "†" if self.name else "")
        return LadderOp(-self.deriv_coef, self.mult_lin, self.mult_const, name)

    def shifted(self, s) -> "LadderOp":
        """Operator plus ``s`` times the identity."""
        return LadderOp(self.deriv_coef, self.mult_lin, self.mult_const + s, self.name)


def apply(op: LadderOp, f: PolyGauss) -> PolyGauss:
    """Exact image of ``f``; same exponent, degree grows by at most one."""
    p = f.poly
    # d/dx [P e^{-(q x^2 + l x + c)}] = (P' - (2 q x + l) P) e^{...}
    dp = p.derivative() - Polynomial.affine(2 * f.quad, f.lin) * p
    out = dp * op.deriv_coef + Polynomial.affine(op.mult_lin, op.mult_const) * p
    return f.with_poly(out)


def apply_chain(ops, f: PolyGauss) -> PolyGauss:
    """Apply ``ops`` right to left, as in the written product ops[0] ops[1] ... f."""
    for op in reversed(ops):
        f = apply(op, f)
    return f


def commutator_residual(op1: LadderOp, op2: LadderOp, f: PolyGauss) -> PolyGauss:
    """(op1 op2 - op2 op1) f - f; identically zero for a pseudo-bosonic pair."""
    left = apply(op1, apply(op2, f))
    right = apply(op2, apply(op1, f))
    return add(add(left, scale(right, -1)), scale(f, -1))


@dataclass(frozen=True)
class ModelOperators:
    a: LadderOp
    b: LadderOp
    c: LadderOp
    c_dag: LadderOp
    A: LadderOp
    B: LadderOp
    A_dag: LadderOp
    B_dag: LadderOp


def model_operators(d: DerivedParams) -> ModelOperators:
    """All ladder operators of the model at the parameters ``d``."""
    with mp.workdps(d.dps):
        r = 1 / mp.sqrt(2)
        alpha, beta = mp.mpf(d.model.alpha), mp.mpf(d.model.beta)
        c = LadderOp(r, r, mp.mpf(0), "c")
        c_dag = c.adjoint()
        a = LadderOp(r, r, alpha, "a")
        b = LadderOp(-r, r, beta, "b")
        A = LadderOp(d.theta_minus, d.theta_plus, d.gamma_a, "A")
        B = LadderOp(-d.theta_minus, d.theta_plus, d.gamma_b, "B")
        return ModelOperators(a, b, c, c_dag, A, B, A.adjoint(), B.adjoint())


def combine(f_terms) -> PolyGauss:
    """Sum of (coefficient, PolyGauss) pairs sharing one exponent."""
    f_terms = list(f_terms)
    coef, first = f_terms[0]
    acc = scale(first, coef)
    for coef, g in f_terms[1:]:
        acc = add(acc, scale(g, coef))
    return acc


class HamiltonianForm(str, Enum):
    PSEUDO_BOSONIC = "pseudo_bosonic"  # omega b a + lambda (b^2 + a^2)
    DIAGONAL = "diagonal"  # Omega B A + gamma


@dataclass(frozen=True)
class QuadraticHamiltonian:
    form: HamiltonianForm
    params: DerivedParams


def hamiltonian_apply(H: QuadraticHamiltonian, f: PolyGauss) -> PolyGauss:
    d = H.params
    ops = model_operators(d)
    with mp.workdps(d.dps):
        if H.form is HamiltonianForm.PSEUDO_BOSONIC:
            omega, lam = mp.mpf(d.model.omega), mp.mpf(d.model.lam)
            af = apply(ops.a, f)
            return combine([
                (omega, apply(ops.b, af)),
                (lam, apply(ops.b, apply(ops.b, f))),
                (lam, apply(ops.a, af)),
            ])
        return combine([(d.Omega, apply(ops.B, apply(ops.A, f))), (d.gamma, f)])


# -- constant-coefficient pseudo-bosonic conditions ----------------------------


def theta_polynomial(alpha_a, alpha_b, beta_a: Polynomial, beta_b: Polynomial) -> Polynomial:
    """alpha_a beta_b(x) + alpha_b beta_a(x)."""
    return beta_b * alpha_a + beta_a * alpha_b


def pb_conditions_check(alpha_a, alpha_b, beta_a: Polynomial, beta_b: Polynomial,
                        tol: float = 1e-12) -> bool:
    """True iff a = alpha_a d/dx + beta_a, b = -d/dx alpha_b + beta_b satisfy [a, b] = 1.

    With constant alphas the first compatibility condition is automatic and
    the second reduces to alpha_a beta_b' + alpha_b beta_a' = 1.
    """
    lhs = beta_b.derivative() * alpha_a + beta_a.derivative() * alpha_b - 1
    return all(abs(c) <= tol for c in lhs.coeffs)


def model_pb_data(d: DerivedParams):
    """(alpha_a, alpha_b, beta_a, beta_b) for A and B written as first-order operators."""
    return (
        d.theta_minus,
        d.theta_minus,
        Polynomial.affine(d.theta_plus, d.gamma_a),
        Polynomial.affine(d.theta_plus, d.gamma_b),
    )
