import math

import mpmath as mp
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from pbswanson.polygauss import (
    NotIntegrableError,
    PolyGauss,
    RepresentationError,
    add,
    gaussian,
    gaussian_moments,
    inner_product,
    inner_product_matrix,
    scale,
)
from pbswanson.specialfn import Polynomial, gauss_hermite

coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


class TestEval:
    def test_gaussian_peak(self):
        assert gaussian(0.5)(0) == 1

    def test_odd_prefactor(self):
        assert PolyGauss(Polynomial([0, 1]), 1.0)(0) == 0

    def test_linear_exponent(self, hiprec):
        f = PolyGauss(Polynomial([1]), mp.mpf(0.5), mp.mpf(1))
        assert mp.almosteq(f(mp.mpf(1)), mp.exp(-1.5), 1e-45)

    def test_values_returns_complex_array(self):
        v = gaussian(0.5).values(np.linspace(-1, 1, 5))
        assert v.dtype == np.complex128 and v.shape == (5,)


class TestArithmetic:
    def test_scale_zero(self):
        assert scale(gaussian(0.5, coef=3), 0).is_zero()

    def test_add_cancels(self):
        f = PolyGauss(Polynomial([1, 2, 3]), 0.7, 0.1j)
        assert add(f, scale(f, -1)).is_zero()

    def test_add_mismatch(self):
        with pytest.raises(RepresentationError):
            add(gaussian(0.5), gaussian(1.0))

    def test_operators(self):
        f = PolyGauss(Polynomial([1, 1]), 0.5)
        assert (f + f).poly == (f * 2).poly
        assert (f - f).is_zero()
        assert (-f).poly.coeffs == (-1, -1)


class TestMoments:
    def test_base_case(self, hiprec):
        t = gaussian_moments(1, 0, 0)
        assert mp.almosteq(t[0], mp.sqrt(mp.pi), 1e-45)

    def test_not_integrable(self):
        with pytest.raises(NotIntegrableError):
            gaussian_moments(0, 0, 3)

    def test_symbolic_derivatives(self, hiprec):
        # M_k = (-d/db)^k M_0 with M_0 = sqrt(pi/a) exp(b^2/(4a))
        a_s, b_s = sp.symbols("a b")
        m0 = sp.sqrt(sp.pi / a_s) * sp.exp(b_s ** 2 / (4 * a_s))
        a_v, b_v = sp.Rational(7, 10), sp.Rational(-3, 5) + sp.I / 4
        table = gaussian_moments(mp.mpf(7) / 10, mp.mpc(-0.6, 0.25), 6)
        expr = m0
        for k in range(7):
            exact = complex(sp.N(expr.subs({a_s: a_v, b_s: b_v}), 40))
            assert abs(complex(table[k]) - exact) <= 1e-12 * abs(exact)
            expr = -sp.diff(expr, b_s)


class TestInnerProduct:
    def test_unit_gaussian(self, hiprec):
        g = gaussian(0.5)
        assert mp.almosteq(inner_product(g, g), mp.sqrt(mp.pi), 1e-45)

    def test_parity(self, hiprec):
        f = gaussian(0.5)
        g = PolyGauss(Polynomial([0, 1]), mp.mpf(0.5))
        assert inner_product(f, g) == 0

    def test_sesquilinear(self, hiprec):
        f = gaussian(0.5, coef=2j)
        g = gaussian(0.5)
        assert mp.almosteq(inner_product(f, g), -2j * mp.sqrt(mp.pi), 1e-45)
        assert mp.almosteq(inner_product(g, f), 2j * mp.sqrt(mp.pi), 1e-45)

    def test_not_integrable(self):
        with pytest.raises(NotIntegrableError):
            inner_product(gaussian(0.5), gaussian(-0.5))

    def test_matrix_matches_pairwise(self, hiprec):
        fs = [PolyGauss(Polynomial([1, k, 0.5j]), mp.mpf(0.4), mp.mpc(0.1, 0.2)) for k in range(3)]
        gs = [PolyGauss(Polynomial([k, 1]), mp.mpf(0.6), mp.mpc(-0.3, 0.1), 0.2j) for k in range(4)]
        m = inner_product_matrix(fs, gs)
        for i, f in enumerate(fs):
            for j, g in enumerate(gs):
                assert mp.almosteq(m[i][j], inner_product(f, g), 1e-40)

    def test_agrees_with_gauss_hermite_high_degree(self):
        # total degree 80, centered quadrature after completing the square
        rng = np.random.default_rng(3)
        with mp.workdps(60):
            fc = [mp.mpc(*rng.normal(size=2)) / mp.factorial(k) ** 0.5 for k in range(41)]
            gc = [mp.mpc(*rng.normal(size=2)) / mp.factorial(k) ** 0.5 for k in range(41)]
            f = PolyGauss(Polynomial(fc), mp.mpf(0.3), mp.mpf(0.2))
            g = PolyGauss(Polynomial(gc), mp.mpf(0.5), mp.mpf(-0.1))
            exact = inner_product(f, g)
            a, b = f.quad + g.quad, f.lin + g.lin
            rule = gauss_hermite(60, dps=60)
            x0 = -b / (2 * a)
            s = 1 / mp.sqrt(a)
            num = mp.fsum(
                w * mp.conj(f.poly(s * t + x0)) * g.poly(s * t + x0)
                for t, w in zip(rule.nodes, rule.weights)
            ) * s * mp.exp(b * b / (4 * a))
            assert abs(num - exact) <= 1e-9 * abs(exact)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(coef, min_size=1, max_size=6), st.lists(coef, min_size=1, max_size=6),
           st.floats(0.2, 2), st.floats(-1, 1))
    def test_hermitian_symmetry(self, fc, gc, q, ell):
        with mp.workdps(40):
            f = PolyGauss(Polynomial(fc), mp.mpf(q), mp.mpf(ell))
            g = PolyGauss(Polynomial(gc), mp.mpf(0.5))
            assert abs(inner_product(f, g) - mp.conj(inner_product(g, f))) < 1e-30

    @settings(max_examples=40, deadline=None)
    @given(st.lists(coef, min_size=1, max_size=5), st.lists(coef, min_size=1, max_size=5))
    def test_even_odd_vanish(self, ec, oc):
        with mp.workdps(40):
            even = PolyGauss(Polynomial([c for e in ec for c in (e, 0)]), mp.mpf(0.5))
            odd = PolyGauss(Polynomial([c for o in oc for c in (0, o)]), mp.mpf(0.8))
            scale_ = math.prod(1 + abs(c) for c in ec + oc)
            assert abs(inner_product(even, odd)) < 1e-30 * scale_
