import math

import mpmath as mp
import numpy as np
import pytest

from pbswanson.eigensystem import Flavor, vacuum
from pbswanson.params import (
    PRESETS,
    ModelParams,
    ParameterError,
    derive,
    normalization_candidates,
    spectrum,
)
from pbswanson.polygauss import inner_product

# Independent oracle: the defining formulas evaluated with mpmath at 40 digits.
ORACLE = {
    "theta0": 0.211824465096801,
    "Omega": 0.458257569495584,
    "gamma": -0.020871215252208,
    "theta_minus": 0.572124842454851,
}
ORACLE_GAMMAS = {
    "fig1-a": (0.372913396133995, 0.381004463249697, 0.431335136523794),
    "fig1-b": (0.38144988024304, 0.421905215821551, 0.459619407771256),
    "fig1-c": (0.413461695651957, 0.575283037966001, 0.565685424949238),
    "fig1-d": (0.520167747015013, 1.08654244511417, 0.919238815542512),
}


def test_reference_params_oracle(fig1):
    d = fig1["fig1-a"]
    for key, val in ORACLE.items():
        assert float(getattr(d, key)) == pytest.approx(val, abs=1e-14)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_shift_constants(fig1, name):
    ga, gb, k = ORACLE_GAMMAS[name]
    d = fig1[name]
    assert float(d.gamma_a) == pytest.approx(ga, abs=1e-13)
    assert float(d.gamma_b) == pytest.approx(gb, abs=1e-13)
    assert float(d.k) == pytest.approx(k, abs=1e-13)


def test_rounded_reference_values(fig1):
    d = fig1["fig1-a"]
    assert float(d.theta0) == pytest.approx(0.2118245, abs=1e-7)
    assert float(d.Omega) == pytest.approx(0.45826, abs=1e-5)
    assert float(d.gamma) == pytest.approx(-0.020867, rel=5e-4)
    assert float(d.gamma_a) == pytest.approx(0.37288, rel=5e-4)
    assert float(d.gamma_b) == pytest.approx(0.38097, rel=5e-4)
    assert float(d.k) == pytest.approx(0.43133, abs=1e-5)


def test_small_lambda_limit():
    d = derive(ModelParams(0.8, 1e-12, 0.2, -0.4))
    assert abs(d.theta0) < 1e-11
    assert float(d.theta_plus) == pytest.approx(2 ** -0.5, abs=1e-11)
    assert float(d.theta_minus) == pytest.approx(2 ** -0.5, abs=1e-11)
    assert float(d.Omega) == pytest.approx(0.8, abs=1e-11)
    assert abs(d.gamma) < 1e-11


@pytest.mark.parametrize("omega, lam", [(0.2, 0.1), (0.1, 0.1), (0.0, 0.1), (0.5, 0.0), (0.5, -0.1)])
def test_invalid_parameters(omega, lam):
    with pytest.raises(ParameterError):
        derive(ModelParams(omega, lam, 0.3, 0.4))


def test_invariants_sweep():
    rng = np.random.default_rng(11)
    for _ in range(20):
        omega = rng.uniform(0.3, 2)
        lam = rng.uniform(0.01, 0.99) * omega / 2
        alpha, beta = rng.uniform(-1, 1, size=2)
        d = derive(ModelParams(omega, lam, alpha, beta))
        with mp.workdps(d.dps):
            assert abs(d.theta0 - mp.atanh(2 * lam / omega) / 2) < 1e-14
            assert abs(d.theta_plus * d.theta_minus - 0.5) < 1e-14
            assert abs(d.theta_plus / d.theta_minus - mp.exp(2 * d.theta0)) < 1e-13
            assert abs(d.k - d.theta_minus * (d.gamma_a + d.gamma_b)) < 1e-13
            assert abs(d.k - (alpha + beta) / mp.sqrt(2)) < 1e-13
            assert abs(d.Omega * mp.cosh(2 * d.theta0) - omega) < 1e-13
            assert d.gamma < 0


def test_swap_symmetry(fig1):
    d = fig1["fig1-c"]
    s = derive(d.model.swapped())
    assert s.gamma_a == d.gamma_b and s.gamma_b == d.gamma_a
    for key in ("k", "theta0", "Omega", "gamma", "theta_plus", "theta_minus"):
        assert abs(getattr(s, key) - getattr(d, key)) < 1e-40
    assert d.swapped().gamma_a == d.gamma_b


def test_degenerate_flag(d_degenerate):
    assert d_degenerate.degenerate
    assert d_degenerate.gamma_a == d_degenerate.gamma_b


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_normalization_is_biorthonormal(fig1, name):
    d = fig1[name]
    with mp.workdps(d.dps):
        ov = inner_product(vacuum(d, Flavor.PHI), vacuum(d, Flavor.PSI))
    assert abs(ov - 1) < 1e-40
    assert d.n_phi == d.n_psi > 0


def test_normalization_candidates(fig1):
    d = fig1["fig1-a"]
    table = normalization_candidates(d)
    assert table["enforced_n_phi"] == pytest.approx(0.7244313522645852, rel=1e-14)
    assert table["gaussian_closed_form"] == pytest.approx(table["enforced_n_phi"], rel=1e-14)
    # neither closed-form candidate gives the enforced value
    assert abs(table["product_candidate"] / table["enforced_product"] - 1) > 0.1
    assert abs(table["individual_candidate"] / table["enforced_n_phi"] - 1) > 0.1


class TestSpectrum:
    def test_ground_state(self, fig1):
        d = fig1["fig1-a"]
        assert spectrum(d, 0) == [pytest.approx(float(d.gamma), abs=0)]

    def test_first_level(self, fig1):
        assert spectrum(fig1["fig1-a"], 1)[1] == pytest.approx(0.437386354243, abs=1e-12)
        assert spectrum(fig1["fig1-a"], 1)[1] == pytest.approx(0.43739, abs=1e-5)

    def test_equal_spacing(self, fig1):
        d = fig1["fig1-b"]
        e = spectrum(d, 30)
        assert np.allclose(np.diff(e), float(d.Omega), rtol=0, atol=1e-14)

    def test_negative_ground_energy(self, fig1):
        assert all(spectrum(d, 0)[0] < 0 for d in fig1.values())

    def test_rejects_negative(self, fig1):
        with pytest.raises(ValueError):
            spectrum(fig1["fig1-a"], -1)
