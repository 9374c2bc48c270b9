import math

import numpy as np
import pytest

import fplab


def test_grid_and_classical_equilibrium():
    x = fplab.nodes(12.0, 1025)
    assert x[0] == -12.0 and x[-1] == 12.0 and x[512] == 0.0
    M = fplab.assemble("classical", 12.0, 1025)
    assert M.shape == (1025, 1025)
    g = np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    h = x[1] - x[0]
    assert np.abs(M @ g).sum() * h <= 1e-6


def test_mass_is_conserved():
    x = fplab.nodes(10.0, 401)
    f0 = np.exp(-2 * (x - 1) ** 2)
    f0 /= np.trapezoid(f0, x)
    f1 = fplab.evolve("fractional:1.5", 10.0, f0, 0.5)
    assert abs(np.trapezoid(f1, x) - 1.0) <= 1e-10
    assert f1.min() >= 0.0


def test_steady_state_matches_oracle():
    G = fplab.steady_state("classical", 12.0, 481)
    O = fplab.fourier_steady_oracle("classical", 12.0, 481)
    x = fplab.nodes(12.0, 481)
    assert np.trapezoid(np.abs(G - O), x) <= 1e-3


def test_classical_spectrum():
    s = fplab.spectrum("classical", 12.0, 257, 3)
    assert abs(s["zero"]) <= 1e-8
    assert s["gap"] == pytest.approx(-1.0, abs=5e-3)


def test_kernel_helpers():
    assert fplab.c_alpha(1.0) == 1.0
    assert fplab.khat_gaussian(0.5, 2.0) == pytest.approx(math.exp(-1.0), rel=1e-10)
    assert fplab.fourier_ratio_constant() == pytest.approx(1.0, abs=1e-4)


def test_coupling_and_w1():
    r = fplab.coupled_decay("stable", 1.5, x0=1.0, y0=0.0, t_end=1.0, n_paths=50)
    assert r["pass"]
    assert r["distance"][-1] == pytest.approx(math.exp(-1.0), abs=1e-12)
    t, X = fplab.simulate("poisson", 0.3, init="delta:2", t_end=1.0, n_paths=200, seed=3)
    assert X.shape == (len(t), 200)
    a = np.random.default_rng(0).normal(size=500)
    assert fplab.empirical_w1(a, a + 0.25) == pytest.approx(0.25, rel=1e-12)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        fplab.assemble("classical", 12.0, 1024)
    with pytest.raises(ValueError):
        fplab.describe_model("quantum")
