import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dynpart import analytic, oracle
from dynpart.errors import CapExceeded
from dynpart.oracle import SpinConfiguration
from dynpart.spectrum import IsingOpenChain, compile_model


def slow_bonds(word, n):
    spins = [1 if (word >> i) & 1 else -1 for i in range(n)]
    return sum(1 for a, b in zip(spins, spins[1:]) if a == b)


# --- configurations ---------------------------------------------------------------

def test_ising_energy_examples():
    assert oracle.ising_energy(SpinConfiguration.from_spins([1] * 5)) == 4
    assert oracle.ising_energy(SpinConfiguration.from_spins([1, -1, 1, -1, 1])) == 0
    assert oracle.ising_energy(SpinConfiguration.from_spins([1, -1])) == 0
    assert oracle.ising_energy(0, 5) == 4


def test_configuration_validation():
    with pytest.raises(ValueError):
        SpinConfiguration(8, 3)
    with pytest.raises(ValueError):
        SpinConfiguration.from_spins([1, 0])
    c = SpinConfiguration.from_spins([1, -1, -1, 1])
    assert c.word == 0b1001 and c.spins == (1, -1, -1, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
def test_popcount_matches_spin_loop(nw):
    n, w = nw
    assert oracle.ising_energy(w, n) == slow_bonds(w, n)


@pytest.mark.parametrize("n", [1, 2, 7, 15])
def test_vectorized_bond_counts(n):
    got = oracle.bond_counts(n)
    assert got.tolist() == [slow_bonds(w, n) for w in range(2**n)]


@pytest.mark.parametrize("n", range(1, 13))
def test_bond_histogram(n):
    expected = [2 * math.comb(n - 1, b) for b in range(n)]
    assert oracle.bond_histogram(n).tolist() == expected


# --- sums ------------------------------------------------------------------------------

def test_thermal_examples():
    assert oracle.oracle_thermal_Z(2, 0.0) == 1.0
    assert oracle.oracle_thermal_Z(3, math.log(3)) == pytest.approx(4.0, rel=1e-15)
    assert oracle.oracle_thermal_Z(12, 1.0) == pytest.approx(((1 + math.e) / 2) ** 11, rel=1e-12)


def test_loschmidt_examples():
    assert abs(oracle.oracle_loschmidt(2, math.pi)) < 1e-15
    assert oracle.oracle_loschmidt(3, math.pi / 2) == pytest.approx(0.5j, abs=1e-15)
    assert oracle.oracle_loschmidt(2, 0.0) == 1.0


@pytest.mark.parametrize("n", [2, 5, 9, 12])
def test_loschmidt_matches_closed_form(n):
    dpf = compile_model(IsingOpenChain(n))
    for theta in np.linspace(0.05, 6.2, 17):
        exact = ((1 + cmath.exp(1j * theta)) / 2) ** (n - 1)
        got = oracle.oracle_loschmidt(n, theta)
        assert abs(got - exact) <= 1e-12 * max(abs(exact), 1e-3)
        assert abs(got - complex(analytic.eval_on_circle(dpf, theta))) <= 1e-12 * max(abs(exact), 1e-3)


def test_unshifted_convention_global_phase():
    n, theta = 6, 1.234
    shifted = oracle.oracle_loschmidt(n, theta)
    unshifted = oracle.oracle_loschmidt(n, theta, shifted=False)
    assert abs(unshifted) == pytest.approx(abs(shifted), rel=1e-13)
    assert unshifted == pytest.approx(cmath.exp(-1j * theta * (n - 1) / 2) * shifted, rel=1e-13)
    z_un = oracle.oracle_thermal_Z(n, 0.7, shifted=False)
    assert z_un == pytest.approx(math.exp(-0.7 * (n - 1) / 2) * oracle.oracle_thermal_Z(n, 0.7), rel=1e-13)


def test_energy_moments_examples():
    assert oracle.oracle_energy_moments(2) == (0.5, 0.25)
    assert oracle.oracle_energy_moments(5) == (2.0, 1.0)
    assert oracle.oracle_energy_moments(1) == (0.0, 0.0)


def test_fewlevel_examples():
    assert abs(oracle.oracle_fewlevel([0.5, 0.5], [0.0, -1.0], math.pi)) < 1e-16
    assert abs(oracle.oracle_fewlevel([2 / 3, 1 / 3], [0.0, -1.0], math.pi)) == pytest.approx(1 / 3, rel=1e-15)
    got = abs(oracle.oracle_fewlevel([0.5, 0.5], [0.0, math.sqrt(2)], math.pi))
    assert got == pytest.approx(abs(math.cos(math.sqrt(2) * math.pi / 2)), rel=1e-14)
    assert oracle.oracle_fewlevel([0.5, 0.5], [0.0, -1.0], math.log(3), path="real") == 2.0
    with pytest.raises(ValueError):
        oracle.oracle_fewlevel([0.5, 0.5], [0.0], 1.0)
    with pytest.raises(ValueError):
        oracle.oracle_fewlevel([0.5, 0.5], [0.0, 1.0], 1.0, path="line")


# --- cap, determinism, comparison ------------------------------------------------------

def test_cap():
    with pytest.raises(CapExceeded):
        oracle.oracle_thermal_Z(21, 0.0)
    with pytest.raises(CapExceeded):
        oracle.oracle_loschmidt(5, 0.0, cap=27)
    with pytest.raises(CapExceeded):
        oracle.oracle_energy_moments(13, cap=12)


def test_thread_determinism():
    thetas = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    ref = oracle.oracle_loschmidt_grid(17, thetas, workers=1)
    for w in (2, 3, 8):
        assert oracle.oracle_loschmidt_grid(17, thetas, workers=w).tobytes() == ref.tobytes()
    z1 = oracle.oracle_thermal_Z_grid(16, [0.3, -2.0], workers=1)
    assert oracle.oracle_thermal_Z_grid(16, [0.3, -2.0], workers=5).tobytes() == z1.tobytes()


def test_neumaier_recovers_cancellation():
    parts = [np.array([1e16]), np.array([1.0]), np.array([-1e16])]
    assert oracle._neumaier(parts)[0] == 1.0


@pytest.mark.parametrize("n", [2, 6, 12])
def test_compare_ising(n):
    c = oracle.compare_ising(n)
    assert c.ok, c.to_dict()
    assert c.histogram_ok
