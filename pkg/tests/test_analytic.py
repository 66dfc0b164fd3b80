import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catsim import analytic
from catsim.errors import InvalidArgumentError
from catsim.fock import fidelity_pure, make_squeezed_vacuum
from catsim.modes import annihilate, attenuate
from catsim.protocols import auto_cutoff, herald_single_mode, odd_cat_target

# reference values from 40-digit Fock-series sums (mpmath), independent of the closed forms
HERALD_PROB = [
    (0.5, 0.2, 0.007276004650751758),
    (0.43, 0.99, 0.0037899865076560256),
    (0.2, 0.5, 0.0071869801705303001),
    (1.0, 0.8, 0.13009133354201645),
]
FIDELITY = [
    (1.2, 0.4, 0.9900816086190819),
    (1.0, 0.3, 0.99709883575614083),
    (2.0, 0.6, 0.82724564770500857),
    (0.5, 0.1, 0.99952955592052516),
]
OPTIMUM = [  # alpha, xi_T*, F*
    (1.0, 0.30277563773199465, 0.99711405559925461),
    (1.2, 0.40231028759695467, 0.99009469251274014),
    (1.4, 0.4939370872042996, 0.97504656952518103),
    (1.6, 0.57308051276177329, 0.95032471830558481),
]


@pytest.mark.parametrize("xi, T, expected", HERALD_PROB)
def test_herald_probability(xi, T, expected):
    assert analytic.herald_probability(xi, T) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("alpha, xt, expected", FIDELITY)
def test_fidelity(alpha, xt, expected):
    assert analytic.fidelity_closed_form(alpha, xt) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("alpha, xt, f", OPTIMUM)
def test_optimum(alpha, xt, f):
    assert analytic.optimal_xi_T(alpha) == pytest.approx(xt, abs=1e-14)
    assert analytic.fidelity_closed_form(alpha, xt) == pytest.approx(f, abs=1e-14)


def test_fidelity_limits():
    # xi_T = 0 leaves |1>, whose overlap with the odd cat is alpha^2 / sinh alpha^2
    assert analytic.fidelity_closed_form(0.7, 0.0) == pytest.approx(0.49 / np.sinh(0.49))
    assert np.isfinite(analytic.fidelity_closed_form(30.0, 0.5))
    assert analytic.fidelity_closed_form(30.0, 0.5) < 1e-100
    with pytest.raises(InvalidArgumentError):
        analytic.fidelity_closed_form(1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        analytic.fidelity_closed_form(-1.0, 0.2)


@given(st.floats(0.05, 1.2), st.floats(0.3, 1.0), st.floats(0.2, 2.0))
@settings(max_examples=30, deadline=None)
def test_closed_form_agrees_with_simulation(xi, T, alpha):
    c = auto_cutoff(xi, alpha, minimum=2)
    state = herald_single_mode(xi, T, c)
    numeric = fidelity_pure(state, odd_cat_target(alpha, c))
    xt = analytic.effective_squeezing(xi, T)
    assert numeric == pytest.approx(analytic.fidelity_closed_form(alpha, xt), abs=1e-9)


@given(st.floats(0.05, 1.0), st.floats(0.3, 0.99))
@settings(max_examples=30, deadline=None)
def test_n_factor_normalizes(xi, T):
    raw = annihilate(attenuate(make_squeezed_vacuum(xi, auto_cutoff(xi)), T)).amplitudes
    # the constructor renormalizes after truncation, which is at the 1e-12 level
    assert analytic.n_factor(xi, T) * np.linalg.norm(raw) == pytest.approx(1.0, abs=1e-9)


@given(st.floats(0.1, 3.0))
def test_optimum_is_stationary(alpha):
    xt = analytic.optimal_xi_T(alpha)
    h = 1e-5
    f = lambda x: analytic.fidelity_closed_form(alpha, x)
    assert f(xt) >= f(xt - h) and f(xt) >= f(xt + h)


def test_cat_normalization():
    m = analytic.cat_normalization(1.0)
    assert m.m_plus == pytest.approx(1 / np.sqrt(2 * (1 + np.exp(-2))))
    assert m.m_minus == pytest.approx(1 / np.sqrt(2 * (1 - np.exp(-2))))
    assert analytic.cat_normalization(0).m_minus == np.inf


def test_herald_closed_form_bundle():
    h = analytic.herald_closed_form(0.43, 0.99)
    assert h.xi_T == pytest.approx(0.99 ** 2 * np.tanh(0.43))
    assert h.herald_prob == analytic.herald_probability(0.43, 0.99)
    for T in (0.0, 1.0):
        with pytest.raises(InvalidArgumentError):
            analytic.herald_probability(0.4, T)
    with pytest.raises(InvalidArgumentError):
        analytic.n_factor(0.0, 0.5)


def test_tau_forms():
    xi, T = 0.5, 0.9
    xt = analytic.effective_squeezing(xi, T)
    total = sum(2 * analytic.tau_exact(n, xi, T) ** 2 for n in range(2, 200))
    assert total == pytest.approx(1.0, abs=1e-12)
    assert analytic.tau_exact(3, xi, T) / analytic.tau_exact(2, xi, T) == pytest.approx(
        np.sqrt(3) * xt)
    for n in (2, 3, 6):
        ratio = analytic.tau_exact(n, xi, T) / abs(analytic.tau_paper(n, xi, T))
        ratio2 = analytic.tau_exact(2, xi, T) / abs(analytic.tau_paper(2, xi, T))
        assert ratio / ratio2 == pytest.approx(analytic.tau_deviation_ratio(n))
    assert analytic.tau_paper(3, xi, T) < 0 < analytic.tau_paper(2, xi, T)
    with pytest.raises(InvalidArgumentError):
        analytic.tau_exact(1, xi, T)
