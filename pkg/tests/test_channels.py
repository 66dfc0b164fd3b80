import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import comb

from catsim.channels import (
    MixedState,
    density_matrix,
    detect,
    expectation_pure,
    loss_channel,
    loss_kraus,
    partial_trace,
    project_on_off,
    trace_distance,
)
from catsim.errors import ImpossibleOutcomeError, InvalidArgumentError, InvalidStateError
from catsim.fock import make_cat, make_coherent, make_fock, make_squeezed_vacuum, make_vacuum
from catsim.modes import BeamSplitterSpec, beam_splitter, project_fock, tensor

eta_values = st.floats(0.0, 1.0)


def binomial_kraus(eta, dim):
    out = []
    for k in range(dim):
        K = np.zeros((dim, dim))
        for n in range(k, dim):
            K[n - k, n] = np.sqrt(comb(n, k) * eta ** (n - k) * (1 - eta) ** k)
        out.append(K)
    return out


def random_rho(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def test_mixed_state_validation():
    with pytest.raises(InvalidStateError):
        MixedState((2,), np.array([[1, 1], [0, 0]]))
    with pytest.raises(InvalidStateError):
        MixedState((2,), np.eye(2))
    with pytest.raises(InvalidArgumentError):
        MixedState((3,), np.eye(2) / 2)
    rho = MixedState((2,), np.eye(2) / 2)
    assert rho.purity() == pytest.approx(0.5)
    assert rho.is_positive()


def test_kraus_matches_binomial_oracle():
    # the dilation fixes each K_k only up to a sign, (-1)^k here
    for eta in (0.0, 0.25, 0.7, 1.0):
        for k, (ours, ref) in enumerate(zip(loss_kraus(eta, 12), binomial_kraus(eta, 12))):
            assert np.allclose(ours, (-1) ** k * ref, atol=1e-13)


@given(eta_values)
@settings(max_examples=25, deadline=None)
def test_kraus_completeness(eta):
    total = sum(k.T @ k for k in loss_kraus(eta, 10))
    assert np.allclose(total, np.eye(10), atol=1e-12)


@given(eta_values)
@settings(max_examples=25, deadline=None)
def test_loss_preserves_trace_and_positivity(eta):
    rng = np.random.default_rng(3)
    rho = MixedState((8,), random_rho(rng, 8))
    out = loss_channel(rho, "A", eta)
    assert abs(np.trace(out.rho) - 1) < 1e-9
    assert out.is_positive()


@given(eta_values, st.floats(0.1, 1.5), st.floats(0, 2 * np.pi))
@settings(max_examples=25, deadline=None)
def test_coherent_state_attenuates(eta, r, phi):
    beta = r * np.exp(1j * phi)
    rho = loss_channel(make_coherent(beta, 30), "A", eta)
    target = make_coherent(np.sqrt(eta) * beta, 30)
    assert expectation_pure(rho, target) == pytest.approx(1.0, abs=1e-9)


def test_fock_state_binomial_photon_distribution():
    rho = loss_channel(make_fock(4, 6), "A", 0.3)
    expected = [comb(4, k) * 0.3 ** k * 0.7 ** (4 - k) for k in range(5)] + [0, 0]
    assert np.allclose(rho.photon_distribution(), expected, atol=1e-14)


def test_cat_parity_decoheres():
    rho = loss_channel(make_cat(1.2j, "-", 30), "A", 0.5)
    p = rho.photon_distribution()
    assert np.sum(p[0::2]) > 0.1
    assert rho.purity() < 1


def test_two_mode_loss_agrees_across_representations():
    s = beam_splitter(tensor(make_squeezed_vacuum(0.3, 22), make_vacuum(22)),
                      BeamSplitterSpec(0.8), leak_tolerance=1e-6)
    for mode in "AB":
        from_pure = loss_channel(s, mode, 0.6)
        from_mixed = loss_channel(density_matrix(s), mode, 0.6)
        assert np.allclose(from_pure.rho, from_mixed.rho, atol=1e-13)


def test_loss_on_one_mode_leaves_other_marginal():
    s = tensor(make_coherent(0.5, 10), make_coherent(0.4j, 10))
    out = loss_channel(s, "B", 0.3)
    assert np.allclose(partial_trace(out, "A").rho, density_matrix(make_coherent(0.5, 10)).rho,
                       atol=1e-12)
    assert expectation_pure(partial_trace(out, "B"),
                            make_coherent(0.4j * np.sqrt(0.3), 10)) == pytest.approx(1, abs=1e-9)


def test_partial_trace_of_product():
    a, b = make_coherent(0.3, 8), make_fock(2, 8)
    s = tensor(a, b)
    assert np.allclose(partial_trace(s, "A").rho, density_matrix(a).rho)
    assert np.allclose(partial_trace(density_matrix(s), "B").rho, density_matrix(b).rho)


def test_detect_matches_full_channel():
    s = beam_splitter(tensor(make_squeezed_vacuum(0.4, 26), make_vacuum(26)),
                      BeamSplitterSpec(0.7), leak_tolerance=1e-6)
    fast = detect(s, "B", 1, 0.6)
    slow = project_fock(loss_channel(s, "B", 0.6), "B", 1)
    assert fast.probability == pytest.approx(slow.probability, abs=1e-13)
    assert np.allclose(fast.state.rho, slow.state.rho, atol=1e-12)


def test_detect_ideal_equals_projection():
    s = tensor(make_coherent(0.4, 14), make_coherent(0.7, 14))
    fast = detect(s, "A", 2, 1.0)
    pure = project_fock(s, "A", 2)
    assert np.allclose(fast.state.rho, density_matrix(pure.state).rho, atol=1e-14)


def test_on_off_detection():
    s = tensor(make_coherent(0.5, 16), make_coherent(1.0, 16))
    click = project_on_off(s, "B", True, 1.0)
    assert click.probability == pytest.approx(1 - np.exp(-1.0), abs=1e-12)
    off = project_on_off(s, "B", False, 0.5)
    assert off.probability == pytest.approx(np.exp(-0.5), abs=1e-12)
    with pytest.raises(ImpossibleOutcomeError):
        project_on_off(tensor(make_vacuum(3), make_vacuum(3)), "A", True)


def test_trace_distance_known_values():
    v = density_matrix(make_vacuum(5))
    one = density_matrix(make_fock(1, 5))
    assert trace_distance(v, one) == pytest.approx(1.0)
    assert trace_distance(v, v) == 0.0
    a, b = make_coherent(0.6, 20), make_coherent(-0.6, 20)
    expected = np.sqrt(1 - np.exp(-4 * 0.36))
    for method in ("eigh", "jacobi"):
        assert trace_distance(density_matrix(a), density_matrix(b), method) == pytest.approx(
            expected, abs=1e-10)
    with pytest.raises(InvalidArgumentError):
        trace_distance(v, density_matrix(make_vacuum(4)))
    with pytest.raises(InvalidArgumentError):
        trace_distance(v, one, "qr")


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_trace_distance_metric_properties(seed):
    rng = np.random.default_rng(seed)
    r, s, t = (MixedState((5,), random_rho(rng, 5)) for _ in range(3))
    d_rs = trace_distance(r, s)
    assert 0 <= d_rs <= 1
    assert d_rs == pytest.approx(trace_distance(s, r), abs=1e-12)
    assert d_rs <= trace_distance(r, t) + trace_distance(t, s) + 1e-12
    # contractive under loss
    assert trace_distance(loss_channel(r, "A", 0.5), loss_channel(s, "A", 0.5)) <= d_rs + 1e-12
