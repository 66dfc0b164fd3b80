"""Brute-force reference computations, independent of the fast code paths.

Everything here builds explicit operator matrices and is only practical at
small cutoffs.  ``catsim selftest`` compares the production routines with
these; the test-suite carries its own copies of the same ideas.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm
from scipy.special import comb

from .channels import MixedState
from .fock import PureState


def annihilation_matrix(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)


def dense_beam_splitter(T: float, cutoff: int) -> np.ndarray:
    """``expm(theta/2 (a^dag b - a b^dag))`` on the full ``(c+1)^2`` space.

    Exact on every block with total photon number ``<= cutoff``.
    """
    a1 = annihilation_matrix(cutoff)
    eye = np.eye(cutoff + 1)
    a = np.kron(a1, eye)
    b = np.kron(eye, a1)
    gen = a.T @ b - a @ b.T
    return expm(np.arccos(T) * gen)


def binomial_loss(rho: np.ndarray, eta: float) -> np.ndarray:
    """Pure loss from the textbook Kraus set
    ``K_k = sum_n sqrt(C(n, k) eta^(n-k) (1-eta)^k) |n-k><n|``."""
    dim = rho.shape[0]
    out = np.zeros_like(rho, dtype=complex)
    for k in range(dim):
        K = np.zeros((dim, dim))
        for n in range(k, dim):
            K[n - k, n] = np.sqrt(comb(n, k) * eta ** (n - k) * (1 - eta) ** k)
        out += K @ rho @ K.T
    return out


def displaced_parity_wigner(state, x: float, p: float, extra: int = 60) -> float:
    """``(1/pi) Tr[rho D P D^dag]`` with ``D`` exponentiated on an enlarged space."""
    if isinstance(state, PureState):
        v = state.amplitudes / state.norm()
        rho = np.outer(v, v.conj())
    elif isinstance(state, MixedState):
        rho = state.rho
    else:
        rho = np.asarray(state)
    dim = rho.shape[0]
    big = dim + extra
    a = annihilation_matrix(big - 1)
    alpha = (x + 1j * p) / np.sqrt(2.0)
    D = expm(alpha * a.T - np.conj(alpha) * a)
    parity = np.diag((-1.0) ** np.arange(big))
    op = D @ parity @ D.conj().T
    return float(np.real(np.trace(rho @ op[:dim, :dim])) / np.pi)
