"""Closed-form results for heralded photon subtraction.

These formulas are independent of the Fock-space simulator and serve both as
oracles for it and as a fast path for parameter scans.  Amplitudes ``alpha``
are real; the cat phase ``i`` lives in the state construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class CatNormalization:
    beta: complex
    m_plus: float
    m_minus: float


def cat_normalization(beta: complex) -> CatNormalization:
    r2 = abs(beta) ** 2
    m_plus = 1.0 / np.sqrt(2.0 * (1.0 + np.exp(-2.0 * r2)))
    m_minus = 1.0 / np.sqrt(-2.0 * np.expm1(-2.0 * r2)) if r2 > 0 else np.inf
    return CatNormalization(complex(beta), float(m_plus), float(m_minus))


def effective_squeezing(xi: float, T: float) -> float:
    """``xi_T = T^2 tanh(xi)``: the only combination the heralded state depends on."""
    return float(T) ** 2 * float(np.tanh(xi))


def n_factor(xi: float, T: float) -> float:
    """Normalization ``N = (1 - xi_T^2)^{3/4} / (sqrt(sech xi) xi_T)`` of ``a T^n |Sq>``."""
    xt = effective_squeezing(xi, T)
    if xt == 0.0:
        raise InvalidArgumentError("normalization diverges at xi_T = 0")
    return float((1.0 - xt * xt) ** 0.75 / (np.sqrt(1.0 / np.cosh(xi)) * abs(xt)))


def herald_probability(xi: float, T: float) -> float:
    """Probability of exactly one photon reaching the tap detector.

    ``(1 - T^2) / T^2 * sech(xi) * xi_T^2 * (1 - xi_T^2)^{-3/2}``
    """
    if not 0.0 < T < 1.0:
        raise InvalidArgumentError(f"T must lie strictly inside (0, 1), got {T}")
    xt = effective_squeezing(xi, T)
    return float((1.0 - T * T) / (T * T) / np.cosh(xi) * xt * xt * (1.0 - xt * xt) ** -1.5)


@dataclass(frozen=True)
class HeraldClosedForm:
    xi: float
    T: float
    xi_T: float
    n_factor: float
    herald_prob: float


def herald_closed_form(xi: float, T: float) -> HeraldClosedForm:
    return HeraldClosedForm(
        float(xi), float(T), effective_squeezing(xi, T), n_factor(xi, T),
        herald_probability(xi, T),
    )


def fidelity_closed_form(alpha: float, xi_T: float) -> float:
    """Fidelity of the heralded state with the odd cat of amplitude ``i*alpha``.

    ``F = alpha^2 (1 - xi_T^2)^{3/2} exp(alpha^2 xi_T) / sinh(alpha^2)``
    """
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    if not 0.0 <= xi_T < 1.0:
        raise InvalidArgumentError(f"xi_T must lie in [0, 1), got {xi_T}")
    a2 = alpha * alpha
    # alpha^2 / sinh(alpha^2) written to stay finite for large alpha
    ratio = 2.0 * a2 / (-np.expm1(-2.0 * a2)) * np.exp(-a2)
    return float(ratio * (1.0 - xi_T * xi_T) ** 1.5 * np.exp(a2 * xi_T))


def optimal_xi_T(alpha: float) -> float:
    """Maximizer of :func:`fidelity_closed_form` over ``xi_T``.

    Setting the log-derivative ``alpha^2 - 3 xi_T / (1 - xi_T^2)`` to zero gives
    ``alpha^2 xi_T^2 + 3 xi_T - alpha^2 = 0``.
    """
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    a2 = alpha * alpha
    # rationalized root, accurate for small alpha: 2 a2 / (3 + sqrt(9 + 4 a2^2))
    return float(2.0 * a2 / (3.0 + np.sqrt(9.0 + 4.0 * a2 * a2)))


def tau_paper(n: int, xi: float, T: float) -> float:
    """ECS coefficient as printed: ``sech(xi) N^2 (-xi_T)^n``.

    Kept for comparison only.  It omits the ``sqrt(n (n-1) / 2)`` factor that
    the simulated output carries; see :func:`tau_exact`.
    """
    if n < 2:
        raise InvalidArgumentError(f"n must be >= 2, got {n}")
    xt = effective_squeezing(xi, T)
    return float(n_factor(xi, T) ** 2 / np.cosh(xi) * (-xt) ** n)


def tau_exact(n: int, xi: float, T: float) -> float:
    """Coefficient of ``|n-2>_A |n>_B`` in the normalized two-cat ECS output.

    The state is ``sum_n tau_n (|n-2, n> - |n, n-2>)`` with
    ``tau_n = sqrt(n (n-1)) / 2 * xi_T^(n-2) * (1 - xi_T^2)^{3/2}``, which
    satisfies ``sum_n 2 tau_n^2 = 1``.  The overall sign follows the beam
    splitter convention of :mod:`catsim.modes` and is fixed at ``tau_2 > 0``.
    """
    if n < 2:
        raise InvalidArgumentError(f"n must be >= 2, got {n}")
    xt = effective_squeezing(xi, T)
    return float(np.sqrt(n * (n - 1.0)) / 2.0 * xt ** (n - 2) * (1.0 - xt * xt) ** 1.5)


def tau_deviation_ratio(n: int) -> float:
    """``|tau_exact / tau_paper|`` up to the common normalization: ``sqrt(n (n-1) / 2)``."""
    return float(np.sqrt(n * (n - 1) / 2.0))
