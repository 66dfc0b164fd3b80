"""Single-mode pure states in a truncated Fock basis.

States are built directly from their closed-form Fock expansions, with every
coefficient assembled as ``exp(log|c_n|) * phase`` so that large photon
numbers never overflow a factorial.  Each constructor checks how much
probability the analytic state puts above the cutoff and refuses to build a
state whose discarded tail exceeds the tolerance; accepted states are
renormalized to absorb the (tiny) truncation loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import (
    DegenerateAmplitudeError,
    InvalidArgumentError,
    InvalidStateError,
    TruncationError,
    ZeroStateError,
)

DEFAULT_CUTOFF = 60
DEFAULT_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-9
ZERO_NORM = 1e-14
MIN_CAT_AMPLITUDE = 1e-3

_PARITIES = (None, "even", "odd")


@dataclass(frozen=True)
class PureState:
    """A single bosonic mode, ``amplitudes[n] = <n|psi>`` for ``n = 0..cutoff``.

    ``parity`` records a structural guarantee, not a numerical observation:
    an ``"even"`` state has its odd amplitudes set to exactly zero by
    construction (and vice versa).  The amplitude array is stored read-only.
    """

    cutoff: int
    amplitudes: np.ndarray = field(repr=False)
    parity: Optional[str] = None

    def __post_init__(self):
        if int(self.cutoff) < 1:
            raise InvalidArgumentError(f"cutoff must be >= 1, got {self.cutoff}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.cutoff + 1:
            raise InvalidArgumentError(
                f"expected {self.cutoff + 1} amplitudes, got {amps.shape[0]}"
            )
        if self.parity not in _PARITIES:
            raise InvalidArgumentError(f"unknown parity flag {self.parity!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "cutoff", int(self.cutoff))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self) -> float:
        p = self.probabilities()
        return float(np.dot(np.arange(self.dim), p) / np.sum(p))

    def is_normalized(self, tol: float = NORM_TOLERANCE) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return (
            self.cutoff == other.cutoff
            and self.parity == other.parity
            and np.array_equal(self.amplitudes, other.amplitudes)
        )

    __hash__ = None


@dataclass(frozen=True)
class TruncationReport:
    """Probability the analytic state places above ``cutoff``."""

    kind: str
    cutoff: int
    tail_mass: float
    tolerance: float

    @property
    def acceptable(self) -> bool:
        return self.tail_mass <= self.tolerance


# ---------------------------------------------------------------------------
# closed-form photon-number distributions (log space)
# ---------------------------------------------------------------------------

def _log_fact(n):
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def _cat_sign(sign) -> int:
    if sign in ("+", 1, "even"):
        return 1
    if sign in ("-", -1, "odd"):
        return -1
    raise InvalidArgumentError(f"cat sign must be '+' or '-', got {sign!r}")


def _log_m_sq(beta_abs2: float, s: int) -> float:
    """log of M_beta^{+/-} squared, M = 1/sqrt(2(1 +/- exp(-2|beta|^2)))."""
    if s > 0:
        return -np.log(2.0) - np.log1p(np.exp(-2.0 * beta_abs2))
    return -np.log(2.0) - np.log(-np.expm1(-2.0 * beta_abs2))


def _log_probabilities(kind: str, parameter, n: np.ndarray, sign=-1) -> np.ndarray:
    """log P(n) of the untruncated state; -inf where P(n) is exactly zero."""
    n = np.asarray(n)
    out = np.full(n.shape, -np.inf)
    if kind == "coherent":
        r2 = abs(complex(parameter)) ** 2
        if r2 == 0.0:
            out[n == 0] = 0.0
            return out
        return -r2 + n * np.log(r2) - _log_fact(n)
    if kind == "squeezed":
        xi = float(parameter)
        t = abs(np.tanh(xi))
        even = n % 2 == 0
        if t == 0.0:
            out[n == 0] = 0.0
            return out
        l = n[even] // 2
        out[even] = (
            -np.log(np.cosh(xi))
            + _log_fact(2 * l)
            - 2.0 * _log_fact(l)
            + 2.0 * l * (np.log(t) - np.log(2.0))  # 0.5 * t may underflow
        )
        return out
    if kind == "cat":
        s = _cat_sign(sign)
        r2 = abs(complex(parameter)) ** 2
        if np.sqrt(r2) < MIN_CAT_AMPLITUDE:
            raise DegenerateAmplitudeError(
                f"|beta| = {np.sqrt(r2):.3g} is below {MIN_CAT_AMPLITUDE}"
            )
        keep = n % 2 == (0 if s > 0 else 1)
        nk = n[keep]
        out[keep] = np.log(4.0) + _log_m_sq(r2, s) - r2 + nk * np.log(r2) - _log_fact(nk)
        return out
    raise InvalidArgumentError(f"unknown state kind {kind!r}")


def truncation_tail(kind: str, parameter, cutoff: int,
                    tolerance: float = DEFAULT_TOLERANCE, sign="-") -> TruncationReport:
    """Probability weight of the analytic state above ``cutoff``.

    The tail is summed term by term from the closed-form distribution (never
    as ``1 - head``, which would cancel catastrophically) and the horizon is
    extended until the terms have decayed below 1e-40.

    >>> truncation_tail("coherent", 6.0, 10).acceptable
    False
    """
    cutoff = int(cutoff)
    start = cutoff + 1
    chunk = max(4 * start, 256)
    total = 0.0
    for _ in range(64):
        idx = np.arange(start, start + chunk)
        lp = _log_probabilities(kind, parameter, idx, sign)
        total += float(np.sum(np.exp(lp)))
        finite = lp[np.isfinite(lp)]
        if finite.size == 0 or (finite[-1] < -92.0 and finite[-1] <= finite[0]):
            break
        start += chunk
    return TruncationReport(kind, cutoff, total, tolerance)


def required_cutoff(kind: str, parameter, tolerance: float = DEFAULT_TOLERANCE,
                    sign="-", minimum: int = 1) -> int:
    """Smallest cutoff ``>= minimum`` whose truncation tail is acceptable."""
    horizon = max(64, 2 * minimum)
    while True:
        idx = np.arange(horizon + 1)
        p = np.exp(_log_probabilities(kind, parameter, idx, sign))
        tails = np.cumsum(p[::-1])[::-1]
        # tails[k] = sum_{n >= k} p_n, so cutoff c is acceptable iff tails[c+1] <= tol
        ok = np.nonzero(tails[1:] <= tolerance)[0]
        ok = ok[ok >= minimum]
        if ok.size and ok[0] < horizon - 8:
            c = int(ok[0])
            if truncation_tail(kind, parameter, c, tolerance, sign).acceptable:
                return c
        horizon *= 2
        if horizon > 1 << 20:
            raise TruncationError(f"no practical cutoff for {kind}({parameter})")


def _check_tail(kind, parameter, cutoff, tolerance, sign="-"):
    report = truncation_tail(kind, parameter, cutoff, tolerance, sign)
    if not report.acceptable:
        raise TruncationError(
            f"{kind} state with parameter {parameter} loses {report.tail_mass:.3e} "
            f"above cutoff {cutoff} (tolerance {tolerance:.1e})",
            report,
        )
    return report


def _check_cutoff(cutoff):
    if int(cutoff) != cutoff or cutoff < 1:
        raise InvalidArgumentError(f"cutoff must be an integer >= 1, got {cutoff}")
    return int(cutoff)


def _renormalized(amps: np.ndarray, cutoff: int, parity=None) -> PureState:
    return PureState(cutoff, amps / np.sqrt(np.sum(np.abs(amps) ** 2)), parity)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def make_vacuum(cutoff: int) -> PureState:
    cutoff = _check_cutoff(cutoff)
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[0] = 1.0
    return PureState(cutoff, amps, "even")


def make_fock(n: int, cutoff: int) -> PureState:
    cutoff = _check_cutoff(cutoff)
    if not 0 <= n <= cutoff:
        raise InvalidArgumentError(f"Fock index {n} outside 0..{cutoff}")
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[n] = 1.0
    return PureState(cutoff, amps, "even" if n % 2 == 0 else "odd")


def _coherent_coefficients(beta: complex, n: np.ndarray) -> np.ndarray:
    r = abs(beta)
    if r == 0.0:
        return (n == 0).astype(complex)
    logmag = -0.5 * r * r + n * np.log(r) - 0.5 * _log_fact(n)
    return np.exp(logmag) * np.exp(1j * n * np.angle(beta))


def make_coherent(beta: complex, cutoff: int = DEFAULT_CUTOFF,
                  tolerance: float = DEFAULT_TOLERANCE) -> PureState:
    """Coherent state ``exp(-|b|^2/2) sum_m b^m / sqrt(m!) |m>``."""
    cutoff = _check_cutoff(cutoff)
    beta = complex(beta)
    _check_tail("coherent", beta, cutoff, tolerance)
    if beta == 0:
        return make_vacuum(cutoff)
    amps = _coherent_coefficients(beta, np.arange(cutoff + 1))
    return _renormalized(amps, cutoff)


def make_squeezed_vacuum(xi: float, cutoff: int = DEFAULT_CUTOFF,
                         tolerance: float = DEFAULT_TOLERANCE) -> PureState:
    """Squeezed vacuum with real squeezing ``xi`` (negative allowed).

    ``<2l|Sq> = sqrt(sech xi) sqrt((2l)!) / l! * (-tanh(xi) / 2)^l`` and the odd
    amplitudes are exactly zero.  The phase convention is the one for which
    photon subtraction from ``xi > 0`` approaches the odd cat along the
    imaginary axis, ``beta = i*alpha``.
    """
    cutoff = _check_cutoff(cutoff)
    xi = float(xi)
    _check_tail("squeezed", xi, cutoff, tolerance)
    amps = np.zeros(cutoff + 1, dtype=complex)
    t = np.tanh(xi)
    if t == 0.0:
        amps[0] = 1.0
        return PureState(cutoff, amps, "even")
    l = np.arange(cutoff // 2 + 1)
    logmag = (-0.5 * np.log(np.cosh(xi)) + 0.5 * _log_fact(2 * l)
              - _log_fact(l) + l * (np.log(abs(t)) - np.log(2.0)))
    sign = (-np.sign(t)) ** l
    amps[2 * l] = sign * np.exp(logmag)
    return _renormalized(amps, cutoff, "even")


def make_cat(beta: complex, sign="-", cutoff: int = DEFAULT_CUTOFF,
             tolerance: float = DEFAULT_TOLERANCE) -> PureState:
    """Even (``sign='+'``) or odd (``sign='-'``) cat ``M(|b> +/- |-b>)``.

    The odd cat is assembled from its odd-number series, the even cat from the
    two-term superposition with the odd terms cancelled exactly.
    """
    cutoff = _check_cutoff(cutoff)
    s = _cat_sign(sign)
    beta = complex(beta)
    if abs(beta) < MIN_CAT_AMPLITUDE:
        raise DegenerateAmplitudeError(
            f"|beta| = {abs(beta):.3g} is below {MIN_CAT_AMPLITUDE}; "
            "the cat normalization diverges"
        )
    _check_tail("cat", beta, cutoff, tolerance, sign=s)
    n = np.arange(cutoff + 1)
    r2 = abs(beta) ** 2
    amps = np.zeros(cutoff + 1, dtype=complex)
    if s < 0:
        odd = n[1::2]
        logmag = (np.log(2.0) + 0.5 * _log_m_sq(r2, -1) - 0.5 * r2
                  + odd * np.log(abs(beta)) - 0.5 * _log_fact(odd))
        amps[odd] = np.exp(logmag) * np.exp(1j * odd * np.angle(beta))
        return _renormalized(amps, cutoff, "odd")
    m_plus = np.exp(0.5 * _log_m_sq(r2, 1))
    amps = m_plus * _coherent_coefficients(beta, n) * (1 + (-1.0) ** n)
    return _renormalized(amps, cutoff, "even")


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def _same_cutoff(a: PureState, b: PureState):
    if a.cutoff != b.cutoff:
        raise InvalidArgumentError(f"cutoff mismatch: {a.cutoff} vs {b.cutoff}")


def inner_product(a: PureState, b: PureState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _same_cutoff(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_pure(a: PureState, b: PureState) -> float:
    """``|<a|b>|^2`` for normalized states, clipped into [0, 1]."""
    for s in (a, b):
        if not s.is_normalized():
            raise InvalidStateError(f"state is not normalized (norm {s.norm():.12g})")
    return float(min(1.0, abs(inner_product(a, b)) ** 2))


def normalize(a: PureState) -> tuple[PureState, float]:
    """Return ``(a / ||a||, ||a||)``."""
    nrm = a.norm()
    if nrm < ZERO_NORM:
        raise ZeroStateError(f"cannot normalize a state of norm {nrm:.3e}")
    return PureState(a.cutoff, a.amplitudes / nrm, a.parity), nrm


def resize(a: PureState, cutoff: int, tolerance: float = DEFAULT_TOLERANCE) -> PureState:
    """Pad with zeros or truncate to a new cutoff.

    Truncation refuses to drop more than ``tolerance`` of probability and
    renormalizes what is kept.
    """
    cutoff = _check_cutoff(cutoff)
    if cutoff >= a.cutoff:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[: a.dim] = a.amplitudes
        return PureState(cutoff, amps, a.parity)
    lost = float(np.sum(np.abs(a.amplitudes[cutoff + 1:]) ** 2))
    if lost > tolerance * a.norm() ** 2:
        raise TruncationError(f"resizing to {cutoff} drops {lost:.3e} of weight")
    return _renormalized(a.amplitudes[: cutoff + 1], cutoff, a.parity)
