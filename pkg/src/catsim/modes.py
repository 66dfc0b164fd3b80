"""Linear mode operations, two-mode states, beam splitters and projection.

Beam-splitter convention
------------------------
``beam_splitter`` applies ``U = exp[theta/2 (a^dag b - a b^dag)]`` with
``T = cos(theta/2)`` and ``R = sin(theta/2) = sqrt(1 - T^2)``.  In the
Heisenberg picture this is ``U^dag a^dag U = T a^dag + R b^dag`` and
``U^dag b^dag U = -R a^dag + T b^dag``; acting on states it sends
``|beta, 0> -> |T beta, -R beta>``.  Detecting one photon in mode B after
mixing ``|Sq(xi)>|0>`` leaves ``-(R/T) a T^n |Sq(xi)>`` in mode A.

U conserves the total photon number ``N = n_A + n_B``, so it is applied one
block at a time.  Each block is the exponential of the (real, antisymmetric,
tridiagonal) generator restricted to ``{|N-k, k>: k = 0..N}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .errors import (
    ImpossibleOutcomeError,
    InvalidArgumentError,
    InvalidStateError,
    TruncationError,
)
from .fock import NORM_TOLERANCE, ZERO_NORM, PureState, _check_cutoff

LEAK_TOLERANCE = 1e-9
MODES = ("A", "B")


@dataclass(frozen=True)
class TwoModePureState:
    """Amplitude grid ``amplitudes[n_A, n_B] = <n_A, n_B|Psi>``."""

    cutoff_a: int
    cutoff_b: int
    amplitudes: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        ca, cb = _check_cutoff(self.cutoff_a), _check_cutoff(self.cutoff_b)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (ca + 1, cb + 1):
            raise InvalidArgumentError(
                f"amplitude grid {amps.shape} does not match cutoffs ({ca}, {cb})"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "cutoff_a", ca)
        object.__setattr__(self, "cutoff_b", cb)
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized and abs(self.norm() ** 2 - 1.0) > NORM_TOLERANCE:
            raise InvalidStateError(f"two-mode state has norm {self.norm():.12g}")

    @property
    def shape(self):
        return self.amplitudes.shape

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def mean_photon_number(self) -> float:
        p = np.abs(self.amplitudes) ** 2
        na, nb = np.indices(p.shape)
        return float(np.sum((na + nb) * p) / np.sum(p))

    def schmidt_coefficients(self) -> np.ndarray:
        return np.linalg.svd(self.amplitudes, compute_uv=False)

    __hash__ = None


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Amplitude transmission ``T`` in (0, 1]; ``theta = 2 arccos T``."""

    transmission: float

    def __post_init__(self):
        t = float(self.transmission)
        if not 0.0 < t <= 1.0:
            raise InvalidArgumentError(f"transmission must lie in (0, 1], got {t}")
        object.__setattr__(self, "transmission", t)

    @property
    def theta(self) -> float:
        return 2.0 * np.arccos(self.transmission)

    @property
    def reflection(self) -> float:
        return float(np.sqrt(1.0 - self.transmission ** 2))


@dataclass(frozen=True)
class HeraldResult:
    """Normalized post-measurement state and the outcome probability."""

    state: object
    probability: float


def _infer_parity(amps: np.ndarray) -> Optional[str]:
    if not np.any(amps[1::2]):
        return "even"
    if not np.any(amps[0::2]):
        return "odd"
    return None


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise InvalidArgumentError(f"mode must be 'A' or 'B', got {mode!r}")
    return mode


# ---------------------------------------------------------------------------
# single-mode linear maps
# ---------------------------------------------------------------------------

def annihilate(s: PureState) -> PureState:
    """``a|s>`` without renormalization; the top Fock component drops out."""
    out = np.zeros(s.dim, dtype=complex)
    out[:-1] = np.sqrt(np.arange(1, s.dim)) * s.amplitudes[1:]
    parity = {"even": "odd", "odd": "even"}.get(s.parity)
    return PureState(s.cutoff, out, parity)


def attenuate(s: PureState, T: float) -> PureState:
    """``T^n |s>`` (unnormalized), the no-click filter of a weak tap."""
    if not 0.0 < T <= 1.0:
        raise InvalidArgumentError(f"attenuation T must lie in (0, 1], got {T}")
    weights = float(T) ** np.arange(s.dim)
    return PureState(s.cutoff, weights * s.amplitudes, s.parity)


def phase_rotate(s, phi: float, mode: str = "A"):
    """``exp(i phi n)`` on a single mode, or on one mode of a two-mode state."""
    if isinstance(s, PureState):
        phases = np.exp(1j * phi * np.arange(s.dim))
        return PureState(s.cutoff, phases * s.amplitudes, s.parity)
    if isinstance(s, TwoModePureState):
        amps = np.array(s.amplitudes)
        if _check_mode(mode) == "A":
            amps *= np.exp(1j * phi * np.arange(s.cutoff_a + 1))[:, None]
        else:
            amps *= np.exp(1j * phi * np.arange(s.cutoff_b + 1))[None, :]
        return TwoModePureState(s.cutoff_a, s.cutoff_b, amps, s.normalized)
    raise InvalidArgumentError(f"cannot phase-rotate {type(s).__name__}")


def tensor(a: PureState, b: PureState) -> TwoModePureState:
    return TwoModePureState(a.cutoff, b.cutoff, np.outer(a.amplitudes, b.amplitudes))


def resize_two_mode(s: TwoModePureState, cutoff_a: int, cutoff_b: int,
                    tolerance: float = 1e-12) -> TwoModePureState:
    """Zero-pad or truncate (and renormalize) a two-mode grid."""
    ca, cb = _check_cutoff(cutoff_a), _check_cutoff(cutoff_b)
    out = np.zeros((ca + 1, cb + 1), dtype=complex)
    ka, kb = min(ca, s.cutoff_a) + 1, min(cb, s.cutoff_b) + 1
    out[:ka, :kb] = s.amplitudes[:ka, :kb]
    total = s.norm() ** 2
    lost = total - float(np.sum(np.abs(out) ** 2))
    if lost > tolerance * total:
        raise TruncationError(f"resizing to ({ca}, {cb}) drops {lost:.3e} of weight")
    return TwoModePureState(ca, cb, out / np.sqrt(np.sum(np.abs(out) ** 2)))


def truncate_total(s: TwoModePureState, nmax: int,
                   tolerance: float = 1e-12) -> TwoModePureState:
    """Drop every component with ``n_A + n_B > nmax`` and renormalize.

    A beam splitter maps each total-photon block onto itself, so after this
    truncation (with ``nmax`` at most both cutoffs) it acts exactly: no block
    is missing input components and nothing leaks off the grid.
    """
    na, nb = np.indices(s.shape)
    amps = np.where(na + nb <= nmax, s.amplitudes, 0.0)
    total = s.norm() ** 2
    lost = total - float(np.sum(np.abs(amps) ** 2))
    if lost > tolerance * total:
        raise TruncationError(f"total-photon truncation at {nmax} drops {lost:.3e} of weight")
    return TwoModePureState(s.cutoff_a, s.cutoff_b, amps / np.sqrt(np.sum(np.abs(amps) ** 2)))


# ---------------------------------------------------------------------------
# beam splitter
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _bs_block(T: float, N: int) -> np.ndarray:
    """``U[k', k] = <N-k', k'| U |N-k, k>`` for one total-photon block.

    ``T`` may be 0 here (full swap), which the loss channel needs at eta = 0.
    """
    if N == 0 or T == 1.0:
        return np.eye(N + 1)
    k = np.arange(N + 1)
    gen = np.zeros((N + 1, N + 1))
    # a^dag b |N-k, k> = sqrt(k (N-k+1)) |N-k+1, k-1>
    gen[k[1:] - 1, k[1:]] = np.sqrt(k[1:] * (N - k[1:] + 1.0))
    # -a b^dag |N-k, k> = -sqrt((N-k)(k+1)) |N-k-1, k+1>
    gen[k[:-1] + 1, k[:-1]] = -np.sqrt((N - k[:-1]) * (k[:-1] + 1.0))
    block = expm(np.arccos(T) * gen)
    block.setflags(write=False)
    return block


def beam_splitter(s: TwoModePureState, spec: BeamSplitterSpec,
                  leak_tolerance: float = LEAK_TOLERANCE) -> TwoModePureState:
    """Apply the beam splitter to a two-mode state.

    Photon-number blocks that do not fit under both cutoffs may spill weight
    outside the grid; more than ``leak_tolerance`` of spilled probability
    raises :class:`TruncationError`.
    """
    if not isinstance(spec, BeamSplitterSpec):
        spec = BeamSplitterSpec(spec)
    ca, cb = s.cutoff_a, s.cutoff_b
    psi = s.amplitudes
    out = np.zeros_like(psi)
    leaked = 0.0
    for N in range(ca + cb + 1):
        kb = np.arange(max(0, N - ca), min(N, cb) + 1)
        v = psi[N - kb, kb]
        if not v.any():
            continue
        w = _bs_block(spec.transmission, N)[:, kb] @ v
        out[N - kb, kb] = w[kb]
        leaked += float(np.sum(np.abs(w) ** 2) - np.sum(np.abs(w[kb]) ** 2))
    if leaked > leak_tolerance:
        raise TruncationError(
            f"beam splitter pushes {leaked:.3e} of probability above cutoffs ({ca}, {cb})",
            leaked,
        )
    return TwoModePureState(ca, cb, out, s.normalized)


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------

def _slice(s: TwoModePureState, mode: str, n: int):
    """Unnormalized conditional amplitudes of the *other* mode given ``n``."""
    if _check_mode(mode) == "A":
        if not 0 <= n <= s.cutoff_a:
            raise InvalidArgumentError(f"outcome {n} outside 0..{s.cutoff_a}")
        return s.amplitudes[n, :], s.cutoff_b
    if not 0 <= n <= s.cutoff_b:
        raise InvalidArgumentError(f"outcome {n} outside 0..{s.cutoff_b}")
    return s.amplitudes[:, n], s.cutoff_a


def project_fock(s, mode: str, n: int) -> HeraldResult:
    """Ideal number-resolving projection ``<n|`` on ``mode``.

    Works on :class:`TwoModePureState` (returns a :class:`PureState` of the
    other mode) and on two-mode :class:`~catsim.channels.MixedState` (returns
    a single-mode ``MixedState``).
    """
    if isinstance(s, TwoModePureState):
        amps, cutoff = _slice(s, mode, n)
        prob = float(np.sum(np.abs(amps) ** 2)) / s.norm() ** 2
        if prob < ZERO_NORM:
            raise ImpossibleOutcomeError(
                f"outcome |{n}> on mode {mode} has probability {prob:.3e}"
            )
        amps = amps / np.sqrt(np.sum(np.abs(amps) ** 2))
        return HeraldResult(PureState(cutoff, amps, _infer_parity(amps)), prob)

    from .channels import project_fock_mixed

    return project_fock_mixed(s, mode, n)
