"""Density matrices, partial traces, pure-loss channels and lossy detection.

A :class:`MixedState` carries the per-mode dimensions so that one- and
two-mode density matrices share one type; two-mode matrices are indexed
row-major in ``n_A`` (``index = n_A * dim_B + n_B``), matching the layout of
:class:`~catsim.modes.TwoModePureState` grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ImpossibleOutcomeError, InvalidArgumentError, InvalidStateError
from .fock import ZERO_NORM, PureState
from .linalg import jacobi_eigh
from .modes import (
    HeraldResult,
    TwoModePureState,
    _bs_block,
    _check_mode,
    _slice,
)

HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-9
POSITIVITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MixedState:
    """Density matrix over one or two truncated modes."""

    dims: tuple
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) not in (1, 2) or min(dims) < 1:
            raise InvalidArgumentError(f"dims must describe one or two modes, got {dims}")
        rho = np.array(self.rho, dtype=complex)
        d = int(np.prod(dims))
        if rho.shape != (d, d):
            raise InvalidArgumentError(f"rho has shape {rho.shape}, expected ({d}, {d})")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > HERMITIAN_TOLERANCE:
            raise InvalidStateError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_TOLERANCE:
            raise InvalidStateError(f"density matrix has trace {tr:.12g}")
        rho.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "rho", rho)

    @property
    def dimension(self) -> int:
        return self.rho.shape[0]

    @property
    def modes(self) -> int:
        return len(self.dims)

    def purity(self) -> float:
        return float(np.real(np.sum(self.rho * self.rho.T)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)

    def is_positive(self, tol: float = POSITIVITY_TOLERANCE) -> bool:
        return bool(self.eigenvalues()[0] >= -tol)

    def photon_distribution(self) -> np.ndarray:
        return np.diag(self.rho).real.copy()

    __hash__ = None


def _from_unnormalized(dims, rho) -> MixedState:
    rho = 0.5 * (rho + rho.conj().T)
    return MixedState(dims, rho / np.trace(rho).real)


def density_matrix(s) -> MixedState:
    """``|s><s|`` for a one- or two-mode pure state (mixed states pass through)."""
    if isinstance(s, MixedState):
        return s
    if isinstance(s, PureState):
        v = s.amplitudes / s.norm()
        return MixedState((s.dim,), np.outer(v, v.conj()))
    if isinstance(s, TwoModePureState):
        v = s.amplitudes.reshape(-1) / s.norm()
        return MixedState(s.shape, np.outer(v, v.conj()))
    raise InvalidArgumentError(f"not a state: {type(s).__name__}")


def expectation_pure(rho: MixedState, psi: PureState) -> float:
    """``<psi|rho|psi>``, the fidelity of a mixed state with a pure target."""
    if rho.dims != (psi.dim,):
        raise InvalidArgumentError(f"dimension mismatch: {rho.dims} vs {psi.dim}")
    v = psi.amplitudes
    return float(np.real(np.vdot(v, rho.rho @ v)))


def partial_trace(s, keep: str) -> MixedState:
    """Reduced density matrix of mode ``keep`` of a two-mode state."""
    _check_mode(keep)
    if isinstance(s, TwoModePureState):
        psi = s.amplitudes / s.norm()
        if keep == "A":
            return _from_unnormalized((psi.shape[0],), psi @ psi.conj().T)
        return _from_unnormalized((psi.shape[1],), psi.T @ psi.conj())
    if isinstance(s, MixedState) and s.modes == 2:
        da, db = s.dims
        r = s.rho.reshape(da, db, da, db)
        if keep == "A":
            return _from_unnormalized((da,), np.einsum("ibjb->ij", r))
        return _from_unnormalized((db,), np.einsum("aiaj->ij", r))
    raise InvalidArgumentError("partial_trace needs a two-mode state")


# ---------------------------------------------------------------------------
# pure loss
# ---------------------------------------------------------------------------

def loss_kraus(eta: float, dim: int) -> list[np.ndarray]:
    """Kraus operators of the pure-loss channel obtained by dilation.

    The mode meets a vacuum ancilla on a beam splitter of amplitude
    transmission ``sqrt(eta)``; ``K_k = <k|_anc U |0>_anc`` so that
    ``K_k[n - k, n] = <n-k, k| U |n, 0>``.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgumentError(f"loss transmissivity eta must lie in [0, 1], got {eta}")
    T = float(np.sqrt(eta))
    kraus = [np.zeros((dim, dim)) for _ in range(dim)]
    for n in range(dim):
        column = _bs_block(T, n)[:, 0]
        for k in range(n + 1):
            kraus[k][n - k, n] = column[k]
    return kraus


def _apply_kraus(rho4: np.ndarray, kraus, mode: str) -> np.ndarray:
    out = np.zeros_like(rho4)
    for k in kraus:
        if mode == "A":
            out += np.einsum("ia,abcd,jc->ibjd", k, rho4, k.conj(), optimize=True)
        else:
            out += np.einsum("ib,abcd,jd->aicj", k, rho4, k.conj(), optimize=True)
    return out


def loss_channel(s, mode: str, eta: float) -> MixedState:
    """Pure-loss channel with energy transmissivity ``eta`` on ``mode``.

    Also models a detector of efficiency ``eta`` when applied right before a
    projection (see :func:`detect`).
    """
    _check_mode(mode)
    if isinstance(s, PureState):
        if mode != "A":
            raise InvalidArgumentError("a single-mode state only has mode 'A'")
        kraus = loss_kraus(eta, s.dim)
        v = s.amplitudes / s.norm()
        vs = [k @ v for k in kraus]
        return _from_unnormalized((s.dim,), sum(np.outer(w, w.conj()) for w in vs))
    if isinstance(s, TwoModePureState):
        psi = s.amplitudes / s.norm()
        da, db = psi.shape
        rho = np.zeros((da * db, da * db), dtype=complex)
        if mode == "A":
            for k in loss_kraus(eta, da):
                w = (k @ psi).reshape(-1)
                rho += np.outer(w, w.conj())
        else:
            for k in loss_kraus(eta, db):
                w = (psi @ k.T).reshape(-1)
                rho += np.outer(w, w.conj())
        return _from_unnormalized((da, db), rho)
    if isinstance(s, MixedState):
        if s.modes == 1:
            if mode != "A":
                raise InvalidArgumentError("a single-mode state only has mode 'A'")
            out = sum(k @ s.rho @ k.conj().T for k in loss_kraus(eta, s.dims[0]))
            return _from_unnormalized(s.dims, out)
        da, db = s.dims
        kraus = loss_kraus(eta, da if mode == "A" else db)
        r = _apply_kraus(s.rho.reshape(da, db, da, db), kraus, mode)
        return _from_unnormalized(s.dims, r.reshape(da * db, da * db))
    raise InvalidArgumentError(f"not a state: {type(s).__name__}")


# ---------------------------------------------------------------------------
# measurement on mixed states / imperfect detectors
# ---------------------------------------------------------------------------

def project_fock_mixed(s: MixedState, mode: str, n: int) -> HeraldResult:
    if s.modes != 2:
        raise InvalidArgumentError("projection needs a two-mode state")
    _check_mode(mode)
    da, db = s.dims
    r = s.rho.reshape(da, db, da, db)
    if mode == "A":
        if not 0 <= n < da:
            raise InvalidArgumentError(f"outcome {n} outside 0..{da - 1}")
        sub, dims = r[n, :, n, :], (db,)
    else:
        if not 0 <= n < db:
            raise InvalidArgumentError(f"outcome {n} outside 0..{db - 1}")
        sub, dims = r[:, n, :, n], (da,)
    prob = float(np.trace(sub).real)
    if prob < ZERO_NORM:
        raise ImpossibleOutcomeError(f"outcome |{n}> on mode {mode} has probability {prob:.3e}")
    return HeraldResult(_from_unnormalized(dims, sub), prob)


def detect(s: TwoModePureState, mode: str, n: int, eta: float = 1.0) -> HeraldResult:
    """Number-resolving detection of ``n`` photons with efficiency ``eta``.

    Equivalent to ``project_fock(loss_channel(s, mode, eta), mode, n)`` but
    never builds the two-mode density matrix: the conditional state is
    ``sum_k K_k[n, n+k]^2 |s_{n+k}><s_{n+k}|`` where ``s_m`` is the slice of
    the other mode given ``m`` photons.
    """
    _check_mode(mode)
    dim = (s.cutoff_a if mode == "A" else s.cutoff_b) + 1
    if not 0 <= n < dim:
        raise InvalidArgumentError(f"outcome {n} outside 0..{dim - 1}")
    kraus = loss_kraus(eta, dim)
    other = (s.cutoff_b if mode == "A" else s.cutoff_a) + 1
    rho = np.zeros((other, other), dtype=complex)
    norm2 = s.norm() ** 2
    for k in range(dim - n):
        weight = kraus[k][n, n + k] ** 2
        if weight == 0.0:
            continue
        v, _ = _slice(s, mode, n + k)
        rho += weight * np.outer(v, v.conj())
    prob = float(np.trace(rho).real) / norm2
    if prob < ZERO_NORM:
        raise ImpossibleOutcomeError(f"outcome |{n}> on mode {mode} has probability {prob:.3e}")
    return HeraldResult(_from_unnormalized((other,), rho), prob)


def project_on_off(s: TwoModePureState, mode: str, click: bool = True,
                   eta: float = 1.0) -> HeraldResult:
    """On-off (bucket) detector with efficiency ``eta`` on ``mode``.

    POVM ``{P_off, 1 - P_off}`` with ``P_off = sum_n (1 - eta)^n |n><n|``.
    """
    _check_mode(mode)
    if not 0.0 <= eta <= 1.0:
        raise InvalidArgumentError(f"detector efficiency must lie in [0, 1], got {eta}")
    dim = (s.cutoff_a if mode == "A" else s.cutoff_b) + 1
    other = (s.cutoff_b if mode == "A" else s.cutoff_a) + 1
    p_off = (1.0 - eta) ** np.arange(dim)
    weights = 1.0 - p_off if click else p_off
    rho = np.zeros((other, other), dtype=complex)
    for m in range(dim):
        if weights[m] == 0.0:
            continue
        v, _ = _slice(s, mode, m)
        rho += weights[m] * np.outer(v, v.conj())
    prob = float(np.trace(rho).real) / s.norm() ** 2
    if prob < ZERO_NORM:
        raise ImpossibleOutcomeError(f"on-off outcome click={click} has probability {prob:.3e}")
    return HeraldResult(_from_unnormalized((other,), rho), prob)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def trace_distance(rho: MixedState, sigma: MixedState, method: str = "eigh") -> float:
    """``0.5 * ||rho - sigma||_1`` from the spectrum of the difference.

    ``method="jacobi"`` uses the in-house cyclic Jacobi solver; the default
    ``"eigh"`` uses LAPACK and is the fast path for large two-mode matrices.
    """
    if rho.dims != sigma.dims:
        raise InvalidArgumentError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    diff = rho.rho - sigma.rho
    if method == "jacobi":
        w = jacobi_eigh(diff)
    elif method == "eigh":
        w = np.linalg.eigvalsh(diff)
    else:
        raise InvalidArgumentError(f"unknown eigen method {method!r}")
    return float(min(1.0, max(0.0, 0.5 * np.sum(np.abs(w)))))
