"""End-to-end experiments: heralded cats, figure sweeps, qudit ECS, N00N loss.

Two routes produce a photon-subtracted squeezed vacuum:

* :func:`herald_two_mode` mixes ``|Sq(xi)>|0>`` on a beam splitter and projects
  the tap mode onto ``|1>`` (optionally through a lossy detector);
* :func:`herald_single_mode` applies ``a T^n`` directly.

The two agree up to a global phase, which the tests check; sweeps use the
single-mode route because it needs no two-mode grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analytic
from .channels import (
    MixedState,
    detect,
    expectation_pure,
    loss_channel,
    trace_distance,
)
from .errors import ImpossibleOutcomeError, InvalidArgumentError, ZeroStateError
from .fock import (
    DEFAULT_CUTOFF,
    DEFAULT_TOLERANCE,
    PureState,
    fidelity_pure,
    make_cat,
    make_coherent,
    make_squeezed_vacuum,
    make_vacuum,
    normalize,
    required_cutoff,
)
from .modes import (
    BeamSplitterSpec,
    HeraldResult,
    TwoModePureState,
    annihilate,
    attenuate,
    beam_splitter,
    phase_rotate,
    project_fock,
    resize_two_mode,
    tensor,
    truncate_total,
)
from .optimize import golden_section_max

log = logging.getLogger(__name__)

TWO_MODE_CUTOFF = 40
ECS_TRANSMISSION = 1.0 / np.sqrt(2.0)
# local phases that map the 50:50 outputs of the two cats onto {+-alpha, +-i alpha}
ECS_PHASE_A = -np.pi / 4
ECS_PHASE_B = np.pi / 4
LOGICAL_CHOP = 1e-13


@dataclass(frozen=True)
class ProtocolConfig:
    """Squeezing, tap transmission, target amplitude and detector settings."""

    xi: float
    T: float
    alpha: float = 1.2
    eta_det: float = 1.0
    cutoff: Optional[int] = None
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not 0.0 < self.T <= 1.0:
            raise InvalidArgumentError(f"transmission must lie in (0, 1], got {self.T}")
        if not 0.0 < self.eta_det <= 1.0:
            raise InvalidArgumentError(f"detector efficiency must lie in (0, 1], got {self.eta_det}")
        if self.alpha <= 0:
            raise InvalidArgumentError(f"alpha must be positive, got {self.alpha}")
        if self.cutoff is not None and self.cutoff < 1:
            raise InvalidArgumentError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def xi_T(self) -> float:
        return analytic.effective_squeezing(self.xi, self.T)

    def single_mode_cutoff(self) -> int:
        return DEFAULT_CUTOFF if self.cutoff is None else self.cutoff

    def two_mode_cutoff(self) -> int:
        return TWO_MODE_CUTOFF if self.cutoff is None else self.cutoff


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    xi: float
    xi_T: float
    fidelity: float
    herald_prob: Optional[float] = None


def odd_cat_target(alpha: float, cutoff: int, tolerance: float = DEFAULT_TOLERANCE) -> PureState:
    """The comparison cat ``|SCS^-_{i alpha}>``."""
    return make_cat(1j * alpha, "-", cutoff, tolerance)


def auto_cutoff(xi_max: float, alpha_max: float = 0.0, minimum: int = DEFAULT_CUTOFF,
                tolerance: float = DEFAULT_TOLERANCE) -> int:
    """Smallest even cutoff holding both the squeezed input and the cat target."""
    c = max(minimum, required_cutoff("squeezed", xi_max, tolerance))
    if alpha_max > 0:
        c = max(c, required_cutoff("cat", 1j * alpha_max, tolerance))
    return c + (c % 2)


# ---------------------------------------------------------------------------
# heralding
# ---------------------------------------------------------------------------

def herald_single_mode(xi: float, T: float, cutoff: int = DEFAULT_CUTOFF,
                       tolerance: float = DEFAULT_TOLERANCE) -> PureState:
    """``a T^n |Sq(xi)>`` normalized; ``T = 1`` is ideal photon subtraction."""
    sq = make_squeezed_vacuum(xi, cutoff, tolerance)
    state, _ = normalize(annihilate(attenuate(sq, T)))
    return state


def herald_two_mode(xi: float, T: float, cutoff: int = DEFAULT_CUTOFF,
                    eta_det: float = 1.0, tolerance: float = DEFAULT_TOLERANCE,
                    n_detected: int = 1) -> HeraldResult:
    """Squeezed vacuum on a beam splitter, ``n_detected`` photons seen in the tap.

    With ``eta_det < 1`` the detector is a pure-loss channel followed by an
    ideal projector and the heralded state is a :class:`MixedState`.
    """
    sq = make_squeezed_vacuum(xi, cutoff, tolerance)
    mixed = beam_splitter(tensor(sq, make_vacuum(cutoff)), BeamSplitterSpec(T))
    if eta_det == 1.0:
        return project_fock(mixed, "B", n_detected)
    return detect(mixed, "B", n_detected, eta_det)


def _fidelity(state, target: PureState) -> float:
    if isinstance(state, MixedState):
        return expectation_pure(state, target)
    return fidelity_pure(state, target)


@dataclass(frozen=True)
class CatProtocolResult:
    config: ProtocolConfig
    herald: HeraldResult
    fidelity: float
    alpha_star: float
    fidelity_star: float


def run_cat_protocol(cfg: ProtocolConfig, alpha_bounds=(0.1, 3.0),
                     alpha_tol: float = 1e-5) -> CatProtocolResult:
    """Prepare, mix, detect one photon, and score against the odd cat.

    Also reports the cat amplitude that the heralded state matches best,
    found by golden-section search over ``alpha_bounds``.
    """
    cutoff = cfg.single_mode_cutoff()
    try:
        herald = herald_two_mode(cfg.xi, cfg.T, cutoff, cfg.eta_det, cfg.tolerance)
    except ImpossibleOutcomeError as exc:
        if cfg.xi == 0.0:
            raise ZeroStateError("squeezed vacuum with xi = 0 has no photon to subtract") from exc
        raise
    fid = _fidelity(herald.state, odd_cat_target(cfg.alpha, cutoff, cfg.tolerance))
    a_star, f_star = golden_section_max(
        lambda a: _fidelity(herald.state, odd_cat_target(a, cutoff, cfg.tolerance)),
        *alpha_bounds, tol=alpha_tol,
    )
    log.debug("herald p=%.6g F=%.9f alpha*=%.6f", herald.probability, fid, a_star)
    return CatProtocolResult(cfg, herald, fid, float(a_star), float(f_star))


# ---------------------------------------------------------------------------
# figure sweeps
# ---------------------------------------------------------------------------

def sweep_fig2(alphas=(1.2, 1.4, 1.6), xi_range=(0.01, 1.2, 200),
               cutoff: Optional[int] = None,
               tolerance: float = DEFAULT_TOLERANCE) -> list[SweepRow]:
    """Ideal-subtraction fidelity against the odd cat as a function of ``xi``.

    Rows are ordered by ``alpha`` then ``xi``.  With ``cutoff=None`` the cutoff
    is sized for the largest ``xi`` and ``alpha``; an explicit cutoff is
    validated and a :class:`TruncationError` raised if it is too small.
    """
    xi_min, xi_max, steps = xi_range
    xis = np.linspace(xi_min, xi_max, int(steps))
    if cutoff is None:
        cutoff = auto_cutoff(max(abs(xis)), max(alphas), tolerance=tolerance)
    targets = [odd_cat_target(a, cutoff, tolerance) for a in alphas]
    heralded = [herald_single_mode(xi, 1.0, cutoff, tolerance) for xi in xis]
    rows = []
    for a, target in zip(alphas, targets):
        for xi, state in zip(xis, heralded):
            rows.append(SweepRow(float(a), float(xi), float(np.tanh(xi)),
                                 fidelity_pure(state, target)))
    return rows


@dataclass(frozen=True)
class ContourResult:
    rows: list
    shape: tuple
    max_validation_error: Optional[float] = None
    validated_points: int = 0


def contour_fig3(xi_T_range=(0.0, 0.9, 181), alpha_range=(0.1, 3.0, 146),
                 validate_every: Optional[int] = None,
                 tolerance: float = DEFAULT_TOLERANCE) -> ContourResult:
    """Closed-form fidelity over the ``(xi_T, alpha)`` plane.

    Rows are ordered by ``xi_T`` then ``alpha``.  With ``validate_every=k``,
    every k-th lattice point in both directions (with ``xi_T > 0``) is
    recomputed by the simulator at ``T = 1``, ``tanh(xi) = xi_T``, and the
    largest absolute discrepancy is returned.
    """
    xts = np.linspace(*xi_T_range[:2], int(xi_T_range[2]))
    alphas = np.linspace(*alpha_range[:2], int(alpha_range[2]))
    if xts.min() < 0 or xts.max() >= 1:
        raise InvalidArgumentError("xi_T must lie in [0, 1)")
    rows = [SweepRow(float(a), float(np.arctanh(xt)), float(xt),
                     analytic.fidelity_closed_form(a, xt))
            for xt in xts for a in alphas]
    worst, count = None, 0
    if validate_every:
        worst = 0.0
        for i in range(0, len(xts), validate_every):
            xt = xts[i]
            if xt == 0.0:
                continue
            xi = float(np.arctanh(xt))
            cutoff = auto_cutoff(xi, alphas.max(), minimum=2, tolerance=tolerance)
            state = herald_single_mode(xi, 1.0, cutoff, tolerance)
            for j in range(0, len(alphas), validate_every):
                numeric = fidelity_pure(state, odd_cat_target(alphas[j], cutoff, tolerance))
                worst = max(worst, abs(numeric - rows[i * len(alphas) + j].fidelity))
                count += 1
    return ContourResult(rows, (len(xts), len(alphas)), worst, count)


def optimize_fidelity(alpha: float, T: float, xi_bounds=(0.01, 1.5), tol: float = 1e-5,
                      tolerance: float = DEFAULT_TOLERANCE):
    """Squeezing that maximizes the simulated heralded fidelity at fixed ``T``.

    Returns ``(xi_star, F_star)``.  When ``T^2 tanh(xi)`` cannot reach the
    analytic optimum inside ``xi_bounds`` the maximizer sits on the boundary.
    """
    if alpha <= 0 or not 0.0 < T <= 1.0:
        raise InvalidArgumentError("need alpha > 0 and 0 < T <= 1")
    cutoff = auto_cutoff(max(abs(b) for b in xi_bounds), alpha, minimum=2, tolerance=tolerance)
    target = odd_cat_target(alpha, cutoff, tolerance)

    def f(xi):
        return fidelity_pure(herald_single_mode(xi, T, cutoff, tolerance), target)

    xi_star, f_star = golden_section_max(f, *xi_bounds, tol=tol)
    return float(xi_star), float(f_star)


# ---------------------------------------------------------------------------
# qudit entangled coherent state
# ---------------------------------------------------------------------------

def qudit_ecs_state(alpha: float, cutoff: int = TWO_MODE_CUTOFF,
                    tolerance: float = DEFAULT_TOLERANCE) -> TwoModePureState:
    """``|a,a> - |ia,-ia> - |-ia,ia> + |-a,-a>`` normalized.

    With ``|0~> = |a>, |1~> = |-ia>, |2~> = |-a>, |3~> = |ia>`` this is
    ``|0~0~> - |3~1~> - |1~3~> + |2~2~>``.
    """
    a = float(alpha)
    terms = [(1, a, a), (-1, 1j * a, -1j * a), (-1, -1j * a, 1j * a), (1, -a, -a)]
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for sign, ba, bb in terms:
        grid += sign * np.outer(make_coherent(ba, cutoff, tolerance).amplitudes,
                                make_coherent(bb, cutoff, tolerance).amplitudes)
    return TwoModePureState(cutoff, cutoff, grid / np.linalg.norm(grid))


def ecs_phase_frame(state: TwoModePureState) -> TwoModePureState:
    """Rotate mode A by -pi/4 and mode B by +pi/4."""
    return phase_rotate(phase_rotate(state, ECS_PHASE_A, "A"), ECS_PHASE_B, "B")


@dataclass(frozen=True)
class ECSResult:
    config: ProtocolConfig
    state: TwoModePureState
    fidelity: float
    coefficients: dict
    herald_probability: float
    herald_fidelities: tuple


def run_ecs_protocol(cfg: ProtocolConfig) -> ECSResult:
    """Two heralded subtractions (``+xi`` on A, ``-xi`` on B) then a 50:50 mix.

    The product of the heralded states is cut at total photon number
    ``cutoff`` before mixing so that every beam-splitter block is complete.

    ``coefficients[n]`` is ``<n-2, n|Psi>``.  The fidelity is taken between the
    output (moved into the ECS phase frame) and :func:`qudit_ecs_state`.
    """
    cutoff = cfg.two_mode_cutoff()
    ha = herald_two_mode(cfg.xi, cfg.T, cutoff, 1.0, cfg.tolerance)
    hb = herald_two_mode(-cfg.xi, cfg.T, cutoff, 1.0, cfg.tolerance)
    product = truncate_total(tensor(ha.state, hb.state), cutoff, cfg.tolerance)
    psi = beam_splitter(product, BeamSplitterSpec(ECS_TRANSMISSION))
    coeffs = {n: complex(psi.amplitudes[n - 2, n]) for n in range(2, cutoff + 1)}
    ideal = qudit_ecs_state(cfg.alpha, cutoff, cfg.tolerance)
    overlap = np.vdot(ideal.amplitudes, ecs_phase_frame(psi).amplitudes)
    f_a = fidelity_pure(ha.state, odd_cat_target(cfg.alpha, cutoff, cfg.tolerance))
    f_b = fidelity_pure(hb.state, make_cat(cfg.alpha, "-", cutoff, cfg.tolerance))
    return ECSResult(cfg, psi, float(abs(overlap) ** 2), coeffs,
                     ha.probability * hb.probability, (f_a, f_b))


def _chop(amps: np.ndarray, threshold: float) -> np.ndarray:
    out = np.array(amps)
    out[np.abs(out) < threshold] = 0.0
    return out


def extract_logical(state: TwoModePureState, herald_n: int,
                    chop: float = LOGICAL_CHOP) -> HeraldResult:
    """Detect ``herald_n`` photons in mode A and return the mode-B codeword.

    ``herald_n = 2`` gives ``|0_L>`` on ``{|0>, |4>}``, ``herald_n = 4`` gives
    ``|1_L>`` on ``{|2>, |6>}``.  Amplitudes below ``chop`` (after
    normalization) are rounding residue from the beam-splitter cancellations
    and are flushed to exact zeros.
    """
    if herald_n not in (2, 4):
        raise InvalidArgumentError(f"herald_n must be 2 or 4, got {herald_n}")
    res = project_fock(state, "A", herald_n)
    amps = _chop(res.state.amplitudes, chop)
    out, _ = normalize(PureState(res.state.cutoff, amps))
    return HeraldResult(PureState(out.cutoff, out.amplitudes, res.state.parity), res.probability)


# ---------------------------------------------------------------------------
# loss robustness
# ---------------------------------------------------------------------------

def noon_state(N: int, cutoff: int) -> TwoModePureState:
    if not 1 <= N <= cutoff:
        raise InvalidArgumentError(f"need 1 <= N <= cutoff, got N={N}, cutoff={cutoff}")
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    grid[N, 0] = grid[0, N] = 1.0 / np.sqrt(2.0)
    return TwoModePureState(cutoff, cutoff, grid)


@dataclass(frozen=True)
class NoonRow:
    state: str
    theta: float
    eta: float
    trace_distance: float


@dataclass(frozen=True)
class NoonTable:
    rows: list
    mean_photons: dict
    metric: str = "trace_distance"

    def distances(self, state: str, theta: float) -> dict:
        return {r.eta: r.trace_distance for r in self.rows
                if r.state == state and r.theta == theta}


def noon_loss_experiment(N: int, etas, phase_samples, cfg: ProtocolConfig,
                         cutoff: int = 12, resize_tolerance: float = 1e-10) -> NoonTable:
    """Phase distinguishability under loss on mode B: N00N vs the ECS output.

    For each state, a phase ``theta`` is imprinted on mode A, mode B passes a
    pure-loss channel of transmissivity ``eta``, and the trace distance to the
    ``theta = 0`` state is recorded.  The ECS output is computed at the
    two-mode cutoff of ``cfg`` and then truncated to ``cutoff`` per mode.
    """
    etas = [float(e) for e in np.atleast_1d(etas)]
    for e in etas:
        if not 0.0 <= e <= 1.0:
            raise InvalidArgumentError(f"eta must lie in [0, 1], got {e}")
    thetas = [float(t) for t in np.atleast_1d(phase_samples)]
    states = {
        "noon": noon_state(N, cutoff),
        "ecs": resize_two_mode(run_ecs_protocol(cfg).state, cutoff, cutoff, resize_tolerance),
    }
    rows = []
    for name, psi in states.items():
        for eta in etas:
            ref = loss_channel(psi, "B", eta)
            for theta in thetas:
                rho = loss_channel(phase_rotate(psi, theta, "A"), "B", eta)
                rows.append(NoonRow(name, theta, eta, trace_distance(rho, ref)))
    means = {name: psi.mean_photon_number() for name, psi in states.items()}
    return NoonTable(rows, means)
