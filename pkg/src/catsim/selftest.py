"""Oracle-equivalence checks bundled with the package (``catsim selftest``).

Each check compares a production routine with an independent computation and
reports the worst discrepancy.  Inputs are fixed, so the report is
byte-identical from run to run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytic, oracles
from .channels import density_matrix, loss_channel, trace_distance
from .fock import fidelity_pure, make_coherent, make_vacuum
from .linalg import jacobi_eigh
from .modes import (
    BeamSplitterSpec,
    TwoModePureState,
    beam_splitter,
)
from .phase_space import wigner
from .protocols import (
    auto_cutoff,
    herald_single_mode,
    herald_two_mode,
    odd_cat_target,
    run_ecs_protocol,
    ProtocolConfig,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def _structured_matrix(dim: int) -> np.ndarray:
    """A fixed, non-trivial Hermitian test matrix."""
    i, j = np.indices((dim, dim))
    m = np.sin(1.3 * i + 0.7 * j * j) + 1j * np.cos(0.4 * i * j + 0.9 * j)
    return m + m.conj().T


def check_herald_identity() -> CheckResult:
    worst = 0.0
    for xi in (0.2, 0.43):
        for T in (0.5, 0.8):
            c = auto_cutoff(xi, minimum=2)
            h = herald_two_mode(xi, T, c)
            ref = herald_single_mode(xi, T, c)
            worst = max(worst, 1.0 - fidelity_pure(h.state, ref),
                        abs(h.probability - analytic.herald_probability(xi, T)))
    return CheckResult("herald_identity", worst, 1e-10)


def check_fidelity_closed_form() -> CheckResult:
    worst = 0.0
    T = 0.99
    for xt in (0.1, 0.3, 0.5):
        xi = float(np.arctanh(xt / T ** 2))
        c = auto_cutoff(xi, 2.0, minimum=2)
        state = herald_two_mode(xi, T, c).state
        for alpha in (0.5, 1.2, 2.0):
            num = fidelity_pure(state, odd_cat_target(alpha, c))
            worst = max(worst, abs(num - analytic.fidelity_closed_form(alpha, xt)))
    return CheckResult("fidelity_closed_form", worst, 1e-6)


def check_beam_splitter_dense() -> CheckResult:
    c = 6
    U = oracles.dense_beam_splitter(0.6, c)
    na, nb = np.indices((c + 1, c + 1))
    grid = np.where(na + nb <= c, np.cos(na + 2.0 * nb) + 1j * np.sin(0.5 * na - nb), 0.0)
    s = TwoModePureState(c, c, grid / np.linalg.norm(grid))
    fast = beam_splitter(s, BeamSplitterSpec(0.6)).amplitudes.reshape(-1)
    dense = U @ s.amplitudes.reshape(-1)
    return CheckResult("beam_splitter_dense", float(np.max(np.abs(fast - dense))), 1e-10)


def check_loss_kraus() -> CheckResult:
    worst = 0.0
    for eta in (0.0, 0.3, 0.8, 1.0):
        for beta in (0.7, 1.1j):
            s = make_coherent(beta, 30)
            rho = loss_channel(s, "A", eta).rho
            ref = oracles.binomial_loss(density_matrix(s).rho, eta)
            worst = max(worst, float(np.max(np.abs(rho - ref))))
    return CheckResult("loss_kraus", worst, 1e-10)


def check_jacobi() -> CheckResult:
    m = _structured_matrix(12)
    return CheckResult("jacobi_vs_lapack",
                       float(np.max(np.abs(jacobi_eigh(m) - np.linalg.eigvalsh(m)))), 1e-10)


def check_trace_distance_methods() -> CheckResult:
    a = loss_channel(make_coherent(0.8, 16), "A", 0.7)
    b = density_matrix(make_vacuum(16))
    err = abs(trace_distance(a, b, "jacobi") - trace_distance(a, b, "eigh"))
    return CheckResult("trace_distance_methods", err, 1e-10)


def check_wigner() -> CheckResult:
    s = odd_cat_target(1.0, 20)
    pts = [(0.0, 0.0), (0.6, -0.3), (-1.1, 1.4)]
    fast = wigner(s, [p[0] for p in pts], [p[1] for p in pts])
    worst = max(abs(fast[k, k] - oracles.displaced_parity_wigner(s, *pts[k]))
                for k in range(len(pts)))
    return CheckResult("wigner_displaced_parity", float(worst), 1e-10)


def check_ecs_structure() -> CheckResult:
    xt = analytic.optimal_xi_T(1.2)
    T = 0.95
    xi = float(np.arctanh(xt / T ** 2))
    psi = run_ecs_protocol(ProtocolConfig(xi=xi, T=T, alpha=1.2)).state.amplitudes
    na, nb = np.indices(psi.shape)
    off = np.max(np.abs(psi[np.abs(na - nb) != 2]))
    anti = np.max(np.abs(psi + psi.T))
    # pairs (n-2, n) survive the total-photon truncation while 2n - 2 <= cutoff
    top = (psi.shape[0] - 1 + 2) // 2
    coeff = max(abs(abs(psi[n - 2, n]) - analytic.tau_exact(n, xi, T)) for n in range(2, top + 1))
    return CheckResult("ecs_structure", float(max(off, anti, coeff)), 1e-8)


CHECKS = (
    check_herald_identity,
    check_fidelity_closed_form,
    check_beam_splitter_dense,
    check_loss_kraus,
    check_jacobi,
    check_trace_distance_methods,
    check_wigner,
    check_ecs_structure,
)


def run_selftest() -> list[CheckResult]:
    return [check() for check in CHECKS]
