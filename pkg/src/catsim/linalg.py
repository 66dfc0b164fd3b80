"""Cyclic Jacobi eigensolver for complex Hermitian matrices."""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError

_TINY = np.finfo(float).tiny


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix, tol: float = 1e-12, max_sweeps: int = 100,
                vectors: bool = False):
    """Eigen-decompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of ``a[p, q]`` with a diagonal
    unitary, then applies the real symmetric Schur rotation.  Sweeps stop once
    the off-diagonal Frobenius norm is at most ``tol``.

    Returns ascending eigenvalues, plus the unitary of eigenvectors (columns)
    if ``vectors`` is true.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n, dtype=complex) if vectors else None
    a = 0.5 * (a + a.conj().T)

    for _ in range(max_sweeps):
        if _off_norm(a) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < _TINY:
                    # below the normal range the phase is not representable
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau  # tau * tau would overflow
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ g
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                if vectors:
                    cols = v[:, [p, q]] @ g
                    v[:, p], v[:, q] = cols[:, 0], cols[:, 1]
    else:
        if _off_norm(a) > tol:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e})"
            )

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    if vectors:
        return w[order], v[:, order]
    return w[order]
