"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

A self-contained rotation-plus-phase implementation kept as an independent
cross-check of the LAPACK-backed path in :mod:`divlab.linalg`.  It is accurate
for the small dimensions used in this package but much slower, so the hot
paths do not use it.
"""

from __future__ import annotations

import numpy as np

from .linalg import Spectrum, hermitian_part
from .tolerances import get_tolerances

__all__ = ["ConvergenceError", "jacobi_eig_hermitian"]


class ConvergenceError(RuntimeError):
    """The sweep cap was reached before the off-diagonal mass converged."""


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eig_hermitian(
    m, *, sweep_cap: int | None = None, offdiag_rel: float | None = None
) -> Spectrum:
    """Eigendecomposition by cyclic Jacobi rotations with phase factors.

    Each (p, q) step applies a plane rotation composed with the phase of the
    off-diagonal entry so the pivot is annihilated exactly.  Convergence is
    declared when the off-diagonal Frobenius mass drops below
    ``offdiag_rel * ||M||_F``; exceeding the sweep cap raises
    :class:`ConvergenceError`.
    """
    tol = get_tolerances()
    sweep_cap = tol.jacobi_sweep_cap if sweep_cap is None else sweep_cap
    offdiag_rel = tol.jacobi_offdiag_rel if offdiag_rel is None else offdiag_rel

    a = hermitian_part(m).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    norm = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    threshold = offdiag_rel * norm

    for _ in range(sweep_cap):
        if _offdiag_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold / max(n, 1):
                    continue
                theta = np.angle(apq)
                phi = 0.5 * np.arctan2(2.0 * mag, (a[q, q] - a[p, p]).real)
                c = np.cos(phi)
                s = np.sin(phi)
                g = np.array(
                    [
                        [c, s * np.exp(1j * theta)],
                        [-s * np.exp(-1j * theta), c],
                    ],
                    dtype=np.complex128,
                )
                a[:, [p, q]] = a[:, [p, q]] @ g
                a[[p, q], :] = g.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ g
    else:
        raise ConvergenceError(
            f"no convergence after {sweep_cap} sweeps "
            f"(off-diagonal mass {_offdiag_norm(a):.3e})"
        )

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return Spectrum(eigenvalues=w[order], eigenvectors=v[:, order])
