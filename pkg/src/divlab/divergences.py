"""Quantum divergences and the trace functionals driving their convexity.

Implements the two-parameter Renyi family D_{alpha,z}, its z = 1 and z = alpha
specializations, the Umegaki and Belavkin-Staszewski relative entropies, the
three-exponent trace functional

    psi_{p,q,s}(A, B) = Tr (B^{q/2} K* A^p K B^{q/2})^s

and its one-argument reduction Tr (K* A^p K)^s, plus the classical (commuting)
counterparts.

Extended values: support violations (e.g. a singular second argument where a
negative power is required) return ``math.inf`` rather than raising, matching
the usual extended-value convention; 0 log 0 = 0 throughout.  All logarithms
are natural.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import (
    DomainError,
    as_complex_matrix,
    hermitian_part,
    matrix_function,
    matrix_power,
)
from .params import ParamPoint
from .tolerances import get_tolerances

__all__ = [
    "bs_entropy",
    "classical_relative_entropy",
    "classical_renyi",
    "d_alpha_z",
    "d_renyi",
    "d_sandwiched",
    "hiai_concavity_functional",
    "psi",
    "psi_via_block_embedding",
    "umegaki",
    "upsilon",
    "von_neumann_entropy",
]


def _trace_power(inner: np.ndarray, s: float, *, allow_singular: bool) -> float:
    """Tr M^s for Hermitian PSD M given as a matrix, by its eigenvalues.

    With ``allow_singular`` the trace runs over the support of M (eigenvalues
    within the support cutoff of zero are dropped, the 0^s := 0 convention).
    Otherwise a spectrum below the positive-definite floor combined with
    s <= 0 raises :class:`DomainError`.
    """
    tol = get_tolerances()
    w = np.linalg.eigvalsh(hermitian_part(inner))
    scale = float(np.abs(w).max(initial=0.0))
    if scale == 0.0:
        if s > 0:
            return 0.0
        raise DomainError("inner matrix is zero and the outer power is not positive")
    cutoff = tol.support_cutoff * scale
    if allow_singular:
        live = w > cutoff
        return float(np.sum(w[live] ** s))
    if s <= 0 and float(w.min()) < tol.psd_floor:
        raise DomainError(
            f"inner matrix eigenvalue {float(w.min()):.3e} below floor while s <= 0"
        )
    if float(w.min()) < -tol.psd_clip_slack * scale:
        raise DomainError(
            f"inner matrix is not PSD: eigenvalue {float(w.min()):.3e}"
        )
    w = np.clip(w, 0.0, None)
    if s > 0:
        live = w > 0
        return float(np.sum(w[live] ** s))
    return float(np.sum(w**s))


def _inner_matrix(a, b, k, p: float, q: float, *, allow_singular: bool) -> np.ndarray:
    """B^{q/2} K* A^p K B^{q/2}, re-Hermitized before any outer power."""
    k = as_complex_matrix(k)
    ap = matrix_power(a, p, support_zero=allow_singular)
    bq2 = matrix_power(b, q / 2.0, support_zero=allow_singular)
    return hermitian_part(bq2 @ k.conj().T @ ap @ k @ bq2)


def psi(a, b, k, pt: ParamPoint, *, allow_singular: bool = False) -> float:
    """Tr (B^{q/2} K* A^p K B^{q/2})^s.

    A and B are positive definite (positive semidefinite when
    ``allow_singular`` is set, in which case matrix powers and the outer trace
    power follow the 0^x := 0 support convention).
    """
    inner = _inner_matrix(a, b, k, pt.p, pt.q, allow_singular=allow_singular)
    return _trace_power(inner, pt.s, allow_singular=allow_singular)


def psi_via_block_embedding(a, b, k, pt: ParamPoint) -> float:
    """The same functional through the 2N-dimensional block embedding.

    Uses C = diag(A, B) and L = [[0, K], [0, 0]]; the embedded inner matrix
    carries N structural zero eigenvalues, so the outer trace power runs over
    the support.  Valid for s > 0; an independent code path used to
    cross-check :func:`psi`.
    """
    if pt.s <= 0:
        raise ValueError("block embedding cross-check requires s > 0")
    a = as_complex_matrix(a, square=True)
    b = as_complex_matrix(b, square=True)
    k = as_complex_matrix(k, square=True)
    n = a.shape[0]
    c = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    c[:n, :n] = a
    c[n:, n:] = b
    ell = np.zeros_like(c)
    ell[:n, n:] = k
    inner = _inner_matrix(c, c, ell, pt.p, pt.q, allow_singular=True)
    return _trace_power(inner, pt.s, allow_singular=True)


def upsilon(a, k, p: float, s: float, *, allow_singular: bool = False) -> float:
    """Tr (K* A^p K)^s, i.e. the two-argument functional at B = identity."""
    k = as_complex_matrix(k)
    ap = matrix_power(a, p, support_zero=allow_singular)
    inner = hermitian_part(k.conj().T @ ap @ k)
    return _trace_power(inner, s, allow_singular=allow_singular)


def d_alpha_z(rho, sigma, alpha: float, z: float) -> float:
    """The alpha-z Renyi relative entropy, in nats.

    (alpha - 1)^{-1} ln [ Tr (sigma^{(1-alpha)/(2z)} rho^{alpha/z}
    sigma^{(1-alpha)/(2z)})^z / Tr rho ].

    Support violations return +inf: a second argument singular to the floor
    while alpha > 1, or disjoint supports while alpha < 1.
    """
    alpha = float(alpha)
    z = float(z)
    if alpha <= 0 or alpha == 1:
        raise ValueError("alpha must be positive and != 1")
    if z <= 0:
        raise ValueError("z must be positive")
    pt = ParamPoint.from_alpha_z(alpha, z)
    allow = alpha < 1  # the sigma power is then positive, singular sigma is fine
    try:
        value = psi(rho, sigma, np.eye(np.asarray(rho).shape[0]), pt, allow_singular=allow)
    except DomainError:
        return math.inf
    tr_rho = float(np.trace(np.asarray(rho)).real)
    if value <= 0.0:
        return math.inf
    return math.log(value / tr_rho) / (alpha - 1.0)


def d_renyi(rho, sigma, alpha: float) -> float:
    """The standard quantum Renyi relative entropy (the z = 1 member)."""
    return d_alpha_z(rho, sigma, alpha, 1.0)


def d_sandwiched(rho, sigma, alpha: float) -> float:
    """The sandwiched Renyi relative entropy (the z = alpha member)."""
    return d_alpha_z(rho, sigma, alpha, alpha)


def _support_mass_outside(w_rho, overlap, dead_cols) -> float:
    if not np.any(dead_cols):
        return 0.0
    return float(np.sum(w_rho[:, None] * overlap[:, dead_cols]))


def umegaki(rho, sigma) -> float:
    """Umegaki relative entropy Tr[rho (log rho - log sigma)].

    0 log 0 = 0 on the kernel of rho; +inf when rho has mass outside the
    support of sigma.
    """
    tol = get_tolerances()
    wr, vr = np.linalg.eigh(hermitian_part(rho))
    ws, vs = np.linalg.eigh(hermitian_part(sigma))
    wr = np.clip(wr, 0.0, None)
    plogp = float(np.sum(wr[wr > 0] * np.log(wr[wr > 0])))
    overlap = np.abs(vr.conj().T @ vs) ** 2  # overlap[i, j] = |<r_i|s_j>|^2
    dead = ws < tol.psd_floor
    if _support_mass_outside(wr, overlap, dead) > tol.psd_floor:
        return math.inf
    live = ~dead
    cross = float(np.sum((wr[:, None] * overlap[:, live]) * np.log(ws[live])[None, :]))
    return plogp - cross


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr[rho log rho], with the 0 log 0 = 0 convention."""
    w = np.clip(np.linalg.eigvalsh(hermitian_part(rho)), 0.0, None)
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def bs_entropy(rho, sigma) -> float:
    """Belavkin-Staszewski entropy Tr[rho log(rho^{1/2} sigma^{-1} rho^{1/2})].

    Requires sigma to clear the positive-definite floor (+inf otherwise); rho
    may be singular, in which case the logarithm acts on the support of the
    inner matrix, which coincides with the support of rho.
    """
    try:
        sigma_inv = matrix_power(sigma, -1.0)
    except DomainError:
        return math.inf
    sqrt_rho = matrix_power(rho, 0.5)
    m = hermitian_part(sqrt_rho @ sigma_inv @ sqrt_rho)
    log_m = matrix_function(m, np.log, support_zero=True)
    rho = hermitian_part(rho)
    return float(np.trace(rho @ log_m).real)


def hiai_concavity_functional(a, b, k, p: float, q: float, t: float) -> float:
    """Tr (1 + t M^{-1/(p+q)})^{-1} with M = B^{q/2} K* A^p K B^{q/2}.

    Defined for 0 <= p, q <= 1 with p + q > 0, t > 0 and invertible K; this is
    the jointly concave building block whose t-scaling and power-integral
    representation recover the concavity of the s <= 1/(p+q) trace powers.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("p and q must lie in [0, 1]")
    if p + q <= 0.0:
        raise ValueError("p + q must be positive")
    if t <= 0.0:
        raise ValueError("t must be positive")
    tol = get_tolerances()
    inner = _inner_matrix(a, b, k, p, q, allow_singular=False)
    w = np.linalg.eigvalsh(inner)
    if float(w.min()) < tol.psd_floor:
        raise DomainError(
            f"inner matrix eigenvalue {float(w.min()):.3e} below floor; "
            "K must be invertible"
        )
    return float(np.sum(1.0 / (1.0 + t * w ** (-1.0 / (p + q)))))


def _as_prob_vector(r) -> np.ndarray:
    v = np.asarray(r, dtype=float)
    if v.ndim != 1:
        raise ValueError("probability vector must be 1-d")
    if np.any(v < 0):
        raise ValueError("probabilities must be nonnegative")
    if abs(float(v.sum()) - 1.0) > get_tolerances().density_trace_atol:
        raise ValueError(f"probabilities sum to {float(v.sum())!r}, not 1")
    return v


def classical_relative_entropy(r, s) -> float:
    """Kullback-Leibler divergence sum r_i (ln r_i - ln s_i), in nats."""
    rv = _as_prob_vector(r)
    sv = _as_prob_vector(s)
    if rv.shape != sv.shape:
        raise ValueError("vectors must have the same length")
    live = rv > 0
    if np.any(sv[live] == 0):
        return math.inf
    return float(np.sum(rv[live] * (np.log(rv[live]) - np.log(sv[live]))))


def classical_renyi(r, s, alpha: float) -> float:
    """Classical alpha-Renyi divergence (alpha-1)^{-1} ln sum r^alpha s^{1-alpha}."""
    alpha = float(alpha)
    if alpha <= 0 or alpha == 1:
        raise ValueError("alpha must be positive and != 1")
    rv = _as_prob_vector(r)
    sv = _as_prob_vector(s)
    if rv.shape != sv.shape:
        raise ValueError("vectors must have the same length")
    if alpha > 1:
        live = rv > 0
        if np.any(sv[live] == 0):
            return math.inf
        total = float(np.sum(rv[live] ** alpha * sv[live] ** (1.0 - alpha)))
    else:
        live = (rv > 0) & (sv > 0)
        total = float(np.sum(rv[live] ** alpha * sv[live] ** (1.0 - alpha)))
        if total == 0.0:
            return math.inf
    return math.log(total) / (alpha - 1.0)
