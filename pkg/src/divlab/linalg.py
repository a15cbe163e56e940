"""Dense complex linear algebra: validated matrix types, spectral calculus,
tensor products and partial traces.

All matrices are plain ``numpy.ndarray`` of dtype complex128 in row-major
order.  The validating constructors (``as_hermitian``, ``as_positive_definite``,
``as_density``, ``as_unitary``) enforce the type invariants and return the
canonicalized array; everything downstream is a pure function of its inputs.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .tolerances import get_tolerances

__all__ = [
    "DomainError",
    "Spectrum",
    "as_complex_matrix",
    "as_density",
    "as_hermitian",
    "as_positive_definite",
    "as_unitary",
    "commutator_norm",
    "eig_hermitian",
    "frobenius",
    "hermitian_part",
    "matrix_from_json",
    "matrix_function",
    "matrix_log",
    "matrix_power",
    "matrix_to_json",
    "min_eigenvalue",
    "partial_trace",
    "tensor",
]


class DomainError(ValueError):
    """An eigenvalue fell outside the domain of the requested scalar function."""


def as_complex_matrix(m, *, square: bool = False) -> np.ndarray:
    """Validate and return a finite complex matrix (C-ordered complex128 copy)."""
    a = np.array(m, dtype=np.complex128, order="C")
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian_part(m) -> np.ndarray:
    """(M + M*) / 2."""
    a = as_complex_matrix(m, square=True)
    return (a + a.conj().T) / 2


def as_hermitian(m, *, atol: float | None = None) -> np.ndarray:
    """Validate Hermiticity within ``atol`` entrywise and return (M + M*)/2."""
    a = as_complex_matrix(m, square=True)
    atol = get_tolerances().hermitian_atol if atol is None else atol
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.conj().T).max(initial=0.0) > atol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return (a + a.conj().T) / 2


def frobenius(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def commutator_norm(a, b) -> float:
    """Frobenius norm of [A, B] = AB - BA."""
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.linalg.norm(a @ b - b @ a))


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Columns of ``eigenvectors`` form the unitary V with M = V diag(w) V*.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(m) -> Spectrum:
    """Full eigendecomposition of a Hermitian matrix.

    Deterministic for a fixed input; eigenvalues are returned ascending.
    The reconstruction V diag(w) V* agrees with the input to within
    ``spectrum_rtol * dim * ||M||_F``.
    """
    a = hermitian_part(m)
    w, v = np.linalg.eigh(a)
    return Spectrum(eigenvalues=w, eigenvectors=v)


def min_eigenvalue(m) -> float:
    a = hermitian_part(m)
    return float(np.linalg.eigvalsh(a)[0])


def as_positive_definite(m, *, floor: float | None = None) -> np.ndarray:
    """Validate that all eigenvalues sit at or above the floor (default 1e-10).

    Construction rejects rather than clips: silently flooring a spectrum would
    corrupt convexity margins downstream.
    """
    floor = get_tolerances().psd_floor if floor is None else floor
    a = as_hermitian(m)
    lo = min_eigenvalue(a)
    if lo < floor:
        raise ValueError(
            f"matrix is not positive definite: min eigenvalue {lo:.3e} < floor {floor:.3e}"
        )
    return a


def as_density(m, *, allow_singular: bool = True) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, nonnegative spectrum.

    With ``allow_singular=False`` the spectrum must clear the positive-definite
    floor (needed e.g. as the second argument of divergences at alpha > 1).
    """
    tol = get_tolerances()
    a = as_hermitian(m)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > tol.density_trace_atol:
        raise ValueError(f"density matrix trace {tr!r} is not 1 within tolerance")
    lo = min_eigenvalue(a)
    if allow_singular:
        if lo < -tol.psd_floor:
            raise ValueError(f"density matrix has a negative eigenvalue {lo:.3e}")
    elif lo < tol.psd_floor:
        raise ValueError(f"density matrix is singular: min eigenvalue {lo:.3e}")
    return a


def as_unitary(m, *, tol: float | None = None) -> np.ndarray:
    """Validate ||U U* - I||_F within tolerance and return U."""
    tol = get_tolerances().unitary_tol if tol is None else tol
    a = as_complex_matrix(m, square=True)
    defect = np.linalg.norm(a @ a.conj().T - np.eye(a.shape[0]))
    if defect > tol:
        raise ValueError(f"matrix is not unitary: ||UU* - I||_F = {defect:.3e}")
    return a


def matrix_function(
    m,
    f: Callable[[np.ndarray], np.ndarray],
    *,
    domain_min: float | None = None,
    psd_clip: bool = False,
    support_zero: bool = False,
) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix by spectral calculus.

    Returns V diag(f(w)) V*, re-Hermitized.  Domain handling:

    - ``domain_min``: raise :class:`DomainError` if any (surviving) eigenvalue
      is below this floor.  Used for logs and negative powers.
    - ``psd_clip``: clip rounding-level negative eigenvalues to 0 first; a
      genuinely negative eigenvalue still raises.
    - ``support_zero``: eigenvalues within ``support_cutoff`` (relative) of 0
      map to 0 regardless of f, i.e. the 0^x := 0 support convention.
    """
    tol = get_tolerances()
    w, v = eig_hermitian(m)
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    kernel = np.zeros_like(w, dtype=bool)
    if support_zero:
        kernel = np.abs(w) <= tol.support_cutoff * scale
    if psd_clip:
        bad = (w < -tol.psd_clip_slack * scale) & ~kernel
        if np.any(bad):
            raise DomainError(
                f"eigenvalue {w[bad][0]:.3e} below the PSD clipping window"
            )
        w = np.where((w < 0) & ~kernel, 0.0, w)
    if domain_min is not None:
        bad = (w < domain_min) & ~kernel
        if np.any(bad):
            raise DomainError(
                f"eigenvalue {float(w[bad][0]):.3e} below the domain floor "
                f"{domain_min:.3e}; a positive definite input is required"
            )
    live = ~kernel
    fw = np.zeros_like(w)
    if np.any(live):
        fw[live] = np.asarray(f(w[live]), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainError("scalar function produced a non-finite value")
    out = (v * fw) @ v.conj().T
    return (out + out.conj().T) / 2


def matrix_power(m, p: float, *, support_zero: bool = False) -> np.ndarray:
    """M^p for Hermitian M by spectral calculus.

    Nonnegative non-integer powers clip rounding-level negatives; negative
    powers require the spectrum to clear the positive-definite floor (or use
    the support convention when ``support_zero`` is set).
    """
    tol = get_tolerances()
    if p == 0:
        a = as_complex_matrix(m, square=True)
        if support_zero:
            return matrix_function(a, lambda w: np.ones_like(w), support_zero=True)
        return np.eye(a.shape[0], dtype=np.complex128)
    if p == 1:
        return hermitian_part(m)
    if p < 0:
        return matrix_function(
            m,
            lambda w: w**p,
            domain_min=tol.psd_floor,
            support_zero=support_zero,
        )
    if float(p).is_integer():
        return matrix_function(m, lambda w: w**p, support_zero=support_zero)
    return matrix_function(m, lambda w: w**p, psd_clip=True, support_zero=support_zero)


def matrix_log(m, *, support_zero: bool = False) -> np.ndarray:
    """log M by spectral calculus; requires the spectrum to clear the floor."""
    return matrix_function(
        m, np.log, domain_min=get_tolerances().psd_floor, support_zero=support_zero
    )


def tensor(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply and (A x B)(C x D) = AC x BD."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace(m, factor: int, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one tensor factor of a matrix on C^n x C^m.

    ``factor`` names the factor that is removed (1 or 2), so that
    partial_trace(A x B, 2) = Tr(B) * A.
    """
    n, mm = dims
    a = as_complex_matrix(m, square=True)
    if a.shape[0] != n * mm:
        raise ValueError(f"dimension mismatch: {a.shape[0]} != {n}*{mm}")
    t = a.reshape(n, mm, n, mm)
    if factor == 2:
        return np.ascontiguousarray(np.einsum("iaja->ij", t))
    if factor == 1:
        return np.ascontiguousarray(np.einsum("iaib->ab", t))
    raise ValueError("factor must be 1 or 2")


def matrix_to_json(m) -> dict:
    """Serialize to the interchange format {"dim": n, "entries": [[re, im], ...]}.

    Entries are row-major.  Rectangular matrices carry "dim_rows"/"dim_cols"
    instead of "dim".
    """
    a = as_complex_matrix(m)
    entries = [[float(z.real), float(z.imag)] for z in a.ravel(order="C")]
    if a.shape[0] == a.shape[1]:
        return {"dim": a.shape[0], "entries": entries}
    return {"dim_rows": a.shape[0], "dim_cols": a.shape[1], "entries": entries}


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse the interchange format, validating shape and finiteness."""
    if "dim" in obj:
        rows = cols = int(obj["dim"])
    else:
        rows, cols = int(obj["dim_rows"]), int(obj["dim_cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(
            f"entry count {len(entries)} does not match shape {rows}x{cols}"
        )
    flat = np.array(
        [complex(re, im) for re, im in entries], dtype=np.complex128
    )
    return as_complex_matrix(flat.reshape(rows, cols))
