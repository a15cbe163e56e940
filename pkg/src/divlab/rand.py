"""Seeded random matrix ensembles.

Every generator takes an explicit seed and is deterministic for a fixed seed.
Randomness comes from the counter-based Philox engine so per-point streams can
be derived from a master seed plus an index path, independent of scheduling
(:func:`derive_rng`).
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .linalg import as_complex_matrix

__all__ = [
    "derive_rng",
    "ginibre",
    "random_density",
    "random_haar_unitary",
    "random_hermitian",
    "random_positive_definite",
]

SeedLike = "int | Generator"


def derive_rng(seed, *path: int) -> Generator:
    """A Philox generator for (seed, path).

    Distinct paths under the same master seed give statistically independent
    streams, so sweeps can derive per-(point, sample) generators that do not
    depend on evaluation order.  Passing an existing Generator returns it
    unchanged (the path must then be empty).
    """
    if isinstance(seed, Generator):
        if path:
            raise ValueError("cannot derive a sub-stream from a live generator")
        return seed
    return Generator(Philox(SeedSequence(entropy=int(seed), spawn_key=tuple(path))))


def ginibre(rows: int, cols: int, seed) -> np.ndarray:
    """Complex Ginibre matrix: i.i.d. standard complex normal entries."""
    rng = derive_rng(seed)
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


def random_haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary.

    QR of a complex Ginibre sample, with the phases normalized so the
    triangular factor has positive real diagonal (which makes the Q factor
    Haar rather than merely unitary).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    g = ginibre(dim, dim, seed)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    phases = d / np.abs(d)
    return as_complex_matrix(q * phases[np.newaxis, :])


def random_hermitian(dim: int, seed) -> np.ndarray:
    """GUE-style Hermitian sample (G + G*)/2 with G complex Ginibre."""
    g = ginibre(dim, dim, seed)
    return (g + g.conj().T) / 2


def random_positive_definite(
    dim: int, spectrum_range: tuple[float, float], seed
) -> np.ndarray:
    """Haar conjugation of eigenvalues drawn uniformly from ``spectrum_range``.

    The range must sit strictly inside (0, inf); the output spectrum lies in
    the requested interval by construction.
    """
    lo, hi = float(spectrum_range[0]), float(spectrum_range[1])
    if not (0.0 < lo <= hi):
        raise ValueError(f"spectrum range must satisfy 0 < lo <= hi, got ({lo}, {hi})")
    rng = derive_rng(seed)
    eigs = rng.uniform(lo, hi, size=dim)
    u = random_haar_unitary(dim, rng)
    a = (u * eigs[np.newaxis, :]) @ u.conj().T
    return (a + a.conj().T) / 2


def random_density(dim: int, rank: int, seed) -> np.ndarray:
    """Normalized Wishart density matrix: G G* / Tr with G Ginibre of width rank."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must satisfy 1 <= rank <= dim, got {rank}")
    g = ginibre(dim, rank, seed)
    w = g @ g.conj().T
    w = (w + w.conj().T) / 2
    return w / float(np.trace(w).real)
