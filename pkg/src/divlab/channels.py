"""CPTP maps in Kraus form, structured channel constructions, and the exact
Haar-twirl identity used to reduce channel monotonicity to convexity."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    as_complex_matrix,
    as_density,
    matrix_from_json,
    matrix_to_json,
    tensor,
)
from .rand import derive_rng, random_haar_unitary
from .tolerances import get_tolerances

__all__ = [
    "KrausChannel",
    "channel_from_json",
    "channel_to_json",
    "depolarizing",
    "haar_twirl_second_factor",
    "partial_trace_channel",
    "random_cptp",
    "unitary_mixing",
    "verify_uhlmann_identity",
]


@dataclass(frozen=True)
class StinespringData:
    """Dilation metadata for channels built from a unitary on system x env."""

    unitary: np.ndarray
    env_dim: int
    env_state: np.ndarray  # tau on the environment, rank one by construction


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace preserving map sum_j K_j rho K_j*.

    Trace preservation (sum K_j* K_j = identity within tolerance) is checked
    at construction; complete positivity is automatic in Kraus form.
    """

    kraus_ops: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int
    dilation: StinespringData | None = field(default=None, compare=False)

    @classmethod
    def from_ops(cls, ops, dilation: StinespringData | None = None) -> "KrausChannel":
        mats = tuple(as_complex_matrix(k) for k in ops)
        if not mats:
            raise ValueError("a channel needs at least one Kraus operator")
        dim_out, dim_in = mats[0].shape
        for k in mats:
            if k.shape != (dim_out, dim_in):
                raise ValueError("all Kraus operators must share one shape")
        completeness = sum(k.conj().T @ k for k in mats)
        defect = np.linalg.norm(completeness - np.eye(dim_in))
        if defect > get_tolerances().kraus_completeness_tol:
            raise ValueError(
                f"Kraus operators are not trace preserving: "
                f"||sum K*K - I||_F = {defect:.3e}"
            )
        return cls(kraus_ops=mats, dim_in=dim_in, dim_out=dim_out, dilation=dilation)

    def apply(self, rho) -> np.ndarray:
        """sum_j K_j rho K_j*; preserves trace and positivity."""
        rho = as_complex_matrix(rho, square=True)
        if rho.shape[0] != self.dim_in:
            raise ValueError(
                f"state dimension {rho.shape[0]} does not match dim_in {self.dim_in}"
            )
        out = np.zeros((self.dim_out, self.dim_out), dtype=np.complex128)
        for k in self.kraus_ops:
            out += k @ rho @ k.conj().T
        return (out + out.conj().T) / 2


def depolarizing(dim: int, lam: float) -> KrausChannel:
    """rho -> (1 - lam) rho + lam * Tr(rho) I/dim for lam in [0, 1]."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    ops = [np.sqrt(1.0 - lam) * np.eye(dim, dtype=np.complex128)]
    if lam > 0.0:
        w = np.sqrt(lam / dim)
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim), dtype=np.complex128)
                e[i, j] = w
                ops.append(e)
    return KrausChannel.from_ops(ops)


def unitary_mixing(us) -> KrausChannel:
    """The uniform mixture rho -> (1/M) sum_j U_j rho U_j*."""
    us = [as_complex_matrix(u, square=True) for u in us]
    if not us:
        raise ValueError("need at least one unitary")
    m = len(us)
    return KrausChannel.from_ops([u / np.sqrt(m) for u in us])


def partial_trace_channel(n: int, m: int, factor: int) -> KrausChannel:
    """The channel tracing out one factor of C^n x C^m (factor = removed one)."""
    if factor == 2:
        ops = []
        for j in range(m):
            bra = np.zeros((1, m), dtype=np.complex128)
            bra[0, j] = 1.0
            ops.append(tensor(np.eye(n), bra))
        return KrausChannel.from_ops(ops)
    if factor == 1:
        ops = []
        for j in range(n):
            bra = np.zeros((1, n), dtype=np.complex128)
            bra[0, j] = 1.0
            ops.append(tensor(bra, np.eye(m)))
        return KrausChannel.from_ops(ops)
    raise ValueError("factor must be 1 or 2")


def random_cptp(dim: int, env_dim: int, seed) -> KrausChannel:
    """A random channel from a Haar Stinespring dilation.

    Draws a Haar unitary U on C^dim x C^env, fixes the rank-one environment
    state |0><0|, and returns the Kraus operators K_j = (I x <j|) U (I x |0>).
    The dilation is retained on the channel so the twirl identity stays
    checkable.
    """
    if env_dim < 1:
        raise ValueError("env_dim must be >= 1")
    rng = derive_rng(seed)
    u = random_haar_unitary(dim * env_dim, rng)
    tau = np.zeros((env_dim, env_dim), dtype=np.complex128)
    tau[0, 0] = 1.0
    # U reshaped as a 4-index tensor U[(i,a),(j,b)]; K_j[i, k] = U[(i,j),(k,0)]
    ut = u.reshape(dim, env_dim, dim, env_dim)
    ops = [np.ascontiguousarray(ut[:, j, :, 0]) for j in range(env_dim)]
    dil = StinespringData(unitary=u, env_dim=env_dim, env_state=tau)
    return KrausChannel.from_ops(ops, dilation=dil)


def haar_twirl_second_factor(y, dims: tuple[int, int]) -> np.ndarray:
    """Exact average of (1 x u) Y (1 x u*) over Haar-random u on the second factor.

    Computed blockwise in closed form: each m x m block B_kl of Y becomes
    (Tr B_kl / m) I_m.  No Monte Carlo is involved.
    """
    n, m = dims
    y = as_complex_matrix(y, square=True)
    if y.shape[0] != n * m:
        raise ValueError(f"dimension mismatch: {y.shape[0]} != {n}*{m}")
    t = y.reshape(n, m, n, m)
    block_traces = np.einsum("kala->kl", t) / m
    return tensor(block_traces, np.eye(m))


def verify_uhlmann_identity(channel: KrausChannel, rho, tol: float | None = None) -> bool:
    """Check E(rho) x I/env = twirl of U (rho x tau) U* for a dilated channel.

    Both sides are computed independently: the left through the Kraus action,
    the right through the closed-form twirl of the explicit dilation.
    """
    if channel.dilation is None:
        raise ValueError("channel carries no dilation metadata")
    tol = get_tolerances().uhlmann_tol if tol is None else tol
    rho = as_density(rho)
    dil = channel.dilation
    env = dil.env_dim
    dim = channel.dim_in
    lifted = dil.unitary @ tensor(rho, dil.env_state) @ dil.unitary.conj().T
    rhs = haar_twirl_second_factor(lifted, (dim, env))
    lhs = tensor(channel.apply(rho), np.eye(env) / env)
    return bool(np.linalg.norm(lhs - rhs) <= tol)


def channel_to_json(channel: KrausChannel) -> dict:
    """Serialize to {"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}."""
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [matrix_to_json(k) for k in channel.kraus_ops],
    }


def channel_from_json(obj: dict) -> KrausChannel:
    ch = KrausChannel.from_ops([matrix_from_json(k) for k in obj["kraus"]])
    if ch.dim_in != int(obj["dim_in"]) or ch.dim_out != int(obj["dim_out"]):
        raise ValueError("declared channel dimensions do not match the operators")
    return ch
