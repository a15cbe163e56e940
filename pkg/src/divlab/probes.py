"""Randomized convexity, concavity and data-processing probes.

A probe draws seeded random inputs, evaluates the functional at the endpoints
and the midpoint, and records the worst signed margin (positive = violation
of the claimed direction).  Witnesses carry everything needed to reproduce
the margin by re-evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .channels import KrausChannel, channel_from_json, channel_to_json, depolarizing, partial_trace_channel, random_cptp
from .divergences import d_alpha_z, hiai_concavity_functional, psi, psi_via_block_embedding
from .linalg import (
    as_complex_matrix,
    matrix_from_json,
    matrix_to_json,
    min_eigenvalue,
    tensor,
)
from .params import ParamPoint
from .rand import derive_rng, random_density, random_hermitian, random_positive_definite
from .tolerances import get_tolerances

__all__ = [
    "CrossCheckError",
    "JointFunctional",
    "LineProbe",
    "ProbeReport",
    "hiai_probe_functional",
    "monotonicity_equivalence_demo",
    "probe_dpi",
    "probe_joint",
    "probe_line_second_difference",
    "psi_probe_functional",
    "random_line_probe",
    "reevaluate_witness",
]

DEFAULT_SPECTRUM = (0.1, 10.0)


class CrossCheckError(RuntimeError):
    """Two independent evaluation routes of the same functional disagreed."""


@dataclass(frozen=True)
class JointFunctional:
    """A two-argument trace functional (A, B) -> R with JSON-able metadata."""

    name: str
    k: np.ndarray
    params: dict
    evaluate: Callable[[np.ndarray, np.ndarray], float]

    def metadata(self) -> dict:
        return {"name": self.name, "params": dict(self.params), "k": matrix_to_json(self.k)}


def psi_probe_functional(k, pt: ParamPoint) -> JointFunctional:
    k = as_complex_matrix(k)
    return JointFunctional(
        name="psi",
        k=k,
        params={"p": pt.p, "q": pt.q, "s": pt.s},
        evaluate=lambda a, b: psi(a, b, k, pt),
    )


def hiai_probe_functional(k, p: float, q: float, t: float) -> JointFunctional:
    k = as_complex_matrix(k)
    return JointFunctional(
        name="hiai",
        k=k,
        params={"p": p, "q": q, "t": t},
        evaluate=lambda a, b: hiai_concavity_functional(a, b, k, p, q, t),
    )


def _functional_from_metadata(meta: dict) -> JointFunctional:
    k = matrix_from_json(meta["k"])
    params = meta["params"]
    if meta["name"] == "psi":
        return psi_probe_functional(k, ParamPoint.from_pqs(params["p"], params["q"], params["s"]))
    if meta["name"] == "hiai":
        return hiai_probe_functional(k, params["p"], params["q"], params["t"])
    raise ValueError(f"unknown functional {meta['name']!r}")


def _signed_margin(direction: str, f_mid: float, f_avg: float) -> float:
    if direction == "convex":
        return f_mid - f_avg
    if direction == "concave":
        return f_avg - f_mid
    raise ValueError("direction must be 'convex' or 'concave'")


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of a randomized probe.

    ``worst_margin`` is signed: positive means the claimed direction was
    violated by that much at the witness inputs.  The witness reproduces the
    margin by re-evaluation (:func:`reevaluate_witness`).
    """

    direction: str
    dim: int
    samples: int
    seed: int
    worst_margin: float
    violations: int
    witness: dict | None
    skipped_infinite: int = 0
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "dim": self.dim,
            "samples": self.samples,
            "seed": self.seed,
            "worst_margin": self.worst_margin,
            "violations": self.violations,
            "witness": self.witness,
            "skipped_infinite": self.skipped_infinite,
            "metadata": self.metadata,
        }


def probe_joint(
    functional: JointFunctional,
    direction: str,
    dim: int,
    n_samples: int,
    seed: int,
    *,
    theta: float = 0.5,
    spectrum_range: tuple[float, float] = DEFAULT_SPECTRUM,
    path: tuple[int, ...] = (),
    cross_check_every: int = 10,
) -> ProbeReport:
    """Midpoint convexity/concavity probe over random positive definite inputs.

    Draws quadruples (A0, A1, B0, B1), compares F at the theta-mixture with
    the mixture of endpoint values, and flags margins above the relative
    violation threshold.  On every ``cross_check_every``-th sample the psi
    functional is additionally evaluated through the block embedding as an
    independent code path; disagreement raises :class:`CrossCheckError`.
    """
    tol = get_tolerances()
    if dim < 2:
        raise ValueError("dim must be >= 2")
    worst = -math.inf
    worst_witness = None
    violations = 0
    for i in range(n_samples):
        rng = derive_rng(seed, *path, i)
        a0 = random_positive_definite(dim, spectrum_range, rng)
        a1 = random_positive_definite(dim, spectrum_range, rng)
        b0 = random_positive_definite(dim, spectrum_range, rng)
        b1 = random_positive_definite(dim, spectrum_range, rng)
        am = (1 - theta) * a0 + theta * a1
        bm = (1 - theta) * b0 + theta * b1
        f0 = functional.evaluate(a0, b0)
        f1 = functional.evaluate(a1, b1)
        fm = functional.evaluate(am, bm)
        scale = max(1.0, abs(f0), abs(f1))
        margin = _signed_margin(direction, fm, (1 - theta) * f0 + theta * f1)
        if cross_check_every and i % cross_check_every == 0 and functional.name == "psi":
            pt = ParamPoint.from_pqs(**functional.params)
            if pt.s > 0:
                other = psi_via_block_embedding(am, bm, functional.k, pt)
                if abs(other - fm) > tol.block_embedding_tol * max(1.0, abs(fm)):
                    raise CrossCheckError(
                        f"block embedding disagrees with direct evaluation: "
                        f"{other!r} vs {fm!r}"
                    )
        if margin > tol.probe_violation_rel * scale:
            violations += 1
        if margin / scale > worst:
            worst = margin / scale
            worst_witness = {
                "kind": "joint_midpoint",
                "functional": functional.metadata(),
                "direction": direction,
                "theta": theta,
                "a0": matrix_to_json(a0),
                "a1": matrix_to_json(a1),
                "b0": matrix_to_json(b0),
                "b1": matrix_to_json(b1),
                "margin": margin,
                "scale": scale,
            }
    return ProbeReport(
        direction=direction,
        dim=dim,
        samples=n_samples,
        seed=seed,
        worst_margin=worst_witness["margin"] if worst_witness else 0.0,
        violations=violations,
        witness=worst_witness,
        metadata={
            "functional": functional.metadata(),
            "theta": theta,
            "spectrum_range": list(spectrum_range),
            "ensemble": "haar-conjugated uniform spectrum",
            "path": list(path),
        },
    )


@dataclass(frozen=True)
class LineProbe:
    """A segment xi -> (C + xi G, D + xi H) staying positive definite."""

    c: np.ndarray
    d: np.ndarray
    g: np.ndarray
    h: np.ndarray
    xi_values: np.ndarray

    def __post_init__(self):
        for xi in self.xi_values:
            for base, direction in ((self.c, self.g), (self.d, self.h)):
                if min_eigenvalue(base + xi * direction) <= get_tolerances().psd_floor:
                    raise ValueError(
                        f"segment leaves the positive definite cone at xi={xi}"
                    )


def random_line_probe(dim: int, seed, *, n_xi: int = 3) -> LineProbe:
    """A random line probe with unit-norm Hermitian directions.

    The xi window is sized from the smallest base eigenvalue so that the
    segment, including room for finite-difference offsets, stays inside the
    positive definite cone.
    """
    rng = derive_rng(seed)
    c = random_positive_definite(dim, (0.5, 2.0), rng)
    d = random_positive_definite(dim, (0.5, 2.0), rng)
    g = random_hermitian(dim, rng)
    h = random_hermitian(dim, rng)
    g = g / np.linalg.norm(g, 2)
    h = h / np.linalg.norm(h, 2)
    safe = 0.35 * min(min_eigenvalue(c), min_eigenvalue(d))
    xi = np.linspace(0.1 * safe, 0.8 * safe, n_xi)
    return LineProbe(c=c, d=d, g=g, h=h, xi_values=xi)


def probe_line_second_difference(
    functional: JointFunctional, line: LineProbe, h: float
) -> np.ndarray:
    """Centered second differences [F(xi-h) - 2 F(xi) + F(xi+h)] / h^2.

    For a genuinely concave functional the raw second difference is
    nonpositive for any step size, so the probe threshold only needs to absorb
    rounding noise, not truncation error.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    floor = get_tolerances().psd_floor

    def f(xi: float) -> float:
        return functional.evaluate(line.c + xi * line.g, line.d + xi * line.h)

    out = []
    for xi in np.asarray(line.xi_values, dtype=float):
        for probe_xi in (xi - h, xi + h):
            for base, direction in ((line.c, line.g), (line.d, line.h)):
                if min_eigenvalue(base + probe_xi * direction) <= floor:
                    raise ValueError(
                        f"positivity window violated at xi={probe_xi} (h={h})"
                    )
        out.append((f(xi - h) - 2.0 * f(xi) + f(xi + h)) / h**2)
    return np.array(out)


def _dpi_channel_pool(
    dim: int, n_channels: int, seed: int, path: tuple[int, ...]
) -> list[KrausChannel]:
    """A deterministic mix of Stinespring-random and depolarizing channels."""
    pool: list[KrausChannel] = []
    for j in range(n_channels):
        rng = derive_rng(seed, *path, 1000, j)
        if j % 4 == 3:
            lam = float(rng.uniform(0.0, 1.0))
            pool.append(depolarizing(dim, lam))
        else:
            env = 2 + j % dim
            pool.append(random_cptp(dim, env, rng))
    return pool


def probe_dpi(
    alpha: float,
    z: float,
    dim: int,
    n_channels: int,
    n_state_pairs: int,
    seed: int,
    *,
    path: tuple[int, ...] = (),
) -> ProbeReport:
    """Monotonicity probe: margin = D(E rho || E sigma) - D(rho || sigma).

    Evaluates every channel against every state pair; infinite divergences
    (support violations at the floor) are skipped and counted separately.
    """
    tol = get_tolerances()
    channels = _dpi_channel_pool(dim, n_channels, seed, path)
    pairs = []
    base_values = []
    for i in range(n_state_pairs):
        rng = derive_rng(seed, *path, 2000, i)
        rho = random_density(dim, dim, rng)
        sigma = random_density(dim, dim, rng)
        pairs.append((rho, sigma))
        base_values.append(d_alpha_z(rho, sigma, alpha, z))

    worst = -math.inf
    worst_witness = None
    violations = 0
    skipped = 0
    evaluated = 0
    for ci, ch in enumerate(channels):
        for pi, (rho, sigma) in enumerate(pairs):
            base = base_values[pi]
            if not math.isfinite(base):
                skipped += 1
                continue
            out = d_alpha_z(ch.apply(rho), ch.apply(sigma), alpha, z)
            if not math.isfinite(out):
                skipped += 1
                continue
            evaluated += 1
            margin = out - base
            scale = max(1.0, abs(base))
            if margin > tol.probe_violation_rel * scale:
                violations += 1
            if margin / scale > worst:
                worst = margin / scale
                worst_witness = {
                    "kind": "dpi_pair",
                    "alpha": alpha,
                    "z": z,
                    "channel": channel_to_json(ch),
                    "channel_index": ci,
                    "pair_index": pi,
                    "rho": matrix_to_json(rho),
                    "sigma": matrix_to_json(sigma),
                    "margin": margin,
                    "scale": scale,
                }
    return ProbeReport(
        direction="monotone",
        dim=dim,
        samples=evaluated,
        seed=seed,
        worst_margin=worst_witness["margin"] if worst_witness else 0.0,
        violations=violations,
        witness=worst_witness,
        skipped_infinite=skipped,
        metadata={
            "alpha": alpha,
            "z": z,
            "n_channels": n_channels,
            "n_state_pairs": n_state_pairs,
            "ensemble": "full-rank normalized Wishart states",
            "path": list(path),
        },
    )


def reevaluate_witness(witness: dict) -> float:
    """Recompute the margin recorded in a serialized witness.

    The reported ``worst_margin`` must be reproducible through this function
    within the witness reproducibility tolerance.
    """
    kind = witness["kind"]
    if kind == "joint_midpoint":
        functional = _functional_from_metadata(witness["functional"])
        theta = witness.get("theta", 0.5)
        a0 = matrix_from_json(witness["a0"])
        a1 = matrix_from_json(witness["a1"])
        b0 = matrix_from_json(witness["b0"])
        b1 = matrix_from_json(witness["b1"])
        f0 = functional.evaluate(a0, b0)
        f1 = functional.evaluate(a1, b1)
        fm = functional.evaluate(
            (1 - theta) * a0 + theta * a1, (1 - theta) * b0 + theta * b1
        )
        return _signed_margin(
            witness["direction"], fm, (1 - theta) * f0 + theta * f1
        )
    if kind == "dpi_pair":
        ch = channel_from_json(witness["channel"])
        rho = matrix_from_json(witness["rho"])
        sigma = matrix_from_json(witness["sigma"])
        base = d_alpha_z(rho, sigma, witness["alpha"], witness["z"])
        out = d_alpha_z(ch.apply(rho), ch.apply(sigma), witness["alpha"], witness["z"])
        return out - base
    if kind == "upsilon_midpoint":
        from .counterexamples import reevaluate_upsilon_witness

        return reevaluate_upsilon_witness(witness)
    if kind == "psi_midpoint":
        from .counterexamples import reevaluate_psi_witness

        return reevaluate_psi_witness(witness)
    if kind == "opconv_midpoint":
        from .verifiers import reevaluate_opconv_witness

        return reevaluate_opconv_witness(witness)
    raise ValueError(f"unknown witness kind {kind!r}")


def monotonicity_equivalence_demo(
    pt: ParamPoint, dim: int, seed: int, *, theta: float = 0.5
) -> dict:
    """Execute the block-state reduction tying DPI to joint convexity.

    Builds rho = (1-theta) rho0 (x) |up><up| + theta rho1 (x) |down><down|
    (same for sigma), applies the partial-trace channel over the qubit
    factor, and checks that the resulting DPI instance coincides, number for
    number, with the midpoint convexity instance for the same quadruple:
    on the s = 1/(p+q) slice the block functional splits exactly into the
    theta-mixture of the component values.
    """
    if not pt.on_alpha_z_slice:
        raise ValueError("the reduction lives on the s = 1/(p+q) slice")
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    rng = derive_rng(seed)
    rho0 = random_positive_definite(dim, DEFAULT_SPECTRUM, rng)
    rho1 = random_positive_definite(dim, DEFAULT_SPECTRUM, rng)
    sigma0 = random_positive_definite(dim, DEFAULT_SPECTRUM, rng)
    sigma1 = random_positive_definite(dim, DEFAULT_SPECTRUM, rng)

    up = np.diag([1.0, 0.0]).astype(np.complex128)
    down = np.diag([0.0, 1.0]).astype(np.complex128)
    rho = (1 - theta) * tensor(rho0, up) + theta * tensor(rho1, down)
    sigma = (1 - theta) * tensor(sigma0, up) + theta * tensor(sigma1, down)

    channel = partial_trace_channel(dim, 2, 2)
    eye_big = np.eye(2 * dim)
    eye = np.eye(dim)

    dpi_input_side = psi(rho, sigma, eye_big, pt, allow_singular=True)
    dpi_output_side = psi(
        channel.apply(rho), channel.apply(sigma), eye, pt, allow_singular=True
    )
    conv_mid = psi(
        (1 - theta) * rho0 + theta * rho1,
        (1 - theta) * sigma0 + theta * sigma1,
        eye,
        pt,
    )
    conv_avg = (1 - theta) * psi(rho0, sigma0, eye, pt) + theta * psi(
        rho1, sigma1, eye, pt
    )

    alpha, _ = pt.to_alpha_z()
    direction = "convex" if alpha > 1 else "concave"
    scale = max(1.0, abs(dpi_input_side), abs(conv_avg))
    agree_tol = 1e-10 * scale
    return {
        "theta": theta,
        "p": pt.p,
        "q": pt.q,
        "s": pt.s,
        "direction": direction,
        "dpi_input_side": dpi_input_side,
        "dpi_output_side": dpi_output_side,
        "convexity_mid": conv_mid,
        "convexity_avg": conv_avg,
        "output_equals_mid": bool(abs(dpi_output_side - conv_mid) <= agree_tol),
        "input_equals_avg": bool(abs(dpi_input_side - conv_avg) <= agree_tol),
        "dpi_margin": dpi_output_side - dpi_input_side,
        "convexity_margin": conv_mid - conv_avg,
        "margins_agree": bool(
            abs((dpi_output_side - dpi_input_side) - (conv_mid - conv_avg)) <= agree_tol
        ),
    }
