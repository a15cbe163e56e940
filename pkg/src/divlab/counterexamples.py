"""Certified convexity/concavity violations from explicit witness families.

The one-argument family uses diagonal matrices together with the near-singular
contraction K = [[1, 0], [1, eps]], whose eps -> 0 limit collapses
Tr (K* A^p K)^s to the scalar map (a, b) -> (a^p + b^p)^s; the generator scans
a log grid of diagonal entries, but the certified inequality is always the
full matrix midpoint test at finite eps, never the scalar limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .divergences import psi, upsilon
from .linalg import matrix_from_json, matrix_to_json
from .params import ParamPoint
from .tolerances import get_tolerances

__all__ = [
    "CounterexampleReport",
    "counterexample_psi",
    "counterexample_upsilon",
    "reevaluate_psi_witness",
    "reevaluate_upsilon_witness",
]

DEFAULT_GRID = tuple(10.0**k for k in range(-3, 2))
DEFAULT_EPS = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class CounterexampleReport:
    family: str
    direction: str
    params: dict
    grid_size: int
    found: bool
    margin: float
    witness: dict | None
    certified: bool
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "direction": self.direction,
            "params": self.params,
            "grid_size": self.grid_size,
            "found": self.found,
            "margin": self.margin,
            "witness": self.witness,
            "certified": self.certified,
            "metadata": self.metadata,
        }


def _eps_contraction(eps: float) -> np.ndarray:
    return np.array([[1.0, 0.0], [1.0, eps]], dtype=np.complex128)


def _margin(direction: str, f_mid: float, f_avg: float) -> float:
    return (f_mid - f_avg) if direction == "convex" else (f_avg - f_mid)


def reevaluate_upsilon_witness(witness: dict) -> float:
    p = witness["p"]
    s = witness["s"]
    k = matrix_from_json(witness["k"])
    a0 = matrix_from_json(witness["a0"])
    a1 = matrix_from_json(witness["a1"])
    f0 = upsilon(a0, k, p, s)
    f1 = upsilon(a1, k, p, s)
    fm = upsilon((a0 + a1) / 2, k, p, s)
    return _margin(witness["direction"], fm, 0.5 * (f0 + f1))


def counterexample_upsilon(
    p: float,
    s: float,
    direction: str,
    *,
    eps_values: tuple[float, ...] = DEFAULT_EPS,
    grid: tuple[float, ...] = DEFAULT_GRID,
) -> CounterexampleReport:
    """Search the eps-contraction witness family for a midpoint violation.

    Scans A_i = diag(a_i, b_i) with entries from the log grid and
    K = [[1, 0], [1, eps]], certifying a violation of the requested direction
    when the midpoint margin exceeds the absolute certification threshold
    (with a relative guard against rounding at large scales).  Finding
    nothing is a report, not an assertion that the point is safe.
    """
    if direction not in ("convex", "concave"):
        raise ValueError("direction must be 'convex' or 'concave'")
    tol = get_tolerances()
    best_margin = -math.inf
    best_witness = None
    n_tested = 0
    for eps in eps_values:
        k = _eps_contraction(eps)
        values = {}
        for a, b in product(grid, repeat=2):
            values[(a, b)] = upsilon(np.diag([a, b]).astype(complex), k, p, s)
        for (a0, b0), (a1, b1) in product(values.keys(), repeat=2):
            if (a0, b0) >= (a1, b1):
                continue  # midpoint test is symmetric in the endpoints
            n_tested += 1
            f0 = values[(a0, b0)]
            f1 = values[(a1, b1)]
            mid = np.diag([(a0 + a1) / 2, (b0 + b1) / 2]).astype(complex)
            fm = upsilon(mid, k, p, s)
            margin = _margin(direction, fm, 0.5 * (f0 + f1))
            if margin > best_margin:
                best_margin = margin
                best_witness = {
                    "kind": "upsilon_midpoint",
                    "family": "eps-contraction",
                    "direction": direction,
                    "p": p,
                    "s": s,
                    "eps": eps,
                    "k": matrix_to_json(k),
                    "a0": matrix_to_json(np.diag([a0, b0]).astype(complex)),
                    "a1": matrix_to_json(np.diag([a1, b1]).astype(complex)),
                    "margin": margin,
                    "scale": max(1.0, abs(f0), abs(f1)),
                }
    threshold = max(
        tol.counterexample_margin,
        tol.probe_violation_rel * (best_witness["scale"] if best_witness else 1.0),
    )
    found = best_witness is not None and best_margin > threshold
    certified = False
    if found:
        replay = reevaluate_upsilon_witness(best_witness)
        certified = (
            abs(replay - best_margin) <= tol.witness_repro_tol * max(1.0, abs(best_margin))
            and replay > threshold
        )
    return CounterexampleReport(
        family="upsilon",
        direction=direction,
        params={"p": p, "s": s},
        grid_size=n_tested,
        found=found,
        margin=best_margin if best_witness else 0.0,
        witness=best_witness if found else None,
        certified=certified,
        metadata={
            "eps_values": list(eps_values),
            "grid": list(grid),
            "threshold": threshold,
        },
    )


def reevaluate_psi_witness(witness: dict) -> float:
    pt = ParamPoint.from_pqs(witness["p"], witness["q"], witness["s"])
    k = matrix_from_json(witness["k"])
    a0 = matrix_from_json(witness["a0"])
    a1 = matrix_from_json(witness["a1"])
    b0 = matrix_from_json(witness["b0"])
    b1 = matrix_from_json(witness["b1"])
    f0 = psi(a0, b0, k, pt)
    f1 = psi(a1, b1, k, pt)
    fm = psi((a0 + a1) / 2, (b0 + b1) / 2, k, pt)
    return _margin(witness["direction"], fm, 0.5 * (f0 + f1))


def counterexample_psi(
    p: float,
    q: float,
    s: float,
    direction: str,
    *,
    grid: tuple[float, ...] = DEFAULT_GRID,
) -> CounterexampleReport:
    """Scalar-pair witness search for the two-argument functional.

    In the mixed-sign region the scalar reduction (a, b) -> (a^p b^q)^s
    already carries the violation, so the witnesses are isotropic 2x2 pairs
    A_i = a_i I, B_i = b_i I with K = I; the certified inequality is the
    matrix midpoint test.
    """
    if direction not in ("convex", "concave"):
        raise ValueError("direction must be 'convex' or 'concave'")
    tol = get_tolerances()
    pt = ParamPoint.from_pqs(p, q, s)
    eye = np.eye(2, dtype=np.complex128)
    best_margin = -math.inf
    best_witness = None
    n_tested = 0
    values = {}
    for a, b in product(grid, repeat=2):
        values[(a, b)] = psi(a * eye, b * eye, eye, pt)
    for (a0, b0), (a1, b1) in product(values.keys(), repeat=2):
        if (a0, b0) >= (a1, b1):
            continue
        n_tested += 1
        f0 = values[(a0, b0)]
        f1 = values[(a1, b1)]
        fm = psi((a0 + a1) / 2 * eye, (b0 + b1) / 2 * eye, eye, pt)
        margin = _margin(direction, fm, 0.5 * (f0 + f1))
        if margin > best_margin:
            best_margin = margin
            best_witness = {
                "kind": "psi_midpoint",
                "family": "scalar-pairs",
                "direction": direction,
                "p": p,
                "q": q,
                "s": s,
                "k": matrix_to_json(eye),
                "a0": matrix_to_json(a0 * eye),
                "a1": matrix_to_json(a1 * eye),
                "b0": matrix_to_json(b0 * eye),
                "b1": matrix_to_json(b1 * eye),
                "margin": margin,
                "scale": max(1.0, abs(f0), abs(f1)),
            }
    threshold = max(
        tol.counterexample_margin,
        tol.probe_violation_rel * (best_witness["scale"] if best_witness else 1.0),
    )
    found = best_witness is not None and best_margin > threshold
    certified = False
    if found:
        replay = reevaluate_psi_witness(best_witness)
        certified = (
            abs(replay - best_margin) <= tol.witness_repro_tol * max(1.0, abs(best_margin))
            and replay > threshold
        )
    return CounterexampleReport(
        family="psi",
        direction=direction,
        params={"p": p, "q": q, "s": s},
        grid_size=n_tested,
        found=found,
        margin=best_margin if best_witness else 0.0,
        witness=best_witness if found else None,
        certified=certified,
        metadata={"grid": list(grid), "threshold": threshold},
    )
