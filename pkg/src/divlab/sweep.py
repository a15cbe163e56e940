"""Grid sweeps over the phase diagram: classification plus probe per point.

Rows serialize to CSV with the fixed header
``p,q,s,label,citation,dim,samples,worst_margin,violations``; witnesses go to
JSON files named by content hash.  Identical (config, seed) inputs produce
byte-identical CSV because per-point sample streams are derived from the
master seed and the grid index, independent of evaluation order.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .params import ParamPoint
from .probes import ProbeReport, probe_joint, psi_probe_functional
from .rand import derive_rng, ginibre, random_haar_unitary
from .regions import RegionKind, RegionLabel, classify
from .tolerances import get_tolerances

__all__ = [
    "SweepContradiction",
    "SweepResult",
    "SweepRow",
    "axis_values",
    "rows_to_csv",
    "run_sweep",
    "witness_filename",
    "write_witness",
]

CSV_HEADER = "p,q,s,label,citation,dim,samples,worst_margin,violations"

# the fixed 200-point reference lattice used for oracle-soundness checks
REFERENCE_GRID = [
    (p, q, s)
    for p in (-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5)
    for q in (-1.0, -0.5, 0.0, 0.5, 1.0)
    for s in (0.25, 0.5, 1.0, 1.5, 2.0)
]


class SweepContradiction(RuntimeError):
    """A probe violated a Known-region label; the sweep is aborted.

    Tolerances are set so this is a hard numerics failure, not noise.  The
    offending witness rides on the exception for serialization.
    """

    def __init__(self, message: str, witness: dict, row: "SweepRow"):
        super().__init__(message)
        self.witness = witness
        self.row = row


@dataclass(frozen=True)
class SweepRow:
    p: float
    q: float
    s: float
    label: RegionLabel
    dim: int
    report: ProbeReport

    def to_csv(self) -> str:
        return ",".join(
            [
                repr(self.p),
                repr(self.q),
                repr(self.s),
                self.label.kind.value,
                self.label.citation,
                str(self.dim),
                str(self.report.samples),
                repr(self.report.worst_margin),
                str(self.report.violations),
            ]
        )


@dataclass
class SweepResult:
    rows: list[SweepRow]
    witnesses: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)


def rows_to_csv(rows) -> str:
    return "\n".join([CSV_HEADER, *(row.to_csv() for row in rows)]) + "\n"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True)


def witness_filename(witness: dict) -> str:
    digest = hashlib.sha256(canonical_json(witness).encode()).hexdigest()[:16]
    return f"witness-{digest}.json"


def write_witness(witness: dict, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, witness_filename(witness))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(witness))
        fh.write("\n")
    return path


def axis_values(spec) -> list[float]:
    """Materialize an axis: an explicit list or a {start, stop, steps} range."""
    if isinstance(spec, (list, tuple)):
        return [float(v) for v in spec]
    start, stop, steps = float(spec["start"]), float(spec["stop"]), int(spec["steps"])
    if steps < 1:
        raise ValueError("axis steps must be >= 1")
    if steps == 1:
        return [start]
    return [float(v) for v in np.linspace(start, stop, steps)]


def _direction_for(label: RegionLabel) -> str:
    if label.kind is RegionKind.CONCAVE_KNOWN:
        return "concave"
    return "convex"


def _probe_k(k_mode: str, dim: int, seed: int, index: int) -> np.ndarray:
    if k_mode == "identity":
        return np.eye(dim, dtype=np.complex128)
    if k_mode == "haar":
        return random_haar_unitary(dim, derive_rng(seed, 3000, index))
    if k_mode == "ginibre":
        return ginibre(dim, dim, derive_rng(seed, 3000, index))
    raise ValueError(f"unknown k_mode {k_mode!r}")


def run_sweep(
    points: list[tuple[float, float, float]],
    dims: list[int],
    samples: int,
    seed: int,
    *,
    k_mode: str = "identity",
    spectrum_range: tuple[float, float] = (0.1, 10.0),
    theta: float = 0.5,
) -> SweepResult:
    """Classify and probe every grid point at every dimension.

    Known-region points probe their own direction and must come back clean;
    a violation there aborts with :class:`SweepContradiction`.  Conjectured
    and unruled points probe the convex direction and simply report.
    """
    tol = get_tolerances()
    rows: list[SweepRow] = []
    witnesses: list[dict] = []
    for pi, (p, q, s) in enumerate(points):
        label = classify(p, q, s)
        direction = _direction_for(label)
        pt = ParamPoint.from_pqs(p, q, s)
        for di, dim in enumerate(dims):
            k = _probe_k(k_mode, dim, seed, pi)
            report = probe_joint(
                psi_probe_functional(k, pt),
                direction,
                dim,
                samples,
                seed,
                theta=theta,
                spectrum_range=spectrum_range,
                path=(pi, di),
            )
            row = SweepRow(p=p, q=q, s=s, label=label, dim=dim, report=report)
            rows.append(row)
            known = label.kind in (RegionKind.CONCAVE_KNOWN, RegionKind.CONVEX_KNOWN)
            if known and report.violations > 0:
                raise SweepContradiction(
                    f"probe contradicts {label} at (p={p}, q={q}, s={s}), dim {dim}: "
                    f"worst margin {report.worst_margin!r}",
                    witness=report.witness,
                    row=row,
                )
            if report.violations > 0 and report.witness is not None:
                witnesses.append(report.witness)
    return SweepResult(
        rows=rows,
        witnesses=witnesses,
        metadata={
            "seed": seed,
            "samples": samples,
            "dims": list(dims),
            "k_mode": k_mode,
            "spectrum_range": list(spectrum_range),
            "theta": theta,
            "violation_threshold_rel": tol.probe_violation_rel,
            "ensemble": "haar-conjugated uniform spectrum",
        },
    )


def grid_points_psi(p_axis, q_axis, s_axis) -> list[tuple[float, float, float]]:
    return [
        (p, q, s)
        for p in axis_values(p_axis)
        for q in axis_values(q_axis)
        for s in axis_values(s_axis)
    ]


def grid_points_alpha_z(alpha_axis, z_axis) -> list[tuple[float, float, float]]:
    points = []
    for alpha in axis_values(alpha_axis):
        for z in axis_values(z_axis):
            pt = ParamPoint.from_alpha_z(alpha, z)
            points.append((pt.p, pt.q, pt.s))
    return points
