"""Central numerical tolerance configuration.

Every tolerance used anywhere in the package lives in one frozen record so
that probe thresholds, type invariants and identity checks are auditable and
consistent.  The defaults are loaded once at first use; the environment
variable ``DIVLAB_TOLERANCE_FILE`` may point to a JSON file overriding
individual fields.
"""

from __future__ import annotations

import dataclasses
import json
import os

_ENV_VAR = "DIVLAB_TOLERANCE_FILE"


@dataclasses.dataclass(frozen=True)
class Tolerances:
    # type invariants
    hermitian_atol: float = 1e-12         # max |M - M*| entrywise
    psd_floor: float = 1e-10              # eigenvalue floor for positive definite inputs
    density_trace_atol: float = 1e-12
    unitary_tol: float = 1e-10            # Frobenius, ||UU* - I||
    spectrum_rtol: float = 1e-9           # reconstruction, scaled by dim * ||M||_F

    # functional calculus
    matfun_tol: float = 1e-8              # round trips, power laws
    psd_clip_slack: float = 1e-8          # relative window for clipping rounding negatives
    support_cutoff: float = 1e-12         # relative cutoff for the 0^x := 0 convention

    # channels
    kraus_completeness_tol: float = 1e-10
    trace_preservation_tol: float = 1e-11
    twirl_idempotence_tol: float = 1e-12
    uhlmann_tol: float = 1e-9

    # probes
    probe_violation_rel: float = 1e-8     # relative margin counting as a violation
    witness_repro_tol: float = 1e-12
    second_diff_tol: float = 1e-6         # line second-difference slack, relative
    counterexample_margin: float = 1e-6   # absolute certified-violation threshold
    block_embedding_tol: float = 1e-10
    symmetry_tol: float = 1e-9
    tensor_property_tol: float = 1e-9
    commuting_reduction_tol: float = 1e-10
    unitary_invariance_tol: float = 1e-10
    degeneracy_tol: float = 1e-12         # d_alpha_z vs d_renyi / d_sandwiched

    # identity verifiers
    variational_attainment_tol: float = 1e-9
    variational_bound_tol: float = 1e-10
    lieb_thirring_slack: float = 1e-10
    opconv_floor_rel: float = 1e-8
    integral_rep_tol: float = 1e-6

    # stein / entropy gaps
    bs_gap_floor: float = 1e-10
    commutator_threshold: float = 1e-8

    # jacobi oracle
    jacobi_sweep_cap: int = 100
    jacobi_offdiag_rel: float = 1e-13


_active: Tolerances | None = None


def load_tolerances(path: str) -> Tolerances:
    """Build a Tolerances record from a JSON file of field overrides."""
    with open(path, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError("tolerance file must contain a JSON object")
    known = {f.name for f in dataclasses.fields(Tolerances)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown tolerance fields: {sorted(unknown)}")
    return Tolerances(**overrides)


def get_tolerances() -> Tolerances:
    """The process-wide tolerance record (read-only after first call)."""
    global _active
    if _active is None:
        path = os.environ.get(_ENV_VAR)
        _active = load_tolerances(path) if path else Tolerances()
    return _active
