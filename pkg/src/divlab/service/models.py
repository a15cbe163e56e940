"""Pydantic request/response models for the divlab service.

Every request model rejects unknown fields and carries a versioned schema
field, so long-lived sweep configs cannot drift silently.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AxisRange(StrictModel):
    start: float
    stop: float
    steps: int = Field(ge=1)


Axis = AxisRange | list[float]


class PointRequest(StrictModel):
    """A (p, q, s) triple, or an (alpha, z) pair mapped onto the s = 1/(p+q) slice."""

    schema_version: Literal[1] = 1
    p: float | None = None
    q: float | None = None
    s: float | None = None
    alpha: float | None = None
    z: float | None = None

    @model_validator(mode="after")
    def _one_chart(self):
        has_pqs = self.p is not None and self.q is not None and self.s is not None
        has_az = self.alpha is not None and self.z is not None
        if has_pqs == has_az:
            raise ValueError("provide exactly one of (p, q, s) or (alpha, z)")
        return self


class ClassifyResponse(StrictModel):
    kind: str
    citation: str
    p: float
    q: float
    s: float
    normalized_p: float
    normalized_q: float
    normalized_s: float


class ClassifyUpsilonRequest(StrictModel):
    schema_version: Literal[1] = 1
    p: float
    s: float


class ClassifyUpsilonResponse(StrictModel):
    kind: str
    citation: str
    p: float
    s: float


class ProbeRequest(PointRequest):
    functional: Literal["psi", "hiai"] = "psi"
    direction: Literal["auto", "convex", "concave"] = "auto"
    dim: int = Field(default=3, ge=2)
    samples: int = Field(default=200, ge=1)
    seed: int = 0
    # sub-stream path under the master seed; sweeps use (point_index,
    # dim_index), so any sweep row can be re-derived by a single probe call
    path: list[int] = []
    k_mode: Literal["identity", "haar", "ginibre"] = "identity"
    theta: float = Field(default=0.5, gt=0.0, lt=1.0)
    spectrum: tuple[float, float] = (0.1, 10.0)
    t: float | None = None  # hiai scale parameter


class ProbeResponse(StrictModel):
    direction: str
    dim: int
    samples: int
    seed: int
    worst_margin: float
    violations: int
    witness: dict | None
    skipped_infinite: int
    metadata: dict
    label: str | None = None
    citation: str | None = None


class DpiRequest(StrictModel):
    schema_version: Literal[1] = 1
    alpha: float
    z: float
    dim: int = Field(default=2, ge=2)
    n_channels: int = Field(default=20, ge=1)
    n_state_pairs: int = Field(default=20, ge=1)
    seed: int = 0


class SweepConfig(StrictModel):
    """Config-file schema for grid sweeps (also the /sweep request body)."""

    schema_version: Literal[1] = 1
    kind: Literal["psi", "alpha_z"] = "psi"
    p: Axis | None = None
    q: Axis | None = None
    s: Axis | None = None
    alpha: Axis | None = None
    z: Axis | None = None
    dims: list[int] = [2]
    samples: int = Field(default=100, ge=1)
    seed: int = 0
    k_mode: Literal["identity", "haar", "ginibre"] = "identity"
    spectrum: tuple[float, float] = (0.1, 10.0)
    theta: float = Field(default=0.5, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _axes_for_kind(self):
        if self.kind == "psi":
            missing = [n for n in ("p", "q", "s") if getattr(self, n) is None]
        else:
            missing = [n for n in ("alpha", "z") if getattr(self, n) is None]
        if missing:
            raise ValueError(f"{self.kind} sweep config is missing axes: {missing}")
        return self


class SweepResponse(StrictModel):
    csv: str
    rows: int
    witnesses: list[dict]
    contradiction: dict | None = None
    metadata: dict


class SteinRequest(StrictModel):
    schema_version: Literal[1] = 1
    r: list[float]
    s: list[float]
    epsilon: float = Field(gt=0.0, lt=1.0)
    n_values: list[int]


class SteinResponse(StrictModel):
    csv: str
    rows: list[dict]


class CounterexampleRequest(StrictModel):
    schema_version: Literal[1] = 1
    family: Literal["upsilon", "psi"] = "upsilon"
    p: float
    q: float | None = None
    s: float
    direction: Literal["convex", "concave"]

    @model_validator(mode="after")
    def _q_for_psi(self):
        if self.family == "psi" and self.q is None:
            raise ValueError("the psi family needs a q exponent")
        return self


class CounterexampleResponse(StrictModel):
    family: str
    direction: str
    params: dict
    grid_size: int
    found: bool
    margin: float
    witness: dict | None
    certified: bool
    metadata: dict


class VerifyRequest(StrictModel):
    schema_version: Literal[1] = 1
    suites: list[str] | None = None  # None = all
    seed: int = 0


class SuiteOutcome(StrictModel):
    name: str
    passed: bool
    n_checks: int
    failures: list[str]


class VerifyResponse(StrictModel):
    suites: list[SuiteOutcome]
    passed: int
    total: int
    summary: str
