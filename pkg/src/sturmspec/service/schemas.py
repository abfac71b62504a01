"""Request and response models for the service and CLI.

All request models reject unknown fields so a typo in a config file fails
loudly instead of silently running with defaults.  ``RunConfig`` is the
discriminated union over the ``command`` field; each command also maps to
one POST endpoint of the service.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from ..potential import DEFAULT_NODES, Potential, make_potential


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PotentialSpecModel(StrictModel):
    kind: Literal["const", "poly", "trig", "table", "bb"]
    params: dict = Field(default_factory=dict)
    interval: tuple[float, float] = (0.0, 1.0)
    nodes: int = Field(default=DEFAULT_NODES, ge=2)

    def build(self) -> Potential:
        return make_potential(
            {"kind": self.kind, "params": self.params, "interval": list(self.interval)},
            nodes=self.nodes,
        )


class ScanWindowModel(StrictModel):
    lo: float
    hi: float
    points: int = Field(default=200, ge=2)


class SpectrumConfig(StrictModel):
    command: Literal["spectrum"] = "spectrum"
    potential: PotentialSpecModel
    bc: Literal["D", "N", "DN", "ND", "P", "AP"]
    count: int = Field(default=6, ge=1)
    window_pad: float = Field(default=0.0, ge=0.0)
    steps: int | None = Field(default=None, ge=2)
    scan: ScanWindowModel | None = None


class CompareConfig(StrictModel):
    command: Literal["compare"] = "compare"
    potential: PotentialSpecModel
    bc_a: Literal["D", "N", "DN", "ND", "P", "AP"]
    bc_b: Literal["D", "N", "DN", "ND", "P", "AP"]
    count: int = Field(default=6, ge=1)
    exclude_zero: bool = False
    window_pad: float = Field(default=0.0, ge=0.0)


class VerifyConfig(StrictModel):
    command: Literal["verify"] = "verify"
    theorem: Literal["T1", "T2", "T5.1", "T5.2", "R5.4", "IDENT"]
    potential: PotentialSpecModel
    count: int = Field(default=6, ge=1)
    tolerances: dict[str, float] = Field(default_factory=dict)
    mu_samples: list[float] | None = None


class KernelConfig(StrictModel):
    command: Literal["kernel"] = "kernel"
    potential: PotentialSpecModel
    lattice: int = Field(default=400, ge=2)
    include_values: bool = False


class OracleConfig(StrictModel):
    command: Literal["oracle"] = "oracle"
    potential: PotentialSpecModel
    bc: Literal["D", "N", "DN", "ND", "P", "AP"]
    dim: int = Field(default=1000, ge=50)
    count: int = Field(default=6, ge=1)


class IdentitiesConfig(StrictModel):
    command: Literal["identities"] = "identities"
    potential: PotentialSpecModel
    mu_samples: list[float] | None = None


class TrajectoryConfig(StrictModel):
    command: Literal["trajectory"] = "trajectory"
    potential: PotentialSpecModel
    mu: float
    steps: int | None = Field(default=None, ge=2)


RunConfig = Annotated[
    Union[
        SpectrumConfig,
        CompareConfig,
        VerifyConfig,
        KernelConfig,
        OracleConfig,
        IdentitiesConfig,
        TrajectoryConfig,
    ],
    Field(discriminator="command"),
]


class EigenvalueModel(StrictModel):
    mu: float
    mult: int
    residual: float | None = None


class ScanDataModel(StrictModel):
    label: str
    mu: list[float]
    value: list[float]


class SpectrumResponse(StrictModel):
    bc: str
    count_requested: int
    eigenvalues: list[EigenvalueModel]
    scan: ScanDataModel | None = None


class PairModel(StrictModel):
    mu_a: float
    mu_b: float
    gap: float


class CompareResponse(StrictModel):
    bc_a: str
    bc_b: str
    pairs: list[PairModel]
    max_gap: float
    max_rel_gap: float
    count_compared: int
    excluded_a: list[float]
    excluded_b: list[float]


class TheoremReportModel(StrictModel):
    theorem_id: str
    verdict: str
    condition_residual: float
    spectral_gap: float | None
    tolerances: dict[str, float]
    potential_spec: str
    multiplicity_tally: dict[str, int] | None = None
    parity_defects: dict | None = None
    details: dict = Field(default_factory=dict)


class KernelResponse(StrictModel):
    lattice: int
    iterations: int
    final_update_norm: float
    sup_abs: float
    diagonal_boundary_residual: float
    values: list[tuple[float, float, float]] | None = None


class OracleResponse(StrictModel):
    bc: str
    dim: int
    shooting: list[EigenvalueModel]
    fd: list[EigenvalueModel]
    max_abs_gap: float


class IdentitiesResponse(StrictModel):
    rows: list[dict[str, float]]
    max_residual: float
    max_translation_residual: float


class TrajectoryResponse(StrictModel):
    mu: float
    steps: int
    wronskian_residual: float
    x: list[float]
    c: list[float]
    cp: list[float]
    s: list[float]
    sp: list[float]


class HealthResponse(StrictModel):
    status: str
    version: str


RESPONSE_TYPES = {
    "spectrum": SpectrumResponse,
    "compare": CompareResponse,
    "verify": TheoremReportModel,
    "kernel": KernelResponse,
    "oracle": OracleResponse,
    "identities": IdentitiesResponse,
    "trajectory": TrajectoryResponse,
}
