"""
qslkit Domain Models
Parameter blocks, reports and scan configuration shared by services and commands.
"""

import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qslkit import config

# Numerical slack on the Bloch-ball constraint
BLOCH_SLACK = 1e-12


class ChannelKind(str, Enum):
    JC = "jc"
    DEPHASING = "dephasing"


class DynamicsMode(str, Enum):
    EXACT = "exact"
    IDEAL_MARKOV = "ideal_markov"


class OutputFormat(str, Enum):
    CSV = "csv"
    PLOTDATA = "plotdata"


class Branch(str, Enum):
    """Which bound sets the unified speed-limit time."""
    ML = "ML"
    MT = "MT"


class BlochVector(BaseModel):
    """Real 3-vector (v_x, v_y, v_z) parameterizing a qubit state."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    v_x: float = 0.0
    v_y: float = 0.0
    v_z: float = 0.0

    @model_validator(mode="after")
    def _check_inside_ball(self) -> "BlochVector":
        if self.squared_norm > 1.0 + BLOCH_SLACK:
            raise ValueError(
                f"Bloch vector norm {math.sqrt(self.squared_norm):.15g} exceeds 1"
            )
        return self

    @property
    def squared_norm(self) -> float:
        return self.v_x ** 2 + self.v_y ** 2 + self.v_z ** 2

    @property
    def norm(self) -> float:
        return math.sqrt(self.squared_norm)

    @classmethod
    def from_coherence(cls, coh: float, v_z: float = 0.0) -> "BlochVector":
        """Phase-free vector (sqrt(C), 0, v_z) with coherence C = v_x^2 + v_y^2."""
        if coh < 0.0:
            raise ValueError(f"Coherence must be non-negative, got {coh}")
        return cls(v_x=math.sqrt(coh), v_y=0.0, v_z=v_z)

    @classmethod
    def parse(cls, text: str) -> "BlochVector":
        """Parse 'vx,vy,vz'."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"Expected 'vx,vy,vz', got '{text}'")
        v_x, v_y, v_z = (float(p) for p in parts)
        return cls(v_x=v_x, v_y=v_y, v_z=v_z)


class DampedJCParams(BaseModel):
    """
    Damped Jaynes-Cummings parameters.

    omega0 is kept for the Lorentzian spectrum only; the resonant reduced
    dynamics never reads it.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True, allow_inf_nan=False)

    gamma0: float = Field(default=0.1, gt=0)
    lam: float = Field(default=1.0, gt=0, alias="lambda")
    omega0: float = 1.0


class OhmicParams(BaseModel):
    """Ohmic-family spectral density J(w) = eta w^s / wc^(s-1) e^(-w/wc)."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    eta: float = Field(default=1.0, gt=0)
    s: float = Field(default=1.0, gt=0)
    omega_c: float = Field(default=1.0, gt=0)
    # Convention multiplier on the decoherence exponent; 2 gives the printed s=1 formula
    kappa: float = Field(default=1.0, gt=0)


class UnruhParams(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    a: float = Field(gt=0)
    varpi: float = Field(default=1.0, gt=0)
    c: float = Field(default=1.0, gt=0)


class QuadratureSpec(BaseModel):
    """Tolerances and depth budget for the adaptive quadrature."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    abs_tol: float = Field(default=config.ABS_TOL, gt=0)
    rel_tol: float = Field(default=config.REL_TOL, gt=0)
    max_depth: int = Field(default=config.MAX_DEPTH, ge=1)

    @property
    def limit(self) -> int:
        """Subinterval budget: bisection to max_depth yields at most 2**max_depth leaves."""
        return min(2 ** min(self.max_depth, 30), 10_000)


class UniformGrid(BaseModel):
    """Closed grid start, start+step, ..., <= stop."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    start: float = Field(default=0.0, ge=0)
    stop: float = 20.0
    step: float = Field(default=0.02, gt=0)

    @model_validator(mode="after")
    def _check_order(self) -> "UniformGrid":
        if self.start > self.stop:
            raise ValueError(f"Grid start {self.start} is after stop {self.stop}")
        return self

    @classmethod
    def parse(cls, text: str) -> "UniformGrid":
        """Parse 'start:stop:step'."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Expected 'start:stop:step', got '{text}'")
        start, stop, step = (float(p) for p in parts)
        return cls(start=start, stop=stop, step=step)

    def points(self) -> List[float]:
        # Index-based so that no rounding accumulates along the grid
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]


class SpeedLimitReport(BaseModel):
    """Unified ML/MT speed-limit evaluation for one window [tau, tau + tau_d]."""
    model_config = ConfigDict(frozen=True)

    tau: float
    tau_d: float
    numerator: float
    d_ml: float
    d_ml_loose: float
    d_mt: float
    tau_qsl: float
    dominant: Branch
    degenerate: bool


class ScanConfig(BaseModel):
    """One tau-sweep: model block, initial state, grid, window and output target."""
    model_config = ConfigDict(frozen=True)

    channel: ChannelKind = ChannelKind.JC
    jc: DampedJCParams = Field(default_factory=DampedJCParams)
    ohmic: OhmicParams = Field(default_factory=OhmicParams)
    v0: BlochVector = Field(default_factory=lambda: BlochVector(v_z=-1.0))
    tau_grid: UniformGrid = Field(default_factory=UniformGrid)
    tau_d: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    mode: DynamicsMode = DynamicsMode.EXACT
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    output_path: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @field_validator("tau_grid", mode="before")
    @classmethod
    def _grid_from_text(cls, value):
        if isinstance(value, str):
            return UniformGrid.parse(value)
        return value

    @field_validator("v0", mode="before")
    @classmethod
    def _bloch_from_text(cls, value):
        if isinstance(value, str):
            return BlochVector.parse(value)
        return value

    @model_validator(mode="after")
    def _check_mode(self) -> "ScanConfig":
        if self.mode == DynamicsMode.IDEAL_MARKOV and self.channel != ChannelKind.JC:
            raise ValueError("ideal_markov mode is only valid with the jc model")
        return self
