"""
Experiment configuration and report models.

Both are pydantic models so they can be read from and written to JSON with
validation, the same way the application settings are.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class DegreeFamily(BaseModel):
    """Rule producing a degree sequence for each n."""

    kind: Literal["binary", "geometric", "single_tree", "file", "counts"] = Field(
        default="binary",
        description="binary: degrees {0,1,2}; geometric: 2^-(i+1) tail; single_tree: c = 1; "
                    "file: counts read from `path`; counts: explicit `counts`"
    )
    path: Optional[str] = Field(default=None, description="Degree sequence JSON file for kind=file")
    counts: Optional[Dict[int, int]] = Field(default=None, description="Explicit counts for kind=counts")

    @model_validator(mode="after")
    def check_source(self):
        if self.kind == "file" and not self.path:
            raise ValueError("degree family 'file' needs a path")
        if self.kind == "counts" and not self.counts:
            raise ValueError("degree family 'counts' needs counts")
        return self


class ExperimentConfig(BaseModel):
    """Parameters shared by every experiment, plus per-experiment knobs."""

    degree_family: DegreeFamily = Field(default_factory=DegreeFamily)
    n_list: List[int] = Field(default_factory=lambda: [10_000])
    lambda_target: float = Field(default=1.0, gt=0.0)
    replicates: int = Field(default=10_000, ge=1)
    continuum_replicates: Optional[int] = Field(
        default=None, ge=1, description="Continuum draws; defaults to `replicates`"
    )
    grid_m: int = Field(default=2 ** 14, ge=2)
    excursion_grid_m: int = Field(default=2 ** 16, ge=2)
    seed: int = Field(default=20240601, ge=0, lt=2 ** 64)
    output_dir: str = Field(default="out")

    # statistical thresholds
    ks_alpha: float = Field(default=1e-3, gt=0.0, lt=1.0)
    ks_grid_margin: float = Field(default=0.01, ge=0.0)
    se_multiplier: float = Field(default=3.0, gt=0.0)

    # walk convergence
    times: List[float] = Field(default_factory=lambda: [0.25, 0.5, 0.75])

    # tree sizes
    ranks: int = Field(default=3, ge=1)
    excursion_replicates: int = Field(default=200, ge=1)
    excursion_sum_floor: float = Field(default=0.99, gt=0.0, le=1.0)
    excursion_sum_fraction: float = Field(default=0.95, gt=0.0, le=1.0)

    # height tail
    height_grid_points: int = Field(default=20, ge=2)

    # variance bound
    k_fractions: List[float] = Field(default_factory=lambda: [0.01, 0.05, 0.1, 0.25, 0.5])
    lambda_grid: List[float] = Field(default_factory=lambda: [2.0, 2.5, 3.0, 4.0, 6.0])
    exhaustive_max_n: int = Field(default=8, ge=1, le=9)
    alpha_grid: List[float] = Field(default_factory=lambda: [0.05, 0.1, 0.2])

    # degree concentration
    s_grid: List[int] = Field(default_factory=lambda: [100, 500, 1000, 2000])
    t_grid: List[float] = Field(default_factory=lambda: [0.05, 0.1, 0.2, 0.5])
    epsilon: float = Field(default=0.1, gt=0.0, lt=1.0)

    # small tree heights
    beta_grid: List[float] = Field(default_factory=lambda: [1e-3, 3e-3, 1e-2, 3e-2])
    rho: float = Field(default=0.1, gt=0.0, lt=1.0)
    delta_exponent: float = Field(
        default=0.1, gt=0.0, lt=1.0, description="ε in the requirement Δ <= n^((1-ε)/2)"
    )

    @field_validator("n_list")
    def check_n_list(cls, v):
        if not v or any(n < 1 for n in v):
            raise ValueError("n_list needs at least one positive size")
        return v

    @field_validator("times")
    def check_times(cls, v):
        if any(not 0.0 < t <= 1.0 for t in v):
            raise ValueError("times must lie in (0, 1]")
        return v

    @property
    def continuum_draws(self) -> int:
        return self.continuum_replicates or self.replicates


class Verdict(BaseModel):
    """Outcome of one check, tied to a threshold recorded in the report parameters."""

    passed: bool
    value: float
    threshold_key: str
    comparison: Literal["<", "<=", ">=", "=="] = "<="


class ExperimentReport(BaseModel):
    """Statistics, tables and verdicts produced by one experiment run."""

    name: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    statistics: Dict[str, float] = Field(default_factory=dict)
    tables: Dict[str, str] = Field(default_factory=dict)
    verdicts: Dict[str, Verdict] = Field(default_factory=dict)

    @model_validator(mode="after")
    def verdicts_reference_parameters(self):
        for key, verdict in self.verdicts.items():
            if verdict.threshold_key not in self.parameters:
                raise ValueError(f"verdict {key} references unknown threshold {verdict.threshold_key}")
        return self

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    def failed(self) -> List[str]:
        return [key for key, v in self.verdicts.items() if not v.passed]


__all__ = ["DegreeFamily", "ExperimentConfig", "Verdict", "ExperimentReport"]
