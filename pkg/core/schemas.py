from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

VerifyMode = Literal["parametric", "sampled"]


class Mismatch(BaseModel):
    model_config = ConfigDict(extra='forbid', strict=True)

    order: int = Field(ge=0)        # first exponent where lhs - rhs is nonzero
    value: str                      # that coefficient of lhs - rhs, rendered exactly


class VerifyReport(BaseModel):
    """Outcome of comparing both sides of one identity through a truncation order."""

    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    id: str
    mode: VerifyMode
    order: int = Field(ge=0)
    passed: bool = Field(alias="pass")
    first_mismatch: Optional[Mismatch] = None
    ring: str                       # e.g. "Q(a)[w3]", "Q(A,B)", "Q"
    branch_choices: list[str] = []  # recorded sign / root-of-unity choices
    millis: int = Field(default=0, ge=0)
    samples: Optional[list[dict[str, str]]] = None   # sampled parameter values
    certainty: Optional[Literal["deterministic under degree bound", "probabilistic"]] = None
    params: dict[str, str] = {}
    cached: bool = False

    @model_validator(mode='after')
    def validate_pass_contract(self):
        """pass holds exactly when there is no mismatch; sampled runs carry their samples."""
        if self.passed and self.first_mismatch is not None:
            raise ValueError(f"{self.id}: a passing report cannot carry a mismatch")
        if not self.passed and self.first_mismatch is None:
            raise ValueError(f"{self.id}: a failing report needs its first mismatch")
        if self.mode == "sampled" and not self.samples:
            raise ValueError(f"{self.id}: sampled reports must list their samples")
        return self

    def to_json_dict(self) -> dict:
        return self.model_dump(by_alias=True, mode="json")


class IdentityCase(BaseModel):
    """One registry entry: id, source label, default parameters and coefficient ring."""

    model_config = ConfigDict(extra='forbid', strict=True)

    id: str
    source: str                     # short description of where the identity comes from
    variable: str                   # expansion variable of both sides
    ring: str
    defaults: dict[str, str] = {}   # default parameter assignments (rational literals)
    free: list[Literal["a", "c", "A", "B", "C"]] = []  # symbolic parameters in parametric mode
    family: str                     # builder family key
    variant: Optional[str] = None   # part "i"/"ii", kernel variant "a"/"b", or a reduction tag


class CliConfig(BaseModel):
    """Parsed command-line options shared by the subcommands."""

    model_config = ConfigDict(extra='forbid', strict=True)

    order: Optional[int] = Field(default=None, ge=0)
    mode: VerifyMode = "parametric"
    params: dict[str, str] = {}
    samples: Optional[int] = Field(default=None, ge=1)
    fmt: Literal["text", "json"] = "text"
    json_path: Optional[str] = None
    seed: Optional[int] = None
    use_cache: bool = True
