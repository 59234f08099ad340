"""Validated description of one CLI run.

Run files are JSON or YAML; both go through ``yaml.safe_load``. Variants of
the distribution and Λ specs are selected by their ``family`` / ``kind`` tag.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union, get_args

import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.contract import ExpectedValue, Mixed, PremiumRule, PureLambdaVar
from ..core.dist import Empirical, Exponential, LogNormal, LossDistribution, Pareto, Uniform, load_empirical
from ..core.lambda_fn import Constant, ExpAffine, LambdaFunction, PiecewiseConstant, TwoLevel
from ..core.validation import ValidationError

logger = logging.getLogger(__name__)

Problem = Literal[
    "lambdavar",
    "expected_general",
    "expected_stoploss",
    "existence",
    "lambdavar_premium",
    "mixed_premium",
    "quota_share",
    "robust_lr",
    "robust_lr_stoploss",
    "robust_mv",
    "oracle",
]
PROBLEMS = get_args(Problem)

# Short sweep names for the parameters the figures vary.
SWEEP_ALIASES = {
    "theta": "premium.theta",
    "alpha": "distribution.alpha",
    "beta": "uncertainty.beta",
    "mu": "uncertainty.mu",
    "sigma": "uncertainty.sigma",
}

_THETA_PROBLEMS = {
    "expected_general",
    "expected_stoploss",
    "existence",
    "mixed_premium",
    "quota_share",
    "robust_lr",
    "robust_lr_stoploss",
    "robust_mv",
    "oracle",
}


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# Distributions

class ParetoSpec(_Spec):
    family: Literal["pareto"]
    alpha: float = Field(gt=0, description="Tail index; S(x) = (1 + x)^-alpha.")

    def build(self) -> LossDistribution:
        return Pareto(self.alpha)


class ExponentialSpec(_Spec):
    family: Literal["exponential"]
    rate: float = Field(default=1.0, gt=0)

    def build(self) -> LossDistribution:
        return Exponential(self.rate)


class UniformSpec(_Spec):
    family: Literal["uniform"]
    upper: float = Field(default=1.0, gt=0)

    def build(self) -> LossDistribution:
        return Uniform(self.upper)


class LogNormalSpec(_Spec):
    family: Literal["lognormal"]
    mu_log: float = 0.0
    sigma_log: float = Field(default=1.0, gt=0)

    def build(self) -> LossDistribution:
        return LogNormal(self.mu_log, self.sigma_log)


class EmpiricalSpec(_Spec):
    family: Literal["empirical"]
    path: Optional[str] = Field(default=None, description="Newline-delimited sample file.")
    values: Optional[List[float]] = Field(default=None, description="Inline sample.")

    @model_validator(mode="after")
    def _one_source(self) -> "EmpiricalSpec":
        if (self.path is None) == (self.values is None):
            raise ValueError("empirical distribution needs exactly one of 'path' or 'values'")
        return self

    def build(self) -> LossDistribution:
        if self.path is not None:
            return load_empirical(self.path)
        return Empirical(tuple(self.values or ()), source="inline")


DistributionSpec = Annotated[
    Union[ParetoSpec, ExponentialSpec, UniformSpec, LogNormalSpec, EmpiricalSpec],
    Field(discriminator="family"),
]


# Λ functions

class ConstantSpec(_Spec):
    kind: Literal["constant"]
    level: float

    def build(self) -> LambdaFunction:
        return Constant(self.level)


class TwoLevelSpec(_Spec):
    kind: Literal["two_level"]
    high: float
    low: float
    threshold: float

    def build(self) -> LambdaFunction:
        return TwoLevel(self.high, self.low, self.threshold)


class ExpAffineSpec(_Spec):
    kind: Literal["exp_affine"]
    a: float
    k: float
    c: float

    def build(self) -> LambdaFunction:
        return ExpAffine(self.a, self.k, self.c)


class PiecewiseConstantSpec(_Spec):
    kind: Literal["piecewise_constant"]
    breakpoints: List[float]
    levels: List[float]

    def build(self) -> LambdaFunction:
        return PiecewiseConstant(tuple(self.breakpoints), tuple(self.levels))


LambdaSpec = Annotated[
    Union[ConstantSpec, TwoLevelSpec, ExpAffineSpec, PiecewiseConstantSpec],
    Field(discriminator="kind"),
]


def _check_lambda(spec: Any, name: str) -> None:
    found = spec.build().violations()
    if found:
        raise ValueError(f"invalid {name}: " + "; ".join(str(v) for v in found))


class PremiumSpec(_Spec):
    kind: Literal["expected_value", "lambda_var", "mixed"] = "expected_value"
    theta: Optional[float] = Field(default=None, ge=0, description="Safety loading.")
    lambda_prime: Optional[LambdaSpec] = Field(default=None, description="Λ′ of Λ′VaR premiums.")

    def build(self) -> PremiumRule:
        match self.kind:
            case "expected_value":
                return ExpectedValue(self._theta())
            case "lambda_var":
                return PureLambdaVar(self._lambda_prime())
            case _:
                return Mixed(self._theta(), self._lambda_prime())

    def _theta(self) -> float:
        if self.theta is None:
            raise ValidationError(f"{self.kind} premium needs theta")
        return self.theta

    def _lambda_prime(self) -> LambdaFunction:
        if self.lambda_prime is None:
            raise ValidationError(f"{self.kind} premium needs lambda_prime")
        return self.lambda_prime.build()


class UncertaintySpec(_Spec):
    beta: Optional[float] = Field(default=None, gt=0, le=1, description="Likelihood-ratio level.")
    mu: Optional[float] = Field(default=None, gt=0, description="Mean of the moment set.")
    sigma: Optional[float] = Field(default=None, ge=0, description="Standard deviation of the moment set.")


class SweepSpec(_Spec):
    parameter: str
    start: float = Field(alias="from")
    stop: float = Field(alias="to")
    steps: int = Field(default=11, ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> "SweepSpec":
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("sweep bounds must be finite")
        if self.start > self.stop:
            raise ValueError(f"sweep bounds out of order: {self.start} > {self.stop}")
        return self

    @property
    def path(self) -> Tuple[str, ...]:
        return tuple(SWEEP_ALIASES.get(self.parameter, self.parameter).split("."))

    def points(self) -> List[float]:
        if self.steps == 1:
            return [self.start]
        width = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * width for i in range(self.steps - 1)] + [self.stop]


class OutputSpec(_Spec):
    path: Optional[str] = None
    format: Literal["json", "csv"] = "json"


class OracleSpec(_Spec):
    atoms: Optional[int] = Field(default=None, ge=2)
    grid: Optional[int] = Field(default=None, ge=10)
    trials: Optional[int] = Field(default=None, ge=0)


class RunConfig(_Spec):
    problem: Problem
    distribution: Optional[DistributionSpec] = None
    lambda_: LambdaSpec = Field(alias="lambda")
    premium: PremiumSpec = Field(default_factory=PremiumSpec)
    uncertainty: UncertaintySpec = Field(default_factory=UncertaintySpec)
    sweep: Optional[SweepSpec] = None
    output: OutputSpec = Field(default_factory=OutputSpec)
    oracle: OracleSpec = Field(default_factory=OracleSpec)
    seed: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_problem(self) -> "RunConfig":
        problem = self.problem
        _check_lambda(self.lambda_, "lambda")
        if self.premium.lambda_prime is not None:
            _check_lambda(self.premium.lambda_prime, "lambda_prime")
        if problem != "robust_mv" and self.distribution is None:
            raise ValueError(f"problem {problem} needs a distribution")
        if problem in _THETA_PROBLEMS and self.premium.theta is None:
            raise ValueError(f"problem {problem} needs premium.theta")
        if problem in ("lambdavar_premium", "mixed_premium") and self.premium.lambda_prime is None:
            raise ValueError(f"problem {problem} needs premium.lambda_prime")
        if problem == "mixed_premium" and not 0 < (self.premium.theta or 0.0) <= 1:
            raise ValueError("mixed premium loading must lie in (0, 1]")
        if problem in ("robust_lr", "robust_lr_stoploss") and self.uncertainty.beta is None:
            raise ValueError(f"problem {problem} needs uncertainty.beta")
        if problem == "robust_mv":
            if self.uncertainty.mu is None or self.uncertainty.sigma is None:
                raise ValueError("problem robust_mv needs uncertainty.mu and uncertainty.sigma")
            if not (self.premium.theta or 0.0) > 0:
                raise ValueError("problem robust_mv needs a positive premium.theta")
        if problem == "oracle" and self.premium.kind == "lambda_var":
            raise ValueError("oracle checks cover the expected-value and mixed premiums")
        if self.sweep is not None:
            self._resolve(self.sweep.path)
        return self

    def _resolve(self, path: Tuple[str, ...]) -> None:
        data = self.model_dump(by_alias=True)
        node: Any = data
        for part in path[:-1]:
            if not isinstance(node, dict) or not isinstance(node.get(part), dict):
                raise ValueError(f"sweep parameter {'.'.join(path)} does not exist")
            node = node[part]
        if not isinstance(node, dict) or path[-1] not in node:
            raise ValueError(f"sweep parameter {'.'.join(path)} does not exist")

    def with_parameter(self, path: Tuple[str, ...], value: float) -> "RunConfig":
        """Copy with one nested numeric parameter replaced and the sweep removed."""
        data = self.model_dump(by_alias=True, exclude_none=True)
        data.pop("sweep", None)
        node = data
        for part in path[:-1]:
            node = node[part]
        node[path[-1]] = value
        return parse_run_config(data)

    def build_distribution(self) -> LossDistribution:
        if self.distribution is None:
            raise ValidationError(f"problem {self.problem} needs a distribution")
        return self.distribution.build()

    def build_lambda(self) -> LambdaFunction:
        return self.lambda_.build()


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        raise ValidationError(f"invalid run config: {exc}") from exc


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read a JSON or YAML run file."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as exc:
        raise ValidationError(f"cannot read run config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"run config {path} must hold a mapping")
    return parse_run_config(data)
