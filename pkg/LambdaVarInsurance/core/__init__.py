"""Loss models, Λ functions, risk measures and contracts."""

from .contract import (
    CededDistribution,
    DualStopLoss,
    ExpectedValue,
    FullInsurance,
    IndemnityContract,
    Mixed,
    NoInsurance,
    PiecewiseLinear,
    PremiumRule,
    PureLambdaVar,
    QuotaShare,
    RetainedDistribution,
    StopLoss,
    TruncatedStopLoss,
    apply,
    ceded_quantile,
    check_admissible,
    contract_from_dict,
    premium,
    retained_position_value,
    stop_loss,
)
from .dist import (
    PLUS_INFINITY,
    Empirical,
    Exponential,
    LogNormal,
    LossDistribution,
    Pareto,
    Uniform,
    load_empirical,
)
from .lambda_fn import (
    Constant,
    ExpAffine,
    LambdaFunction,
    PiecewiseConstant,
    TwoLevel,
    lr_distort,
    validate,
)
from .risk import (
    LambdaVarResult,
    empirical_lambda_var,
    lambda_var,
    lambda_var_rep,
    two_level_lambda_var,
    worst_case_var_mv,
)
from .validation import DomainError, NumericError, ValidationError, Violation

__all__ = [
    "CededDistribution",
    "DualStopLoss",
    "ExpectedValue",
    "FullInsurance",
    "IndemnityContract",
    "Mixed",
    "NoInsurance",
    "PiecewiseLinear",
    "PremiumRule",
    "PureLambdaVar",
    "QuotaShare",
    "RetainedDistribution",
    "StopLoss",
    "TruncatedStopLoss",
    "apply",
    "ceded_quantile",
    "check_admissible",
    "contract_from_dict",
    "premium",
    "retained_position_value",
    "stop_loss",
    "PLUS_INFINITY",
    "Empirical",
    "Exponential",
    "LogNormal",
    "LossDistribution",
    "Pareto",
    "Uniform",
    "load_empirical",
    "Constant",
    "ExpAffine",
    "LambdaFunction",
    "PiecewiseConstant",
    "TwoLevel",
    "lr_distort",
    "validate",
    "LambdaVarResult",
    "empirical_lambda_var",
    "lambda_var",
    "lambda_var_rep",
    "two_level_lambda_var",
    "worst_case_var_mv",
    "DomainError",
    "NumericError",
    "ValidationError",
    "Violation",
]
