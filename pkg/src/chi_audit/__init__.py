"""Chi-square homogeneity testing with a scale-dependence audit.

The Pearson statistic is homogeneous of degree 1 in the table entries, so
multiplying a table by a scalar multiplies the statistic by the same scalar
while the critical value stays put: the decision depends on the unit of
measurement. This package implements the classical test, makes that scale
dependence measurable (`audit_scaling`), and provides scale-invariant
alternative statistics with Monte-Carlo-calibrated critical values
(`invariant_test`).
"""

__version__ = "0.1.0"

from .backend import BACKEND
from .distributions import ChiSquare, log_gamma, reg_lower_gamma
from .errors import (
    ChiAuditError,
    CsvParseError,
    DegenerateProbabilitiesError,
    DomainError,
    NegativeEntryError,
    NonFiniteEntryError,
    NonPositiveScaleError,
    NotNormalizedError,
    NumericalError,
    TableError,
    TooFewColumnsError,
    TooFewRowsError,
    TooFewTrialsWarning,
    UnknownDatasetError,
    ZeroColumnSumError,
    ZeroMarginalError,
    ZeroRowSumError,
)
from .datasets import DATASET_NAMES, get_dataset, write_dataset_csv
from .invariance import (
    InvariantStatKind,
    InvariantTestResult,
    NullCalibration,
    ProbeOutcome,
    ScalingAudit,
    audit_scaling,
    calibrate_null,
    invariant_statistic,
    invariant_test,
    sample_null_table,
)
from .pearson import (
    AssumptionReport,
    PearsonResult,
    check_assumptions,
    homogeneity_test,
    independence_from_joint_frequencies,
    pearson_statistic,
)
from .tables import (
    ContingencyTable,
    Margins,
    expected,
    make_table,
    rows_proportional,
    scale,
)

__all__ = [
    "__version__",
    "BACKEND",
    "ChiSquare",
    "log_gamma",
    "reg_lower_gamma",
    "ChiAuditError",
    "CsvParseError",
    "DegenerateProbabilitiesError",
    "DomainError",
    "NegativeEntryError",
    "NonFiniteEntryError",
    "NonPositiveScaleError",
    "NotNormalizedError",
    "NumericalError",
    "TableError",
    "TooFewColumnsError",
    "TooFewRowsError",
    "TooFewTrialsWarning",
    "UnknownDatasetError",
    "ZeroColumnSumError",
    "ZeroMarginalError",
    "ZeroRowSumError",
    "DATASET_NAMES",
    "get_dataset",
    "write_dataset_csv",
    "InvariantStatKind",
    "InvariantTestResult",
    "NullCalibration",
    "ProbeOutcome",
    "ScalingAudit",
    "audit_scaling",
    "calibrate_null",
    "invariant_statistic",
    "invariant_test",
    "sample_null_table",
    "AssumptionReport",
    "PearsonResult",
    "check_assumptions",
    "homogeneity_test",
    "independence_from_joint_frequencies",
    "pearson_statistic",
    "ContingencyTable",
    "Margins",
    "expected",
    "make_table",
    "rows_proportional",
    "scale",
]
