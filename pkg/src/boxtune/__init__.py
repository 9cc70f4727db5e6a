"""boxtune: budgeted derivative-free search over box-constrained spaces.

Five solvers (grid, random, nelder-mead, pso, cmaes) behind one
maximize/minimize facade, with cross-validation utilities, quality
metrics, and a line-delimited JSON socket protocol so evaluations can
run in any external environment.
"""

from .api import maximize, minimize, optimize, run_optimization
from .batch import (
    BatchRequest,
    BatchResult,
    EvalFailure,
    evaluate_batch,
    is_concurrency_safe,
    mark_concurrency_safe,
)
from .constraints import Constraint, ConstrainedObjective, check, wrap_constraints
from .core import Budget, CallLog, EvalLoop, OptimizationResult
from .crossval import FoldPlan, GroupingSpec, cross_validated_score, generate_folds
from .errors import (
    BoxtuneError,
    BudgetExhaustedWithNoSuccess,
    CovarianceDegenerate,
    CrossValidationError,
    DegenerateLabels,
    DegenerateSimplex,
    EmptyInput,
    EmptySpace,
    GridTooLarge,
    IndexOutOfRange,
    InvalidBound,
    InvalidFoldCount,
    LengthMismatch,
    MalformedJson,
    NameMismatch,
    OverlappingGroups,
    PeerClosed,
    SchemaViolation,
    SolverUnknown,
    Timeout,
    UnknownDimension,
    UnknownSetting,
)
from .metrics import METRICS, accuracy, mse, roc_auc
from .protocol import ConfigMsg, ErrorMsg, EvalReply, EvalRequest, ResultMsg
from .server import LineChannel, TuningServer, serve_session
from .solvers import (
    SOLVERS,
    CmaesState,
    SimplexState,
    SolverConfig,
    SwarmState,
    cmaes_run,
    grid_generate,
    initial_simplex,
    nelder_mead_step,
    pso_run,
    random_generate,
    select_default_solver,
)
from .space import ParamVector, SearchSpace, TrialRecord, clamp, contains, make_space
from .testfunctions import BRANIN_OPTIMUM, TestFunction, make_test_function

__version__ = "0.1.0"

__all__ = [
    "BatchRequest",
    "BatchResult",
    "BoxtuneError",
    "BRANIN_OPTIMUM",
    "Budget",
    "BudgetExhaustedWithNoSuccess",
    "CallLog",
    "CmaesState",
    "ConfigMsg",
    "ConstrainedObjective",
    "Constraint",
    "CovarianceDegenerate",
    "CrossValidationError",
    "DegenerateLabels",
    "DegenerateSimplex",
    "EmptyInput",
    "EmptySpace",
    "ErrorMsg",
    "EvalFailure",
    "EvalLoop",
    "EvalReply",
    "EvalRequest",
    "FoldPlan",
    "GridTooLarge",
    "GroupingSpec",
    "IndexOutOfRange",
    "InvalidBound",
    "InvalidFoldCount",
    "LengthMismatch",
    "LineChannel",
    "MalformedJson",
    "METRICS",
    "NameMismatch",
    "OptimizationResult",
    "OverlappingGroups",
    "ParamVector",
    "PeerClosed",
    "ResultMsg",
    "SchemaViolation",
    "SearchSpace",
    "SimplexState",
    "SolverConfig",
    "SolverUnknown",
    "SOLVERS",
    "SwarmState",
    "TestFunction",
    "Timeout",
    "TrialRecord",
    "TuningServer",
    "UnknownDimension",
    "UnknownSetting",
    "accuracy",
    "check",
    "clamp",
    "cmaes_run",
    "contains",
    "cross_validated_score",
    "evaluate_batch",
    "generate_folds",
    "grid_generate",
    "initial_simplex",
    "is_concurrency_safe",
    "make_space",
    "make_test_function",
    "mark_concurrency_safe",
    "maximize",
    "minimize",
    "mse",
    "nelder_mead_step",
    "optimize",
    "pso_run",
    "random_generate",
    "roc_auc",
    "run_optimization",
    "select_default_solver",
    "serve_session",
    "wrap_constraints",
]
