"""Exception types raised across the package.

Everything derives from :class:`BoxtuneError` so callers can catch the
package's failures with one handler; most also subclass the closest
builtin so generic ``except ValueError`` style code keeps working.
"""


class BoxtuneError(Exception):
    """Base class for all boxtune errors."""


class EmptySpace(BoxtuneError, ValueError):
    """A search space was declared with no dimensions."""


class InvalidBound(BoxtuneError, ValueError):
    """A dimension bound is non-finite or lower > upper."""


class NameMismatch(BoxtuneError, ValueError):
    """A parameter vector's names do not match its search space."""


class SolverUnknown(BoxtuneError, ValueError):
    """A solver name is not in the registry."""


class UnknownSetting(BoxtuneError, ValueError):
    """A solver configuration contains a setting key the solver rejects."""


class BudgetExhaustedWithNoSuccess(BoxtuneError, RuntimeError):
    """Every evaluation in the run failed; there is no best point."""


class GridTooLarge(BoxtuneError, ValueError):
    """Requested grid size exceeds the evaluation budget."""


class DegenerateSimplex(BoxtuneError, RuntimeError):
    """Nelder-Mead simplex collapsed without meeting the stop tolerance."""


class CovarianceDegenerate(BoxtuneError, RuntimeError):
    """CMA-ES covariance lost positive-definiteness beyond repair."""


class UnknownDimension(BoxtuneError, ValueError):
    """A constraint references a dimension absent from the vector."""


class InvalidFoldCount(BoxtuneError, ValueError):
    """Fold count outside 2 <= k <= n."""


class OverlappingGroups(BoxtuneError, ValueError):
    """Strata/cluster index sets overlap (or share an index)."""


class IndexOutOfRange(BoxtuneError, ValueError):
    """A grouping index lies outside [0, n)."""


class CrossValidationError(BoxtuneError, RuntimeError):
    """Inner evaluator failed; message carries (iteration, fold)."""


class DegenerateLabels(BoxtuneError, ValueError):
    """A metric needing both classes saw only one."""


class LengthMismatch(BoxtuneError, ValueError):
    """Paired metric inputs differ in length."""


class EmptyInput(BoxtuneError, ValueError):
    """A metric was called on empty inputs."""


class MalformedJson(BoxtuneError, ValueError):
    """A wire line is not a single valid JSON object."""


class SchemaViolation(BoxtuneError, ValueError):
    """A wire message parsed as JSON but violates the message schema."""


class Timeout(BoxtuneError, RuntimeError):
    """The peer did not reply within the configured deadline."""


class PeerClosed(BoxtuneError, RuntimeError):
    """The peer closed the connection mid-session."""
