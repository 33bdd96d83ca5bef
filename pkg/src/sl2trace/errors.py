"""Exception hierarchy for the sl2trace package.

Every domain error derives from TraceEngineError so the CLI can map
failures to stable exit codes and a single JSON error object.
"""


class TraceEngineError(Exception):
    """Base class for all errors raised by this package."""

    code = "engine-error"


class DeterminantError(TraceEngineError):
    """Matrix entries are not finite or the determinant is not 1."""

    code = "determinant"


class IdentityArgumentError(TraceEngineError):
    """An operation that excludes +-I received (a matrix close to) +-I."""

    code = "identity-argument"


class IndexOutOfRangeError(TraceEngineError):
    """A word references a generator index beyond the supplied images."""

    code = "index-out-of-range"


class WordSyntaxError(TraceEngineError):
    """Malformed word text.  `position` is the 0-based offset of the error."""

    code = "word-syntax"

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GeneratorIndexError(WordSyntaxError):
    """Generator index 0 is not a valid generator."""

    code = "generator-index"


class MissingVariableError(TraceEngineError):
    """Polynomial evaluation was not given a value for some variable."""

    code = "missing-variable"

    def __init__(self, var_name):
        super().__init__(f"no value supplied for variable {var_name}")
        self.var_name = var_name


class SharedFixedPointError(TraceEngineError):
    """Two transformations share a fixed point where the operation forbids it."""

    code = "shared-fixed-point"


class TraceMismatchError(TraceEngineError):
    """Candidate pairs do not have matching traces.  `which` names the trace."""

    code = "trace-mismatch"

    def __init__(self, which, lhs, rhs):
        super().__init__(f"trace mismatch on {which}: {lhs!r} vs {rhs!r}")
        self.which = which
        self.lhs = lhs
        self.rhs = rhs


class MixedParabolicPairError(TraceEngineError):
    """First element is parabolic but the second is not; no canonical frame.

    Callers that only need a conjugator should swap the pair (see
    normalize.conjugator_between, which does this automatically).
    """

    code = "mixed-parabolic-pair"


class DegenerateFrameError(TraceEngineError):
    """Canonical frame cannot support entry matching (rho^4 = 1 or b = 0)."""

    code = "degenerate-frame"


class ConjugationFailedError(TraceEngineError):
    """A computed conjugator failed its verification; inputs are borderline."""

    code = "conjugation-failed"


class ParabolicFirstGeneratorError(TraceEngineError):
    """t1 = +-2: reconstruction needs a generator-role swap first."""

    code = "parabolic-a1"


class SharedFixedPointDataError(TraceEngineError):
    """Coordinates imply the first two generators share a fixed point (b = 0)."""

    code = "shared-fixed-point-data"


class InconsistentCoordinatesError(TraceEngineError):
    """Coordinates are not realizable by any SL(2,C) tuple."""

    code = "inconsistent-coordinates"

    def __init__(self, index, residual):
        super().__init__(
            f"generator {index}: determinant residual {residual:.6g} "
            "(coordinates admit no unit-determinant solution)"
        )
        self.index = index
        self.residual = residual


class AllParabolicError(TraceEngineError):
    """None of A1, A2, A1A2 has trace != +-2; no role swap is available."""

    code = "all-parabolic"


class CoordinateSetError(TraceEngineError):
    """Trace coordinate keys do not match the reduced coordinate set."""

    code = "coordinate-set"


class TargetAbsentError(TraceEngineError):
    """The variable to solve for does not occur in the relator polynomial."""

    code = "target-absent"


class NoConvergenceError(TraceEngineError):
    """Newton iteration failed to reach the residual tolerance."""

    code = "no-convergence"

    def __init__(self, last, residual, iterations):
        super().__init__(
            f"no convergence after {iterations} iterations; "
            f"last iterate {last!r} with residual {residual:.3g}"
        )
        self.last = last
        self.residual = residual
        self.iterations = iterations


class ZeroDerivativeError(TraceEngineError):
    """A solution was found but the partial derivative vanishes there.

    The equation holds at `value` but the point is not an implicit-function
    chart point for the chosen variable.
    """

    code = "zero-derivative"

    def __init__(self, value, derivative, residual, iterations):
        super().__init__(
            f"solution {value!r} has derivative {derivative!r} below the "
            "chart-point threshold"
        )
        self.value = value
        self.derivative = derivative
        self.residual = residual
        self.iterations = iterations
