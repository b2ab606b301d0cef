"""Exception hierarchy.

Two families matter to callers: data errors (bad input files, malformed
sets) and analysis errors (a computation whose preconditions failed on
otherwise valid data). The CLI maps them to different exit codes.
"""


class HyperspaceError(Exception):
    """Base class for every error raised by this package."""


class DataError(HyperspaceError):
    """Input could not be turned into valid points, sets or systems."""


class DimensionError(DataError, ValueError):
    pass


class EmptySetError(DataError, ValueError):
    pass


class ParseError(DataError):
    def __init__(self, line, message="could not parse row", path=None):
        self.line = line
        self.path = path
        where = f"{path}:" if path is not None else "line "
        super().__init__(f"{where}{line}: {message}")


class RaggedRow(ParseError):
    def __init__(self, line, expected, got, path=None):
        self.expected = expected
        self.got = got
        super().__init__(line, f"expected {expected} columns, got {got}", path=path)


class EmptyCloud(DataError):
    pass


class ManifestError(DataError):
    pass


class SystemFormatError(DataError):
    pass


class AnalysisError(HyperspaceError):
    """A well-formed analysis whose mathematical preconditions do not hold."""


class EmptyLimit(AnalysisError):
    pass


class HypothesisViolated(AnalysisError):
    def __init__(self, index, distance, epsilon):
        self.index = index
        self.distance = distance
        self.epsilon = epsilon
        super().__init__(
            f"hypothesis fails at index {index}: rho(x, A_{index}) = {distance!r} >= {epsilon!r}"
        )


class PrefixExhausted(AnalysisError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(
            message or f"no admissible subsequence index n_{index} within the prefix"
        )


class NotContractive(AnalysisError):
    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"contraction factor {factor!r} is not < 1")
