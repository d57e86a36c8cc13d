"""Exception hierarchy shared by the engines and the command line"""

from typing import Any, Dict, Optional


class PhaseLabError(Exception):
    """Base class; carries structured details for the JSON error record"""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> Dict[str, Any]:
        record = {"error": type(self).__name__, "message": self.message}
        record.update({key: _jsonable(value) for key, value in self.details.items()})
        return record


def _jsonable(value: Any) -> Any:
    if hasattr(value, "model_dump"):
        return value.model_dump()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)


class SurfaceDomainError(PhaseLabError, ValueError):
    """A domain bound of a closed-form expression is violated"""

    def __init__(self, message: str, bound: str, **details: Any):
        super().__init__(message, bound=bound, **details)
        self.bound = bound


class InversionDomainError(SurfaceDomainError):
    """(rho1, rho2) maps to a state with negative frozen densities"""


class NumericError(PhaseLabError, RuntimeError):
    """Bracketing or iteration failed to converge"""


class CuspNotFoundError(NumericError):
    pass


class DivergenceError(NumericError):
    pass


class TraceFailure(NumericError):
    """The threshold trace lost a branch; details hold the last good point"""

    def __init__(self, message: str, last_point: Optional[Any] = None, **details: Any):
        super().__init__(message, last_point=last_point, **details)
        self.last_point = last_point


class SingularityError(NumericError):
    """A PDE cell left the admissible domain during a step"""

    def __init__(self, message: str, events: Optional[list] = None, **details: Any):
        super().__init__(message, events=events or [], **details)
        self.events = events or []


class DegenerateBranchError(PhaseLabError, ValueError):
    pass


class CapacityError(PhaseLabError, ValueError):
    pass


class DegenerateDesignError(PhaseLabError, ValueError):
    pass


class OutOfRegimeError(PhaseLabError, ValueError):
    pass


class BracketError(PhaseLabError, ValueError):
    """Stochastic bisection was started on a non-bracketing interval"""


class ParseError(PhaseLabError, ValueError):
    """Malformed input file; line is 1-based"""

    def __init__(self, message: str, line: int, **details: Any):
        super().__init__(f"line {line}: {message}", line=line, **details)
        self.line = line


class InputFileError(PhaseLabError):
    """An input file could not be read or an output file written"""


class InvalidRequestError(PhaseLabError, ValueError):
    """A request passed argument checks but an engine model rejected it"""
