"""Exception hierarchy shared by every gapspec module."""


class GapSpecError(Exception):
    """Base class for all gapspec errors."""


class DomainError(GapSpecError, ValueError):
    """An input lies outside the domain where a function is defined."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole of the permittivity."""


class RegimeError(DomainError):
    """The requested state does not exist for the given parameters."""


class UnsupportedRegimeError(RegimeError):
    """The physical regime exists but no construction is implemented."""


class LinearizationError(DomainError):
    """Frequencies left the window where the quadratic model of phi holds."""


class LmaxExceededError(DomainError):
    """More gap pairs were requested than fit inside the allowed window."""

    def __init__(self, l, l_max):
        self.l = l
        self.l_max = l_max
        super().__init__(f"l={l} exceeds l_max={l_max} for these parameters")


class NoRootError(DomainError):
    """A bracketed root search found no sign change."""


class UnmatchedPoleError(GapSpecError, ArithmeticError):
    """A Bethe product has a vanishing denominator that no zero cancels."""


class ConvergenceError(GapSpecError, RuntimeError):
    """An iterative solver stopped before meeting its tolerance.

    The last iterate and residual are kept for reporting.
    """

    def __init__(self, message, last=None, residuals=None):
        super().__init__(message)
        self.last = last
        self.residuals = residuals


class ConfigError(GapSpecError):
    """Malformed run configuration."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = ""
        if key is not None:
            where += f" [key {key!r}"
            where += f", line {line}]" if line is not None else "]"
        super().__init__(message + where)
