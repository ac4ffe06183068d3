"""Exception hierarchy shared by every rvac module."""

from __future__ import annotations


class RvacError(Exception):
    """Base class for all errors raised by the library."""


# state / equation of state
class NonPositiveDensity(RvacError):
    pass


class SuperluminalVelocity(RvacError):
    pass


class InvalidBaseState(RvacError):
    """Raised with the full list of violated relations in ``violations``."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class BaseStateViolatesBoundaryAssumptions(RvacError):
    pass


# dense numerics
class NoConvergence(RvacError):
    pass


class SingularMatrix(RvacError):
    pass


class NoBracket(RvacError):
    pass


class NewtonDiverged(RvacError):
    pass


# boundary analysis
class SuperluminalInterface(RvacError):
    pass


class SingularTransform(RvacError):
    pass


class SingularBoundaryMatrix(RvacError):
    pass


# stability / modes
class FrontSymbolDegenerate(RvacError):
    pass


class OutOfFamily(RvacError):
    """Raised with the violated family conditions in ``violations``."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class BranchCut(RvacError):
    pass


# configuration
class ParseError(RvacError):
    def __init__(self, errors):
        # errors: list of (lineno or None, message)
        self.errors = list(errors)
        super().__init__(
            "\n".join(f"line {ln}: {msg}" if ln else msg for ln, msg in self.errors)
        )


class ValidationError(RvacError):
    def __init__(self, errors):
        # errors: list of (key path, message)
        self.errors = list(errors)
        super().__init__("\n".join(f"{path}: {msg}" for path, msg in self.errors))
