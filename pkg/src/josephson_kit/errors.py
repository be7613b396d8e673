"""Exception and warning types.

``PhysicsError`` marks violated physical preconditions (CLI exit code 2);
``ConfigError`` marks malformed user input (exit code 1).
"""


class JosephsonKitError(Exception):
    pass


class ConfigError(JosephsonKitError, ValueError):
    pass


class PhysicsError(JosephsonKitError, ValueError):
    pass


class NonSymmetricPotential(PhysicsError):
    pass


class GridTooCoarse(PhysicsError):
    pass


class NotADoubleWell(PhysicsError):
    pass


class StepTooLarge(PhysicsError):
    pass


class NotNormalized(PhysicsError):
    pass


class InvalidInitialState(PhysicsError):
    pass


class DomainError(PhysicsError):
    pass


class NonInvertible(PhysicsError):
    pass


class TurningPoint(PhysicsError):
    pass


class UnphysicalImbalance(PhysicsError):
    pass


class InconsistentLift(PhysicsError):
    pass


class FirstOrderValidity(UserWarning):
    """A first-order (in V0/DeltaE) formula is used outside |V0/DeltaE| < 0.15."""


class DegenerateState(UserWarning):
    """Effective density matrix proportional to identity; eigenbasis is arbitrary."""


class RegimeWarning(UserWarning):
    """Inputs are outside the regime where the two-mode picture is accurate."""
