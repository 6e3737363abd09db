"""Exception hierarchy shared by all steklovlab modules."""


class SteklovLabError(Exception):
    pass


class GeometryError(SteklovLabError, ValueError):
    pass


class NonPositiveRadius(GeometryError):
    pass


class CurveIntersection(GeometryError):
    pass


class ResolutionMismatch(GeometryError):
    pass


class DegenerateElement(GeometryError):
    pass


class SelfIntersection(GeometryError):
    pass


class DensityError(SteklovLabError, ValueError):
    pass


class UnknownComponent(DensityError, KeyError):
    pass


class ComponentMismatch(DensityError):
    pass


class BetaBelowOne(DensityError):
    pass


class BadRadii(SteklovLabError, ValueError):
    pass


class EpsilonTooLarge(SteklovLabError, ValueError):
    pass


class UnknownTestFunction(SteklovLabError, KeyError):
    pass


class SolverError(SteklovLabError, RuntimeError):
    pass


class DegenerateTriangle(SolverError):
    pass


class SingularInterior(SolverError):
    pass


class NotPositiveDefinite(SolverError):
    pass


class ConvergenceFailure(SolverError):
    pass


class ConfigInvalid(SteklovLabError, ValueError):
    pass


class IOFailure(SteklovLabError, OSError):
    pass
