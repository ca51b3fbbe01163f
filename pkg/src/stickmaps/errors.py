"""Exception types raised across the package."""


class StickMapsError(Exception):
    pass


class GeometryError(StickMapsError, ValueError):
    pass


class AntipodalEndpoints(GeometryError):
    pass


class DegenerateArc(GeometryError):
    pass


class DegenerateProjection(GeometryError):
    pass


class BoundaryTorsion(GeometryError):
    pass


class TooFewVertices(StickMapsError, ValueError):
    pass


class GenerationFailed(StickMapsError, RuntimeError):
    pass


class ParseError(StickMapsError, ValueError):
    pass


class ValidationError(StickMapsError, ValueError):
    """Raised when a knot fails general-position validation.

    The offending :class:`~stickmaps.knot.ValidationReport` is kept on
    ``self.report``.
    """

    def __init__(self, report, message=None):
        self.report = report
        if message is None:
            rules = sorted({v.rule for v in report.violations})
            message = f"knot is not in general position: {', '.join(rules)}"
        super().__init__(message)


class ZeroTorsionEdge(StickMapsError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"torsion at edge {index} is zero within tolerance")


class DegenerateDual(GeometryError):
    pass


class DualMismatch(GeometryError):
    pass


class CoincidentVertices(GeometryError):
    pass


class RegularityError(StickMapsError, ValueError):
    """The direction does not give a regular projection (a Darboux vertex lies on the circle)."""
