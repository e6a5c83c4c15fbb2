"""Exception hierarchy shared by every ckm module."""


class GeometryError(ValueError):
    """Base class for geometric precondition failures."""


# projective core
class CoincidentArguments(GeometryError):
    pass


class SingularPair(GeometryError):
    pass


class IdenticalConics(GeometryError):
    pass


class NoDegenerateMemberFound(GeometryError):
    pass


class NotCoincident(GeometryError):
    pass


class DegenerateQuadruple(GeometryError):
    pass


# Cayley-Klein structure
class UnsupportedSignature(GeometryError):
    pass


class MissingCircumcenter(GeometryError):
    pass


class CircumcenterForbiddenPosition(GeometryError):
    pass


ForbiddenCircumcenter = CircumcenterForbiddenPosition


class IsotropicPoint(GeometryError):
    pass


class ComplexPoint(GeometryError):
    pass


class NotCongruent(GeometryError):
    pass


class ZeroCombination(GeometryError):
    pass


class CollinearFrame(GeometryError):
    pass


# circles
class DegenerateQ(GeometryError):
    pass


class CollinearVertices(GeometryError):
    pass


class MixedCongruenceClasses(GeometryError):
    pass


class SingularSystem(GeometryError):
    pass


class NoAnisotropicCenter(GeometryError):
    pass


class NotACircle(GeometryError):
    pass


class DegenerateConstruction(GeometryError):
    pass


# Miquel constructions
class DegenerateScene(GeometryError):
    pass


class NonConcurrentRadicalLines(GeometryError):
    pass


class IsotropicDiagonalPoint(GeometryError):
    pass


class DegenerateTetragon(GeometryError):
    pass


class NoConvergence(GeometryError):
    pass


class MiquelPointAbsent(GeometryError):
    pass


class CoincidentParameters(GeometryError):
    pass


class MiquelAtInfinity(GeometryError):
    pass


# quadrilateral sets and angles
class GalileanPlane(GeometryError):
    pass


class IsotropicLeg(GeometryError):
    pass


class PointNotOnCircle(GeometryError):
    pass


# harness
class ParseError(ValueError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)


class SchemaError(ValueError):
    def __init__(self, field, msg):
        self.field = field
        super().__init__(f"{field}: {msg}")


class GenerationExhausted(RuntimeError):
    pass


class UnknownSuite(KeyError):
    pass


class UnboundedElement(GeometryError):
    pass
