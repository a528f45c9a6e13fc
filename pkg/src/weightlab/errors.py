"""Exception types raised across the package."""


class WeightlabError(Exception):
    """Base class for all package errors."""


class InputError(WeightlabError):
    """Malformed or invalid user input (files, models, seeds)."""


class MalformedSimplex(InputError):
    pass


class DegreeOutOfRange(WeightlabError):
    pass


class NotAComplex(WeightlabError):
    pass


class NotChainMap(WeightlabError):
    pass


class NotPseudomanifold(InputError):
    pass


class NotOrientable(InputError):
    pass


class NotOriented(WeightlabError):
    pass


class InvalidModel(InputError):
    pass


class MissingSelfIntersection(InputError):
    pass


class AnticommutationViolated(WeightlabError):
    pass


class NotVerticalCycle(WeightlabError):
    pass


class NotInKernelD1(WeightlabError):
    pass


class ObstructedCompletion(WeightlabError):
    pass
