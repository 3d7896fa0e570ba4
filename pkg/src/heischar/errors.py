"""Exception hierarchy. Everything raised on bad input derives from ``HeisError``."""


class HeisError(ValueError):
    pass


class DimensionMismatch(HeisError):
    pass


class CenterError(HeisError):
    """Evaluation requested on (or too near) the center {z = 0}."""


class OutOfBoxError(HeisError):
    pass


class NonFiniteError(HeisError):
    pass


class DefiningFunctionError(HeisError):
    """The Euclidean gradient of a defining field vanishes where it must not."""


class CharacteristicPointError(HeisError):
    """An operation undefined at characteristic points was called at one."""


class ProfileError(HeisError):
    pass


class NonConvexError(ProfileError):
    pass


class MeshError(HeisError):
    pass


class ExpressionError(HeisError):
    pass
