"""Exception hierarchy shared by every module of the package."""


class ISLError(Exception):
    """Base class for all errors raised by isl."""


class RankDeficient(ISLError):
    pass


class NoConvergence(ISLError):
    pass


class EvaluationFailed(ISLError):
    pass


class DimensionMismatch(ISLError, ValueError):
    pass


class InvalidStructure(ISLError, ValueError):
    pass


class InvalidParams(ISLError, ValueError):
    pass


class NotOnManifold(ISLError, ValueError):
    pass


class NotOrthogonal(ISLError, ValueError):
    pass


class HypothesisViolated(ISLError):
    """A theorem was invoked outside the setting in which it holds."""


class WrongCodimension(ISLError, ValueError):
    pass


class DegenerateStructure(ISLError):
    """Raised where a formula divides by ``1 - a**2`` and ``a**2 == 1``."""


class ChainMismatch(ISLError, ValueError):
    pass


class ConfigError(ISLError, ValueError):
    pass
