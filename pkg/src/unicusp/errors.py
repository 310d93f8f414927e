"""Exception hierarchy shared by every module of the package."""


class UnicuspError(ValueError):
    """Base class for all invalid-input errors raised by the library."""


class DenominatorVanishesAtZero(UnicuspError):
    pass


class NotCofinite(UnicuspError):
    pass


class InvalidSemigroup(UnicuspError):
    pass


class BadBaseCoordinate(UnicuspError):
    pass


class DuplicateValuation(UnicuspError):
    pass


class NotUnicuspidalSemigroup(UnicuspError):
    pass


class ClosureDiverges(UnicuspError):
    pass


class PoleAtCusp(UnicuspError):
    pass


class InternalDimensionMismatch(RuntimeError):
    """An invariant of the canonical-model construction was violated."""


class NormalFormViolation(UnicuspError):
    pass


class UnsupportedFamily(UnicuspError):
    pass


class NearlyNormalOutOfTemplate(UnsupportedFamily):
    pass


class InvalidBlockParams(UnicuspError):
    pass


class DatasetCorrupt(UnicuspError):
    pass


class CertificateFailure(UnicuspError):
    """A claimed pencil property did not hold.

    ``check`` names the failing check (``"degree"``, ``"h0"`` or
    ``"free_at_cusp"``) and ``observed`` carries the value found.
    """

    def __init__(self, check, observed, expected=None):
        self.check = check
        self.observed = observed
        self.expected = expected
        super().__init__(f"{check}: observed {observed!r}, expected {expected!r}")


class ConsistencyFailure(AssertionError):
    def __init__(self, n, formula, direct):
        self.n = n
        self.formula = formula
        self.direct = direct
        super().__init__(f"n={n}: formula gives {formula}, direct kernel gives {direct}")
