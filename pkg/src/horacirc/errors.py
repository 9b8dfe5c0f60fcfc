"""Exception hierarchy shared across the package."""


class HoracircError(Exception):
    """Base class for all library errors."""


class DiscriminantMismatchError(HoracircError, ValueError):
    pass


class IrrationalResidueError(HoracircError, ValueError):
    pass


class RepeatedRootError(HoracircError, ValueError):
    """Binet evaluation needs distinct characteristic roots (D != 0)."""


class DimensionError(HoracircError, ValueError):
    pass


class DegenerateCaseError(HoracircError, ZeroDivisionError):
    """A closed-form denominator vanishes; ``denominator`` names which one."""

    def __init__(self, denominator: str, detail: str = ""):
        self.denominator = denominator
        msg = f"degenerate case: {denominator} = 0"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SingularMatrixError(HoracircError, ZeroDivisionError):
    pass


class NumericallySingularError(SingularMatrixError):
    pass
