from typing import Optional, Sequence


class ScreeningError(ValueError):
    """Root of every error raised by the screening library."""


# ---------------------------- material database -----------------------------

class MaterialDatabaseError(ScreeningError):
    def __init__(self, message: str, row: Optional[int] = None, path: Optional[str] = None):
        self.detail = message
        self.row = row
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if row is not None:
            where += f"row {row}:"
        super().__init__(f"{where} {message}" if where else message)


class MalformedRow(MaterialDatabaseError):
    pass


class DuplicateName(MaterialDatabaseError):
    pass


class NonPhysicalValue(MaterialDatabaseError):
    pass


class EmptyFile(MaterialDatabaseError):
    pass


# --------------------------------- physics -----------------------------------

class DomainError(ScreeningError):
    pass


# --------------------------------- solver ------------------------------------

class SolverError(ScreeningError):
    pass


class NoSolution(SolverError):
    def __init__(self, message: str, diagnostics: Sequence = ()):
        self.diagnostics = tuple(diagnostics)
        super().__init__(message)


class InvalidGrid(SolverError):
    pass


# ------------------------------- classifier ----------------------------------

class ClassificationError(ScreeningError):
    pass


class EmptyCurve(ClassificationError):
    pass


class MissingInput(ClassificationError):
    pass


class RegionConfigError(ScreeningError):
    pass


# --------------------------------- report ------------------------------------

class ReportError(ScreeningError):
    pass
