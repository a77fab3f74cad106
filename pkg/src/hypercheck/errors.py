"""Exception hierarchy shared by every layer of the checker."""


class HyperCheckError(Exception):
    """Base class for all errors raised by hypercheck."""


class FormulaSyntaxError(HyperCheckError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownLogicError(HyperCheckError):
    pass


class UndecidableLogicError(HyperCheckError):
    """Raised for logics whose model checking problem is undecidable."""


class ValidationError(HyperCheckError):
    pass


class FreeVariableError(ValidationError):
    pass


class NonPrenexError(ValidationError):
    pass


class FragmentError(ValidationError):
    """A HyperCTL* quantifier sits below an until/eventually/globally operand."""


class PolarityError(ValidationError):
    """A knowledge operator occurs under negation."""


class KripkeError(HyperCheckError):
    pass


class NotAPathError(KripkeError):
    pass


class AlphabetError(HyperCheckError):
    pass


class UnassignedVariableError(HyperCheckError):
    pass


class ResourceGuardError(HyperCheckError):
    """A configured resource cap (e.g. quantifier alternation depth) was exceeded."""
