"""Exception hierarchy shared by every stage of the pipeline."""


class PProgramError(Exception):
    """Base class for all diagnostics raised by this package."""


class ParseError(PProgramError):
    """Malformed token or production, with a source location."""

    def __init__(self, message, line, column, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(text)


class ValidationError(PProgramError):
    pass


class UndefinedVariable(ValidationError):
    def __init__(self, name, scope):
        self.name = name
        self.scope = scope
        super().__init__(f"variable {name!r} used before declaration in scope {scope}")


class ShadowedVariable(ValidationError):
    def __init__(self, name, scope):
        self.name = name
        self.scope = scope
        super().__init__(f"variable {name!r} declared twice in scope {scope}")


class ComponentCoverageError(ValidationError):
    pass


class UnknownVariable(PProgramError):
    pass


class HeaderMismatch(PProgramError):
    pass


class DuplicateContextName(PProgramError):
    pass


class CyclicSchema(PProgramError):
    pass


class InconsistentMarginals(PProgramError):
    pass


class VariableOverlap(PProgramError):
    pass


class MissingContextTable(PProgramError):
    pass


class PartialAssignment(PProgramError):
    pass


class UnsupportedSchema(PProgramError):
    pass
