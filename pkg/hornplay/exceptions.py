from typing import Optional


class HornplayError(Exception):
    """Base class for every error raised by hornplay."""

    pass


class TheorySyntaxError(HornplayError):
    """Text could not be parsed. Carries the 1-based position of the offending text."""

    def __init__(self, message: str, line: int, column: int) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ArityConflictError(HornplayError):
    """A predicate or functor was used with two different arities."""

    def __init__(
        self,
        symbol: str,
        first: int,
        second: int,
        kind: str = "predicate",
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        self.symbol = symbol
        self.first = first
        self.second = second
        self.kind = kind
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(
            f"{kind} {symbol} used with arity {first} and {second}{where}"
        )


class UnknownPredicateError(HornplayError):
    def __init__(self, predicate: str) -> None:
        self.predicate = predicate
        super().__init__(f"unknown predicate {predicate}")


class InvalidArgumentError(HornplayError, ValueError):
    pass


class MalformedInputError(HornplayError):
    """An input file (params, proof, dataset, obligations) has the wrong shape."""

    def __init__(
        self, message: str, path: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        self.path = path
        self.line = line
        prefix = path if path is not None else "<input>"
        if line is not None:
            prefix = f"{prefix}:{line}"
        super().__init__(f"{prefix}: {message}")


class IntegrityError(HornplayError):
    """A prover emitted a proof the checker rejects. Always an implementation bug."""

    pass
