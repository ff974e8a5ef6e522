"""Concrete syntax for theories, goals and terms.

The surface is the familiar logic-programming one::

    % comment to end of line
    even(z).
    even(s(s(X))) :- even(X).
    ?- even(s(s(z))).

Lowercase identifiers are predicates, functors and constants; identifiers
starting with an uppercase letter or an underscore are variables.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

from .exceptions import ArityConflictError, TheorySyntaxError
from .kernel import Atom, Compound, Term, Variable


@dataclass(frozen=True)
class Clause:
    id: int
    head: Atom
    body: Tuple[Atom, ...] = ()

    @property
    def is_fact(self) -> bool:
        return not self.body


@dataclass(frozen=True)
class Theory:
    clauses: Tuple[Clause, ...]
    arities: Dict[str, int] = field(default_factory=dict)
    functor_arities: Dict[str, int] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash(self.clauses)

    @cached_property
    def by_predicate(self) -> Dict[str, Tuple[Clause, ...]]:
        index: Dict[str, List[Clause]] = {}
        for clause in self.clauses:
            index.setdefault(clause.head.predicate, []).append(clause)
        return {predicate: tuple(found) for predicate, found in index.items()}

    @cached_property
    def facts(self) -> Tuple[Clause, ...]:
        return tuple(clause for clause in self.clauses if clause.is_fact)

    def clauses_for(self, predicate: str) -> Tuple[Clause, ...]:
        return self.by_predicate.get(predicate, ())

    def __len__(self) -> int:
        return len(self.clauses)


_TOKEN_SPEC = [
    ("SKIP", r"[ \t\r\n]+|%[^\n]*"),
    ("NAME", r"[a-z][A-Za-z0-9_]*"),
    ("VAR", r"[A-Z_][A-Za-z0-9_]*"),
    ("NECK", r":-"),
    ("QUERY", r"\?-"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("DOT", r"\."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{regex})" for name, regex in _TOKEN_SPEC))


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _decode(text: Union[str, bytes]) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as error:
        line = text.count(b"\n", 0, error.start) + 1
        column = error.start - (text.rfind(b"\n", 0, error.start) + 1) + 1
        raise TheorySyntaxError("invalid UTF-8", line, column) from error


def _tokenize(source: str) -> List[_Token]:
    tokens = []
    position = 0
    line = 1
    line_start = 0
    while position < len(source):
        match = _TOKEN_RE.match(source, position)
        if match is None:
            raise TheorySyntaxError(
                f"unexpected character {source[position]!r}",
                line,
                position - line_start + 1,
            )
        kind = match.lastgroup
        chunk = match.group()
        if kind != "SKIP":
            tokens.append(_Token(kind, chunk, line, position - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = position + chunk.rfind("\n") + 1
        position = match.end()
    tokens.append(_Token("EOF", "", line, position - line_start + 1))
    return tokens


class _Parser:
    def __init__(
        self,
        source: str,
        arities: Optional[Dict[str, int]] = None,
        functor_arities: Optional[Dict[str, int]] = None,
    ) -> None:
        self.tokens = _tokenize(source)
        self.position = 0
        self.arities: Dict[str, int] = dict(arities or {})
        self.functor_arities: Dict[str, int] = dict(functor_arities or {})

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def accept(self, kind: str) -> Optional[_Token]:
        token = self.current
        if token.kind == kind:
            self.position += 1
            return token
        return None

    def expect(self, kind: str, what: str) -> _Token:
        token = self.accept(kind)
        if token is None:
            found = self.current.text or "end of input"
            raise TheorySyntaxError(
                f"expected {what}, found {found!r}",
                self.current.line,
                self.current.column,
            )
        return token

    def _record(self, table: Dict[str, int], kind: str, token: _Token, arity: int):
        known = table.setdefault(token.text, arity)
        if known != arity:
            raise ArityConflictError(
                token.text, known, arity, kind, token.line, token.column
            )

    def _arguments(self) -> Tuple[Term, ...]:
        if not self.accept("LPAREN"):
            return ()
        args = [self.term()]
        while self.accept("COMMA"):
            args.append(self.term())
        self.expect("RPAREN", "')' or ','")
        return tuple(args)

    def term(self) -> Term:
        variable = self.accept("VAR")
        if variable is not None:
            return Variable(variable.text)
        name = self.expect("NAME", "a term")
        args = self._arguments()
        self._record(self.functor_arities, "functor", name, len(args))
        return Compound(name.text, args)

    def atom(self) -> Atom:
        name = self.expect("NAME", "a predicate")
        args = self._arguments()
        self._record(self.arities, "predicate", name, len(args))
        return Atom(name.text, args)

    def clause(self, clause_id: int) -> Clause:
        head = self.atom()
        body: List[Atom] = []
        if self.accept("NECK"):
            body.append(self.atom())
            while self.accept("COMMA"):
                body.append(self.atom())
        self.expect("DOT", "'.'")
        return Clause(clause_id, head, tuple(body))

    def end(self) -> None:
        self.expect("EOF", "end of input")


def _guarded(parser: _Parser, rule):
    try:
        return rule()
    except RecursionError:
        token = parser.current
        raise TheorySyntaxError("nesting too deep", token.line, token.column) from None


def parse_theory(text: Union[str, bytes]) -> Theory:
    parser = _Parser(_decode(text))

    def clauses() -> List[Clause]:
        found: List[Clause] = []
        while parser.current.kind != "EOF":
            found.append(parser.clause(len(found)))
        return found

    parsed = _guarded(parser, clauses)
    return Theory(tuple(parsed), parser.arities, parser.functor_arities)


def parse_goal(text: Union[str, bytes], theory: Optional[Theory] = None) -> Atom:
    """Parse ``even(s(z))`` or ``?- even(s(z)).``, checking arities with ``theory``."""
    if theory is not None:
        parser = _Parser(_decode(text), theory.arities, theory.functor_arities)
    else:
        parser = _Parser(_decode(text))

    def goal() -> Atom:
        query = parser.accept("QUERY") is not None
        atom = parser.atom()
        if query:
            parser.expect("DOT", "'.'")
        else:
            parser.accept("DOT")
        parser.end()
        return atom

    return _guarded(parser, goal)


def parse_term(text: Union[str, bytes]) -> Term:
    parser = _Parser(_decode(text))

    def term() -> Term:
        parsed = parser.term()
        parser.end()
        return parsed

    return _guarded(parser, term)


def format_value(value: Union[Term, Atom, Clause]) -> str:
    if isinstance(value, Clause):
        if value.is_fact:
            return f"{format_value(value.head)}."
        body = ", ".join(format_value(atom) for atom in value.body)
        return f"{format_value(value.head)} :- {body}."
    if isinstance(value, Variable):
        return value.name
    symbol = value.predicate if isinstance(value, Atom) else value.functor
    if not value.args:
        return symbol
    return f"{symbol}({','.join(format_value(arg) for arg in value.args)})"


def format_theory(theory: Theory) -> str:
    return "".join(f"{format_value(clause)}\n" for clause in theory.clauses)
