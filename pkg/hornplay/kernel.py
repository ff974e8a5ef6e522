"""First-order terms, atoms and substitutions.

Everything here is immutable and side-effect free, so the same values can be
shared by any number of concurrent searches.
"""

import dataclasses
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Iterator, List, Optional, Tuple, Union

from .config import ConfigHornplay

if TYPE_CHECKING:
    from .theory import Clause

config = ConfigHornplay()


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Compound:
    """A function application. Constants are compounds with no arguments."""

    functor: str
    args: Tuple["Term", ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Variable, Compound]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)


Substitution = Dict[str, Term]


def iter_variables(value: Union[Term, Atom]) -> Iterator[str]:
    """Yield variable names left-to-right, depth-first, repetitions included."""
    if isinstance(value, Variable):
        yield value.name
        return
    for arg in value.args:
        yield from iter_variables(arg)


def variables(value: Union[Term, Atom]) -> List[str]:
    """Distinct variable names in order of first occurrence."""
    return list(dict.fromkeys(iter_variables(value)))


def occurs(name: str, term: Union[Term, Atom]) -> bool:
    if isinstance(term, Variable):
        return term.name == name
    return any(occurs(name, arg) for arg in term.args)


def apply_subst(subst: Substitution, value):
    """Replace every domain variable of ``subst`` in ``value``, all at once."""
    if not subst:
        return value
    if isinstance(value, Variable):
        return subst.get(value.name, value)
    if not value.args:
        return value
    args = tuple(apply_subst(subst, arg) for arg in value.args)
    if isinstance(value, Atom):
        return Atom(value.predicate, args)
    return Compound(value.functor, args)


def _head(value) -> Tuple[type, str, int]:
    if isinstance(value, Atom):
        return Atom, value.predicate, len(value.args)
    return Compound, value.functor, len(value.args)


def unify(a, b, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    """Most general unifier of ``a`` and ``b`` (atoms or terms), or None.

    The returned substitution is idempotent. When two variables meet, the one
    coming from ``a`` is bound.
    """
    if isinstance(a, Atom) != isinstance(b, Atom):
        return None
    result: Substitution = dict(subst) if subst else {}
    pending = [(a, b)]
    while pending:
        x, y = pending.pop()
        x = apply_subst(result, x)
        y = apply_subst(result, y)
        if x == y:
            continue
        if isinstance(x, Variable):
            bound = _bind(result, x.name, y)
        elif isinstance(y, Variable):
            bound = _bind(result, y.name, x)
        elif _head(x) == _head(y):
            pending.extend(reversed(list(zip(x.args, y.args))))
            continue
        else:
            return None
        if bound is None:
            return None
        result = bound
    return result


def _bind(subst: Substitution, name: str, term: Term) -> Optional[Substitution]:
    if occurs(name, term):
        return None
    step = {name: term}
    composed = {key: apply_subst(step, value) for key, value in subst.items()}
    composed[name] = term
    return composed


def standardize_apart(clause: "Clause", fresh_counter: int) -> "Clause":
    """Rename the clause's variables to ``_G<counter>``, ``_G<counter>_1``, ..."""
    names = variables(clause.head)
    for atom in clause.body:
        names.extend(variables(atom))
    names = list(dict.fromkeys(names))
    if not names:
        return clause
    renaming: Substitution = {
        name: Variable(fresh_name(fresh_counter, position))
        for position, name in enumerate(names)
    }
    return dataclasses.replace(
        clause,
        head=apply_subst(renaming, clause.head),
        body=tuple(apply_subst(renaming, atom) for atom in clause.body),
    )


def fresh_name(counter: int, position: int) -> str:
    if position == 0:
        return f"{config.reserved_prefix}{counter}"
    return f"{config.reserved_prefix}{counter}_{position}"


def canonicalize(atom: Atom) -> Atom:
    """Rename variables V0, V1, ... by first occurrence."""
    renaming: Substitution = {
        name: Variable(f"{config.canonical_prefix}{position}")
        for position, name in enumerate(variables(atom))
    }
    return apply_subst(renaming, atom)


def alpha_equivalent(a: Atom, b: Atom) -> bool:
    return canonicalize(a) == canonicalize(b)


def term_size(value: Union[Term, Atom]) -> int:
    """Count of functor and variable occurrences, the predicate counting as one."""
    if isinstance(value, Variable):
        return 1
    return 1 + sum(term_size(arg) for arg in value.args)


def term_depth(value: Union[Term, Atom]) -> int:
    if isinstance(value, Variable) or not value.args:
        return 1
    return 1 + max(term_depth(arg) for arg in value.args)
