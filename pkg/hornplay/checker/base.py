from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Dict, List, Optional, Set, Tuple

from ..kernel import Atom, Term, standardize_apart, variables
from ..theory import Clause, Theory

# Clauses are renamed with this counter before checking; proof bindings use those names.
CHECK_COUNTER = 0


@dataclass(frozen=True)
class Proof:
    goal: Atom
    clause_id: int
    binding: Dict[str, Term]
    subproofs: Tuple["Proof", ...] = ()

    def size(self) -> int:
        return 1 + sum(sub.size() for sub in self.subproofs)

    def depth(self) -> int:
        return 1 + max((sub.depth() for sub in self.subproofs), default=0)


@dataclass
class ProofIssue:
    description: ClassVar[str] = "Proof node is invalid"
    reason: ClassVar[str] = "invalid"
    path: Tuple[int, ...]


@dataclass
class ProofGoalMismatchIssue(ProofIssue):
    description: ClassVar[str] = (
        "Proof root goal is not alpha-equivalent to the claimed goal"
    )
    reason: ClassVar[str] = "goal-mismatch"


@dataclass
class NodeContext:
    theory: Theory
    node: Proof
    path: Tuple[int, ...]

    @property
    def is_root(self) -> bool:
        return not self.path

    @cached_property
    def clause(self) -> Optional[Clause]:
        clause_id = self.node.clause_id
        if (
            isinstance(clause_id, int)
            and not isinstance(clause_id, bool)
            and 0 <= clause_id < len(self.theory.clauses)
        ):
            return standardize_apart(self.theory.clauses[clause_id], CHECK_COUNTER)
        return None

    @cached_property
    def clause_variables(self) -> Set[str]:
        if self.clause is None:
            return set()
        names = set(variables(self.clause.head))
        for atom in self.clause.body:
            names.update(variables(atom))
        return names


class ProofNodeValidator(ABC):
    """Checks one proof node. Validators run in ascending ``order``."""

    order: ClassVar[int] = 100

    @abstractmethod
    def validate(self, context: NodeContext) -> List[ProofIssue]:
        """Return the issues found at this node, empty when it is fine."""


@dataclass(frozen=True)
class Verdict:
    issue: Optional[ProofIssue] = None

    @property
    def accepted(self) -> bool:
        return self.issue is None

    @property
    def reason(self) -> Optional[str]:
        return None if self.issue is None else self.issue.reason

    @property
    def path(self) -> Optional[Tuple[int, ...]]:
        return None if self.issue is None else self.issue.path

    def __str__(self) -> str:
        if self.issue is None:
            return "accepted"
        issue = self.issue
        return f"rejected: {issue.reason} at {list(issue.path)} ({issue.description})"
