from dataclasses import dataclass
from typing import ClassVar, List

from .base import NodeContext, ProofIssue, ProofNodeValidator


@dataclass
class ProofBadClauseIdIssue(ProofIssue):
    description: ClassVar[str] = "Proof node references a clause id outside the theory"
    reason: ClassVar[str] = "bad-clause-id"
    clause_id: object


class ClauseIdValidator(ProofNodeValidator):
    """Checks that the node's clause id indexes a clause of the theory."""

    order: ClassVar[int] = 10

    def validate(self, context: NodeContext) -> List[ProofIssue]:
        if context.clause is None:
            return [ProofBadClauseIdIssue(context.path, context.node.clause_id)]
        return []


@dataclass
class ProofArityMismatchIssue(ProofIssue):
    description: ClassVar[str] = (
        "Proof node has a different number of subproofs than its clause has body atoms"
    )
    reason: ClassVar[str] = "arity-mismatch"
    expected: int
    found: int


class SubproofCountValidator(ProofNodeValidator):
    """Checks that every body atom of the clause has exactly one subproof."""

    order: ClassVar[int] = 30

    def validate(self, context: NodeContext) -> List[ProofIssue]:
        expected = len(context.clause.body)
        found = len(context.node.subproofs)
        if expected != found:
            return [ProofArityMismatchIssue(context.path, expected, found)]
        return []
