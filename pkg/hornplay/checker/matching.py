from dataclasses import dataclass
from typing import ClassVar, List

from ..kernel import Atom, apply_subst
from .base import NodeContext, ProofIssue, ProofNodeValidator


@dataclass
class ProofHeadMismatchIssue(ProofIssue):
    description: ClassVar[str] = (
        "Clause head under the binding differs from the node goal under the binding"
    )
    reason: ClassVar[str] = "head-mismatch"
    clause_id: int


class HeadMatchValidator(ProofNodeValidator):
    """Checks that the binding makes the clause head and the goal identical."""

    order: ClassVar[int] = 20

    def validate(self, context: NodeContext) -> List[ProofIssue]:
        binding = context.node.binding
        head = apply_subst(binding, context.clause.head)
        goal = apply_subst(binding, context.node.goal)
        if head != goal:
            return [ProofHeadMismatchIssue(context.path, context.node.clause_id)]
        return []


@dataclass
class ProofSubgoalMismatchIssue(ProofIssue):
    description: ClassVar[str] = (
        "Subproof goal differs from the corresponding body atom under the binding"
    )
    reason: ClassVar[str] = "subgoal-mismatch"
    expected: Atom


class SubgoalMatchValidator(ProofNodeValidator):
    """Checks each subproof against its body atom. The issue path names the subproof."""

    order: ClassVar[int] = 50

    def validate(self, context: NodeContext) -> List[ProofIssue]:
        binding = context.node.binding
        for position, (atom, sub) in enumerate(
            zip(context.clause.body, context.node.subproofs)
        ):
            expected = apply_subst(binding, atom)
            if sub.goal != expected:
                return [ProofSubgoalMismatchIssue(context.path + (position,), expected)]
        return []
