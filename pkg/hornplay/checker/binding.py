from dataclasses import dataclass
from typing import ClassVar, List

from ..kernel import variables
from .base import NodeContext, ProofIssue, ProofNodeValidator


@dataclass
class ProofBadBindingIssue(ProofIssue):
    description: ClassVar[str] = (
        "Proof node binds a variable it does not own, or binds to a clause variable"
    )
    reason: ClassVar[str] = "bad-binding"
    variable: str


class BindingDomainValidator(ProofNodeValidator):
    """Checks that a binding only instantiates the clause's variables.

    The root may also instantiate the variables of the claimed goal; inner
    nodes may not, otherwise sibling subproofs could pick incompatible values
    for a shared variable.
    """

    order: ClassVar[int] = 40

    def validate(self, context: NodeContext) -> List[ProofIssue]:
        allowed = set(context.clause_variables)
        if context.is_root:
            allowed.update(variables(context.node.goal))
        for name, value in sorted(context.node.binding.items()):
            if name not in allowed:
                return [ProofBadBindingIssue(context.path, name)]
            if context.clause_variables.intersection(variables(value)):
                return [ProofBadBindingIssue(context.path, name)]
        return []


@dataclass
class ProofVariableClashIssue(ProofIssue):
    description: ClassVar[str] = (
        "Proof goal mentions a variable reserved for the renamed clause"
    )
    reason: ClassVar[str] = "variable-clash"
    variable: str


class VariableClashValidator(ProofNodeValidator):
    """Checks that the goal and the renamed clause share no variables."""

    order: ClassVar[int] = 45

    def validate(self, context: NodeContext) -> List[ProofIssue]:
        for name in variables(context.node.goal):
            if name in context.clause_variables:
                return [ProofVariableClashIssue(context.path, name)]
        return []
