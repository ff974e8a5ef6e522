"""Independent proof checker.

Only matching and syntactic equality happen here, never search: proofs carry
their bindings explicitly, so checking always terminates. The checker shares
nothing with the prover beyond ``hornplay.kernel`` and ``hornplay.theory``.
"""

from importlib import import_module
from inspect import getmembers, isabstract, isclass
from pathlib import Path
from pkgutil import iter_modules
import re
from typing import List, Tuple

from ..kernel import Atom, alpha_equivalent
from ..theory import Theory
from .base import (
    NodeContext,
    Proof,
    ProofGoalMismatchIssue,
    ProofIssue,
    ProofNodeValidator,
    Verdict,
)

validators = {
    re.sub("([A-Z]+)", "_\\1", name.replace("Validator", ""))[
        1:
    ].lower(): cls  # HeadMatchValidator -> head_match
    for _, submodule, _ in iter_modules(
        [str(Path(__file__).resolve().parent)]
    )  # str around Path is due to issue with PosixPath from Python 3.10
    for name, cls in getmembers(import_module(__name__ + "." + submodule), isclass)
    if not isabstract(cls)
    and name.endswith("Validator")
    and issubclass(cls, ProofNodeValidator)
}

node_validators: Tuple[ProofNodeValidator, ...] = tuple(
    cls() for cls in sorted(validators.values(), key=lambda cls: cls.order)
)


def check_node(theory: Theory, node: Proof, path: Tuple[int, ...]) -> List[ProofIssue]:
    """Run every node validator in order and stop at the first one that complains."""
    context = NodeContext(theory, node, path)
    for validator in node_validators:
        issues = validator.validate(context)
        if issues:
            return issues
    return []


def check_proof(theory: Theory, claimed_goal: Atom, proof: Proof) -> Verdict:
    """Accept ``proof`` iff it derives ``claimed_goal`` from ``theory``.

    Nodes are visited depth-first, left to right; the verdict names the first
    failing node.
    """
    if not alpha_equivalent(proof.goal, claimed_goal):
        return Verdict(ProofGoalMismatchIssue(()))
    pending: List[Tuple[Tuple[int, ...], Proof]] = [((), proof)]
    while pending:
        path, node = pending.pop()
        issues = check_node(theory, node, path)
        if issues:
            return Verdict(issues[0])
        pending.extend(
            reversed(
                [
                    (path + (position,), sub)
                    for position, sub in enumerate(node.subproofs)
                ]
            )
        )
    return Verdict()


__all__ = [
    "Proof",
    "ProofIssue",
    "ProofNodeValidator",
    "Verdict",
    "check_node",
    "check_proof",
    "node_validators",
    "validators",
]
