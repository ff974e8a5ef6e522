"""Node importance and conjecture harvesting.

The root of a finished search is worth 1. A goal node splits its value over
its and-node children by rank: the j-th of k ranked alternatives receives
(1/j)/H_k. Every conjunct of an and-node inherits that share discounted by
gamma, since each conjunct is needed for the parent.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .checker import Proof, check_proof
from .config import ConfigHornplay
from .exceptions import IntegrityError, InvalidArgumentError
from .kernel import Atom, canonicalize, standardize_apart, unify
from .prover import (
    AndNode,
    GoalNode,
    NodeStatus,
    SearchOutcome,
    SearchTree,
    extract_proof,
)
from .theory import Theory, format_value

logger = logging.getLogger(__name__)

config = ConfigHornplay()


class Side(str, Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Side":
        return Side.B if self is Side.A else Side.A


@dataclass(frozen=True)
class ScoredConjecture:
    goal: Atom
    value: float
    prover: Side
    generation: int
    proof: Optional[Proof] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.value <= 1.0:
            raise InvalidArgumentError(f"value {self.value} outside (0, 1]")
        if isinstance(self.generation, bool) or self.generation < 0:
            raise InvalidArgumentError(
                f"generation must be >= 0, got {self.generation}"
            )
        if canonicalize(self.goal) != self.goal:
            raise InvalidArgumentError(
                f"goal {format_value(self.goal)} is not canonical"
            )
        object.__setattr__(self, "prover", Side(self.prover))

    @property
    def goal_text(self) -> str:
        return format_value(self.goal)

    def to_dict(self) -> Dict[str, object]:
        return {
            "goal": self.goal_text,
            "value": self.value,
            "prover": self.prover.value,
            "generation": self.generation,
        }


def _dataset_order(entry: ScoredConjecture) -> Tuple[float, str]:
    return (-entry.value, entry.goal_text)


@dataclass(frozen=True)
class ConjectureDataset:
    """Proved subgoals of one prover, most valuable first."""

    origin: Side
    entries: Tuple[ScoredConjecture, ...] = ()

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=_dataset_order))
        goals = [entry.goal for entry in entries]
        if len(set(goals)) != len(goals):
            raise InvalidArgumentError("dataset goals must be pairwise distinct")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "origin", Side(self.origin))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ScoredConjecture]:
        return iter(self.entries)

    def total_value(self) -> float:
        return math.fsum(entry.value for entry in self.entries)


def _harmonic(k: int) -> float:
    return math.fsum(1.0 / i for i in range(1, k + 1))


def _ranked(goal: GoalNode) -> List[AndNode]:
    scored = [child for child in goal.children if child.children]
    bare = [child for child in goal.children if not child.children]
    scored.sort(
        key=lambda child: (
            -float(np.mean([sub.score for sub in child.children])),
            child.clause_id,
        )
    )
    bare.sort(key=lambda child: child.clause_id)
    return scored + bare


def or_shares(goal: GoalNode) -> List[Tuple[AndNode, float]]:
    """Rank-harmonic share of each and-node child of ``goal``, best ranked first."""
    ranked = _ranked(goal)
    total = _harmonic(len(ranked))
    return [(child, (1.0 / rank) / total) for rank, child in enumerate(ranked, start=1)]


def node_values(
    tree: SearchTree, gamma: float = config.default_gamma
) -> Dict[int, float]:
    """Value of every goal node reachable from the root, keyed by creation index."""
    if not 0.0 < gamma <= 1.0:
        raise InvalidArgumentError(f"gamma must lie in (0, 1], got {gamma}")
    values = {tree.root.index: 1.0}
    pending = [tree.root]
    while pending:
        goal = pending.pop()
        value = values[goal.index]
        for and_node, share in or_shares(goal):
            inherited = value * share * gamma
            for child in and_node.children:
                values[child.index] = inherited
                pending.append(child)
    return values


def _one_step_trivial(atom: Atom, theory: Theory) -> bool:
    for clause in theory.facts:
        if clause.head.predicate != atom.predicate:
            continue
        if unify(standardize_apart(clause, 0).head, atom) is not None:
            return True
    return False


def harvest(
    outcome: SearchOutcome,
    values: Dict[int, float],
    side: Side,
    generation: int,
    theory: Theory,
    skip_trivial: bool = True,
) -> ConjectureDataset:
    """Collect the proved non-root goal nodes as a scored, deduplicated dataset."""
    best: Dict[Atom, ScoredConjecture] = {}
    for node in outcome.tree.nodes:
        if node.is_root or node.status is not NodeStatus.PROVED:
            continue
        if skip_trivial and _one_step_trivial(node.atom, theory):
            continue
        goal = canonicalize(node.atom)
        value = values[node.index]
        known = best.get(goal)
        if known is not None and known.value >= value:
            continue
        proof = extract_proof(node)
        verdict = check_proof(theory, goal, proof)
        if not verdict.accepted:
            logger.error(
                "harvested proof of %s rejected: %s", format_value(goal), verdict
            )
            raise IntegrityError(
                f"harvested proof of {format_value(goal)} rejected: {verdict}"
            )
        best[goal] = ScoredConjecture(goal, value, Side(side), generation, proof)
    dataset = ConjectureDataset(Side(side), tuple(best.values()))
    logger.debug("harvested %d conjectures for side %s", len(dataset), side)
    return dataset
