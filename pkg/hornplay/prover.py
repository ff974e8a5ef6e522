"""Best-first exploration of an and-or tree over Horn clauses.

Goal nodes are disjunctive (any applicable clause will do), and-nodes are
conjunctive (every body atom of the clause must be proved). The open goal node
with the highest heuristic score is expanded next, ties going to the node
created first. The budget counts expansions, so every run is replayable.

A variable shared by sibling conjuncts is never bound inside one of them. A
clause that would bind it instantiates the owning and-node instead.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from .checker import Proof
from .checker.base import CHECK_COUNTER
from .config import ConfigHornplay
from .exceptions import InvalidArgumentError, UnknownPredicateError
from .kernel import (
    Atom,
    Substitution,
    Variable,
    apply_subst,
    fresh_name,
    standardize_apart,
    term_size,
    unify,
    variables,
)
from .theory import Clause, Theory

logger = logging.getLogger(__name__)

config = ConfigHornplay()


@dataclass(frozen=True)
class HeuristicParams:
    """One prover variant: a linear scoring model plus a depth limit."""

    weights: Tuple[float, ...] = config.default_weights
    depth_limit: int = config.default_depth_limit

    def __post_init__(self) -> None:
        weights = tuple(float(weight) for weight in self.weights)
        if len(weights) != config.feature_count:
            raise InvalidArgumentError(
                f"expected {config.feature_count} weights, got {len(weights)}"
            )
        if not all(math.isfinite(weight) for weight in weights):
            raise InvalidArgumentError("weights must be finite")
        if (
            isinstance(self.depth_limit, bool)
            or not isinstance(self.depth_limit, (int, np.integer))
            or self.depth_limit < 1
        ):
            raise InvalidArgumentError(
                f"depth_limit must be an integer >= 1, got {self.depth_limit!r}"
            )
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "depth_limit", int(self.depth_limit))

    @cached_property
    def vector(self) -> np.ndarray:
        vector = np.array(self.weights, dtype=np.float64)
        vector.setflags(write=False)
        return vector

    def scaled(self, factor: float) -> "HeuristicParams":
        return HeuristicParams(
            tuple(factor * weight for weight in self.weights), self.depth_limit
        )

    def to_dict(self) -> Dict[str, object]:
        return {"weights": list(self.weights), "depth_limit": self.depth_limit}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "HeuristicParams":
        return cls(tuple(data["weights"]), data["depth_limit"])


def features(goal: Atom, depth: int, producing_clause_body_len: int) -> np.ndarray:
    """Bias, depth, term size, distinct variables, producing clause body length."""
    if depth < 0:
        raise InvalidArgumentError(f"depth must be >= 0, got {depth}")
    return np.array(
        [
            1.0,
            depth,
            term_size(goal),
            len(variables(goal)),
            producing_clause_body_len,
        ],
        dtype=np.float64,
    )


def score(params: HeuristicParams, f: np.ndarray) -> float:
    if len(f) != len(params.vector):
        raise InvalidArgumentError("feature vector and weights differ in length")
    return float(np.dot(params.vector, f))


class NodeStatus(str, Enum):
    OPEN = "open"
    EXPANDED = "expanded"
    PROVED = "proved"
    FAILED = "failed"

    @property
    def decided(self) -> bool:
        return self in (NodeStatus.PROVED, NodeStatus.FAILED)


@dataclass(eq=False)
class GoalNode:
    index: int
    atom: Atom
    depth: int
    features: np.ndarray = field(repr=False)
    score: float
    parent: Optional["AndNode"] = field(default=None, repr=False)
    protected: FrozenSet[str] = frozenset()
    status: NodeStatus = NodeStatus.OPEN
    children: List["AndNode"] = field(default_factory=list, repr=False)

    @property
    def is_root(self) -> bool:
        return self.parent is None


@dataclass(eq=False)
class AndNode:
    clause_id: int
    clause: Clause = field(repr=False)
    binding: Substitution = field(repr=False)
    parent: GoalNode = field(repr=False)
    children: List[GoalNode] = field(default_factory=list, repr=False)
    status: NodeStatus = NodeStatus.OPEN
    depth_exceeded: bool = False
    instantiated: bool = False


@dataclass(eq=False)
class SearchTree:
    root: GoalNode
    nodes: List[GoalNode] = field(default_factory=list)
    expanded: List[int] = field(default_factory=list)

    def and_nodes(self) -> Iterator[AndNode]:
        for node in self.nodes:
            yield from node.children

    def signature(self) -> List[Tuple[object, ...]]:
        """Structural summary used to compare trees: one row per goal node."""
        return [
            (
                node.index,
                node.atom,
                node.depth,
                node.status.value,
                None if node.parent is None else node.parent.parent.index,
                None if node.parent is None else node.parent.clause_id,
            )
            for node in self.nodes
        ]

    def statistics(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in NodeStatus}
        for node in self.nodes:
            counts[node.status.value] += 1
        return {
            "goal_nodes": len(self.nodes),
            "and_nodes": sum(1 for _ in self.and_nodes()),
            "instantiated": sum(1 for node in self.and_nodes() if node.instantiated),
            "open": counts["open"],
            "expanded": counts["expanded"],
            "proved": counts["proved"],
            "failed": counts["failed"],
            "max_depth": max(node.depth for node in self.nodes),
        }


@dataclass(eq=False)
class SearchOutcome:
    tree: SearchTree
    root_proved: bool
    proof: Optional[Proof]
    expansions_used: int
    budget: int

    @property
    def expansion_order(self) -> List[int]:
        return list(self.tree.expanded)


class _Search:
    def __init__(self, theory: Theory, goal: Atom, params: HeuristicParams) -> None:
        self.theory = theory
        self.params = params
        # fresh names start above the counter the checker renames with
        self.counter = CHECK_COUNTER
        self.frontier: List[Tuple[float, int, GoalNode]] = []
        f = features(goal, 0, 0)
        root = GoalNode(0, goal, 0, f, score(params, f))
        self.tree = SearchTree(root, [root])
        self._push(root)

    def _goal_node(
        self,
        atom: Atom,
        depth: int,
        body_len: int,
        parent: Optional[AndNode],
        protected: FrozenSet[str],
    ) -> GoalNode:
        f = features(atom, depth, body_len)
        node = GoalNode(
            len(self.tree.nodes),
            atom,
            depth,
            f,
            score(self.params, f),
            parent,
            protected,
        )
        self.tree.nodes.append(node)
        self._push(node)
        return node

    def _push(self, node: GoalNode) -> None:
        heapq.heappush(self.frontier, (-node.score, node.index, node))

    def _live(self, node: GoalNode) -> bool:
        if node.status is not NodeStatus.OPEN:
            return False
        and_node = node.parent
        while and_node is not None:
            if and_node.status.decided or and_node.parent.status.decided:
                return False
            and_node = and_node.parent.parent
        return True

    def select(self) -> Optional[GoalNode]:
        while self.frontier:
            _, _, node = heapq.heappop(self.frontier)
            if self._live(node):
                return node
        return None

    def expand(self, node: GoalNode) -> None:
        node.status = NodeStatus.EXPANDED
        self.tree.expanded.append(node.index)
        for clause in self.theory.clauses_for(node.atom.predicate):
            self.counter += 1
            renamed = standardize_apart(clause, self.counter)
            binding = unify(renamed.head, node.atom)
            if binding is None:
                continue
            too_deep = not renamed.is_fact and node.depth + 1 > self.params.depth_limit
            bound = node.protected.intersection(binding)
            if bound:
                if not too_deep:
                    self._instantiate(node, bound, binding)
                continue
            and_node = AndNode(clause.id, renamed, binding, node)
            node.children.append(and_node)
            if renamed.is_fact:
                and_node.status = NodeStatus.PROVED
            elif too_deep:
                and_node.status = NodeStatus.FAILED
                and_node.depth_exceeded = True
            else:
                self._open_conjuncts(node, and_node)
        if any(child.status is NodeStatus.PROVED for child in node.children):
            node.status = NodeStatus.PROVED
        elif all(child.status is NodeStatus.FAILED for child in node.children):
            node.status = NodeStatus.FAILED

    def _open_conjuncts(self, node: GoalNode, and_node: AndNode) -> None:
        body = [apply_subst(and_node.binding, atom) for atom in and_node.clause.body]
        occurrences: Dict[str, int] = {}
        for atom in body:
            for name in variables(atom):
                occurrences[name] = occurrences.get(name, 0) + 1
        shared = {name for name, count in occurrences.items() if count > 1}
        guarded = shared | node.protected
        for atom in body:
            child = self._goal_node(
                atom,
                node.depth + 1,
                len(body),
                and_node,
                frozenset(guarded.intersection(variables(atom))),
            )
            and_node.children.append(child)

    def _instantiate(
        self, node: GoalNode, bound: FrozenSet[str], binding: Substitution
    ) -> None:
        """Apply a binding of shared variables at the conjunction that shares them.

        The and-node owning the variables gets an instantiated sibling under
        its goal node, and the conjuncts are opened again from there. The
        clause that produced ``binding`` applies to the re-derived conjunct
        without touching a protected variable.
        """
        target = node.parent
        while target.parent.protected.intersection(bound):
            target = target.parent.parent
        owned = set()
        for atom in target.clause.body:
            owned.update(variables(apply_subst(target.binding, atom)))
        lifted = {name: value for name, value in binding.items() if name in owned}
        merged = {
            name: apply_subst(lifted, value) for name, value in target.binding.items()
        }
        merged.update(lifted)
        goal = target.parent
        sibling = AndNode(
            target.clause_id, target.clause, merged, goal, instantiated=True
        )
        goal.children.append(sibling)
        self._open_conjuncts(goal, sibling)

    def propagate(self, goal: GoalNode) -> None:
        while goal.status.decided and goal.parent is not None:
            and_node = goal.parent
            if and_node.status is not NodeStatus.OPEN:
                return
            if goal.status is NodeStatus.FAILED:
                and_node.status = NodeStatus.FAILED
            elif all(child.status is NodeStatus.PROVED for child in and_node.children):
                and_node.status = NodeStatus.PROVED
            else:
                return
            goal = and_node.parent
            if goal.status is not NodeStatus.EXPANDED:
                return
            if and_node.status is NodeStatus.PROVED:
                goal.status = NodeStatus.PROVED
            elif all(child.status is NodeStatus.FAILED for child in goal.children):
                goal.status = NodeStatus.FAILED
            else:
                return


def search(
    theory: Theory, goal: Atom, params: HeuristicParams, budget: int
) -> SearchOutcome:
    """Explore the and-or tree of ``goal`` for at most ``budget`` expansions."""
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 0:
        raise InvalidArgumentError(f"budget must be an integer >= 0, got {budget!r}")
    known = theory.arities.get(goal.predicate)
    if known is None or known != goal.arity:
        raise UnknownPredicateError(f"{goal.predicate}/{goal.arity}")
    reserved = [
        name for name in variables(goal) if name.startswith(config.reserved_prefix)
    ]
    if reserved:
        raise InvalidArgumentError(
            f"goal variable {reserved[0]} uses the reserved prefix "
            f"{config.reserved_prefix}"
        )

    state = _Search(theory, goal, params)
    root = state.tree.root
    expansions = 0
    while expansions < budget and not root.status.decided:
        node = state.select()
        if node is None:
            break
        state.expand(node)
        expansions += 1
        state.propagate(node)

    proved = root.status is NodeStatus.PROVED
    logger.debug(
        "search %s: %s after %d/%d expansions, %d nodes",
        goal,
        "proved" if proved else root.status.value,
        expansions,
        budget,
        len(state.tree.nodes),
    )
    return SearchOutcome(
        tree=state.tree,
        root_proved=proved,
        proof=extract_proof(state.tree.root) if proved else None,
        expansions_used=expansions,
        budget=budget,
    )


def _chosen(node: GoalNode) -> AndNode:
    return min(
        (child for child in node.children if child.status is NodeStatus.PROVED),
        key=lambda child: child.clause_id,
    )


def _resolve(parts: Substitution) -> Substitution:
    resolved = dict(parts)
    for _ in range(len(resolved) + 1):
        step = {name: apply_subst(resolved, value) for name, value in resolved.items()}
        if step == resolved:
            return resolved
        resolved = step
    raise ValueError("cyclic answer substitution")


def _renaming(clause: Clause) -> Dict[str, str]:
    """Map the prover's fresh clause variables onto the checker's names."""
    names = variables(clause.head)
    for atom in clause.body:
        names.extend(variables(atom))
    return {
        name: fresh_name(CHECK_COUNTER, position)
        for position, name in enumerate(dict.fromkeys(names))
    }


def extract_proof(node: GoalNode) -> Proof:
    """Build a checkable proof of a proved goal node.

    At every proved goal node the proved and-node with the smallest clause id
    is used. The unifiers along the chosen subtree are composed into one
    answer substitution, which instantiates every inner goal; ``node`` keeps
    its own atom and its binding carries the answer for its variables.
    """
    if node.status is not NodeStatus.PROVED:
        raise InvalidArgumentError(f"goal node {node.index} is not proved")
    parts: Substitution = {}
    pending = [node]
    while pending:
        current = pending.pop()
        chosen = _chosen(current)
        parts.update(chosen.binding)
        pending.extend(chosen.children)
    answer = _resolve(parts)

    def build(current: GoalNode, top: bool) -> Proof:
        chosen = _chosen(current)
        binding: Dict[str, object] = {
            checker_name: apply_subst(answer, Variable(prover_name))
            for prover_name, checker_name in _renaming(chosen.clause).items()
        }
        if top:
            for name in variables(current.atom):
                value = apply_subst(answer, Variable(name))
                if value != Variable(name):
                    binding[name] = value
            goal = current.atom
        else:
            goal = apply_subst(answer, current.atom)
        return Proof(
            goal=goal,
            clause_id=chosen.clause_id,
            binding=binding,
            subproofs=tuple(build(child, False) for child in chosen.children),
        )

    return build(node, True)


def proved_instance(proof: Proof) -> Atom:
    """The instance of the root goal the proof establishes."""
    return apply_subst(proof.binding, proof.goal)

