"""The two games two prover variants can play.

``naive_match`` counts discharged proof obligations. ``self_play_match`` lets
each side harvest conjectures from a long attempt at the target and then
scores each side on the conjectures harvested by its opponent.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

from .checker import Proof, check_proof
from .config import ConfigHornplay
from .exceptions import IntegrityError, InvalidArgumentError, UnknownPredicateError
from .kernel import Atom
from .prover import HeuristicParams, search
from .theory import Theory, format_value
from .valuation import ConjectureDataset, Side, harvest, node_values

logger = logging.getLogger(__name__)

config = ConfigHornplay()


def _positive_int(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InvalidArgumentError(f"{name} must be an integer >= 1, got {value!r}")


@dataclass(frozen=True)
class Budgets:
    harvest_budget: int = config.default_harvest_budget
    cross_budget: int = config.default_cross_budget

    def __post_init__(self) -> None:
        _positive_int("harvest_budget", self.harvest_budget)
        _positive_int("cross_budget", self.cross_budget)


@dataclass(frozen=True)
class MatchResult:
    """Outcome of one match.

    ``expansions_a``/``expansions_b`` count cross-phase expansions only, the
    economy criterion of ``decide_winner``. The target attempts, or the
    obligation sweep of a naive match, are counted in ``search_expansions_a``
    and ``search_expansions_b``.
    """

    score_a: float = 0.0
    score_b: float = 0.0
    proved_count_a: int = 0
    proved_count_b: int = 0
    expansions_a: int = 0
    expansions_b: int = 0
    dataset_a_size: int = 0
    dataset_b_size: int = 0
    target_proved_by: Optional[Side] = None
    winner: Side = Side.A
    search_expansions_a: int = 0
    search_expansions_b: int = 0
    discharged_a: Tuple[int, ...] = ()
    discharged_b: Tuple[int, ...] = ()
    target_proof: Optional[Proof] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "score_a": self.score_a,
            "score_b": self.score_b,
            "proved_count_a": self.proved_count_a,
            "proved_count_b": self.proved_count_b,
            "expansions_a": self.expansions_a,
            "expansions_b": self.expansions_b,
            "search_expansions_a": self.search_expansions_a,
            "search_expansions_b": self.search_expansions_b,
            "dataset_a_size": self.dataset_a_size,
            "dataset_b_size": self.dataset_b_size,
            "target_proved_by": None
            if self.target_proved_by is None
            else self.target_proved_by.value,
            "winner": self.winner.value,
        }


def decide_winner(result: MatchResult) -> Side:
    """Higher score, then more entries proved, then fewer expansions, then A."""
    if result.score_a != result.score_b:
        return Side.A if result.score_a > result.score_b else Side.B
    if result.proved_count_a != result.proved_count_b:
        return Side.A if result.proved_count_a > result.proved_count_b else Side.B
    if result.expansions_a != result.expansions_b:
        return Side.A if result.expansions_a < result.expansions_b else Side.B
    return Side.A


def _verified(theory: Theory, goal: Atom, proof: Proof) -> None:
    verdict = check_proof(theory, goal, proof)
    if not verdict.accepted:
        logger.error("emitted proof of %s rejected: %s", format_value(goal), verdict)
        raise IntegrityError(
            f"emitted proof of {format_value(goal)} rejected: {verdict}"
        )


def _check_goals(theory: Theory, goals: Sequence[Atom]) -> None:
    for goal in goals:
        if theory.arities.get(goal.predicate) != goal.arity:
            raise UnknownPredicateError(f"{goal.predicate}/{goal.arity}")


@dataclass(frozen=True)
class _Sweep:
    discharged: Tuple[int, ...]
    values: Tuple[float, ...]
    expansions: int


def _sweep(
    theory: Theory,
    goals: Sequence[Atom],
    values: Sequence[float],
    params: HeuristicParams,
    budget: int,
) -> _Sweep:
    """Attempt every goal in order from scratch."""
    discharged: List[int] = []
    gained: List[float] = []
    expansions = 0
    for position, (goal, value) in enumerate(zip(goals, values)):
        outcome = search(theory, goal, params, budget)
        expansions += outcome.expansions_used
        if outcome.root_proved:
            _verified(theory, goal, outcome.proof)
            discharged.append(position)
            gained.append(value)
    return _Sweep(tuple(discharged), tuple(gained), expansions)


@dataclass(frozen=True)
class _Harvest:
    proved: bool
    expansions: int
    proof: Optional[Proof]
    dataset: ConjectureDataset


def _harvest(
    theory: Theory,
    target: Atom,
    params: HeuristicParams,
    budget: int,
    gamma: float,
    side: Side,
    generation: int,
    skip_trivial: bool,
) -> _Harvest:
    outcome = search(theory, target, params, budget)
    if outcome.root_proved:
        _verified(theory, target, outcome.proof)
        return _Harvest(
            True, outcome.expansions_used, outcome.proof, ConjectureDataset(side)
        )
    values = node_values(outcome.tree, gamma)
    dataset = harvest(outcome, values, side, generation, theory, skip_trivial)
    return _Harvest(False, outcome.expansions_used, None, dataset)


def _pair(workers: int, fn, first: tuple, second: tuple) -> Tuple[object, object]:
    """Run ``fn`` on both argument tuples, results in A-then-B order."""
    if workers not in (1, 2):
        raise InvalidArgumentError(f"workers must be 1 or 2, got {workers!r}")
    if workers == 1:
        return fn(*first), fn(*second)
    with ProcessPoolExecutor(max_workers=2) as pool:
        future_a = pool.submit(fn, *first)
        future_b = pool.submit(fn, *second)
        return future_a.result(), future_b.result()


def naive_match(
    theory: Theory,
    obligations: Sequence[Atom],
    pa: HeuristicParams,
    pb: HeuristicParams,
    budget: int,
    workers: int = 1,
) -> MatchResult:
    """Count how many obligations each side discharges within ``budget`` expansions."""
    obligations = list(obligations)
    _check_goals(theory, obligations)
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 0:
        raise InvalidArgumentError(f"budget must be an integer >= 0, got {budget!r}")
    ones = [1.0] * len(obligations)
    sweep_a, sweep_b = _pair(
        workers,
        _sweep,
        (theory, obligations, ones, pa, budget),
        (theory, obligations, ones, pb, budget),
    )
    result = MatchResult(
        score_a=float(len(sweep_a.discharged)),
        score_b=float(len(sweep_b.discharged)),
        proved_count_a=len(sweep_a.discharged),
        proved_count_b=len(sweep_b.discharged),
        search_expansions_a=sweep_a.expansions,
        search_expansions_b=sweep_b.expansions,
        discharged_a=sweep_a.discharged,
        discharged_b=sweep_b.discharged,
    )
    result = replace(result, winner=decide_winner(result))
    logger.info(
        "naive match over %d obligations: %d-%d, winner %s",
        len(obligations),
        result.proved_count_a,
        result.proved_count_b,
        result.winner.value,
    )
    return result


def self_play_match(
    theory: Theory,
    target: Atom,
    pa: HeuristicParams,
    pb: HeuristicParams,
    budgets: Budgets,
    gamma: float = config.default_gamma,
    generation: int = 0,
    skip_trivial: bool = True,
    workers: int = 1,
) -> Tuple[MatchResult, ConjectureDataset, ConjectureDataset]:
    """Harvest conjectures from both sides, then score each side on its opponent's."""
    if not isinstance(budgets, Budgets):
        raise InvalidArgumentError("budgets must be a Budgets instance")
    if not 0.0 < gamma <= 1.0:
        raise InvalidArgumentError(f"gamma must lie in (0, 1], got {gamma}")
    _check_goals(theory, [target])
    budget = budgets.harvest_budget

    harvest_a, harvest_b = _pair(
        workers,
        _harvest,
        (theory, target, pa, budget, gamma, Side.A, generation, skip_trivial),
        (theory, target, pb, budget, gamma, Side.B, generation, skip_trivial),
    )

    if harvest_a.proved or harvest_b.proved:
        if harvest_a.proved and (
            not harvest_b.proved or harvest_a.expansions <= harvest_b.expansions
        ):
            side, proof = Side.A, harvest_a.proof
        else:
            side, proof = Side.B, harvest_b.proof
        logger.info("generation %d: target proved by %s", generation, side.value)
        result = MatchResult(
            target_proved_by=side,
            winner=side,
            search_expansions_a=harvest_a.expansions,
            search_expansions_b=harvest_b.expansions,
            target_proof=proof,
        )
        # the game is over, so neither harvest is scored or kept
        return result, ConjectureDataset(Side.A), ConjectureDataset(Side.B)

    da, db = harvest_a.dataset, harvest_b.dataset
    # each side is scored on the values its opponent assigned
    sweep_a, sweep_b = _pair(
        workers,
        _sweep,
        (
            theory,
            [entry.goal for entry in db],
            [entry.value for entry in db],
            pa,
            budgets.cross_budget,
        ),
        (
            theory,
            [entry.goal for entry in da],
            [entry.value for entry in da],
            pb,
            budgets.cross_budget,
        ),
    )
    result = MatchResult(
        score_a=math.fsum(sweep_a.values),
        score_b=math.fsum(sweep_b.values),
        proved_count_a=len(sweep_a.discharged),
        proved_count_b=len(sweep_b.discharged),
        expansions_a=sweep_a.expansions,
        expansions_b=sweep_b.expansions,
        dataset_a_size=len(da),
        dataset_b_size=len(db),
        search_expansions_a=harvest_a.expansions,
        search_expansions_b=harvest_b.expansions,
        discharged_a=sweep_a.discharged,
        discharged_b=sweep_b.discharged,
    )
    result = replace(result, winner=decide_winner(result))
    logger.info(
        "generation %d: scores %.6g-%.6g over datasets %d/%d, winner %s",
        generation,
        result.score_a,
        result.score_b,
        len(da),
        len(db),
        result.winner.value,
    )
    return result, da, db
