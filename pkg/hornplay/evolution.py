"""Champion/challenger evolution of prover variants.

Each generation pairs two variants derived from the current champion, plays
one match on the target and keeps the winner. The loop stops as soon as
either side discharges the target.
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .arena import Budgets, MatchResult, naive_match, self_play_match
from .checker import Proof, check_proof
from .config import ConfigHornplay
from .exceptions import IntegrityError, InvalidArgumentError
from .kernel import Atom
from .prover import HeuristicParams, search
from .theory import Theory, format_value
from .valuation import Side

logger = logging.getLogger(__name__)

config = ConfigHornplay()


@dataclass(frozen=True)
class MutationConfig:
    sigma: float = config.default_sigma
    p_mut: float = config.default_p_mut
    depth_limit_step: int = config.default_depth_limit_step
    seed: int = config.default_seed

    def __post_init__(self) -> None:
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise InvalidArgumentError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 <= self.p_mut <= 1.0:
            raise InvalidArgumentError(f"p_mut must lie in [0, 1], got {self.p_mut}")
        if (
            isinstance(self.depth_limit_step, bool)
            or not isinstance(self.depth_limit_step, int)
            or self.depth_limit_step < 0
        ):
            raise InvalidArgumentError(
                "depth_limit_step must be an integer >= 0, "
                f"got {self.depth_limit_step!r}"
            )
        if (
            isinstance(self.seed, bool)
            or not isinstance(self.seed, int)
            or not 0 <= self.seed < 2**64
        ):
            raise InvalidArgumentError(
                f"seed must be a 64-bit unsigned integer, got {self.seed!r}"
            )


def make_rng(seed: int) -> np.random.Generator:
    """The mutation stream: numpy's PCG64 bit generator seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def mutate(
    params: HeuristicParams, rng: np.random.Generator, cfg: MutationConfig
) -> HeuristicParams:
    """Perturb ``params``.

    Every call draws five normals, five uniforms and one more uniform whatever
    fires, so two runs from the same seed stay aligned.
    """
    steps = rng.standard_normal(config.feature_count)
    gates = rng.random(config.feature_count)
    depth_draw = rng.random()
    weights = np.where(
        gates < cfg.p_mut, params.vector + cfg.sigma * steps, params.vector
    )
    k = cfg.depth_limit_step
    step = min(int(math.floor(depth_draw * (2 * k + 1))), 2 * k) - k
    return HeuristicParams(
        tuple(float(weight) for weight in weights),
        max(1, params.depth_limit + step),
    )


class Pairing(str, Enum):
    CHAMPION = "champion"
    FRESH_PAIR = "fresh-pair"


class GameMode(str, Enum):
    SELF_PLAY = "self-play"
    NAIVE = "naive"


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    champion_params: HeuristicParams
    challenger_params: HeuristicParams
    score_a: float
    score_b: float
    winner: Side
    dataset_sizes: Tuple[int, int]
    target_proved: bool
    seed: int
    match: Optional[MatchResult] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "generation": self.generation,
            "champion_params": self.champion_params.to_dict(),
            "challenger_params": self.challenger_params.to_dict(),
            "score_a": self.score_a,
            "score_b": self.score_b,
            "winner": self.winner.value,
            "dataset_sizes": list(self.dataset_sizes),
            "target_proved": self.target_proved,
            "seed": self.seed,
        }

    @property
    def winner_params(self) -> HeuristicParams:
        return self.champion_params if self.winner is Side.A else self.challenger_params


@dataclass(frozen=True)
class Solved:
    generation: int
    params: HeuristicParams
    proof: Proof

    def to_dict(self) -> Dict[str, object]:
        return {
            "status": "solved",
            "generation": self.generation,
            "params": self.params.to_dict(),
        }


@dataclass(frozen=True)
class Exhausted:
    limit: int

    def to_dict(self) -> Dict[str, object]:
        return {"status": "exhausted", "limit": self.limit}


Outcome = Union[Solved, Exhausted]


@dataclass(frozen=True)
class EvolutionReport:
    generations: Tuple[GenerationRecord, ...]
    outcome: Outcome
    total_expansions: int
    truncated: bool = False

    @property
    def solved(self) -> bool:
        return isinstance(self.outcome, Solved)


def _pair(
    champion: HeuristicParams,
    rng: np.random.Generator,
    mcfg: MutationConfig,
    pairing: Pairing,
) -> Tuple[HeuristicParams, HeuristicParams]:
    if pairing is Pairing.CHAMPION:
        return champion, mutate(champion, rng, mcfg)
    return mutate(champion, rng, mcfg), mutate(champion, rng, mcfg)


def _play(
    theory: Theory,
    target: Atom,
    pa: HeuristicParams,
    pb: HeuristicParams,
    budgets: Budgets,
    gamma: float,
    generation: int,
    game: GameMode,
    obligations: Sequence[Atom],
    skip_trivial: bool,
    workers: int,
) -> Tuple[MatchResult, Optional[Proof]]:
    if game is GameMode.SELF_PLAY:
        result, _, _ = self_play_match(
            theory, target, pa, pb, budgets, gamma, generation, skip_trivial, workers
        )
        return result, result.target_proof

    # the target rides along as the last obligation
    goals = list(obligations) + [target]
    result = naive_match(theory, goals, pa, pb, budgets.harvest_budget, workers)
    last = len(goals) - 1
    if last in result.discharged_a:
        side, params = Side.A, pa
    elif last in result.discharged_b:
        side, params = Side.B, pb
    else:
        return result, None
    outcome = search(theory, target, params, budgets.harvest_budget)
    verdict = check_proof(theory, target, outcome.proof)
    if not verdict.accepted:
        logger.error("replayed proof of %s rejected: %s", format_value(target), verdict)
        raise IntegrityError(
            f"replayed proof of {format_value(target)} rejected: {verdict}"
        )
    return replace(result, target_proved_by=side, winner=side), outcome.proof


def evolve(
    theory: Theory,
    target: Atom,
    init: HeuristicParams,
    budgets: Budgets,
    gamma: float,
    mcfg: MutationConfig,
    max_generations: int,
    pairing: Pairing = Pairing.CHAMPION,
    game: GameMode = GameMode.SELF_PLAY,
    obligations: Sequence[Atom] = (),
    skip_trivial: bool = True,
    on_record: Optional[Callable[[GenerationRecord], None]] = None,
    time_limit: Optional[float] = None,
    clock: Callable[[], float] = time.monotonic,
    workers: int = 1,
) -> EvolutionReport:
    """Mutate the winner until a side discharges ``target`` or the limit is hit.

    ``on_record`` sees each generation record before the next generation
    starts. ``time_limit`` is checked between generations only; running out
    ends the run as exhausted with ``truncated`` set.
    """
    if isinstance(max_generations, bool) or not isinstance(max_generations, int):
        raise InvalidArgumentError("max_generations must be an integer")
    if max_generations < 0:
        raise InvalidArgumentError(
            f"max_generations must be >= 0, got {max_generations}"
        )
    if time_limit is not None and time_limit < 0:
        raise InvalidArgumentError(f"time_limit must be >= 0, got {time_limit}")
    pairing = Pairing(pairing)
    game = GameMode(game)

    rng = make_rng(mcfg.seed)
    started = clock()
    champion = init
    records: List[GenerationRecord] = []
    total = 0
    for generation in range(max_generations):
        if generation and time_limit is not None and clock() - started >= time_limit:
            logger.warning("time limit reached before generation %d", generation)
            return EvolutionReport(
                tuple(records), Exhausted(max_generations), total, truncated=True
            )

        pa, pb = _pair(champion, rng, mcfg, pairing)
        result, proof = _play(
            theory,
            target,
            pa,
            pb,
            budgets,
            gamma,
            generation,
            game,
            obligations,
            skip_trivial,
            workers,
        )
        total += (
            result.search_expansions_a
            + result.search_expansions_b
            + result.expansions_a
            + result.expansions_b
        )
        record = GenerationRecord(
            generation=generation,
            champion_params=pa,
            challenger_params=pb,
            score_a=result.score_a,
            score_b=result.score_b,
            winner=result.winner,
            dataset_sizes=(result.dataset_a_size, result.dataset_b_size),
            target_proved=result.target_proved_by is not None,
            seed=mcfg.seed,
            match=result,
        )
        records.append(record)
        logger.info(
            "generation %d: %.6g-%.6g, winner %s%s",
            generation,
            result.score_a,
            result.score_b,
            result.winner.value,
            ", target proved" if record.target_proved else "",
        )
        if on_record is not None:
            on_record(record)
        if record.target_proved:
            return EvolutionReport(
                tuple(records),
                Solved(generation, record.winner_params, proof),
                total,
            )
        champion = record.winner_params

    return EvolutionReport(tuple(records), Exhausted(max_generations), total)
