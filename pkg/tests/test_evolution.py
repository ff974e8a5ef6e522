import numpy as np
import pytest

from hornplay.arena import Budgets
from hornplay.checker import check_proof
from hornplay.evolution import (
    Exhausted,
    GameMode,
    MutationConfig,
    Pairing,
    Solved,
    evolve,
    make_rng,
    mutate,
)
from hornplay.exceptions import InvalidArgumentError
from hornplay.prover import HeuristicParams, search
from hornplay.theory import parse_goal, parse_theory
from hornplay.valuation import Side


def load(path):
    with open(path, encoding="utf-8") as stream:
        return parse_theory(stream.read())


EVEN = load("tests/files/even.thy")
ARITH = load("tests/files/arith.thy")
DISTRACTOR = load("tests/files/distractor.thy")
ODD_SUM = parse_goal("evensum(s(s(z)), s(s(s(z))), s(s(s(s(s(z))))))")


def distractor_target():
    with open("tests/files/distractor.target", encoding="utf-8") as stream:
        return parse_goal(stream.read(), DISTRACTOR)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"sigma": -0.1},
        {"sigma": float("inf")},
        {"p_mut": 1.5},
        {"p_mut": -0.1},
        {"depth_limit_step": -1},
        {"depth_limit_step": 1.5},
        {"seed": -1},
        {"seed": 2**64},
        {"seed": True},
    ],
)
def test_mutation_config_invalid(kwargs):
    with pytest.raises(InvalidArgumentError):
        MutationConfig(**kwargs)


def test_mutate_identity():
    params = HeuristicParams((0.1, -0.2, 0.3, -0.4, 0.5), 6)
    still = MutationConfig(sigma=0.0, depth_limit_step=0)
    assert mutate(params, make_rng(1), still) == params
    gated = MutationConfig(p_mut=0.0, depth_limit_step=0)
    assert mutate(params, make_rng(1), gated) == params


def test_mutate_deterministic():
    params = HeuristicParams()
    cfg = MutationConfig(seed=42)
    assert mutate(params, make_rng(42), cfg) == mutate(params, make_rng(42), cfg)


def test_mutate_draws_fixed_amount():
    for p_mut in (0.0, 0.5, 1.0):
        rng = make_rng(8)
        mutate(HeuristicParams(), rng, MutationConfig(p_mut=p_mut))
        reference = make_rng(8)
        reference.standard_normal(5)
        reference.random(5)
        reference.random()
        assert rng.random() == reference.random()


def test_mutate_depth_limit_bounds():
    rng = make_rng(0)
    cfg = MutationConfig(depth_limit_step=3)
    params = HeuristicParams(depth_limit=2)
    for _ in range(200):
        child = mutate(params, rng, cfg)
        assert child.depth_limit >= 1
        assert abs(child.depth_limit - params.depth_limit) <= 3


def test_mutate_full_rate_changes_every_weight():
    params = HeuristicParams()
    child = mutate(params, make_rng(5), MutationConfig(p_mut=1.0))
    assert np.count_nonzero(child.vector) == 5


def test_evolve_trivial_target():
    report = evolve(
        EVEN,
        parse_goal("even(z)"),
        HeuristicParams(),
        Budgets(),
        0.9,
        MutationConfig(),
        50,
    )
    assert report.solved
    assert report.outcome.generation == 0
    assert len(report.generations) == 1
    assert report.total_expansions == 2
    assert not report.truncated
    assert check_proof(EVEN, parse_goal("even(z)"), report.outcome.proof).accepted


def test_evolve_zero_generations():
    report = evolve(
        ARITH, ODD_SUM, HeuristicParams(), Budgets(), 0.9, MutationConfig(), 0
    )
    assert report.outcome == Exhausted(0)
    assert report.generations == ()
    assert report.total_expansions == 0


@pytest.mark.parametrize("max_generations", [-1, True, 2.0])
def test_evolve_invalid_limit(max_generations):
    with pytest.raises(InvalidArgumentError):
        evolve(
            ARITH,
            ODD_SUM,
            HeuristicParams(),
            Budgets(),
            0.9,
            MutationConfig(),
            max_generations,
        )


def test_evolve_champion_pairing_lineage():
    cfg = MutationConfig(seed=7)
    init = HeuristicParams()
    report = evolve(ARITH, ODD_SUM, init, Budgets(30, 10), 0.9, cfg, 6)
    assert report.outcome == Exhausted(6)
    assert len(report.generations) == 6
    first = report.generations[0]
    assert first.champion_params == init
    assert first.challenger_params == mutate(init, make_rng(7), cfg)
    for previous, current in zip(report.generations, report.generations[1:]):
        assert current.champion_params == previous.winner_params
        assert current.generation == previous.generation + 1
    assert all(record.seed == 7 for record in report.generations)
    assert all(not record.target_proved for record in report.generations)


def test_evolve_fresh_pair():
    cfg = MutationConfig(seed=11)
    init = HeuristicParams()
    report = evolve(
        ARITH,
        ODD_SUM,
        init,
        Budgets(30, 10),
        0.9,
        cfg,
        1,
        pairing=Pairing.FRESH_PAIR,
    )
    rng = make_rng(11)
    first = mutate(init, rng, cfg)
    second = mutate(init, rng, cfg)
    record = report.generations[0]
    assert (record.champion_params, record.challenger_params) == (first, second)


def test_evolve_reports_every_record():
    seen = []
    report = evolve(
        ARITH,
        ODD_SUM,
        HeuristicParams(),
        Budgets(30, 10),
        0.9,
        MutationConfig(),
        3,
        on_record=seen.append,
    )
    assert tuple(seen) == report.generations


def test_evolve_deterministic():
    def run():
        report = evolve(
            DISTRACTOR,
            distractor_target(),
            HeuristicParams(),
            Budgets(20, 20),
            0.9,
            MutationConfig(seed=3),
            50,
        )
        return [record.to_dict() for record in report.generations], (
            report.outcome.to_dict()
        )

    assert run() == run()


def test_evolve_time_limit():
    ticks = iter([0.0, 0.5, 2.0])
    report = evolve(
        ARITH,
        ODD_SUM,
        HeuristicParams(),
        Budgets(30, 10),
        0.9,
        MutationConfig(),
        10,
        time_limit=1.0,
        clock=lambda: next(ticks),
    )
    assert report.truncated
    assert len(report.generations) == 2
    assert report.outcome == Exhausted(10)


def test_evolve_negative_time_limit():
    with pytest.raises(InvalidArgumentError):
        evolve(
            ARITH,
            ODD_SUM,
            HeuristicParams(),
            Budgets(),
            0.9,
            MutationConfig(),
            1,
            time_limit=-1.0,
        )


def test_evolve_reaches_distractor_target():
    target = distractor_target()
    solved = 0
    for seed in range(10):
        report = evolve(
            DISTRACTOR,
            target,
            HeuristicParams(),
            Budgets(20, 20),
            0.9,
            MutationConfig(seed=seed),
            50,
        )
        if not report.solved:
            continue
        solved += 1
        winner = report.outcome.params
        assert search(DISTRACTOR, target, winner, 20).root_proved
        assert check_proof(DISTRACTOR, target, report.outcome.proof).accepted
        assert report.generations[-1].target_proved
    assert solved >= 7


EASY = [parse_goal("even(z)"), parse_goal("even(s(s(z)))")]


def test_evolve_naive_game_saturates():
    breadth_first = HeuristicParams((0, -4, 0, 0, 0), 10)
    for seed in range(5):
        report = evolve(
            DISTRACTOR,
            distractor_target(),
            breadth_first,
            Budgets(20, 20),
            0.9,
            MutationConfig(seed=seed),
            20,
            game=GameMode.NAIVE,
            obligations=EASY,
        )
        assert report.outcome == Exhausted(20)
        assert len(report.generations) == 20
        for record in report.generations:
            assert (record.score_a, record.score_b) == (2.0, 2.0)
            assert record.winner is Side.A
            assert record.champion_params == breadth_first


def test_evolve_distractor_games_agree():
    # no distractor subgoal is proved unless the target is, so neither game
    # gets a signal before a challenger discharges the target outright
    target = distractor_target()
    init = HeuristicParams()
    for seed in range(10):
        reports = [
            evolve(
                DISTRACTOR,
                target,
                init,
                Budgets(20, 20),
                0.9,
                MutationConfig(seed=seed),
                50,
                game=game,
                obligations=EASY,
            )
            for game in (GameMode.SELF_PLAY, GameMode.NAIVE)
        ]
        self_play, naive = reports
        assert self_play.solved == naive.solved
        assert len(self_play.generations) == len(naive.generations)
        for report, scores in ((self_play, (0.0, 0.0)), (naive, (2.0, 2.0))):
            for record in report.generations:
                assert record.champion_params == init
                assert record.dataset_sizes == (0, 0)
                if not record.target_proved:
                    assert (record.score_a, record.score_b) == scores
                    assert record.winner is Side.A


def test_evolve_naive_game_solves():
    report = evolve(
        EVEN,
        parse_goal("even(z)"),
        HeuristicParams(),
        Budgets(),
        0.9,
        MutationConfig(),
        5,
        game=GameMode.NAIVE,
    )
    assert isinstance(report.outcome, Solved)
    assert report.generations[0].winner is Side.A
    assert check_proof(EVEN, parse_goal("even(z)"), report.outcome.proof).accepted


def test_evolve_naive_game_counts_obligations():
    with open("tests/files/obligations.txt", encoding="utf-8") as stream:
        lines = [line.strip() for line in stream]
    goals = [
        parse_goal(line, ARITH) for line in lines if line and not line.startswith("%")
    ]
    report = evolve(
        ARITH,
        ODD_SUM,
        HeuristicParams(),
        Budgets(),
        0.9,
        MutationConfig(),
        2,
        game="naive",
        obligations=goals,
    )
    assert report.outcome == Exhausted(2)
    for record in report.generations:
        assert (record.score_a, record.score_b) == (20.0, 20.0)
        assert record.dataset_sizes == (0, 0)
