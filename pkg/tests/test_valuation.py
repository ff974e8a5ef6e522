import math

import numpy as np
import pytest

from hornplay.checker import check_proof
from hornplay.checker.base import ProofGoalMismatchIssue, Verdict
from hornplay.exceptions import IntegrityError, InvalidArgumentError
from hornplay.kernel import canonicalize
from hornplay.prover import HeuristicParams, search
from hornplay.theory import parse_goal, parse_theory
from hornplay.valuation import (
    ConjectureDataset,
    ScoredConjecture,
    Side,
    harvest,
    node_values,
    or_shares,
)

EVEN = parse_theory("even(z).\neven(s(s(X))) :- even(X).")


def load(path):
    with open(path, encoding="utf-8") as stream:
        return parse_theory(stream.read())


def test_side_other():
    assert Side.A.other is Side.B
    assert Side.B.other is Side.A
    assert Side("B") is Side.B


def test_node_values_root_fact():
    outcome = search(EVEN, parse_goal("even(z)"), HeuristicParams(), 1)
    assert node_values(outcome.tree, 0.9) == {0: 1.0}


def test_node_values_chain():
    outcome = search(EVEN, parse_goal("even(s(s(s(s(z)))))"), HeuristicParams(), 10)
    values = node_values(outcome.tree, 0.9)
    assert values[0] == 1.0
    chain = [values[node.index] for node in outcome.tree.nodes]
    assert chain == pytest.approx([1.0, 0.9, 0.81])


def test_node_values_alternatives():
    theory = parse_theory("g(a) :- h(a).\ng(a) :- k(a).\nh(a).\nk(a).")
    outcome = search(theory, parse_goal("g(a)"), HeuristicParams(), 1)
    values = node_values(outcome.tree, 1.0)
    by_atom = {node.atom: values[node.index] for node in outcome.tree.nodes}
    assert by_atom[parse_goal("h(a)")] == pytest.approx(2 / 3)
    assert by_atom[parse_goal("k(a)")] == pytest.approx(1 / 3)
    shares = or_shares(outcome.tree.root)
    assert [and_node.clause_id for and_node, _ in shares] == [0, 1]


@pytest.mark.parametrize("gamma", [0.0, -0.5, 1.5, float("nan")])
def test_node_values_invalid_gamma(gamma):
    outcome = search(EVEN, parse_goal("even(z)"), HeuristicParams(), 1)
    with pytest.raises(InvalidArgumentError):
        node_values(outcome.tree, gamma)


def test_harvest_chain():
    outcome = search(EVEN, parse_goal("even(s(s(s(s(z)))))"), HeuristicParams(), 10)
    dataset = harvest(outcome, node_values(outcome.tree, 0.9), Side.A, 3, EVEN)
    assert [(entry.goal_text, entry.generation) for entry in dataset] == [
        ("even(s(s(z)))", 3)
    ]
    assert dataset.entries[0].value == pytest.approx(0.9)
    assert dataset.entries[0].prover is Side.A
    assert dataset.entries[0].proof is not None


def test_harvest_keeps_trivial_when_asked():
    outcome = search(EVEN, parse_goal("even(s(s(s(s(z)))))"), HeuristicParams(), 10)
    values = node_values(outcome.tree, 0.9)
    dataset = harvest(outcome, values, Side.B, 0, EVEN, skip_trivial=False)
    assert [entry.goal_text for entry in dataset] == ["even(s(s(z)))", "even(z)"]
    assert dataset.total_value() == pytest.approx(0.9 + 0.81)


def test_harvest_nothing_proved():
    outcome = search(EVEN, parse_goal("even(s(s(z)))"), HeuristicParams(), 1)
    dataset = harvest(outcome, node_values(outcome.tree), Side.A, 0, EVEN)
    assert len(dataset) == 0
    assert dataset.total_value() == 0.0


def test_harvest_keeps_best_value_per_goal():
    theory = parse_theory(
        "p(a) :- q(a), r(a).\nq(a) :- t(a).\nr(a) :- t(a).\nt(a) :- u(a).\nu(a)."
    )
    outcome = search(theory, parse_goal("p(a)"), HeuristicParams(), 100)
    values = node_values(outcome.tree)
    twins = [node for node in outcome.tree.nodes if node.atom == parse_goal("t(a)")]
    assert len(twins) == 2
    values[twins[0].index] = 0.4
    values[twins[1].index] = 0.7
    dataset = harvest(outcome, values, Side.A, 0, theory)
    entries = {entry.goal_text: entry.value for entry in dataset}
    assert entries["t(a)"] == 0.7
    assert "u(a)" not in entries


def test_harvest_rejected_proof(monkeypatch):
    monkeypatch.setattr(
        "hornplay.valuation.check_proof",
        lambda theory, goal, proof: Verdict(ProofGoalMismatchIssue(())),
    )
    outcome = search(EVEN, parse_goal("even(s(s(s(s(z)))))"), HeuristicParams(), 10)
    with pytest.raises(IntegrityError):
        harvest(outcome, node_values(outcome.tree), Side.A, 0, EVEN)


def test_harvested_goals_are_canonical():
    theory = load("tests/files/arith.thy")
    outcome = search(theory, parse_goal("double(s(s(z)), Y)"), HeuristicParams(), 50)
    dataset = harvest(outcome, node_values(outcome.tree), Side.A, 0, theory)
    for entry in dataset:
        assert canonicalize(entry.goal) == entry.goal


def test_scored_conjecture_invalid():
    goal = parse_goal("even(z)")
    for value in (0.0, -0.1, 1.5):
        with pytest.raises(InvalidArgumentError):
            ScoredConjecture(goal, value, Side.A, 0)
    with pytest.raises(InvalidArgumentError):
        ScoredConjecture(goal, 0.5, Side.A, -1)
    with pytest.raises(InvalidArgumentError):
        ScoredConjecture(parse_goal("even(X)"), 0.5, Side.A, 0)


def test_scored_conjecture_to_dict():
    entry = ScoredConjecture(parse_goal("plus(V0, z, V0)"), 0.25, "B", 4)
    assert entry.prover is Side.B
    assert entry.to_dict() == {
        "goal": "plus(V0,z,V0)",
        "value": 0.25,
        "prover": "B",
        "generation": 4,
    }


def test_dataset_order_and_uniqueness():
    low = ScoredConjecture(parse_goal("even(z)"), 0.5, Side.A, 0)
    high = ScoredConjecture(parse_goal("even(s(s(z)))"), 0.9, Side.A, 0)
    tied = ScoredConjecture(parse_goal("even(V0)"), 0.5, Side.A, 0)
    dataset = ConjectureDataset(Side.A, (low, tied, high))
    assert [entry.goal_text for entry in dataset] == [
        "even(s(s(z)))",
        "even(V0)",
        "even(z)",
    ]
    with pytest.raises(InvalidArgumentError):
        ConjectureDataset(Side.A, (low, low))


def _random_outcomes():
    theory = load("tests/files/arith.thy")
    goals = [
        "even(s(s(s(s(s(s(z)))))))",
        "even(s(s(s(z))))",
        "plus(X, Y, s(s(s(z))))",
        "double(X, s(s(s(s(z)))))",
        "evensum(X, Y, s(s(s(s(z)))))",
        "evensum(s(z), s(s(z)), Z)",
        "plus(s(s(z)), Y, Z)",
    ]
    rng = np.random.Generator(np.random.PCG64(99))
    for _ in range(100):
        goal = parse_goal(goals[int(rng.integers(len(goals)))])
        params = HeuristicParams(
            tuple(rng.standard_normal(5)), int(rng.integers(1, 8))
        )
        yield search(theory, goal, params, int(rng.integers(1, 60)))


def test_node_values_integrity():
    for outcome in _random_outcomes():
        values = node_values(outcome.tree, 0.9)
        for node in outcome.tree.nodes:
            if node.children:
                shares = [share for _, share in or_shares(node)]
                assert math.isclose(math.fsum(shares), 1.0, abs_tol=1e-9)
            if node.index not in values:
                continue
            assert 0.0 < values[node.index] <= 1.0
            if node.parent is not None:
                assert values[node.index] <= values[node.parent.parent.index]


def test_harvest_integrity():
    theory = load("tests/files/arith.thy")
    harvested = 0
    for outcome in _random_outcomes():
        dataset = harvest(outcome, node_values(outcome.tree, 0.9), Side.B, 3, theory)
        for entry in dataset:
            assert check_proof(theory, entry.goal, entry.proof).accepted
            assert 0.0 < entry.value <= 1.0
            assert entry.prover is Side.B
            assert entry.generation == 3
        harvested += len(dataset)
    assert harvested > 0
