"""Command-line entry point.

    hornplay prove  --theory T --goal G [--params P] [--budget N]
    hornplay match  --theory T (--target G | --obligations F) [--mode M]
    hornplay evolve --theory T --target G [--max-generations N] [--seed S]
    hornplay check  --theory T --proof F [--goal G]

Results go to files under ``--out`` (and a one-line summary to stdout);
diagnostics go to stderr.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .arena import Budgets, naive_match, self_play_match
from .checker import check_proof
from .config import ConfigHornplay
from .evolution import GameMode, GenerationRecord, MutationConfig, Pairing, evolve
from .exceptions import (
    ArityConflictError,
    IntegrityError,
    InvalidArgumentError,
    MalformedInputError,
    TheorySyntaxError,
    UnknownPredicateError,
)
from .kernel import Atom
from .prover import HeuristicParams, search
from .records import (
    dump_dataset,
    load_obligations,
    load_params,
    load_proof,
    log_lines,
    proof_to_dict,
    read_text,
    report_to_dict,
    write_atomic,
    write_json,
    write_jsonl,
)
from .theory import Theory, format_value, parse_goal, parse_theory

logger = logging.getLogger(__name__)

config = ConfigHornplay()


@dataclass(frozen=True)
class RunConfig:
    """Validated command line. Paths are checked to exist when it is built."""

    subcommand: str
    theory: Path
    out: Path
    goal: Optional[str] = None
    goal_file: Optional[Path] = None
    params: Optional[Path] = None
    params_b: Optional[Path] = None
    proof: Optional[Path] = None
    obligations: Optional[Path] = None
    mode: str = "self-play"
    budget: int = config.default_search_budget
    budgets: Optional[Budgets] = None
    gamma: float = config.default_gamma
    mutation: MutationConfig = MutationConfig()
    max_generations: int = config.default_max_generations
    generation: int = 0
    pairing: Pairing = Pairing.CHAMPION
    game: GameMode = GameMode.SELF_PLAY
    skip_trivial: bool = True
    time_limit: Optional[float] = None
    workers: int = 1

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        def path(value: Optional[str]) -> Optional[Path]:
            if value is None:
                return None
            found = Path(value)
            if not found.is_file():
                raise MalformedInputError("no such file", value)
            return found

        budgets = None
        if hasattr(args, "harvest_budget"):
            budgets = Budgets(args.harvest_budget, args.cross_budget)
        mutation = MutationConfig()
        if hasattr(args, "sigma"):
            mutation = MutationConfig(
                args.sigma, args.p_mut, args.depth_limit_step, args.seed
            )
        if getattr(args, "budget", 0) < 0:
            raise InvalidArgumentError(f"budget must be >= 0, got {args.budget}")
        if getattr(args, "time_limit", None) is not None and args.time_limit <= 0:
            raise InvalidArgumentError(
                f"time limit must be > 0, got {args.time_limit}"
            )
        gamma = getattr(args, "gamma", config.default_gamma)
        if not 0.0 < gamma <= 1.0:
            raise InvalidArgumentError(f"gamma must lie in (0, 1], got {gamma}")

        return cls(
            subcommand=args.command,
            theory=path(args.theory),
            out=Path(getattr(args, "out", ".")),
            goal=getattr(args, "goal", None) or getattr(args, "target", None),
            goal_file=path(getattr(args, "goal_file", None)),
            params=path(
                getattr(args, "params", None) or getattr(args, "params_a", None)
            ),
            params_b=path(getattr(args, "params_b", None)),
            proof=path(getattr(args, "proof", None)),
            obligations=path(getattr(args, "obligations", None)),
            mode=getattr(args, "mode", "self-play"),
            budget=getattr(args, "budget", config.default_search_budget),
            budgets=budgets,
            gamma=gamma,
            mutation=mutation,
            max_generations=getattr(
                args, "max_generations", config.default_max_generations
            ),
            generation=getattr(args, "generation", 0),
            pairing=Pairing(getattr(args, "pairing", Pairing.CHAMPION.value)),
            game=GameMode(getattr(args, "game", GameMode.SELF_PLAY.value)),
            skip_trivial=not getattr(args, "no_trivial_filter", False),
            time_limit=getattr(args, "time_limit", None),
            workers=getattr(args, "workers", 1),
        )

    def load_theory(self) -> Theory:
        return parse_theory(read_text(self.theory))

    def load_goal(self, theory: Theory) -> Optional[Atom]:
        if self.goal_file is not None:
            return parse_goal(read_text(self.goal_file), theory)
        if self.goal is not None:
            return parse_goal(self.goal, theory)
        return None

    def load_params(self, which: Optional[Path]) -> HeuristicParams:
        if which is None:
            return HeuristicParams()
        return load_params(read_text(which), str(which))

    def output(self, kind: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / config.output_files[kind]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theory", required=True, help="Theory file (.thy)")
    parser.add_argument(
        "--out", default=".", help="Directory for result files (default: .)"
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log search details to stderr"
    )


def _add_goal(parser: argparse.ArgumentParser, name: str, required: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument(f"--{name}", help=f"{name.capitalize()} atom, e.g. 'even(z)'")
    group.add_argument(
        f"--{name}-file", dest="goal_file", help=f"File holding the {name} query"
    )


def _add_budgets(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--harvest-budget",
        type=int,
        default=config.default_harvest_budget,
        help="Expansions for each long attempt at the target",
    )
    parser.add_argument(
        "--cross-budget",
        type=int,
        default=config.default_cross_budget,
        help="Expansions per conjecture of the opposing dataset",
    )
    parser.add_argument("--gamma", type=float, default=config.default_gamma)
    parser.add_argument(
        "--no-trivial-filter",
        action="store_true",
        help="Keep subgoals that unify directly with a fact",
    )
    parser.add_argument("--workers", type=int, choices=(1, 2), default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hornplay",
        description="Self-play evolution of heuristic provers over Horn clauses",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    prove = commands.add_parser("prove", help="Search for a proof of one goal")
    _add_common(prove)
    _add_goal(prove, "goal", True)
    prove.add_argument("--params", help="Heuristic parameter file (JSON)")
    prove.add_argument("--budget", type=int, default=config.default_search_budget)

    match = commands.add_parser("match", help="Play one match between two variants")
    _add_common(match)
    match.add_argument("--mode", choices=config.game_modes, default="self-play")
    _add_goal(match, "target", False)
    match.add_argument("--obligations", help="Obligation list for --mode naive")
    match.add_argument("--params-a", help="Parameter file of side A")
    match.add_argument("--params-b", help="Parameter file of side B")
    match.add_argument(
        "--budget",
        type=int,
        default=config.default_search_budget,
        help="Expansions per obligation in --mode naive",
    )
    match.add_argument("--generation", type=int, default=0)
    _add_budgets(match)

    evolve_cmd = commands.add_parser(
        "evolve", help="Evolve a prover until it proves the target"
    )
    _add_common(evolve_cmd)
    _add_goal(evolve_cmd, "target", True)
    evolve_cmd.add_argument("--params", help="Initial heuristic parameter file")
    evolve_cmd.add_argument("--game", choices=config.game_modes, default="self-play")
    evolve_cmd.add_argument("--obligations", help="Obligation list for --game naive")
    evolve_cmd.add_argument(
        "--pairing", choices=config.pairing_modes, default=Pairing.CHAMPION.value
    )
    evolve_cmd.add_argument(
        "--max-generations", type=int, default=config.default_max_generations
    )
    evolve_cmd.add_argument("--seed", type=int, default=config.default_seed)
    evolve_cmd.add_argument("--sigma", type=float, default=config.default_sigma)
    evolve_cmd.add_argument("--p-mut", type=float, default=config.default_p_mut)
    evolve_cmd.add_argument(
        "--depth-limit-step", type=int, default=config.default_depth_limit_step
    )
    evolve_cmd.add_argument(
        "--time-limit",
        type=float,
        help=(
            "Advisory wall-clock ceiling in seconds. It is checked between "
            "generations only, so a running generation always finishes; a run "
            "cut short is marked truncated and exits 1"
        ),
    )
    _add_budgets(evolve_cmd)

    check = commands.add_parser("check", help="Verify a proof file")
    _add_common(check)
    check.add_argument("--proof", required=True, help="Proof file (JSON)")
    check.add_argument("--goal", help="Claimed goal (default: the proof's root goal)")

    return parser


def _prove(cfg: RunConfig) -> int:
    theory = cfg.load_theory()
    goal = cfg.load_goal(theory)
    params = cfg.load_params(cfg.params)
    outcome = search(theory, goal, params, cfg.budget)
    stats = {
        "goal": format_value(goal),
        "proved": outcome.root_proved,
        "expansions": outcome.expansions_used,
        "budget": cfg.budget,
        "weights": dict(zip(config.feature_names, params.weights)),
        "depth_limit": params.depth_limit,
        **outcome.tree.statistics(),
    }
    if outcome.root_proved:
        verdict = check_proof(theory, goal, outcome.proof)
        if not verdict.accepted:
            raise IntegrityError(f"emitted proof rejected: {verdict}")
        write_json(cfg.output("proof"), proof_to_dict(outcome.proof))
    write_json(cfg.output("stats"), stats)
    if outcome.root_proved:
        print(f"proved {format_value(goal)} in {outcome.expansions_used} expansions")
        return config.exit_codes["success"]
    print(f"not proved: {format_value(goal)} ({outcome.tree.root.status.value})")
    return config.exit_codes["negative"]


def _match(cfg: RunConfig) -> int:
    theory = cfg.load_theory()
    pa, pb = cfg.load_params(cfg.params), cfg.load_params(cfg.params_b)
    if cfg.mode == GameMode.NAIVE.value:
        if cfg.obligations is None:
            raise InvalidArgumentError("--mode naive needs --obligations")
        goals = load_obligations(
            read_text(cfg.obligations), theory, str(cfg.obligations)
        )
        result = naive_match(theory, goals, pa, pb, cfg.budget, cfg.workers)
    else:
        target = cfg.load_goal(theory)
        if target is None:
            raise InvalidArgumentError("--mode self-play needs --target")
        result, da, db = self_play_match(
            theory,
            target,
            pa,
            pb,
            cfg.budgets,
            cfg.gamma,
            cfg.generation,
            cfg.skip_trivial,
            cfg.workers,
        )
        write_atomic(cfg.output("dataset_a"), dump_dataset(da))
        write_atomic(cfg.output("dataset_b"), dump_dataset(db))
    write_jsonl(cfg.output("match"), [result.to_dict()])
    print(
        f"{result.score_a:g}-{result.score_b:g}, winner {result.winner.value}"
        + ("" if result.target_proved_by is None else ", target proved")
    )
    return config.exit_codes["success"]


def _evolve(cfg: RunConfig) -> int:
    theory = cfg.load_theory()
    target = cfg.load_goal(theory)
    init = cfg.load_params(cfg.params)
    obligations: List[Atom] = []
    if cfg.obligations is not None:
        obligations = load_obligations(
            read_text(cfg.obligations), theory, str(cfg.obligations)
        )
    log_path = cfg.output("log")
    written: List[dict] = []

    def flush(record: GenerationRecord) -> None:
        written.append(record.to_dict())
        write_jsonl(log_path, written)

    write_jsonl(log_path, written)
    report = evolve(
        theory,
        target,
        init,
        cfg.budgets,
        cfg.gamma,
        cfg.mutation,
        cfg.max_generations,
        pairing=cfg.pairing,
        game=cfg.game,
        obligations=obligations,
        skip_trivial=cfg.skip_trivial,
        on_record=flush,
        time_limit=cfg.time_limit,
        workers=cfg.workers,
    )
    write_jsonl(log_path, log_lines(report))
    write_json(cfg.output("report"), report_to_dict(report))
    if report.solved:
        print(f"solved at generation {report.outcome.generation}")
        return config.exit_codes["success"]
    suffix = " (truncated)" if report.truncated else ""
    print(f"exhausted after {len(report.generations)} generations{suffix}")
    return config.exit_codes["negative"]


def _check(cfg: RunConfig) -> int:
    theory = cfg.load_theory()
    proof = load_proof(read_text(cfg.proof), str(cfg.proof))
    claimed = cfg.load_goal(theory) or proof.goal
    verdict = check_proof(theory, claimed, proof)
    print(verdict)
    if verdict.accepted:
        return config.exit_codes["success"]
    return config.exit_codes["negative"]


_COMMANDS = {"prove": _prove, "match": _match, "evolve": _evolve, "check": _check}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else config.exit_codes["usage"]

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = RunConfig.from_args(args)
        return _COMMANDS[cfg.subcommand](cfg)
    except InvalidArgumentError as error:
        logger.error("%s", error)
        parser.print_usage(sys.stderr)
        return config.exit_codes["usage"]
    except (
        TheorySyntaxError,
        ArityConflictError,
        UnknownPredicateError,
        MalformedInputError,
    ) as error:
        logger.error("%s", error)
        return config.exit_codes["malformed_input"]
    except IntegrityError as error:
        logger.error("integrity failure: %s", error)
        return config.exit_codes["integrity"]
    except OSError as error:
        logger.error("%s", error)
        return config.exit_codes["malformed_input"]


def main() -> None:
    code = run()
    logger.debug("exit %d (%s)", code, config.exit_names.get(code, "unknown"))
    sys.exit(code)
