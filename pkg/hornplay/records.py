"""File formats: datasets, parameter files, proofs, obligation lists and logs.

Every record is a single line of compact JSON with keys in a fixed order, so
the same values always serialize to the same bytes.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from .checker import Proof
from .evolution import EvolutionReport, Solved
from .exceptions import HornplayError, MalformedInputError
from .kernel import Atom, Term, canonicalize
from .prover import HeuristicParams
from .theory import Theory, format_value, parse_goal, parse_term
from .valuation import ConjectureDataset, ScoredConjecture, Side

DATASET_FIELDS = ("goal", "value", "prover", "generation")
PROOF_FIELDS = {"goal", "clause", "binding", "subs"}


def dumps_record(record: Dict[str, Any]) -> str:
    return json.dumps(record, separators=(",", ":"), allow_nan=False)


def _file_mode() -> int:
    # mkstemp creates 0600 files; results get the mode open() would give them
    umask = os.umask(0)
    os.umask(umask)
    return 0o666 & ~umask


def write_atomic(path: Union[str, Path], text: str) -> None:
    """Replace ``path`` with ``text`` so readers never see a partial file."""
    path = Path(path)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)
        os.chmod(temporary, _file_mode())
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise


def write_jsonl(path: Union[str, Path], records: Iterable[Dict[str, Any]]) -> None:
    write_atomic(path, "".join(dumps_record(record) + "\n" for record in records))


def write_json(path: Union[str, Path], record: Dict[str, Any]) -> None:
    write_atomic(path, dumps_record(record) + "\n")


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as error:
        raise MalformedInputError(f"not UTF-8 ({error.reason})", str(path)) from None


def _loads(text: str, path: Optional[str], line: Optional[int] = None) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise MalformedInputError(f"invalid JSON: {error.msg}", path, line) from None
    except RecursionError:
        raise MalformedInputError("JSON nested too deeply", path, line) from None


def _expect(condition: bool, message: str, path: Optional[str], line: Optional[int]):
    if not condition:
        raise MalformedInputError(message, path, line)


def _goal(text: Any, path: Optional[str], line: Optional[int], theory=None) -> Atom:
    _expect(isinstance(text, str), "goal must be a string", path, line)
    try:
        return parse_goal(text, theory)
    except HornplayError as error:
        raise MalformedInputError(f"goal {text!r}: {error}", path, line) from None


# Datasets


def dump_dataset(dataset: ConjectureDataset) -> str:
    return "".join(dumps_record(entry.to_dict()) + "\n" for entry in dataset)


def load_dataset(text: str, path: Optional[str] = None) -> ConjectureDataset:
    entries: List[ScoredConjecture] = []
    origin: Optional[Side] = None
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        record = _loads(line, path, number)
        _expect(
            isinstance(record, dict) and tuple(record) == DATASET_FIELDS,
            f"dataset record must have exactly the fields {list(DATASET_FIELDS)}",
            path,
            number,
        )
        goal = _goal(record["goal"], path, number)
        _expect(goal == canonicalize(goal), "goal is not canonical", path, number)
        value = record["value"]
        _expect(
            isinstance(value, (int, float))
            and not isinstance(value, bool)
            and 0 < value <= 1,
            "value must be a number in (0, 1]",
            path,
            number,
        )
        _expect(record["prover"] in ("A", "B"), "prover must be A or B", path, number)
        generation = record["generation"]
        _expect(
            isinstance(generation, int)
            and not isinstance(generation, bool)
            and generation >= 0,
            "generation must be an integer >= 0",
            path,
            number,
        )
        side = Side(record["prover"])
        _expect(origin in (None, side), "dataset mixes provers", path, number)
        origin = side
        entries.append(ScoredConjecture(goal, float(value), side, generation))
    try:
        return ConjectureDataset(origin or Side.A, tuple(entries))
    except HornplayError as error:
        raise MalformedInputError(str(error), path) from None


# Heuristic parameters


def dump_params(params: HeuristicParams) -> str:
    return dumps_record(params.to_dict()) + "\n"


def load_params(text: str, path: Optional[str] = None) -> HeuristicParams:
    data = _loads(text, path)
    _expect(
        isinstance(data, dict) and set(data) == {"weights", "depth_limit"},
        'params must be an object with "weights" and "depth_limit"',
        path,
        None,
    )
    weights = data["weights"]
    _expect(
        isinstance(weights, list)
        and all(
            isinstance(weight, (int, float)) and not isinstance(weight, bool)
            for weight in weights
        ),
        "weights must be a list of numbers",
        path,
        None,
    )
    try:
        return HeuristicParams.from_dict(data)
    except HornplayError as error:
        raise MalformedInputError(str(error), path) from None


# Proofs


def proof_to_dict(proof: Proof) -> Dict[str, Any]:
    return {
        "goal": format_value(proof.goal),
        "clause": proof.clause_id,
        "binding": {
            name: format_value(proof.binding[name]) for name in sorted(proof.binding)
        },
        "subs": [proof_to_dict(sub) for sub in proof.subproofs],
    }


def _term(text: Any, path: Optional[str]) -> Term:
    _expect(isinstance(text, str), "binding values must be strings", path, None)
    try:
        return parse_term(text)
    except HornplayError as error:
        raise MalformedInputError(f"term {text!r}: {error}", path) from None


def proof_from_dict(data: Any, path: Optional[str] = None) -> Proof:
    pending = [data]
    while pending:
        node = pending.pop()
        _expect(
            isinstance(node, dict) and set(node) == PROOF_FIELDS,
            'proof nodes need exactly "goal", "clause", "binding" and "subs"',
            path,
            None,
        )
        _expect(
            isinstance(node["clause"], int) and not isinstance(node["clause"], bool),
            "clause must be an integer",
            path,
            None,
        )
        _expect(
            isinstance(node["binding"], dict), "binding must be an object", path, None
        )
        _expect(isinstance(node["subs"], list), "subs must be a list", path, None)
        pending.extend(node["subs"])

    def build(node: Dict[str, Any]) -> Proof:
        return Proof(
            goal=_goal(node["goal"], path, None),
            clause_id=node["clause"],
            binding={
                name: _term(value, path) for name, value in node["binding"].items()
            },
            subproofs=tuple(build(sub) for sub in node["subs"]),
        )

    try:
        return build(data)
    except RecursionError:
        raise MalformedInputError("proof nested too deeply", path) from None


def dump_proof(proof: Proof) -> str:
    return dumps_record(proof_to_dict(proof)) + "\n"


def load_proof(text: str, path: Optional[str] = None) -> Proof:
    return proof_from_dict(_loads(text, path), path)


# Obligation lists


def load_obligations(
    text: str, theory: Theory, path: Optional[str] = None
) -> List[Atom]:
    """One goal per line; ``%`` comments and blank lines are skipped.

    Lines holding a JSON object are read as dataset records, so a harvested
    dataset can be replayed as an obligation list.
    """
    goals: List[Atom] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        if stripped.startswith("{"):
            record = _loads(stripped, path, number)
            _expect(
                isinstance(record, dict) and "goal" in record,
                'record has no "goal"',
                path,
                number,
            )
            stripped = record["goal"]
        goals.append(_goal(stripped, path, number, theory))
    return goals


# Evolution output


def log_lines(report: EvolutionReport) -> List[Dict[str, Any]]:
    lines = [record.to_dict() for record in report.generations]
    if report.truncated:
        lines.append({"truncated": True})
    return lines


def report_to_dict(report: EvolutionReport) -> Dict[str, Any]:
    data: Dict[str, Any] = dict(report.outcome.to_dict())
    data["generations"] = len(report.generations)
    data["total_expansions"] = report.total_expansions
    data["truncated"] = report.truncated
    if isinstance(report.outcome, Solved):
        data["proof"] = proof_to_dict(report.outcome.proof)
    return data
