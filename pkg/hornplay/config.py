from typing import Dict, List, Tuple

Data_default_params = {
    "weights": [0.0, 0.0, 0.0, 0.0, 0.0],
    "depth_limit": 10,
}

Data_default_budgets = {
    "search": 1000,
    "harvest": 1000,
    "cross": 100,
}

Data_default_mutation = {
    "sigma": 0.2,
    "p_mut": 0.5,
    "depth_limit_step": 1,
    "seed": 0,
}

Data_features = ["bias", "depth", "size", "vars", "body_len"]

Data_exit_codes = {
    "success": 0,
    "negative": 1,
    "usage": 2,
    "malformed_input": 3,
    "integrity": 4,
}

Data_output_files = {
    "proof": "proof.json",
    "stats": "stats.json",
    "dataset_a": "dataset_a.jsonl",
    "dataset_b": "dataset_b.jsonl",
    "match": "match.jsonl",
    "log": "generations.jsonl",
    "report": "report.json",
}


class ConfigHornplay:
    feature_names: Tuple[str, ...] = tuple(Data_features)
    feature_count: int = len(Data_features)

    default_weights: Tuple[float, ...] = tuple(Data_default_params["weights"])
    default_depth_limit: int = Data_default_params["depth_limit"]

    default_search_budget: int = Data_default_budgets["search"]
    default_harvest_budget: int = Data_default_budgets["harvest"]
    default_cross_budget: int = Data_default_budgets["cross"]

    default_gamma: float = 0.9
    default_sigma: float = Data_default_mutation["sigma"]
    default_p_mut: float = Data_default_mutation["p_mut"]
    default_depth_limit_step: int = Data_default_mutation["depth_limit_step"]
    default_seed: int = Data_default_mutation["seed"]
    default_max_generations: int = 50

    # standardize_apart names are built from this prefix; user goals may not use it
    reserved_prefix: str = "_G"
    canonical_prefix: str = "V"

    exit_codes: Dict[str, int] = {}
    exit_names: Dict[int, str] = {}
    output_files: Dict[str, str] = {}
    pairing_modes: List[str] = ["champion", "fresh-pair"]
    game_modes: List[str] = ["self-play", "naive"]

    def __init__(self) -> None:
        for name, code in Data_exit_codes.items():
            self.exit_codes[name] = code
            self.exit_names[code] = name

        for kind, filename in Data_output_files.items():
            self.output_files[kind] = filename
