"""Configuration loader module.

This module loads run configurations from JSON files stored in the
input/ directory. A configuration fixes the constellation, the ground
station dataset, seeds, the time window, the request source, solver
toggles and the scenarios to run.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.constellation.geometry import ConstellationConfig, PhaseOffsetMode
from src.constellation.visibility import TimeWindow
from src.utils.filesystem import resolve_relative

logger = logging.getLogger(__name__)

KNOWN_KEYS = {
    "name",
    "constellation",
    "stations_csv",
    "resources_per_node",
    "seeds",
    "window",
    "requests",
    "solvers",
    "scenarios",
    "workers",
    "output_dir",
}
SCENARIO_IDS = ("i", "ii", "iii")
BACKENDS = ("bnb", "milp")


class RunConfig:
    """Run configuration loaded from a JSON file.

    Attributes:
        name: Run name for display purposes.
        constellation: Constellation parameters.
        stations_csv: Path to the ground-station dataset.
        resources_per_node: Transmitters, receivers and memories per vertex.
        request_seed: Seed of generated request batches.
        channel_seed: Seed of the per-edge channel hash.
        window: Default time window for ``graph`` and ``solve``.
        request_count: Number of generated requests for ``solve``.
        batch_file: Optional manual batch file; overrides generation.
        run_greedy: Whether ``solve`` runs the greedy solver.
        run_exact: Whether ``solve`` runs the exact solver.
        run_restricted: Whether ``solve`` runs the ISL-free exact solver.
        allow_isl: Whether the exact solver may use inter-satellite links.
        allow_ground_transit: Whether ground stations may relay.
        time_limit_s: Optional wall-clock limit per exact solve.
        backend: Exact solver backend, ``bnb`` or ``milp``.
        scenarios: Scenario ids run by ``scenario`` when none is given.
        workers: Worker processes for scenario sweeps.
        output_dir: Directory for written results.
        config_path: Path to the configuration file.

    Example:
        >>> config = RunConfig.from_file("input/config.json")
        >>> config.constellation.rings
        10
    """

    def __init__(self, config_path: Path):
        """Initialize from a JSON configuration file.

        Args:
            config_path: Path to the JSON configuration file.
        """
        self.config_path = Path(config_path)
        self._data = self._load_json()
        self._validate()

        self.name: str = self._data.get("name", "Unnamed run")
        self.constellation = ConstellationConfig(**self._data.get("constellation", {}))
        self.stations_csv: Path = resolve_relative(
            self._data.get("stations_csv", "stations.csv"), self.config_path.parent
        )
        self.resources_per_node: int = int(self._data.get("resources_per_node", 10))

        seeds = self._data.get("seeds", {})
        self.request_seed: int = int(seeds.get("requests", 2024))
        self.channel_seed: int = int(seeds.get("channels", 7))

        window = self._data.get("window", {})
        self.window = TimeWindow(float(window.get("tau", 0.0)), float(window.get("delta", 0.01)))

        requests = self._data.get("requests", {})
        self.request_count: int = int(requests.get("count", 20))
        batch_file = requests.get("batch_file")
        self.batch_file: Optional[Path] = (
            resolve_relative(batch_file, self.config_path.parent) if batch_file else None
        )

        solvers = self._data.get("solvers", {})
        self.run_greedy: bool = bool(solvers.get("greedy", True))
        self.run_exact: bool = bool(solvers.get("exact", True))
        self.run_restricted: bool = bool(solvers.get("restricted", True))
        self.allow_isl: bool = bool(solvers.get("allow_isl", True))
        self.allow_ground_transit: bool = bool(solvers.get("allow_ground_transit", False))
        limit = solvers.get("time_limit_s")
        self.time_limit_s: Optional[float] = float(limit) if limit is not None else None
        self.backend: str = solvers.get("backend", "bnb")

        self.scenarios: List[str] = list(self._data.get("scenarios", list(SCENARIO_IDS)))
        self.workers: int = int(self._data.get("workers", 1))
        self.output_dir: Path = Path(self._data.get("output_dir", "output"))

    @classmethod
    def from_file(cls, config_path: Path) -> "RunConfig":
        """Create a RunConfig instance from a JSON file.

        Raises:
            FileNotFoundError: If the configuration file doesn't exist.
            ValueError: If the configuration is invalid.
        """
        return cls(config_path)

    def _load_json(self) -> dict:
        if not self.config_path.exists():
            raise FileNotFoundError(
                f"Configuration file not found: {self.config_path}\n"
                f"Absolute path: {self.config_path.absolute()}"
            )

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in configuration file: {e}")
        if not isinstance(data, dict):
            raise ValueError("Configuration must be a JSON object")
        logger.info(f"Loaded configuration from: {self.config_path}")
        return data

    def _validate(self) -> None:
        """Validate the configuration data.

        Raises:
            ValueError: If fields are missing, mistyped or out of range.
        """
        unknown = sorted(set(self._data) - KNOWN_KEYS)
        if unknown:
            logger.warning(f"Ignoring unknown configuration keys: {unknown}")

        constellation = self._data.get("constellation", {})
        if not isinstance(constellation, dict):
            raise ValueError("'constellation' must be an object")
        for key in ("rings", "sats_per_ring"):
            if key not in constellation:
                raise ValueError(f"Missing required field in config: constellation.{key}")
        allowed = set(ConstellationConfig.__dataclass_fields__)
        extra = sorted(set(constellation) - allowed)
        if extra:
            raise ValueError(f"Unknown constellation fields: {extra}")
        mode = constellation.get("phase_offset_mode", PhaseOffsetMode.NONE.value)
        if mode not in {m.value for m in PhaseOffsetMode}:
            raise ValueError(f"phase_offset_mode must be 'none' or 'walker', got '{mode}'")

        for section in ("seeds", "window", "requests", "solvers"):
            if not isinstance(self._data.get(section, {}), dict):
                raise ValueError(f"'{section}' must be an object")

        if int(self._data.get("resources_per_node", 10)) < 0:
            raise ValueError("resources_per_node must be >= 0")
        if int(self._data.get("requests", {}).get("count", 20)) < 1:
            raise ValueError("requests.count must be >= 1")
        if int(self._data.get("workers", 1)) < 1:
            raise ValueError("workers must be >= 1")

        solvers = self._data.get("solvers", {})
        if solvers.get("backend", "bnb") not in BACKENDS:
            raise ValueError(f"solvers.backend must be one of {BACKENDS}")
        limit = solvers.get("time_limit_s")
        if limit is not None and float(limit) <= 0:
            raise ValueError("solvers.time_limit_s must be > 0 or null")

        scenarios = self._data.get("scenarios", list(SCENARIO_IDS))
        bad = [s for s in scenarios if s not in SCENARIO_IDS]
        if bad:
            raise ValueError(f"Unknown scenario id(s) {bad}, expected any of {SCENARIO_IDS}")

        logger.info(f"Run: {self._data.get('name', 'Unnamed run')}")
        logger.info(f"Constellation: R={constellation['rings']} K={constellation['sats_per_ring']}")

    def override(self, **values: Any) -> "RunConfig":
        """Apply command-line overrides; None values leave settings unchanged.

        Returns:
            This configuration, updated in place.
        """
        for key, value in values.items():
            if value is None:
                continue
            if not hasattr(self, key):
                raise ValueError(f"Unknown configuration override: {key}")
            setattr(self, key, value)
            logger.debug(f"Override {key} = {value}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Effective settings, as recorded next to results."""
        return {
            "name": self.name,
            "constellation": {
                "rings": self.constellation.rings,
                "sats_per_ring": self.constellation.sats_per_ring,
                "phase_offset_mode": self.constellation.phase_offset_mode.value,
                "sample_step_h": self.constellation.sample_step_h,
            },
            "stations_csv": str(self.stations_csv),
            "seeds": {"requests": self.request_seed, "channels": self.channel_seed},
            "window": {"tau": self.window.tau, "delta": self.window.delta},
            "allow_isl": self.allow_isl,
            "allow_ground_transit": self.allow_ground_transit,
            "time_limit_s": self.time_limit_s,
            "backend": self.backend,
        }


def load_config(config_path: Optional[Path] = None) -> RunConfig:
    """Load a run configuration.

    If no path is provided, looks for default config files in order:
    1. input/config.json
    2. config.json (in project root)

    Args:
        config_path: Optional explicit path to configuration file.

    Returns:
        RunConfig instance.

    Raises:
        FileNotFoundError: If no configuration file is found.
    """
    if config_path:
        return RunConfig.from_file(config_path)

    default_paths = [
        Path("input/config.json"),
        Path("config.json"),
    ]

    for path in default_paths:
        if path.exists():
            logger.info(f"Using default configuration: {path}")
            return RunConfig.from_file(path)

    raise FileNotFoundError(
        "No configuration file found. Expected one of:\n" +
        "\n".join([f"  - {p}" for p in default_paths]) +
        "\nOr provide explicit path with --config"
    )
