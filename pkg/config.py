"""Application configuration module.

Loads defaults from an optional YAML file and environment variables.
"""

from pydantic import BaseModel, Field
from pathlib import Path
import logging
import os

import psutil
import yaml

logger = logging.getLogger(__name__)


def _default_workers() -> int:
    return psutil.cpu_count(logical=True) or 1


class AppConfig(BaseModel):
    """Configuration options for runs.

    Attributes
    ----------
    workers: int
        Size of the sweep worker pool.
    seed: int
        Seed for sampling and random contract draws.
    quota_share_samples: int
        Sample size behind the quota-share grid diagnostic.
    oracle_atoms: int
        Atoms per discretised loss in oracle checks.
    oracle_grid: int
        Lattice points per axis in oracle grid searches.
    oracle_trials: int
        Random contracts drawn per dominance check.
    output_dir: str
        Directory for reports when no output path is given.
    """

    workers: int = Field(
        default_factory=_default_workers,
        description="Size of the sweep worker pool.",
        ge=1,
    )
    seed: int = Field(
        default=20240101,
        description="Seed for sampling and random contract draws.",
        ge=0,
    )
    quota_share_samples: int = Field(
        default=20000,
        description="Sample size behind the quota-share grid diagnostic.",
        ge=100,
    )
    oracle_atoms: int = Field(
        default=500,
        description="Atoms per discretised loss in oracle checks.",
        ge=2,
    )
    oracle_grid: int = Field(
        default=200,
        description="Lattice points per axis in oracle grid searches.",
        ge=10,
    )
    oracle_trials: int = Field(
        default=10000,
        description="Random contracts drawn per dominance check.",
        ge=0,
    )
    output_dir: str = Field(
        default="results",
        description="Directory for reports when no output path is given.",
    )


def load_config() -> AppConfig:
    """Load configuration from YAML file and environment variables.

    Returns
    -------
    AppConfig
        Configuration populated from `config.yaml` and environment variables.
    """
    config_path = Path(os.environ.get("LVAR_CONFIG", "config.yaml"))
    data = {}
    if config_path.exists():
        try:
            with config_path.open("r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except Exception as exc:
            logger.warning("Failed to load %s: %s", config_path, exc)
            data = {}
    for name, key in (("LVAR_WORKERS", "workers"), ("LVAR_SEED", "seed")):
        value = os.environ.get(name)
        if value:
            try:
                data[key] = int(value)
            except ValueError:
                logger.warning("Invalid %s: %s", name, value)
    env_output = os.environ.get("LVAR_OUTPUT_DIR")
    if env_output:
        data["output_dir"] = env_output
    return AppConfig(**data)

CONFIG = load_config()
