#
# Copyright 2025 The Apache Software Foundation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Configuration management for ssm-lab."""

import tomllib
from pathlib import Path
from typing import Any

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    # Logging
    log_level: str = "INFO"
    log_format: str = "console"  # "console" or "json"

    # Output
    output_dir: Path = Path("./results")

    # Monte Carlo defaults
    seed: int = 20211
    workers: int = 1
    noise_samples: int = 500

    # Power-allocation bracket; endpoints 0 and 1 are degenerate
    beta_min: float = 0.05
    beta_max: float = 0.95

    # Relative rank tolerance for null-space extraction
    rank_tol: float = 1e-10

    # Enumeration caps for exhaustive antenna selection
    # Example: SSM_LAB_TAS_ES_MAX_SUBSETS=10000 unlocks N_a=15, N_t=8
    tas_es_max_subsets: int = 1000
    tas_edas_max_subsets: int = 10000

    # Experiment presets
    experiments_config: Path = Path("experiments.toml")

    model_config = SettingsConfigDict(
        env_prefix="SSM_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False
    )


class ExperimentPresets:
    """Named experiment configuration loader."""

    def __init__(self, config_path: Path):
        """
        Load experiment presets from a TOML file.

        Args:
            config_path: Path to experiments.toml
        """
        self.config_path = config_path
        self._config: dict[str, Any] | None = None

    def load(self) -> dict[str, Any]:
        """
        Load configuration from TOML file.

        Returns:
            Configuration dictionary

        Raises:
            FileNotFoundError: If the presets file does not exist
        """
        if self._config is None:
            if not self.config_path.exists():
                raise FileNotFoundError(f"Experiment presets not found: {self.config_path}")

            with open(self.config_path, "rb") as f:
                self._config = tomllib.load(f)

        return self._config

    def names(self) -> list[str]:
        """
        List the available preset names.

        Returns:
            Sorted preset names
        """
        return sorted(self.load().get("presets", {}))

    def get_preset(self, name: str) -> dict[str, Any]:
        """
        Get the raw field dictionary of one preset.

        Args:
            name: Preset name (e.g., "pa-compare")

        Returns:
            Copy of the preset's fields

        Raises:
            KeyError: If the preset is not defined
        """
        presets = self.load().get("presets", {})
        if name not in presets:
            raise KeyError(f"Unknown experiment preset: {name}")
        return dict(presets[name])


# Global settings instance
settings = Settings()

# Global experiment presets
experiment_presets = ExperimentPresets(settings.experiments_config)
