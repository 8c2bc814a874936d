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

"""Labeled power-allocation datasets: generation and JSON-lines storage."""

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
import structlog

from ssm_lab.allocation.classical import beta_grid, pa_grid_search
from ssm_lab.allocation.network import channel_planes, noise_feature
from ssm_lab.harness.parallel import run_ordered
from ssm_lab.linalg import RngStream
from ssm_lab.link.channel import Scenario, gen_scenario, select
from ssm_lab.link.constellation import ConstellationKind, build

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PaSample:
    """One channel realization with every antenna active and its grid-search label."""

    scenario: Scenario
    snr_db: float
    beta_star: float

    def __post_init__(self):
        """Validate the label."""
        if not 0.0 <= self.beta_star <= 1.0:
            raise ValueError(f"Label beta_star={self.beta_star} outside [0, 1]")

    @property
    def planes(self) -> npt.NDArray[np.float64]:
        return channel_planes(self.scenario.h_b, self.scenario.h_e)

    @property
    def noise(self) -> float:
        return noise_feature(self.scenario.sigma2, self.scenario.power)

    def to_dict(self) -> dict[str, Any]:
        return {**self.scenario.to_dict(), "snr_db": self.snr_db, "beta_star": self.beta_star}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PaSample":
        return cls(
            scenario=Scenario.from_dict(data),
            snr_db=float(data["snr_db"]),
            beta_star=float(data["beta_star"]),
        )


@dataclass(frozen=True, eq=False)
class PaDataset:
    """Array view of samples, as consumed by training."""

    planes: npt.NDArray[np.float64]  # (N, 4, N_b, N_t)
    noise: npt.NDArray[np.float64]  # (N,)
    labels: npt.NDArray[np.float64]  # (N,)

    def __post_init__(self):
        """Validate that the three arrays describe the same samples."""
        n = len(self.labels)
        if len(self.planes) != n or len(self.noise) != n:
            raise ValueError(
                f"Dataset arrays disagree: {len(self.planes)} planes, "
                f"{len(self.noise)} noise features, {n} labels"
            )

    def __len__(self) -> int:
        return len(self.labels)

    def subset(self, indices: npt.ArrayLike) -> "PaDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return PaDataset(planes=self.planes[idx], noise=self.noise[idx], labels=self.labels[idx])

    @classmethod
    def from_samples(cls, samples: Sequence[PaSample]) -> "PaDataset":
        if not samples:
            return cls(planes=np.zeros((0, 4, 0, 0)), noise=np.zeros(0), labels=np.zeros(0))
        return cls(
            planes=np.stack([s.planes for s in samples]),
            noise=np.array([s.noise for s in samples]),
            labels=np.array([s.beta_star for s in samples]),
        )


@dataclass(frozen=True)
class DatasetParams:
    """Scenario distribution and labeling parameters of a generated dataset."""

    n_t: int = 4
    n_b: int = 2
    n_e: int = 2
    snr_min_db: float = 0.0
    snr_max_db: float = 30.0
    modulation: ConstellationKind = ConstellationKind.QAM
    order: int = 4
    power: float = 1.0
    grid_step: float = 0.05
    noise_samples: int = 200

    def __post_init__(self):
        """Validate the SNR range."""
        if self.snr_max_db < self.snr_min_db:
            raise ValueError(f"Empty SNR range [{self.snr_min_db}, {self.snr_max_db}]")


def _label_sample(task: tuple[DatasetParams, int, int]) -> PaSample:
    params, seed, index = task
    rng = RngStream(seed, (index,))
    snr_db = float(rng.generator.uniform(params.snr_min_db, params.snr_max_db))
    scenario = gen_scenario(rng, params.n_t, params.n_b, params.n_e, snr_db, params.power)
    ss = select(scenario, range(params.n_t))
    result = pa_grid_search(
        ss,
        build(params.modulation, params.order),
        params.grid_step,
        params.noise_samples,
        rng.child(1),
    )
    return PaSample(scenario=scenario, snr_db=snr_db, beta_star=result.beta)


def generate_dataset(
    seed: int,
    n_samples: int,
    params: DatasetParams | None = None,
    workers: int = 1,
) -> list[PaSample]:
    """
    Generate grid-search-labeled samples.

    Sample ``i`` draws its SNR (uniform over the range), its channels and its
    labeling noise bank from stream ``(seed, i)``, so the dataset does not
    depend on the worker count.

    Args:
        seed: Master seed
        n_samples: Number of samples (0 gives an empty dataset)
        params: Scenario distribution and labeling parameters
        workers: Worker processes for labeling

    Returns:
        Samples in index order
    """
    if n_samples < 0:
        raise ValueError(f"n_samples must be >= 0, got {n_samples}")
    params = params or DatasetParams()
    beta_grid(params.grid_step)

    logger.info("dataset_generation_started", n_samples=n_samples, seed=seed, workers=workers)
    samples = run_ordered(
        _label_sample, [(params, seed, i) for i in range(n_samples)], workers=workers
    )
    logger.info("dataset_generation_completed", n_samples=len(samples))
    return samples


def write_dataset(samples: Iterable[PaSample], path: Path) -> int:
    """
    Write samples as JSON lines, one sample per line.

    Args:
        samples: Samples to write
        path: Destination file

    Returns:
        Number of lines written
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for sample in samples:
            f.write(json.dumps(sample.to_dict(), separators=(",", ":")) + "\n")
            count += 1
    logger.info("dataset_written", path=str(path), n_samples=count)
    return count


def read_dataset(path: Path) -> list[PaSample]:
    """
    Read samples written by :func:`write_dataset`.

    Args:
        path: Dataset file

    Returns:
        Samples in file order

    Raises:
        ValueError: If a line is not a valid sample
    """
    samples = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                samples.append(PaSample.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise ValueError(f"{path}:{line_number}: invalid sample: {e}") from e
    return samples
