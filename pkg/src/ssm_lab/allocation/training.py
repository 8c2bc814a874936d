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

"""Adam training of the power-allocation network."""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt
import structlog

from ssm_lab.allocation.dataset import PaDataset
from ssm_lab.allocation.network import NetworkConfig, PaModel
from ssm_lab.exceptions import DimensionMismatchError, EmptyDatasetError
from ssm_lab.linalg import RngStream

logger = structlog.get_logger(__name__)


@dataclass
class AdamState:
    """
    Adam optimizer state.

    m(t) = b1 m(t-1) + (1 - b1) g
    v(t) = b2 v(t-1) + (1 - b2) g^2
    theta -= lr * m_hat / (sqrt(v_hat) + eps), with bias-corrected moments
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict[str, npt.NDArray[np.float64]] = field(default_factory=dict)
    v: dict[str, npt.NDArray[np.float64]] = field(default_factory=dict)

    def update(
        self, params: dict[str, npt.NDArray[np.float64]], grads: dict[str, npt.NDArray[np.float64]]
    ) -> None:
        """Apply one Adam step to ``params`` in place."""
        self.step += 1
        for name, grad in grads.items():
            if name not in self.m:
                self.m[name] = np.zeros_like(grad)
                self.v[name] = np.zeros_like(grad)
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * grad
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * grad**2
            m_hat = self.m[name] / (1.0 - self.beta1**self.step)
            v_hat = self.v[name] / (1.0 - self.beta2**self.step)
            params[name] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


@dataclass(frozen=True)
class TrainingConfig:
    """Mini-batch training hyperparameters."""

    epochs: int = 50
    batch_size: int = 32
    val_fraction: float = 0.1
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        """Validate ranges."""
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError(f"epochs and batch_size must be >= 1, got {self}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError(f"val_fraction must be in [0, 1), got {self.val_fraction}")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_mse: float
    val_mse: float


@dataclass
class TrainingResult:
    """Best-validation model and the per-epoch log."""

    model: PaModel
    log: list[EpochRecord]
    best_epoch: int

    @property
    def best_val_mse(self) -> float:
        return self.log[self.best_epoch - 1].val_mse


def split_indices(n: int, val_fraction: float, rng: RngStream) -> tuple[np.ndarray, np.ndarray]:
    """
    Shuffle and split sample indices into (train, val).

    With fewer than two samples, or a zero fraction, validation reuses the
    training indices.
    """
    order = rng.generator.permutation(n)
    n_val = min(max(1, int(round(n * val_fraction))), n - 1) if val_fraction > 0 and n >= 2 else 0
    if n_val == 0:
        return order, order
    return order[n_val:], order[:n_val]


def mse(model: PaModel, data: PaDataset) -> float:
    return float(np.mean((model.predict(data.planes, data.noise) - data.labels) ** 2))


def train(
    dataset: PaDataset,
    config: TrainingConfig | None = None,
    network: NetworkConfig | None = None,
) -> TrainingResult:
    """
    Train a PaModel by mini-batch Adam on mean squared error.

    Streams derived from ``config.seed`` drive the split (0), weight
    initialization (1) and per-epoch shuffling (2, epoch), so training is
    deterministic given the dataset and the config.

    Args:
        dataset: Labeled samples
        config: Training hyperparameters
        network: Architecture; defaults to the dataset's plane shape

    Returns:
        TrainingResult holding the weights with the lowest validation MSE

    Raises:
        EmptyDatasetError: If the dataset has no samples
        DimensionMismatchError: If the architecture does not fit the planes
    """
    config = config or TrainingConfig()
    if len(dataset) == 0:
        raise EmptyDatasetError("Cannot train on an empty dataset")

    _, _, n_b, n_t = dataset.planes.shape
    network = network or NetworkConfig(n_b=n_b, n_t=n_t)
    if (network.n_b, network.n_t) != (n_b, n_t):
        raise DimensionMismatchError(
            f"Network expects {network.n_b}x{network.n_t} planes, dataset has {n_b}x{n_t}"
        )

    train_idx, val_idx = split_indices(len(dataset), config.val_fraction, RngStream(config.seed, 0))
    train_set, val_set = dataset.subset(train_idx), dataset.subset(val_idx)

    model = PaModel.initialize(network, RngStream(config.seed, 1))
    adam = AdamState(lr=config.lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    shuffle = RngStream(config.seed, 2)

    logger.info(
        "training_started",
        train_samples=len(train_set),
        val_samples=len(val_set),
        epochs=config.epochs,
        batch_size=config.batch_size,
    )

    best_model, best_val, best_epoch = model, np.inf, 0
    log: list[EpochRecord] = []
    for epoch in range(1, config.epochs + 1):
        order = shuffle.child(epoch).generator.permutation(len(train_set))
        for start in range(0, len(order), config.batch_size):
            batch = train_set.subset(order[start:start + config.batch_size])
            _, grads = model.loss_and_gradients(batch.planes, batch.noise, batch.labels)
            adam.update(model.params, grads)

        record = EpochRecord(
            epoch=epoch, train_mse=mse(model, train_set), val_mse=mse(model, val_set)
        )
        log.append(record)
        logger.debug(
            "training_epoch", epoch=epoch, train_mse=record.train_mse, val_mse=record.val_mse
        )
        if record.val_mse < best_val or best_epoch == 0:
            best_model, best_val, best_epoch = model.copy(), record.val_mse, epoch

    logger.info("training_completed", best_epoch=best_epoch, best_val_mse=best_val)
    return TrainingResult(model=best_model, log=log, best_epoch=best_epoch)


def write_training_log(log: list[EpochRecord], path: Path) -> None:
    """Write the per-epoch log as CSV with columns epoch, train_mse, val_mse."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "train_mse", "val_mse"])
        for record in log:
            writer.writerow([record.epoch, repr(record.train_mse), repr(record.val_mse)])
