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

"""Scoring power-allocation predictors against grid-search labels."""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Protocol

import numpy as np
import structlog

from ssm_lab.allocation.dataset import PaSample
from ssm_lab.harness.parallel import run_ordered
from ssm_lab.linalg import RngStream
from ssm_lab.link.channel import Scenario, select
from ssm_lab.link.constellation import Constellation
from ssm_lab.link.modulation import PaSplit
from ssm_lab.secrecy.ergodic import ErgodicEstimate, ergodic_secrecy_rate
from ssm_lab.secrecy.mutual_information import NoiseBank, secrecy_rate_with_noise

logger = structlog.get_logger(__name__)


class Predictor(Protocol):
    """Anything that maps a scenario to a power-allocation factor."""

    def predict_scenario(self, s: Scenario) -> float: ...


@dataclass(frozen=True)
class ConstantPredictor:
    """Baseline that ignores the channel."""

    beta: float = 0.5

    def predict_scenario(self, s: Scenario) -> float:
        return self.beta


@dataclass(frozen=True)
class EvaluationReport:
    """Prediction quality over a held-out set."""

    n_samples: int
    beta_mse: float
    sr_predicted: ErgodicEstimate
    sr_labels: ErgodicEstimate

    @property
    def sr_ratio(self) -> float:
        """Ergodic SR at the predicted betas over ergodic SR at the labels."""
        if self.sr_labels.mean == 0.0:
            return 1.0 if self.sr_predicted.mean == 0.0 else float("inf")
        return self.sr_predicted.mean / self.sr_labels.mean


def _score_sample(
    task: tuple[PaSample, float, Constellation, int, int, int],
) -> tuple[float, float]:
    sample, beta_hat, c, noise_samples, seed, index = task
    ss = select(sample.scenario, range(sample.scenario.n_a))
    bank = NoiseBank.draw(RngStream(seed, (index,)), noise_samples, max(ss.base.n_b, ss.base.n_e))
    predicted = secrecy_rate_with_noise(ss, PaSplit(beta=beta_hat, power=ss.power), c, bank)
    labeled = secrecy_rate_with_noise(ss, PaSplit(beta=sample.beta_star, power=ss.power), c, bank)
    return predicted.sr, labeled.sr


def evaluate(
    predictor: Predictor,
    samples: Sequence[PaSample],
    c: Constellation,
    noise_samples: int,
    seed: int,
    workers: int = 1,
) -> EvaluationReport:
    """
    Compare predicted factors with the grid-search labels.

    Each sample's SR is evaluated at the predicted and at the labeled beta on
    one noise bank drawn from stream ``(seed, i)``.

    Args:
        predictor: Model or baseline
        samples: Held-out samples with every antenna active
        c: Constellation used for labeling
        noise_samples: Noise draws K per SR evaluation
        seed: Master seed for the noise banks
        workers: Worker processes

    Returns:
        EvaluationReport
    """
    if not samples:
        raise ValueError("Need at least one sample to evaluate")

    predictions = np.array([predictor.predict_scenario(s.scenario) for s in samples])
    labels = np.array([s.beta_star for s in samples])
    tasks = [
        (sample, float(beta), c, noise_samples, seed, i)
        for i, (sample, beta) in enumerate(zip(samples, predictions, strict=True))
    ]
    scores = run_ordered(_score_sample, tasks, workers=workers)

    report = EvaluationReport(
        n_samples=len(samples),
        beta_mse=float(np.mean((predictions - labels) ** 2)),
        sr_predicted=ergodic_secrecy_rate(p for p, _ in scores),
        sr_labels=ergodic_secrecy_rate(lab for _, lab in scores),
    )
    logger.info(
        "evaluation_completed",
        n_samples=report.n_samples,
        beta_mse=report.beta_mse,
        sr_ratio=report.sr_ratio,
    )
    return report
