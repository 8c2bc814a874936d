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

"""Unit tests for scoring power-allocation predictors."""

import numpy as np
import pytest

from ssm_lab.allocation import ConstantPredictor, EvaluationReport, PaSample, evaluate
from ssm_lab.linalg import RngStream
from ssm_lab.link import gen_scenario
from ssm_lab.secrecy import ErgodicEstimate


class LabelPredictor:
    """Predicts each scenario's own label."""

    def __init__(self, samples):
        self._labels = {id(s.scenario): s.beta_star for s in samples}

    def predict_scenario(self, s):
        return self._labels[id(s)]


@pytest.fixture
def samples():
    """Four hand-labeled samples at 10 dB."""
    return [
        PaSample(gen_scenario(RngStream(40, i), 4, 2, 2, 10.0, 1.0), 10.0, beta)
        for i, beta in enumerate((0.3, 0.6, 0.9, 0.45))
    ]


class TestEvaluate:
    """Tests for held-out evaluation."""

    def test_perfect_predictor(self, samples, qpsk):
        """Test predicting the labels scores a ratio of exactly one."""
        report = evaluate(LabelPredictor(samples), samples, qpsk, 50, seed=3)
        assert report.beta_mse == 0.0
        assert report.sr_ratio == 1.0
        assert report.n_samples == 4

    def test_constant_predictor_mse(self, samples, qpsk):
        """Test the midpoint baseline's beta MSE."""
        report = evaluate(ConstantPredictor(0.5), samples, qpsk, 50, seed=3)
        labels = np.array([0.3, 0.6, 0.9, 0.45])
        assert report.beta_mse == pytest.approx(np.mean((0.5 - labels) ** 2))
        assert report.sr_labels.n_channels == 4

    def test_same_banks_for_any_predictor(self, samples, qpsk):
        """Test the label-side SR does not depend on the predictor."""
        a = evaluate(ConstantPredictor(0.2), samples, qpsk, 50, seed=3)
        b = evaluate(ConstantPredictor(0.8), samples, qpsk, 50, seed=3)
        assert a.sr_labels == b.sr_labels

    def test_empty(self, qpsk):
        """Test evaluating nothing is an error."""
        with pytest.raises(ValueError, match="at least one"):
            evaluate(ConstantPredictor(), [], qpsk, 50, seed=0)


def test_ratio_when_both_rates_vanish():
    """Test a zero-over-zero ratio counts as a match."""
    zero = ErgodicEstimate(mean=0.0, std_error=0.0, n_channels=1)
    report = EvaluationReport(n_samples=1, beta_mse=0.0, sr_predicted=zero, sr_labels=zero)
    assert report.sr_ratio == 1.0
