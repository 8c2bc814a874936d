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

"""Unit tests for the spatial-modulation detectors."""

import numpy as np
import pytest

from ssm_lab.detection import (
    DETECTORS,
    Detector,
    cm_formula,
    detect_joint_ml,
    detect_proposed,
    detect_suboptimal,
)
from ssm_lab.exceptions import ZeroColumnError
from ssm_lab.linalg import RngStream, sample_cn
from ssm_lab.link import build, random_symbol


def _instance(rng, c, n_r=4, n_t=4, noise=0.1):
    channel = sample_cn(rng, (n_r, n_t), 1.0)
    sym = random_symbol(rng, n_t, c)
    y = channel[:, sym.antenna] * sym.point
    if noise > 0:
        y = y + sample_cn(rng, n_r, noise)
    return channel, sym, y


class TestProposedMatchesJointMl:
    """The low-complexity detector must decide exactly like the joint search."""

    @pytest.mark.parametrize("kind,order", [("qam", 4), ("qam", 16), ("qam", 64), ("psk", 8)])
    def test_same_decisions(self, kind, order):
        """Test identical (antenna, symbol) decisions on noisy instances."""
        c = build(kind, order)
        rng = RngStream(99, order)
        for _ in range(300):
            channel, _, y = _instance(rng, c, noise=0.3)
            ml = detect_joint_ml(y, channel, c)
            fast = detect_proposed(y, channel, c)
            assert (fast.antenna, fast.point_index) == (ml.antenna, ml.point_index)
            assert fast.bits == ml.bits
            assert fast.metric == pytest.approx(ml.metric, abs=1e-9)

    def test_uneven_receive_count(self, qam16):
        """Test equivalence for N_r different from N_t."""
        rng = RngStream(5, 0)
        for _ in range(100):
            channel, _, y = _instance(rng, qam16, n_r=2, n_t=8, noise=0.2)
            ml = detect_joint_ml(y, channel, qam16)
            fast = detect_proposed(y, channel, qam16)
            assert (fast.antenna, fast.point_index) == (ml.antenna, ml.point_index)


class TestNoiselessDecisions:
    """Without noise every detector recovers the sent word."""

    @pytest.mark.parametrize("detector", list(Detector))
    def test_recovers_bits(self, detector, qam16):
        """Test each detector returns the transmitted bits."""
        rng = RngStream(17, 0)
        for _ in range(50):
            channel, sym, y = _instance(rng, qam16, noise=0.0)
            result = DETECTORS[detector](y, channel, qam16)
            assert result.bits == sym.bits

    @pytest.mark.parametrize("detector", list(Detector))
    def test_exact_hit_has_zero_distance(self, detector, qam16):
        """Test a noiseless decision reports squared distance 0."""
        rng = RngStream(18, 0)
        for _ in range(20):
            channel, _, y = _instance(rng, qam16, noise=0.0)
            assert DETECTORS[detector](y, channel, qam16).metric == pytest.approx(0.0, abs=1e-10)


class TestReportedMetric:
    """The reported metric is the squared distance of the decided candidate."""

    @pytest.mark.parametrize("detector", list(Detector))
    def test_matches_direct_distance(self, detector, qam16):
        """Test metric == ||y - h_j x_m||^2 for the decided (j, m)."""
        rng = RngStream(19, 0)
        for _ in range(50):
            channel, _, y = _instance(rng, qam16, noise=0.5)
            result = DETECTORS[detector](y, channel, qam16)
            direct = np.sum(
                np.abs(y - channel[:, result.antenna] * qam16.points[result.point_index]) ** 2
            )
            assert result.metric == pytest.approx(direct, rel=1e-9, abs=1e-12)

    def test_joint_ml_metric_is_global_minimum(self, qam16):
        """Test no (antenna, point) pair is closer than the joint ML decision."""
        rng = RngStream(20, 0)
        channel, _, y = _instance(rng, qam16, noise=1.0)
        result = detect_joint_ml(y, channel, qam16)
        distances = np.sum(
            np.abs(y[:, None, None] - channel[:, :, None] * qam16.points[None, None, :]) ** 2,
            axis=0,
        )
        assert result.metric == pytest.approx(distances.min(), rel=1e-9)


class TestComplexityCounts:
    """Tests for the complex-multiplication accounting."""

    @pytest.mark.parametrize(
        "n_t,n_r,order,expected",
        [
            (4, 4, 16, {"joint-ml": 176, "proposed": 56, "suboptimal": 52}),
            (4, 4, 256, {"joint-ml": 2336, "proposed": 72, "suboptimal": 292}),
        ],
    )
    def test_formula_values(self, n_t, n_r, order, expected):
        """Test the closed forms at reference configurations."""
        for name, count in expected.items():
            assert cm_formula(name, n_t, n_r, order) == count

    @pytest.mark.parametrize("n_t,n_r,order", [(2, 2, 4), (4, 4, 16), (8, 2, 64), (4, 4, 256)])
    def test_counters_match_formula(self, n_t, n_r, order):
        """Test run-time counters equal the closed forms."""
        c = build("qam", order)
        channel, _, y = _instance(RngStream(3, order), c, n_r=n_r, n_t=n_t)
        for detector, fn in DETECTORS.items():
            assert fn(y, channel, c).cm_count == cm_formula(detector, n_t, n_r, order)

    def test_unknown_detector_rejected(self):
        """Test invalid detector names raise ValueError."""
        with pytest.raises(ValueError):
            cm_formula("sphere", 4, 4, 16)


class TestInputValidation:
    """Tests for malformed inputs."""

    def test_zero_column_rejected(self, qpsk):
        """Test the proposed detector refuses zero channel columns."""
        channel = np.ones((2, 2), dtype=complex)
        channel[:, 1] = 0.0
        with pytest.raises(ZeroColumnError):
            detect_proposed(np.ones(2), channel, qpsk)

    def test_zero_column_rejected_suboptimal(self, qpsk):
        """Test the two-stage detector refuses zero channel columns."""
        channel = np.zeros((2, 2), dtype=complex)
        with pytest.raises(ZeroColumnError):
            detect_suboptimal(np.ones(2), channel, qpsk)

    def test_shape_mismatch(self, qpsk):
        """Test received vectors must match the channel rows."""
        with pytest.raises(ValueError, match="does not match"):
            detect_joint_ml(np.ones(3), np.ones((2, 2)), qpsk)
