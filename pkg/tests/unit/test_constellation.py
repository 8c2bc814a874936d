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

"""Unit tests for constellations, Gray labeling and nearest-point decisions."""

import numpy as np
import pytest

from ssm_lab.exceptions import BitWidthError, InvalidConstellationError
from ssm_lab.linalg import RngStream, sample_cn
from ssm_lab.link.constellation import (
    ConstellationKind,
    bits_to_int,
    bits_to_point,
    build,
    demap_nearest,
    demap_nearest_exhaustive,
    gray,
    int_to_bits,
    point_to_bits,
    quantize,
    quantize_axis,
)

ALL_CONSTELLATIONS = [("qam", 4), ("qam", 16), ("qam", 64), ("qam", 256), ("psk", 2),
                      ("psk", 4), ("psk", 8), ("psk", 16)]


class TestBitHelpers:
    """Tests for Gray code and bit conversions."""

    def test_gray_sequence(self):
        """Test the first reflected Gray codes."""
        assert [gray(k) for k in range(8)] == [0, 1, 3, 2, 6, 7, 5, 4]

    def test_msb_first(self):
        """Test bit words are most significant bit first."""
        assert int_to_bits(6, 4) == (0, 1, 1, 0)
        assert bits_to_int((1, 0, 1)) == 5

    def test_rejects_non_binary(self):
        """Test bit values other than 0 and 1 are rejected."""
        with pytest.raises(ValueError, match="0 or 1"):
            bits_to_int((1, 2))


class TestBuild:
    """Tests for constellation construction."""

    @pytest.mark.parametrize("kind,order", ALL_CONSTELLATIONS)
    def test_unit_average_energy(self, kind, order):
        """Test every constellation is normalized to unit average energy."""
        c = build(kind, order)
        assert len(c.points) == order
        assert np.mean(np.abs(c.points) ** 2) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("kind,order", ALL_CONSTELLATIONS)
    def test_labels_are_a_permutation(self, kind, order):
        """Test every bit word is carried by exactly one point."""
        c = build(kind, order)
        assert sorted(c.labels.tolist()) == list(range(order))

    @pytest.mark.parametrize("order", [4, 16, 64, 256])
    def test_qam_neighbors_differ_in_one_bit(self, order):
        """Test horizontally and vertically adjacent QAM points differ in one bit."""
        c = build("qam", order)
        spacing = 2.0 * c.axis_scale
        for i in range(order):
            for j in range(order):
                if abs(abs(c.points[i] - c.points[j]) - spacing) < 1e-9:
                    assert bin(int(c.labels[i]) ^ int(c.labels[j])).count("1") == 1

    @pytest.mark.parametrize("order", [4, 8, 16])
    def test_psk_neighbors_differ_in_one_bit(self, order):
        """Test angularly adjacent PSK points differ in one bit, wrap-around included."""
        c = build("psk", order)
        for k in range(order):
            diff = int(c.labels[k]) ^ int(c.labels[(k + 1) % order])
            assert bin(diff).count("1") == 1

    def test_qam_index_convention(self):
        """Test point i = k_i * L + k_q with in-phase bits first."""
        c = build("qam", 16)
        scale = c.axis_scale
        assert c.points[0] == pytest.approx((-3 - 3j) * scale)
        assert c.points[1] == pytest.approx((-3 - 1j) * scale)
        assert c.points[4] == pytest.approx((-1 - 3j) * scale)
        # k_i = 2, k_q = 3 -> gray(2) = 3, gray(3) = 2 -> 0b1110
        assert c.labels[2 * 4 + 3] == 0b1110

    def test_qpsk_as_psk_is_gray_counter_clockwise(self):
        """Test 4-PSK maps 00, 01, 11, 10 counter-clockwise from 45 degrees."""
        c = build("psk", 4)
        assert c.points[0] == pytest.approx((1 + 1j) / np.sqrt(2))
        assert [point_to_bits(c, k) for k in range(4)] == [(0, 0), (0, 1), (1, 1), (1, 0)]

    def test_kind_is_normalized_to_enum(self):
        """Test string kinds become ConstellationKind values."""
        assert build("qam", 4).kind is ConstellationKind.QAM

    @pytest.mark.parametrize("kind,order", [("qam", 8), ("qam", 32), ("psk", 3), ("psk", 1)])
    def test_rejects_invalid_orders(self, kind, order):
        """Test unsupported orders raise InvalidConstellationError."""
        with pytest.raises(InvalidConstellationError):
            build(kind, order)

    def test_rejects_unknown_kind(self):
        """Test unknown families raise InvalidConstellationError."""
        with pytest.raises(InvalidConstellationError, match="Unknown"):
            build("apsk", 16)


class TestBitMapping:
    """Tests for the bit-word to point map."""

    def test_bits_to_point_finds_labeled_point(self, qam16):
        """Test the returned point carries the requested label."""
        index, point = bits_to_point(qam16, (1, 1, 1, 0))
        assert qam16.labels[index] == 0b1110
        assert point == qam16.points[index]

    def test_point_to_bits_inverts_bits_to_point(self, qam16):
        """Test point_to_bits recovers the word for every point."""
        for index in range(16):
            word = point_to_bits(qam16, index)
            assert bits_to_point(qam16, word)[0] == index

    def test_wrong_width_raises(self, qam16):
        """Test words of the wrong length raise BitWidthError."""
        with pytest.raises(BitWidthError):
            bits_to_point(qam16, (0, 1, 0))

    def test_point_index_out_of_range(self, qpsk):
        """Test point indices outside [0, M) are rejected."""
        with pytest.raises(ValueError, match="outside"):
            point_to_bits(qpsk, 4)


class TestQuantize:
    """Tests for the binary-search quantizer."""

    def test_axis_tie_goes_to_lower_level(self):
        """Test a value exactly on a threshold picks the lower level."""
        assert quantize_axis(0.0, [0.0]) == (0, 1)
        assert quantize_axis(1.0, [-1.0, 0.0, 1.0]) == (2, 2)

    def test_axis_comparisons_are_logarithmic(self):
        """Test 2^b levels take exactly b comparisons wherever the value lies."""
        thresholds = np.arange(1, 16, dtype=float)
        for value in np.linspace(-1.0, 17.0, 37):
            assert quantize_axis(value, thresholds)[1] == 4

    def test_scaled_thresholds(self):
        """Test thresholds are multiplied by the scale instead of dividing the value."""
        assert quantize_axis(3.0, [1.0], scale=2.0)[0] == 1
        assert quantize_axis(1.5, [1.0], scale=2.0)[0] == 0

    @pytest.mark.parametrize("kind,order", ALL_CONSTELLATIONS)
    def test_matches_exhaustive_search(self, kind, order):
        """Test the quantizer returns the nearest point on random inputs."""
        c = build(kind, order)
        samples = 1.5 * sample_cn(RngStream(11, order), 500)
        for g in samples:
            assert demap_nearest(c, g)[0] == demap_nearest_exhaustive(c, g)[0]

    @pytest.mark.parametrize("kind,order", ALL_CONSTELLATIONS)
    def test_comparison_count(self, kind, order):
        """Test every decision costs log2 M comparisons."""
        c = build(kind, order)
        for g in sample_cn(RngStream(12, order), 50):
            assert quantize(c, g)[1] == c.bits_per_symbol

    def test_scaled_quantize_equals_normalized(self, qam16):
        """Test quantize(z, e) decides like the nearest point to z / e."""
        for z in 3.0 * sample_cn(RngStream(13, 0), 200):
            assert quantize(qam16, z, 2.7)[0] == demap_nearest_exhaustive(qam16, z / 2.7)[0]

    def test_demap_rejects_non_finite(self, qpsk):
        """Test non-finite soft estimates are rejected."""
        with pytest.raises(ValueError, match="finite"):
            demap_nearest(qpsk, complex(np.nan, 0.0))
