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

"""Unit tests for transmit antenna selection."""

import itertools

import numpy as np
import pytest

from ssm_lab.exceptions import BudgetExceededError, SelectionError
from ssm_lab.linalg import RngStream
from ssm_lab.link import PaSplit, Scenario, gen_scenario, select
from ssm_lab.secrecy import NoiseBank, secrecy_rate_with_noise, slnr_per_antenna
from ssm_lab.selection import (
    EdasMode,
    TasStrategy,
    min_distance,
    tas_edas,
    tas_exhaustive_sr,
    tas_max_slnr,
    tas_random,
)


@pytest.fixture
def six_antennas():
    """N_a=6, N_b=N_e=2 scenario at 10 dB."""
    return gen_scenario(RngStream(11, 0), n_a=6, n_b=2, n_e=2, snr_db=10.0, power=1.0)


class TestTasRandom:
    """Tests for random selection."""

    def test_distinct_sorted_subset(self, rng):
        """Test the subset has N_t distinct ascending indices."""
        result = tas_random(rng, 6, 4)
        assert len(set(result.selection)) == 4
        assert list(result.selection) == sorted(result.selection)
        assert all(0 <= j < 6 for j in result.selection)
        assert result.strategy is TasStrategy.RANDOM

    def test_default_n_t(self, rng):
        """Test N_t defaults to the largest power of two."""
        assert len(tas_random(rng, 15).selection) == 8

    def test_uniform_over_subsets(self):
        """Test each of the C(4, 2) = 6 subsets appears 1/6 of the time within 1%."""
        rng = RngStream(14, 0)
        draws = 60_000
        counts = dict.fromkeys(itertools.combinations(range(4), 2), 0)
        for _ in range(draws):
            counts[tas_random(rng, 4, 2).selection] += 1
        assert len(counts) == 6
        for count in counts.values():
            assert abs(count / draws - 1.0 / 6.0) < 0.01

    def test_too_many_antennas(self, rng):
        """Test N_t > N_a is rejected."""
        with pytest.raises(SelectionError):
            tas_random(rng, 2, 4)


class TestTasExhaustiveSr:
    """Tests for the exhaustive max-SR search."""

    def test_dominates_other_strategies(self, six_antennas, qpsk):
        """Test the exhaustive pick is at least as good as every other pick on a shared bank."""
        pa = PaSplit(beta=1.0, power=1.0)
        bank = NoiseBank.draw(RngStream(12, 0), 150, 2)
        best = tas_exhaustive_sr(six_antennas, pa, qpsk, 150, RngStream(12, 0), 4, bank=bank)
        slnr = tas_max_slnr(six_antennas, pa, 4)
        rnd = tas_random(RngStream(13, 0), 6, 4)
        for other in (slnr.selection, rnd.selection):
            sr = secrecy_rate_with_noise(select(six_antennas, other), pa, qpsk, bank).sr
            assert best.score >= sr

    def test_ties_go_to_first_subset(self, six_antennas, qpsk):
        """Test zero secrecy everywhere keeps the lexicographically first subset."""
        mirrored = Scenario(
            h_b=six_antennas.h_b,
            h_e=np.array(six_antennas.h_b, copy=True),
            sigma2=six_antennas.sigma2,
            power=1.0,
        )
        pa = PaSplit(beta=1.0, power=1.0)
        result = tas_exhaustive_sr(mirrored, pa, qpsk, 50, RngStream(1, 0), 4)
        assert result.selection == (0, 1, 2, 3)
        assert result.score == 0.0

    def test_budget(self, six_antennas, qpsk, rng):
        """Test enumerations above the cap are refused."""
        with pytest.raises(BudgetExceededError):
            tas_exhaustive_sr(
                six_antennas, PaSplit(beta=1.0, power=1.0), qpsk, 10, rng, 4, max_subsets=14
            )


class TestTasMaxSlnr:
    """Tests for Max-SLNR selection."""

    def test_picks_largest_slnr(self, six_antennas):
        """Test the selection holds the N_t largest SLNRs in decreasing order."""
        pa = PaSplit(beta=0.7, power=1.0)
        slnr = slnr_per_antenna(six_antennas, pa)
        result = tas_max_slnr(six_antennas, pa, 4)
        assert list(result.selection) == list(np.argsort(-slnr, kind="stable")[:4])
        assert result.score == pytest.approx(slnr[list(result.selection)].sum())

    def test_permuting_antennas_permutes_selection(self, six_antennas):
        """Test relabeling the antennas relabels the chosen subset the same way."""
        pa = PaSplit(beta=0.7, power=1.0)
        perm = [3, 0, 5, 1, 4, 2]
        permuted = Scenario(
            h_b=six_antennas.h_b[:, perm],
            h_e=six_antennas.h_e[:, perm],
            sigma2=six_antennas.sigma2,
            power=1.0,
        )
        original = tas_max_slnr(six_antennas, pa, 4)
        relabeled = tas_max_slnr(permuted, pa, 4)
        assert tuple(perm[k] for k in relabeled.selection) == original.selection
        assert relabeled.score == pytest.approx(original.score, rel=1e-12)

    def test_silent_eavesdropper_ranks_by_bob_gain(self, six_antennas):
        """Test H_e = 0 reduces SLNR to beta P ||h_j||^2 / (N_b sigma2)."""
        pa = PaSplit(beta=0.4, power=1.0)
        silent = Scenario(
            h_b=six_antennas.h_b,
            h_e=np.zeros_like(six_antennas.h_e),
            sigma2=six_antennas.sigma2,
            power=1.0,
        )
        bob_gain = np.sum(np.abs(six_antennas.h_b) ** 2, axis=0)
        expected = 0.4 * bob_gain / (2 * six_antennas.sigma2)
        assert np.allclose(slnr_per_antenna(silent, pa), expected, rtol=1e-12)
        result = tas_max_slnr(silent, pa, 4)
        assert list(result.selection) == list(np.argsort(-bob_gain, kind="stable")[:4])

    def test_without_an_basis(self, six_antennas):
        """Test beta = 1 needs no null-space basis."""
        result = tas_max_slnr(six_antennas, PaSplit(beta=1.0, power=1.0), 4)
        assert len(result.selection) == 4


class TestEdas:
    """Tests for Euclidean-distance antenna selection."""

    def test_min_distance_single_antenna(self, qpsk):
        """Test unit-gain QPSK has squared minimum distance 2."""
        assert min_distance(np.ones((1, 1)), qpsk) == pytest.approx(2.0)

    def test_min_distance_counts_antenna_pairs(self, qpsk):
        """Test identical columns collapse candidates to distance zero."""
        assert min_distance(np.ones((2, 2)), qpsk) == pytest.approx(0.0)

    def test_desired_maximizes_bob_distance(self, six_antennas, qpsk):
        """Test the desired mode matches a brute-force maximum."""
        result = tas_edas(six_antennas, qpsk, EdasMode.DESIRED, 2)
        expected = max(
            itertools.combinations(range(6), 2),
            key=lambda sub: min_distance(six_antennas.h_b[:, list(sub)], qpsk),
        )
        assert result.selection == expected

    def test_eavesdropper_minimizes_eve_distance(self, six_antennas, qpsk):
        """Test the eavesdropper mode scores the negated Eve distance."""
        result = tas_edas(six_antennas, qpsk, "eavesdropper", 2)
        d_eve = min_distance(six_antennas.h_e[:, list(result.selection)], qpsk)
        assert result.score == pytest.approx(-d_eve)
        for sub in itertools.combinations(range(6), 2):
            assert d_eve <= min_distance(six_antennas.h_e[:, list(sub)], qpsk) + 1e-12

    def test_secure_ratio(self, six_antennas, qpsk):
        """Test the ratio mode scores d_min(Bob) / d_min(Eve)."""
        result = tas_edas(six_antennas, qpsk, EdasMode.SECURE_RATIO, 2)
        cols = list(result.selection)
        ratio = min_distance(six_antennas.h_b[:, cols], qpsk) / min_distance(
            six_antennas.h_e[:, cols], qpsk
        )
        assert result.score == pytest.approx(ratio)

    @pytest.mark.parametrize("mode", list(EdasMode))
    def test_matches_pairwise_oracle(self, qpsk, mode):
        """Test every mode against explicit pairwise distances on an N_a = 5 draw."""
        s = gen_scenario(RngStream(15, 0), n_a=5, n_b=2, n_e=2, snr_db=10.0, power=1.0)

        def d_min(channel, subset):
            candidates = [channel[:, j] * x for j in subset for x in qpsk.points]
            return min(
                float(np.sum(np.abs(a - b) ** 2))
                for a, b in itertools.combinations(candidates, 2)
            )

        def score(subset):
            if mode is EdasMode.DESIRED:
                return d_min(s.h_b, subset)
            if mode is EdasMode.EAVESDROPPER:
                return -d_min(s.h_e, subset)
            return d_min(s.h_b, subset) / d_min(s.h_e, subset)

        subsets = list(itertools.combinations(range(5), 4))
        expected = max(subsets, key=score)
        result = tas_edas(s, qpsk, mode)
        assert result.selection == expected
        assert result.score == pytest.approx(score(expected), rel=1e-9)

    def test_unknown_mode(self, six_antennas, qpsk):
        """Test an unknown mode is rejected."""
        with pytest.raises(ValueError):
            tas_edas(six_antennas, qpsk, "loudest", 2)

    def test_budget(self, six_antennas, qpsk):
        """Test the cap applies to EDAS as well."""
        with pytest.raises(BudgetExceededError):
            tas_edas(six_antennas, qpsk, n_t=2, max_subsets=10)


def test_selection_keeps_order(six_antennas):
    """Test a chosen subset maps columns in the given order."""
    ss = select(six_antennas, (5, 0, 3, 1))
    assert np.array_equal(ss.hb_s[:, 0], six_antennas.h_b[:, 5])
    assert isinstance(ss.base, Scenario)
