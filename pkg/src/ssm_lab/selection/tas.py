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

"""Transmit antenna selection: random, exhaustive max-SR, Max-SLNR and EDAS."""

import itertools
import math
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt
import structlog

from ssm_lab.config import settings
from ssm_lab.exceptions import BudgetExceededError, SelectionError
from ssm_lab.linalg import ComplexMatrix, RngStream
from ssm_lab.link.channel import Scenario, default_active_antennas, select
from ssm_lab.link.constellation import Constellation
from ssm_lab.link.modulation import PaSplit
from ssm_lab.secrecy.mutual_information import NoiseBank, secrecy_rate_with_noise
from ssm_lab.secrecy.slnr import slnr_per_antenna

logger = structlog.get_logger(__name__)


class TasStrategy(StrEnum):
    """Antenna selection strategies."""

    RANDOM = "random"
    EXHAUSTIVE_SR = "es"
    MAX_SLNR = "max-slnr"
    EDAS = "edas"


class EdasMode(StrEnum):
    """Objective of Euclidean-distance antenna selection."""

    DESIRED = "desired"  # maximize d_min over Bob's channel
    EAVESDROPPER = "eavesdropper"  # minimize d_min over Eve's channel
    SECURE_RATIO = "secure-ratio"  # maximize d_min(Bob) / d_min(Eve)


@dataclass(frozen=True)
class TasResult:
    """Ordered antenna selection with the strategy's score."""

    selection: tuple[int, ...]
    score: float
    strategy: TasStrategy


def _resolve_n_t(n_a: int, n_t: int | None) -> int:
    n_t = default_active_antennas(n_a) if n_t is None else n_t
    if not 1 <= n_t <= n_a:
        raise SelectionError(f"Cannot select N_t={n_t} of N_a={n_a} antennas")
    return n_t


def _subsets(n_a: int, n_t: int, cap: int) -> Iterator[tuple[int, ...]]:
    count = math.comb(n_a, n_t)
    if count > cap:
        raise BudgetExceededError(
            f"C({n_a}, {n_t}) = {count} subsets exceeds the cap of {cap}"
        )
    return itertools.combinations(range(n_a), n_t)


def tas_random(rng: RngStream, n_a: int, n_t: int | None = None) -> TasResult:
    """
    Uniformly random antenna subset.

    Args:
        rng: Random stream
        n_a: Available antennas
        n_t: Antennas to select (defaults to 2^floor(log2 N_a))

    Returns:
        TasResult with the subset in ascending order and score 0
    """
    n_t = _resolve_n_t(n_a, n_t)
    chosen = rng.generator.choice(n_a, size=n_t, replace=False)
    return TasResult(
        selection=tuple(sorted(int(i) for i in chosen)), score=0.0, strategy=TasStrategy.RANDOM
    )


def tas_exhaustive_sr(
    s: Scenario,
    pa: PaSplit,
    c: Constellation,
    noise_samples: int,
    rng: RngStream,
    n_t: int | None = None,
    *,
    bank: NoiseBank | None = None,
    max_subsets: int | None = None,
) -> TasResult:
    """
    Exhaustive search for the subset with the largest Monte Carlo secrecy rate.

    All subsets are scored on the same noise bank; the lexicographically
    first subset wins ties.

    Args:
        s: Scenario
        pa: Power split
        c: Constellation
        noise_samples: Noise draws K (used when no bank is given)
        rng: Random stream for the noise bank
        n_t: Antennas to select
        bank: Shared noise bank for comparisons with other strategies
        max_subsets: Enumeration cap (defaults to settings.tas_es_max_subsets)

    Returns:
        TasResult whose score is the best secrecy rate

    Raises:
        BudgetExceededError: If C(N_a, N_t) exceeds the cap
    """
    n_t = _resolve_n_t(s.n_a, n_t)
    cap = settings.tas_es_max_subsets if max_subsets is None else max_subsets
    subsets = _subsets(s.n_a, n_t, cap)
    if bank is None:
        bank = NoiseBank.draw(rng, noise_samples, max(s.n_b, s.n_e))

    best: tuple[int, ...] = ()
    best_sr = -np.inf
    for subset in subsets:
        sr = secrecy_rate_with_noise(select(s, subset), pa, c, bank).sr
        if sr > best_sr:
            best, best_sr = subset, sr

    logger.debug("tas_exhaustive_done", selection=best, sr=best_sr)
    return TasResult(selection=best, score=float(best_sr), strategy=TasStrategy.EXHAUSTIVE_SR)


def tas_max_slnr(
    s: Scenario,
    pa: PaSplit,
    n_t: int | None = None,
    t_full: ComplexMatrix | None = None,
) -> TasResult:
    """
    Keep the N_t antennas with the largest per-antenna SLNR.

    SLNRs use the projector of the full channel; the caller rebuilds the
    projector for the chosen subset with :func:`ssm_lab.link.select`.

    Args:
        s: Scenario
        pa: Power split
        n_t: Antennas to select
        t_full: Null-space basis of the full H_b (computed when needed)

    Returns:
        TasResult ordered by decreasing SLNR (ties to the lower index),
        scored by the summed SLNR of the selection
    """
    n_t = _resolve_n_t(s.n_a, n_t)
    slnr = slnr_per_antenna(s, pa, t_full)
    order = sorted(range(s.n_a), key=lambda j: (-slnr[j], j))[:n_t]
    return TasResult(
        selection=tuple(order),
        score=float(slnr[order].sum()),
        strategy=TasStrategy.MAX_SLNR,
    )


def min_distance(channel: npt.ArrayLike, c: Constellation) -> float:
    """
    Minimum squared distance between distinct received SM candidates.

    Args:
        channel: Column-selected channel of shape (N_r, N_t)
        c: Constellation

    Returns:
        min over (j, m) != (k, n) of ||H (e_j x_m - e_k x_n)||^2
    """
    h = np.asarray(channel, dtype=np.complex128)
    points = np.einsum("rj,m->jmr", h, c.points).reshape(-1, h.shape[0])
    gram = np.sum(np.abs(points[:, None, :] - points[None, :, :]) ** 2, axis=2)
    upper = np.triu_indices(points.shape[0], k=1)
    return float(gram[upper].min())


def tas_edas(
    s: Scenario,
    c: Constellation,
    mode: EdasMode | str = EdasMode.DESIRED,
    n_t: int | None = None,
    *,
    max_subsets: int | None = None,
) -> TasResult:
    """
    Euclidean-distance-optimized antenna selection.

    Args:
        s: Scenario
        c: Constellation
        mode: "desired", "eavesdropper" or "secure-ratio"
        n_t: Antennas to select
        max_subsets: Enumeration cap (defaults to settings.tas_edas_max_subsets)

    Returns:
        TasResult; the score is d_min(Bob), -d_min(Eve) or their ratio

    Raises:
        BudgetExceededError: If C(N_a, N_t) exceeds the cap
    """
    mode = EdasMode(mode)
    n_t = _resolve_n_t(s.n_a, n_t)
    cap = settings.tas_edas_max_subsets if max_subsets is None else max_subsets

    best: tuple[int, ...] = ()
    best_score = -np.inf
    for subset in _subsets(s.n_a, n_t, cap):
        columns = list(subset)
        if mode is EdasMode.DESIRED:
            score = min_distance(s.h_b[:, columns], c)
        elif mode is EdasMode.EAVESDROPPER:
            score = -min_distance(s.h_e[:, columns], c)
        else:
            d_eve = min_distance(s.h_e[:, columns], c)
            d_bob = min_distance(s.h_b[:, columns], c)
            score = np.inf if d_eve == 0.0 else d_bob / d_eve
        if score > best_score:
            best, best_score = subset, score

    return TasResult(selection=best, score=float(best_score), strategy=TasStrategy.EDAS)
