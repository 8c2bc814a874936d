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

"""Wiretap-channel scenarios, SNR convention and received-signal synthesis.

SNR convention: ``SNR = P / sigma2`` with P the total transmit power and
sigma2 the per-receive-antenna noise variance, shared by Bob and Eve.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt
import structlog

from ssm_lab.exceptions import NullSpaceEmptyError, SelectionError
from ssm_lab.linalg import ComplexMatrix, RngStream, as_complex_matrix, null_space_basis, sample_cn

logger = structlog.get_logger(__name__)


class Receiver(StrEnum):
    """Which terminal observes the transmission."""

    BOB = "bob"
    EVE = "eve"


def noise_variance(snr_db: float, power: float) -> float:
    """Per-antenna noise variance for a given SNR and transmit power."""
    return power / 10.0 ** (snr_db / 10.0)


def default_active_antennas(n_a: int) -> int:
    """Largest power of two not exceeding ``n_a`` (N_t = 2^floor(log2 N_a))."""
    if n_a < 1:
        raise ValueError(f"Antenna count must be positive, got {n_a}")
    return 1 << (n_a.bit_length() - 1)


def _matrix_to_json(matrix: ComplexMatrix) -> list[list[list[float]]]:
    return [[[float(v.real), float(v.imag)] for v in row] for row in matrix]


def _matrix_from_json(rows: list[list[list[float]]]) -> ComplexMatrix:
    return as_complex_matrix([[complex(re, im) for re, im in row] for row in rows])


@dataclass(frozen=True, eq=False)
class Scenario:
    """One wiretap-channel realization."""

    h_b: ComplexMatrix = field(repr=False)  # N_b x N_a desired channel
    h_e: ComplexMatrix = field(repr=False)  # N_e x N_a eavesdrop channel
    sigma2: float
    power: float

    def __post_init__(self):
        """Validate dimensions and scalars."""
        if self.h_b.shape[1] != self.h_e.shape[1]:
            raise ValueError(
                f"Bob and Eve channels disagree on N_a: {self.h_b.shape} vs {self.h_e.shape}"
            )
        if min(self.h_b.shape + self.h_e.shape) < 1:
            raise ValueError("All channel dimensions must be at least 1")
        if self.sigma2 <= 0 or self.power <= 0:
            raise ValueError(f"sigma2 and power must be positive, got {self.sigma2}, {self.power}")

    @property
    def n_a(self) -> int:
        return self.h_b.shape[1]

    @property
    def n_b(self) -> int:
        return self.h_b.shape[0]

    @property
    def n_e(self) -> int:
        return self.h_e.shape[0]

    @property
    def snr_db(self) -> float:
        return float(10.0 * np.log10(self.power / self.sigma2))

    def with_sigma2(self, sigma2: float) -> "Scenario":
        """Same channels under a different noise variance."""
        return Scenario(h_b=self.h_b, h_e=self.h_e, sigma2=sigma2, power=self.power)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready dictionary; complex entries become [re, im] pairs."""
        return {
            "h_b": _matrix_to_json(self.h_b),
            "h_e": _matrix_to_json(self.h_e),
            "sigma2": self.sigma2,
            "power": self.power,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Scenario":
        """Inverse of :meth:`to_dict`."""
        return cls(
            h_b=_matrix_from_json(data["h_b"]),
            h_e=_matrix_from_json(data["h_e"]),
            sigma2=float(data["sigma2"]),
            power=float(data["power"]),
        )


@dataclass(frozen=True, eq=False)
class SelectedScenario:
    """Scenario restricted to an ordered antenna selection, with its AN projector."""

    base: Scenario
    selection: tuple[int, ...]
    hb_s: ComplexMatrix = field(repr=False)
    he_s: ComplexMatrix = field(repr=False)
    projector: ComplexMatrix = field(repr=False)  # T, N_t x (N_t - N_b)

    @property
    def n_t(self) -> int:
        return len(self.selection)

    @property
    def nullity(self) -> int:
        """Number of AN dimensions (N_t - N_b for a full-rank channel)."""
        return self.projector.shape[1]

    @property
    def sigma2(self) -> float:
        return self.base.sigma2

    @property
    def power(self) -> float:
        return self.base.power

    def with_sigma2(self, sigma2: float) -> "SelectedScenario":
        """Same selection and projector under a different noise variance."""
        return SelectedScenario(
            base=self.base.with_sigma2(sigma2),
            selection=self.selection,
            hb_s=self.hb_s,
            he_s=self.he_s,
            projector=self.projector,
        )


def gen_scenario(
    rng: RngStream,
    n_a: int,
    n_b: int,
    n_e: int,
    snr_db: float,
    power: float,
) -> Scenario:
    """
    Draw an i.i.d. Rayleigh wiretap scenario.

    H_b is drawn before H_e, so a scenario's channels depend only on the
    stream, not on the SNR.

    Args:
        rng: Random stream to consume
        n_a: Transmit antennas at Alice
        n_b: Receive antennas at Bob
        n_e: Receive antennas at Eve
        snr_db: SNR in dB (P / sigma2)
        power: Total transmit power P in watts

    Returns:
        Scenario with CN(0, 1) channel entries
    """
    if min(n_a, n_b, n_e) < 1:
        raise ValueError(f"Dimensions must be >= 1, got N_a={n_a}, N_b={n_b}, N_e={n_e}")
    if power <= 0:
        raise ValueError(f"Transmit power must be positive, got {power}")
    h_b = sample_cn(rng, (n_b, n_a))
    h_e = sample_cn(rng, (n_e, n_a))
    return Scenario(h_b=h_b, h_e=h_e, sigma2=noise_variance(snr_db, power), power=power)


def select(s: Scenario, selection: Sequence[int]) -> SelectedScenario:
    """
    Restrict a scenario to an ordered antenna subset and build its AN projector.

    Args:
        s: Full scenario
        selection: Distinct antenna indices in [0, N_a)

    Returns:
        SelectedScenario with column-selected channels and T = null(Hb_S)

    Raises:
        SelectionError: If indices repeat or fall outside [0, N_a)
        NullSpaceEmptyError: If the selection leaves no null space for AN
    """
    indices = tuple(int(i) for i in selection)
    if len(set(indices)) != len(indices):
        raise SelectionError(f"Antenna selection has repeated indices: {indices}")
    if any(not 0 <= i < s.n_a for i in indices):
        raise SelectionError(f"Antenna selection {indices} outside [0, {s.n_a})")
    if len(indices) <= s.n_b:
        raise NullSpaceEmptyError(
            f"Selecting {len(indices)} antennas for N_b={s.n_b} leaves no null space"
        )

    hb_s = s.h_b[:, indices]
    he_s = s.h_e[:, indices]
    return SelectedScenario(
        base=s,
        selection=indices,
        hb_s=hb_s,
        he_s=he_s,
        projector=null_space_basis(hb_s),
    )


def receive(
    ss: SelectedScenario,
    t: npt.ArrayLike,
    rng: RngStream,
    at: Receiver | str = Receiver.BOB,
) -> npt.NDArray[np.complex128]:
    """
    Pass a transmit vector through Bob's or Eve's channel plus AWGN.

    Args:
        ss: Selected scenario
        t: Transmit vector of length N_t
        rng: Random stream for the noise draw
        at: Receiving terminal

    Returns:
        y = H t + n with n ~ CN(0, sigma2 I)
    """
    vector = np.asarray(t, dtype=np.complex128)
    if vector.shape != (ss.n_t,):
        raise ValueError(f"Transmit vector must have length {ss.n_t}, got shape {vector.shape}")
    channel = ss.hb_s if Receiver(at) is Receiver.BOB else ss.he_s
    return channel @ vector + sample_cn(rng, channel.shape[0], ss.sigma2)
