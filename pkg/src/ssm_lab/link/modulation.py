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

"""Secure spatial modulation transmit chain.

Bits select an active antenna (natural binary, first log2 N_t bits) and a
Gray-labeled constellation point (remaining log2 M bits). The confidential
message is sent unbeamformed on the active antenna; artificial noise is
radiated from all selected antennas inside the null space of Bob's channel.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ssm_lab.exceptions import BitWidthError
from ssm_lab.linalg import RngStream, sample_cn
from ssm_lab.link.channel import SelectedScenario
from ssm_lab.link.constellation import (
    Constellation,
    bits_to_int,
    bits_to_point,
    int_to_bits,
    point_to_bits,
)


def _log2_exact(n: int, what: str) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{what} must be a power of two, got {n}")
    return n.bit_length() - 1


def spectral_efficiency(n_t: int, order: int) -> int:
    """Bits per channel use, log2 N_t + log2 M."""
    return _log2_exact(n_t, "N_t") + _log2_exact(order, "M")


@dataclass(frozen=True)
class SmSymbol:
    """Antenna index plus constellation point, with the bits they carry."""

    antenna: int
    point_index: int
    point: complex
    bits: tuple[int, ...]


@dataclass(frozen=True)
class PaSplit:
    """Share ``beta`` of the total power P spent on the confidential message."""

    beta: float
    power: float

    def __post_init__(self):
        """Validate the split."""
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if self.power <= 0:
            raise ValueError(f"Transmit power must be positive, got {self.power}")

    @property
    def message_power(self) -> float:
        return self.beta * self.power

    @property
    def noise_power(self) -> float:
        return (1.0 - self.beta) * self.power


def map_bits(bits: Sequence[int], n_t: int, c: Constellation) -> SmSymbol:
    """
    Map a bit word to a spatial-modulation symbol.

    Args:
        bits: MSB-first word of length log2 N_t + log2 M
        n_t: Number of selected (mappable) antennas, a power of two
        c: Constellation

    Returns:
        SmSymbol carrying the word

    Raises:
        BitWidthError: If the word has the wrong length
    """
    antenna_bits = _log2_exact(n_t, "N_t")
    width = antenna_bits + c.bits_per_symbol
    if len(bits) != width:
        raise BitWidthError(f"Expected {width} bits for N_t={n_t}, M={c.order}, got {len(bits)}")

    antenna = bits_to_int(bits[:antenna_bits]) if antenna_bits else 0
    point_index, point = bits_to_point(c, bits[antenna_bits:])
    return SmSymbol(antenna=antenna, point_index=point_index, point=point, bits=tuple(bits))


def unmap_bits(antenna: int, point_index: int, n_t: int, c: Constellation) -> tuple[int, ...]:
    """
    Bit word carried by an (antenna, point) decision.

    Args:
        antenna: Antenna index in [0, N_t)
        point_index: Point index in [0, M)
        n_t: Number of selected antennas
        c: Constellation

    Returns:
        MSB-first bit tuple, inverse of :func:`map_bits`
    """
    antenna_bits = _log2_exact(n_t, "N_t")
    if not 0 <= antenna < n_t:
        raise ValueError(f"Antenna index {antenna} outside [0, {n_t})")
    return int_to_bits(antenna, antenna_bits) + point_to_bits(c, point_index)


def random_symbol(rng: RngStream, n_t: int, c: Constellation) -> SmSymbol:
    """Map a uniformly random bit word."""
    width = spectral_efficiency(n_t, c.order)
    bits = tuple(int(b) for b in rng.generator.integers(0, 2, size=width))
    return map_bits(bits, n_t, c)


def transmit_vector(
    ss: SelectedScenario,
    sym: SmSymbol,
    pa: PaSplit,
    rng: RngStream,
) -> npt.NDArray[np.complex128]:
    """
    Power-split transmit vector with null-space artificial noise.

    t = sqrt(beta P) e_j x + sqrt((1 - beta) P) T z, z ~ CN(0, I / nullity),
    so E||T z||^2 = 1 and E||t||^2 = P for a unit-energy constellation.

    Args:
        ss: Selected scenario providing N_t and the projector T
        sym: Symbol to send
        pa: Power split
        rng: Random stream for the AN draw

    Returns:
        Complex vector of length N_t
    """
    if not 0 <= sym.antenna < ss.n_t:
        raise ValueError(f"Antenna index {sym.antenna} outside [0, {ss.n_t})")

    t = np.zeros(ss.n_t, dtype=np.complex128)
    t[sym.antenna] = np.sqrt(pa.message_power) * sym.point
    if pa.beta < 1.0:
        z = sample_cn(rng, ss.nullity, 1.0 / ss.nullity)
        t = t + np.sqrt(pa.noise_power) * (ss.projector @ z)
    return t
