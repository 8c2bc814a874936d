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

"""M-ary constellations with Gray labeling, quantization and demapping.

Labeling contract (frozen, see docs):

* Square QAM, M = L^2: point index ``i = k_i * L + k_q`` where ``k_i`` and
  ``k_q`` are the in-phase and quadrature level indices, level ``k`` having
  amplitude ``(2k - (L - 1)) / sqrt(2(M - 1)/3)``. The label of point ``i`` is
  ``gray(k_i) << log2(L) | gray(k_q)`` with ``gray(k) = k ^ (k >> 1)``
  (per-axis reflected Gray code, in-phase bits first).
* PSK: point ``k`` sits at angle ``2*pi*k/M + offset`` with offset ``pi/4``
  for M = 4 and 0 otherwise; its label is ``gray(k)``. QPSK therefore maps
  00, 01, 11, 10 counter-clockwise starting at (1+j)/sqrt(2).

Bit words are MSB first.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import numpy.typing as npt
import structlog

from ssm_lab.exceptions import BitWidthError, InvalidConstellationError

logger = structlog.get_logger(__name__)

QAM_ORDERS = (4, 16, 64, 256)


class ConstellationKind(StrEnum):
    """Supported constellation families."""

    QAM = "qam"
    PSK = "psk"


def gray(k: int) -> int:
    """Reflected binary Gray code of ``k``."""
    return k ^ (k >> 1)


def int_to_bits(value: int, width: int) -> tuple[int, ...]:
    """MSB-first bit tuple of ``value`` with ``width`` bits."""
    return tuple((value >> (width - 1 - b)) & 1 for b in range(width))


def bits_to_int(bits: Sequence[int]) -> int:
    """Integer value of an MSB-first bit sequence."""
    value = 0
    for bit in bits:
        if bit not in (0, 1):
            raise ValueError(f"Bits must be 0 or 1, got {bit!r}")
        value = (value << 1) | int(bit)
    return value


@dataclass(frozen=True, eq=False)
class Constellation:
    """Unit average energy constellation with a Gray bit map."""

    kind: ConstellationKind
    order: int
    points: npt.NDArray[np.complex128] = field(repr=False)
    labels: npt.NDArray[np.int64] = field(repr=False)

    @property
    def bits_per_symbol(self) -> int:
        """Number of bits carried by one point."""
        return self.order.bit_length() - 1

    @property
    def levels(self) -> int:
        """Amplitude levels per axis (square QAM only)."""
        return int(round(np.sqrt(self.order)))

    @property
    def axis_scale(self) -> float:
        """Distance from the origin to the innermost QAM level."""
        return float(1.0 / np.sqrt(2.0 * (self.order - 1) / 3.0))

    @property
    def energies(self) -> npt.NDArray[np.float64]:
        """Per-point energies |x_m|^2."""
        return np.abs(self.points) ** 2

    def index_of_label(self, label: int) -> int:
        """Point index that carries ``label``."""
        return int(self._label_to_index[label])

    @property
    def _label_to_index(self) -> npt.NDArray[np.int64]:
        inverse = np.empty(self.order, dtype=np.int64)
        inverse[self.labels] = np.arange(self.order)
        return inverse


def build(kind: ConstellationKind | str, order: int) -> Constellation:
    """
    Build a normalized, Gray-labeled constellation.

    Args:
        kind: "qam" (square QAM) or "psk"
        order: Number of points M

    Returns:
        Constellation with unit average energy

    Raises:
        InvalidConstellationError: If M is not valid for the kind
    """
    try:
        kind = ConstellationKind(kind)
    except ValueError as e:
        raise InvalidConstellationError(f"Unknown constellation kind: {kind!r}") from e

    if kind is ConstellationKind.QAM:
        if order not in QAM_ORDERS:
            raise InvalidConstellationError(
                f"Square QAM order must be one of {QAM_ORDERS}, got {order}"
            )
        n_levels = int(round(np.sqrt(order)))
        half_bits = (n_levels.bit_length() - 1)
        amplitudes = 2.0 * np.arange(n_levels) - (n_levels - 1)
        k_i, k_q = np.divmod(np.arange(order), n_levels)
        points = (amplitudes[k_i] + 1j * amplitudes[k_q]) / np.sqrt(2.0 * (order - 1) / 3.0)
        labels = np.array(
            [(gray(int(a)) << half_bits) | gray(int(b)) for a, b in zip(k_i, k_q, strict=True)],
            dtype=np.int64,
        )
    else:
        if order < 2 or order & (order - 1):
            raise InvalidConstellationError(f"PSK order must be a power of two, got {order}")
        offset = np.pi / 4 if order == 4 else 0.0
        k = np.arange(order)
        points = np.exp(1j * (2.0 * np.pi * k / order + offset))
        labels = np.array([gray(int(i)) for i in k], dtype=np.int64)

    constellation = Constellation(
        kind=kind, order=order, points=points.astype(np.complex128), labels=labels
    )
    logger.debug("constellation_built", kind=str(kind), order=order)
    return constellation


def quantize_axis(value: float, thresholds: Sequence[float] | npt.NDArray[np.float64],
                  scale: float = 1.0) -> tuple[int, int]:
    """
    Binary-search quantizer over sorted decision thresholds.

    Compares ``value`` against ``scale * threshold``; exact ties go to the
    lower level. With ``2^b`` levels it performs exactly ``b`` comparisons.

    Args:
        value: Value to quantize
        thresholds: Sorted thresholds between consecutive levels
        scale: Multiplier applied to each visited threshold

    Returns:
        Tuple of (level index, number of scaled comparisons performed)
    """
    lo, hi = 0, len(thresholds)
    comparisons = 0
    while lo < hi:
        mid = (lo + hi) // 2
        comparisons += 1
        if value > scale * thresholds[mid]:
            lo = mid + 1
        else:
            hi = mid
    return lo, comparisons


def axis_thresholds(c: Constellation) -> npt.NDArray[np.float64]:
    """Decision thresholds between adjacent QAM levels of one axis."""
    n_levels = c.levels
    return (2.0 * np.arange(1, n_levels) - n_levels) * c.axis_scale


def quantize(c: Constellation, z: complex, scale: float = 1.0) -> tuple[int, int]:
    """
    Nearest-point decision for ``z / scale`` without dividing by ``scale``.

    This is the composition D(Q(.)): QAM is quantized per axis against
    thresholds multiplied by ``scale``; PSK by a binary sector search on the
    angle, which ``scale > 0`` does not change.

    Args:
        c: Constellation
        z: Unnormalized soft estimate
        scale: Positive normalization (e.g. a channel column energy)

    Returns:
        Tuple of (point index, comparisons performed)
    """
    if c.kind is ConstellationKind.QAM:
        thresholds = axis_thresholds(c)
        k_i, n_i = quantize_axis(float(np.real(z)), thresholds, scale)
        k_q, n_q = quantize_axis(float(np.imag(z)), thresholds, scale)
        return k_i * c.levels + k_q, n_i + n_q

    offset = np.pi / 4 if c.order == 4 else 0.0
    step = 2.0 * np.pi / c.order
    phase = (np.angle(z) - offset + step / 2.0) % (2.0 * np.pi)
    # sector boundaries k*step, k = 1..M-1, searched like an axis
    sector, comparisons = quantize_axis(phase, step * np.arange(1, c.order))
    return int(sector % c.order), comparisons


def demap_nearest(c: Constellation, g: complex) -> tuple[int, complex]:
    """
    Nearest constellation point to ``g`` (ties toward the lowest index).

    Args:
        c: Constellation
        g: Finite complex soft estimate

    Returns:
        Tuple of (point index, point)
    """
    if not np.isfinite(g):
        raise ValueError(f"Soft estimate must be finite, got {g}")
    index, _ = quantize(c, g)
    return index, complex(c.points[index])


def demap_nearest_exhaustive(c: Constellation, g: complex) -> tuple[int, complex]:
    """Reference nearest-point search over all M points."""
    index = int(np.argmin(np.abs(g - c.points) ** 2))
    return index, complex(c.points[index])


def bits_to_point(c: Constellation, bits: Sequence[int]) -> tuple[int, complex]:
    """
    Map a Gray bit word to its constellation point.

    Args:
        c: Constellation
        bits: MSB-first bit word of length log2 M

    Returns:
        Tuple of (point index, point)

    Raises:
        BitWidthError: If the word length is not log2 M
    """
    if len(bits) != c.bits_per_symbol:
        raise BitWidthError(
            f"Expected {c.bits_per_symbol} bits for {c.order}-{c.kind}, got {len(bits)}"
        )
    index = c.index_of_label(bits_to_int(bits))
    return index, complex(c.points[index])


def point_to_bits(c: Constellation, index: int) -> tuple[int, ...]:
    """
    Bit word carried by the point at ``index``.

    Args:
        c: Constellation
        index: Point index in [0, M)

    Returns:
        MSB-first bit tuple of length log2 M
    """
    if not 0 <= index < c.order:
        raise ValueError(f"Point index {index} outside [0, {c.order})")
    return int_to_bits(int(c.labels[index]), c.bits_per_symbol)
