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

"""Spatial-modulation detectors with complex-multiplication (CM) accounting.

Every scalar product evaluated at detection time is charged one CM, whether
its operands are real or complex; additions, comparisons without a product,
and divisions by a real normalizer are free. With z_j = h_j^H y and
e_j = ||h_j||^2 this itemization gives:

* joint ML:    z_j, e_j (2 N_t N_r) + |x_m|^2 (M)
               + e_j |x_m|^2 and x_m^* z_j per pair (2 N_t M)
* proposed:    z_j, e_j (2 N_t N_r) + per-axis binary search with one scaled
               threshold per comparison (log2 M per antenna)
               + metric Re(x^* (e_j x - 2 z_j)) (2 per antenna)
* suboptimal:  z_j, e_j (2 N_t N_r) + |z_j|^2 (N_t) + exhaustive |g - x_m|^2 (M)

All three rank candidates by ||y - h_j x||^2 - ||y||^2. The reported metric adds
the constant ||y||^2 back after the decision, uncharged, so it is the squared
Euclidean distance of the decided candidate.
"""

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from ssm_lab.exceptions import ZeroColumnError
from ssm_lab.link.constellation import Constellation, quantize
from ssm_lab.link.modulation import unmap_bits


class Detector(StrEnum):
    """Available receivers."""

    JOINT_ML = "joint-ml"
    PROPOSED = "proposed"
    SUBOPTIMAL = "suboptimal"


@dataclass(frozen=True)
class DetectionResult:
    """Decided (antenna, point) pair and the work spent finding it."""

    antenna: int
    point_index: int
    bits: tuple[int, ...]
    cm_count: int
    metric: float  # ||y - h_j x||^2 of the decision


def _prepare(y: npt.ArrayLike, h_eff: npt.ArrayLike):
    vector = np.asarray(y, dtype=np.complex128)
    channel = np.asarray(h_eff, dtype=np.complex128)
    if channel.ndim != 2 or vector.shape != (channel.shape[0],):
        raise ValueError(
            f"Received vector of shape {vector.shape} does not match channel {channel.shape}"
        )
    return vector, channel


def _distance(vector: npt.NDArray[np.complex128], offset_metric: float) -> float:
    return offset_metric + float(np.vdot(vector, vector).real)


def _column_energies(channel: npt.NDArray[np.complex128]) -> npt.NDArray[np.float64]:
    energies = np.sum(np.abs(channel) ** 2, axis=0)
    if np.any(energies == 0.0):
        zero = np.flatnonzero(energies == 0.0).tolist()
        raise ZeroColumnError(f"Channel columns {zero} are zero")
    return energies


def detect_joint_ml(
    y: npt.ArrayLike,
    h_eff: npt.ArrayLike,
    c: Constellation,
) -> DetectionResult:
    """
    Exhaustive joint search over all antennas and symbols.

    Args:
        y: Received vector of length N_r
        h_eff: Effective channel sqrt(beta P) H S, shape (N_r, N_t)
        c: Constellation

    Returns:
        DetectionResult; ties go to the lexicographically lowest (j, m)
    """
    vector, channel = _prepare(y, h_eff)
    n_r, n_t = channel.shape
    cm = 0

    z = channel.conj().T @ vector
    cm += n_t * n_r
    energies = np.sum(np.abs(channel) ** 2, axis=0)
    cm += n_t * n_r
    point_energies = np.abs(c.points) ** 2
    cm += c.order

    metric = np.outer(energies, point_energies)
    cm += n_t * c.order
    metric = metric - 2.0 * np.real(np.outer(z, c.points.conj()))
    cm += n_t * c.order

    best = int(np.argmin(metric))
    antenna, point_index = divmod(best, c.order)
    return DetectionResult(
        antenna=antenna,
        point_index=point_index,
        bits=unmap_bits(antenna, point_index, n_t, c),
        cm_count=cm,
        metric=_distance(vector, float(metric[antenna, point_index])),
    )


def detect_proposed(
    y: npt.ArrayLike,
    h_eff: npt.ArrayLike,
    c: Constellation,
) -> DetectionResult:
    """
    Low-complexity ML detector: per-antenna quantize-and-demap, then pick
    the antenna with the smallest Euclidean metric.

    The loop visits all N_t antennas, keeping a running minimum d_min; stopping
    early would lose equivalence with the joint ML search.

    Args:
        y: Received vector of length N_r
        h_eff: Effective channel, shape (N_r, N_t), no zero columns
        c: Constellation

    Returns:
        DetectionResult identical in decision to :func:`detect_joint_ml`

    Raises:
        ZeroColumnError: If some channel column is zero
    """
    vector, channel = _prepare(y, h_eff)
    n_r, n_t = channel.shape
    energies = _column_energies(channel)
    cm = n_t * n_r  # column energies

    best_antenna, best_index = 0, 0
    d_min = np.inf
    for j in range(n_t):
        z_j = np.vdot(channel[:, j], vector)
        cm += n_r
        index, comparisons = quantize(c, z_j, float(energies[j]))
        cm += comparisons
        x = c.points[index]
        d_j = float(np.real(np.conj(x) * (energies[j] * x - 2.0 * z_j)))
        cm += 2
        if d_j < d_min:
            d_min, best_antenna, best_index = d_j, j, index

    return DetectionResult(
        antenna=best_antenna,
        point_index=best_index,
        bits=unmap_bits(best_antenna, best_index, n_t, c),
        cm_count=cm,
        metric=_distance(vector, d_min),
    )


def detect_suboptimal(
    y: npt.ArrayLike,
    h_eff: npt.ArrayLike,
    c: Constellation,
) -> DetectionResult:
    """
    Two-stage detector: matched-filter antenna estimate, then symbol demapping.

    Args:
        y: Received vector of length N_r
        h_eff: Effective channel, shape (N_r, N_t), no zero columns
        c: Constellation

    Returns:
        DetectionResult

    Raises:
        ZeroColumnError: If some channel column is zero
    """
    vector, channel = _prepare(y, h_eff)
    n_r, n_t = channel.shape
    energies = _column_energies(channel)
    cm = n_t * n_r

    z = channel.conj().T @ vector
    cm += n_t * n_r
    correlation = np.abs(z) ** 2
    cm += n_t
    antenna = int(np.argmax(correlation / energies))

    g = z[antenna] / energies[antenna]
    distances = np.abs(g - c.points) ** 2
    cm += c.order
    point_index = int(np.argmin(distances))

    x = c.points[point_index]
    metric = float(energies[antenna] * np.abs(x) ** 2 - 2.0 * np.real(np.conj(x) * z[antenna]))
    return DetectionResult(
        antenna=antenna,
        point_index=point_index,
        bits=unmap_bits(antenna, point_index, n_t, c),
        cm_count=cm,
        metric=_distance(vector, metric),
    )


def cm_formula(detector: Detector | str, n_t: int, n_r: int, order: int) -> int:
    """
    Closed-form CM count of a detector.

    Args:
        detector: Detector name
        n_t: Transmit antennas
        n_r: Receive antennas
        order: Constellation size M

    Returns:
        2N_tN_r+2N_tM+M, 2N_tN_r+N_t log2 M+2N_t or 2N_tN_r+N_t+M
    """
    detector = Detector(detector)
    base = 2 * n_t * n_r
    if detector is Detector.JOINT_ML:
        return base + 2 * n_t * order + order
    if detector is Detector.PROPOSED:
        return base + n_t * (order.bit_length() - 1) + 2 * n_t
    return base + n_t + order


DETECTORS: dict[Detector, Callable[..., DetectionResult]] = {
    Detector.JOINT_ML: detect_joint_ml,
    Detector.PROPOSED: detect_proposed,
    Detector.SUBOPTIMAL: detect_suboptimal,
}
