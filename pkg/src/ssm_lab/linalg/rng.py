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

"""Seeded random streams and circularly-symmetric Gaussian sampling."""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ssm_lab.linalg.matrix import ComplexVector


class RngStream:
    """
    Counter-based random stream identified by (seed, stream id).

    The stream id may be a single integer or a tuple of integers (for example
    ``(snr_index, trial)``). Identical identifiers give identical sample
    sequences on any host and under any worker schedule. A stream is owned by
    one trial and never shared.
    """

    def __init__(self, seed: int, stream: int | Sequence[int] = 0):
        """
        Create a stream.

        Args:
            seed: 64-bit master seed
            stream: Stream id or tuple of ids
        """
        self.seed = int(seed)
        self.stream: tuple[int, ...] = (
            (int(stream),)
            if isinstance(stream, int | np.integer)
            else tuple(int(s) for s in stream)
        )
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.stream)
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def child(self, index: int) -> "RngStream":
        """
        Derive an independent sub-stream.

        Args:
            index: Sub-stream index appended to this stream's id

        Returns:
            New RngStream with id ``stream + (index,)``
        """
        return RngStream(self.seed, self.stream + (int(index),))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream={self.stream})"


def sample_cn(
    rng: RngStream,
    n: int | tuple[int, ...],
    variance: float = 1.0,
) -> npt.NDArray[np.complex128] | ComplexVector:
    """
    Draw i.i.d. circularly-symmetric complex Gaussian samples.

    Real and imaginary parts are independent with variance ``variance / 2``
    each, so E|x|^2 = variance.

    Args:
        rng: Random stream to consume
        n: Number of samples or output shape
        variance: Per-entry variance (must be positive)

    Returns:
        Complex array of the requested shape
    """
    if variance <= 0:
        raise ValueError(f"Variance must be positive, got {variance}")
    shape = (n,) if isinstance(n, int | np.integer) else tuple(n)
    parts = rng.generator.standard_normal(shape + (2,))
    scale = np.sqrt(variance / 2.0)
    return scale * (parts[..., 0] + 1j * parts[..., 1])
