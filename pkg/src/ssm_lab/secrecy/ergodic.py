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

"""Ergodic averaging of per-channel Monte Carlo results."""

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ErgodicEstimate:
    """Mean over channel draws with its standard error."""

    mean: float
    std_error: float
    n_channels: int

    @property
    def ci95(self) -> float:
        """Half-width of the normal 95% confidence interval."""
        return 1.96 * self.std_error


def ergodic_secrecy_rate(values: Iterable[float]) -> ErgodicEstimate:
    """
    Summarize per-channel secrecy rates.

    Args:
        values: One secrecy rate per channel draw

    Returns:
        ErgodicEstimate; NaN mean for an empty input
    """
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        return ErgodicEstimate(mean=float("nan"), std_error=float("nan"), n_channels=0)
    std_error = float(data.std(ddof=1) / np.sqrt(data.size)) if data.size > 1 else 0.0
    return ErgodicEstimate(mean=float(data.mean()), std_error=std_error, n_channels=int(data.size))
