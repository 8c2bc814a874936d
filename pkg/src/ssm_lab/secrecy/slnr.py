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

"""Per-antenna signal-to-leakage-and-noise ratio."""

import numpy as np
import numpy.typing as npt

from ssm_lab.linalg import ComplexMatrix, null_space_basis
from ssm_lab.link.channel import Scenario
from ssm_lab.link.modulation import PaSplit


def slnr_per_antenna(
    s: Scenario,
    pa: PaSplit,
    t_full: ComplexMatrix | None = None,
) -> npt.NDArray[np.float64]:
    """
    SLNR of the confidential message sent from each of the N_a antennas.

    SLNR_j = beta P ||H_b e_j||^2 / (beta P ||H_e e_j||^2
             + ((1 - beta) P / (N_a - N_b)) ||H_e T_full||_F^2 + N_b sigma2)

    The AN term uses the power received at Eve; at Bob it vanishes by
    construction of the projector.

    Args:
        s: Full scenario
        pa: Power split
        t_full: Null-space basis of the full H_b (computed when omitted and
            beta < 1)

    Returns:
        Array of N_a SLNR values
    """
    bob_gain = np.sum(np.abs(s.h_b) ** 2, axis=0)
    eve_gain = np.sum(np.abs(s.h_e) ** 2, axis=0)

    an_leakage = 0.0
    if pa.beta < 1.0:
        projector = null_space_basis(s.h_b) if t_full is None else t_full
        an_leakage = (
            pa.noise_power / projector.shape[1] * float(np.linalg.norm(s.h_e @ projector) ** 2)
        )

    numerator = pa.message_power * bob_gain
    denominator = pa.message_power * eve_gain + an_leakage + s.n_b * s.sigma2
    return numerator / denominator
