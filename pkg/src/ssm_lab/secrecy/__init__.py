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

"""Finite-alphabet mutual information, secrecy rate and SLNR."""

from ssm_lab.secrecy.ergodic import ErgodicEstimate, ergodic_secrecy_rate
from ssm_lab.secrecy.mutual_information import (
    MiEstimate,
    NoiseBank,
    SrEstimate,
    bob_candidates,
    eve_candidates,
    eve_covariance,
    mi_finite_alphabet,
    secrecy_rate,
    secrecy_rate_with_noise,
)
from ssm_lab.secrecy.slnr import slnr_per_antenna

__all__ = [
    "ErgodicEstimate",
    "MiEstimate",
    "NoiseBank",
    "SrEstimate",
    "bob_candidates",
    "ergodic_secrecy_rate",
    "eve_candidates",
    "eve_covariance",
    "mi_finite_alphabet",
    "secrecy_rate",
    "secrecy_rate_with_noise",
    "slnr_per_antenna",
]
