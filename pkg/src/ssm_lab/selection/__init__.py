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

"""Transmit antenna selection strategies."""

from ssm_lab.selection.tas import (
    EdasMode,
    TasResult,
    TasStrategy,
    min_distance,
    tas_edas,
    tas_exhaustive_sr,
    tas_max_slnr,
    tas_random,
)

__all__ = [
    "EdasMode",
    "TasResult",
    "TasStrategy",
    "min_distance",
    "tas_edas",
    "tas_exhaustive_sr",
    "tas_max_slnr",
    "tas_random",
]
