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

"""Link model: constellations, wiretap channels and the SSM transmit chain."""

from ssm_lab.link.channel import (
    Receiver,
    Scenario,
    SelectedScenario,
    default_active_antennas,
    gen_scenario,
    noise_variance,
    receive,
    select,
)
from ssm_lab.link.constellation import (
    Constellation,
    ConstellationKind,
    bits_to_point,
    build,
    demap_nearest,
    point_to_bits,
)
from ssm_lab.link.modulation import (
    PaSplit,
    SmSymbol,
    map_bits,
    random_symbol,
    spectral_efficiency,
    transmit_vector,
    unmap_bits,
)

__all__ = [
    "Constellation",
    "ConstellationKind",
    "PaSplit",
    "Receiver",
    "Scenario",
    "SelectedScenario",
    "SmSymbol",
    "bits_to_point",
    "build",
    "default_active_antennas",
    "demap_nearest",
    "gen_scenario",
    "map_bits",
    "noise_variance",
    "point_to_bits",
    "random_symbol",
    "receive",
    "select",
    "spectral_efficiency",
    "transmit_vector",
    "unmap_bits",
]
