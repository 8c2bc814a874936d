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

"""Pytest fixtures for ssm-lab tests."""

import numpy as np
import pytest

from ssm_lab.linalg import RngStream
from ssm_lab.link import Scenario, build, gen_scenario, select


@pytest.fixture
def rng():
    """Fresh random stream; every test starts from the same state."""
    return RngStream(12345, 0)


@pytest.fixture
def qpsk():
    """Gray-labeled QPSK as the 4-point square QAM."""
    return build("qam", 4)


@pytest.fixture
def qam16():
    """Gray-labeled 16-QAM."""
    return build("qam", 16)


@pytest.fixture
def scenario():
    """N_a=4, N_b=N_e=2 Rayleigh scenario at 10 dB and P=1."""
    return gen_scenario(RngStream(7, 0), n_a=4, n_b=2, n_e=2, snr_db=10.0, power=1.0)


@pytest.fixture
def selected(scenario):
    """Every antenna of the default scenario selected."""
    return select(scenario, range(4))


@pytest.fixture
def mirrored_scenario(scenario):
    """Scenario in which Eve sees exactly Bob's channel."""
    return Scenario(
        h_b=scenario.h_b,
        h_e=np.array(scenario.h_b, copy=True),
        sigma2=scenario.sigma2,
        power=scenario.power,
    )
