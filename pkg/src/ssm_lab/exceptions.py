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

"""Exception types raised by ssm-lab.

Every domain error also derives from ValueError, so callers that only care
about "bad input" can catch that.
"""


class SsmLabError(Exception):
    """Base class for all ssm-lab errors."""


class DegenerateRankError(SsmLabError, ValueError):
    """Matrix has full column rank, so it has no null space."""


class NotPositiveDefiniteError(SsmLabError, ValueError):
    """Covariance matrix is not Hermitian positive definite."""


class InvalidConstellationError(SsmLabError, ValueError):
    """Unsupported constellation kind or order."""


class BitWidthError(SsmLabError, ValueError):
    """Bit word length does not match the mapping width."""


class NullSpaceEmptyError(SsmLabError, ValueError):
    """Selected antenna set is too small to host artificial noise."""


class ZeroColumnError(SsmLabError, ValueError):
    """Effective channel has an all-zero column."""


class SelectionError(SsmLabError, ValueError):
    """Antenna selection has repeated or out-of-range indices."""


class BudgetExceededError(SsmLabError, ValueError):
    """Exhaustive enumeration would exceed the configured subset cap."""


class BracketError(SsmLabError, ValueError):
    """Power-allocation factor lies outside the allowed bracket."""


class DimensionMismatchError(SsmLabError, ValueError):
    """Input tensor shape does not match the model configuration."""


class EmptyDatasetError(SsmLabError, ValueError):
    """Training requires at least one sample."""


class ModelFormatError(SsmLabError, ValueError):
    """Persisted model file has an unknown format or is malformed."""
