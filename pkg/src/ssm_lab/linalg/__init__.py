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

"""Complex linear algebra and randomness primitives."""

from ssm_lab.linalg.matrix import (
    ComplexMatrix,
    ComplexVector,
    as_complex_matrix,
    cholesky_whitener,
    null_space_basis,
)
from ssm_lab.linalg.rng import RngStream, sample_cn

__all__ = [
    "ComplexMatrix",
    "ComplexVector",
    "RngStream",
    "as_complex_matrix",
    "cholesky_whitener",
    "null_space_basis",
    "sample_cn",
]
