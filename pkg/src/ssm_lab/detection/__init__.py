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

"""Receivers for spatial-modulation symbols."""

from ssm_lab.detection.detectors import (
    DETECTORS,
    DetectionResult,
    Detector,
    cm_formula,
    detect_joint_ml,
    detect_proposed,
    detect_suboptimal,
)

__all__ = [
    "DETECTORS",
    "DetectionResult",
    "Detector",
    "cm_formula",
    "detect_joint_ml",
    "detect_proposed",
    "detect_suboptimal",
]
