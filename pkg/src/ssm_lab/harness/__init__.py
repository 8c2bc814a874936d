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

"""Experiment runner plumbing: result tables and ordered parallel maps."""

from ssm_lab.harness.output import ResultTable, to_csv, write_metadata, write_results
from ssm_lab.harness.parallel import run_ordered

__all__ = ["ResultTable", "to_csv", "write_metadata", "write_results", "run_ordered"]
