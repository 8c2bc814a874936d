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

"""Power allocation between the message and artificial noise."""

from ssm_lab.allocation.classical import (
    PaResult,
    PaStrategy,
    StepSchedule,
    beta_grid,
    golden_section_max,
    p_sinr_ansnr_objective,
    pa_fixed,
    pa_grid_search,
    pa_max_p_sinr_ansnr,
    pa_sr_gradient,
)
from ssm_lab.allocation.dataset import (
    DatasetParams,
    PaDataset,
    PaSample,
    generate_dataset,
    read_dataset,
    write_dataset,
)
from ssm_lab.allocation.evaluation import (
    ConstantPredictor,
    EvaluationReport,
    Predictor,
    evaluate,
)
from ssm_lab.allocation.network import (
    NetworkConfig,
    PaModel,
    channel_planes,
    load_model,
    noise_feature,
    save_model,
)
from ssm_lab.allocation.training import (
    AdamState,
    EpochRecord,
    TrainingConfig,
    TrainingResult,
    train,
    write_training_log,
)

__all__ = [
    "PaResult",
    "PaStrategy",
    "StepSchedule",
    "beta_grid",
    "golden_section_max",
    "p_sinr_ansnr_objective",
    "pa_fixed",
    "pa_grid_search",
    "pa_max_p_sinr_ansnr",
    "pa_sr_gradient",
    "DatasetParams",
    "PaDataset",
    "PaSample",
    "generate_dataset",
    "read_dataset",
    "write_dataset",
    "ConstantPredictor",
    "EvaluationReport",
    "Predictor",
    "evaluate",
    "NetworkConfig",
    "PaModel",
    "channel_planes",
    "load_model",
    "noise_feature",
    "save_model",
    "AdamState",
    "EpochRecord",
    "TrainingConfig",
    "TrainingResult",
    "train",
    "write_training_log",
]
