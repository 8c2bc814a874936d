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

"""Order-preserving process-pool map for Monte Carlo trials."""

from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import TypeVar

import structlog

logger = structlog.get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def run_ordered(fn: Callable[[T], R], tasks: Iterable[T], workers: int = 1) -> list[R]:
    """
    Apply ``fn`` to every task and return the results in task order.

    With ``workers == 1`` everything runs in-process. Otherwise tasks go to a
    process pool and results are slotted back by submission index, so any
    reduction over the returned list happens in the same order regardless of
    the worker count. ``fn`` and the tasks must be picklable.

    Args:
        fn: Module-level function of one argument
        tasks: Task arguments
        workers: Number of worker processes (>= 1)

    Returns:
        List of results, one per task, in task order

    Raises:
        ValueError: If workers < 1
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    task_list = list(tasks)
    if workers == 1 or len(task_list) <= 1:
        return [fn(task) for task in task_list]

    results: list[R | None] = [None] * len(task_list)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(fn, task): index for index, task in enumerate(task_list)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()

    logger.debug("run_ordered_done", tasks=len(task_list), workers=workers)
    return results  # type: ignore[return-value]
