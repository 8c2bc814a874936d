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

"""CSV result tables and their JSON metadata sidecars."""

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import structlog

from ssm_lab import __version__

logger = structlog.get_logger(__name__)

STDOUT = "-"


@dataclass
class ResultTable:
    """Rows of one experiment under a frozen column schema."""

    columns: tuple[str, ...]
    rows: list[dict[str, Any]] = field(default_factory=list)

    def add(self, **values: Any) -> None:
        """
        Append a row.

        Raises:
            ValueError: If the row's keys differ from the schema
        """
        if set(values) != set(self.columns):
            raise ValueError(
                f"Row keys {sorted(values)} do not match the columns {list(self.columns)}"
            )
        self.rows.append(values)

    def column(self, name: str) -> list[Any]:
        return [row[name] for row in self.rows]

    def where(self, **criteria: Any) -> list[dict[str, Any]]:
        """Rows whose fields equal every given value."""
        return [row for row in self.rows if all(row[k] == v for k, v in criteria.items())]


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(table: ResultTable) -> str:
    """Render a table as CSV text with ``\\n`` line endings; floats use repr."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format(row[name]) for name in table.columns])
    return buffer.getvalue()


def sidecar_path(path: Path) -> Path:
    """``results/ber.csv`` -> ``results/ber.meta.json``."""
    return path.with_name(f"{path.stem}.meta.json")


def write_metadata(
    path: Path,
    config: dict[str, Any],
    seed: int,
    wall_time_s: float,
    rows: int,
    gates: dict[str, bool] | None = None,
    extra: dict[str, Any] | None = None,
) -> Path:
    """
    Write the ``<name>.meta.json`` sidecar of an output file.

    Args:
        path: The output file the sidecar describes
        config: Full experiment configuration to echo
        seed: Master seed
        wall_time_s: Run time in seconds
        rows: Number of records in the output
        gates: Gating-assertion outcomes by name
        extra: Experiment-specific diagnostics

    Returns:
        Sidecar path
    """
    meta = {
        "version": __version__,
        "output": path.name,
        "seed": seed,
        "wall_time_s": round(wall_time_s, 3),
        "rows": rows,
        "gates": gates or {},
        "extra": extra or {},
        "config": config,
    }
    meta_path = sidecar_path(path)
    meta_path.write_text(json.dumps(meta, indent=2, default=str) + "\n", encoding="utf-8")
    return meta_path


def write_results(
    table: ResultTable,
    output: Path | str,
    config: dict[str, Any],
    seed: int,
    wall_time_s: float,
    gates: dict[str, bool] | None = None,
    extra: dict[str, Any] | None = None,
) -> Path | None:
    """
    Write a result table and its metadata sidecar.

    Args:
        table: Results
        output: CSV path, or "-" for stdout (no sidecar is written then)
        config: Full experiment configuration to echo
        seed: Master seed
        wall_time_s: Run time in seconds
        gates: Gating-assertion outcomes by name
        extra: Experiment-specific diagnostics

    Returns:
        Sidecar path, or None when writing to stdout
    """
    text = to_csv(table)
    if str(output) == STDOUT:
        sys.stdout.write(text)
        sys.stdout.flush()
        return None

    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    meta_path = write_metadata(
        path, config, seed, wall_time_s, len(table.rows), gates=gates, extra=extra
    )
    logger.info("results_written", path=str(path), rows=len(table.rows), sidecar=str(meta_path))
    return meta_path
