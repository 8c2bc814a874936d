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

"""
Experiment configurations and runners.

Each runner turns an ExperimentConfig into a ResultTable plus named gate
outcomes. Runners never write files; the CLI does. Every random draw comes
from an RngStream keyed by the trial's coordinates, so tables are identical
for any worker count:

* BER trials: stream (snr_index, trial)
* channel draws: stream (channel,), with sub-streams 0 for the channels,
  1 for the random antenna subset and 2 + snr_index for the noise bank
* complexity instances: stream (instance,)
"""

import tomllib
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ssm_lab.allocation.classical import (
    PaStrategy,
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
)
from ssm_lab.allocation.evaluation import ConstantPredictor, evaluate
from ssm_lab.allocation.network import (
    NetworkConfig,
    PaModel,
    channel_planes,
    load_model,
    noise_feature,
)
from ssm_lab.allocation.training import TrainingConfig, TrainingResult, train
from ssm_lab.config import ExperimentPresets, experiment_presets, settings
from ssm_lab.detection.detectors import DETECTORS, Detector, cm_formula
from ssm_lab.harness.output import ResultTable
from ssm_lab.harness.parallel import run_ordered
from ssm_lab.linalg import RngStream, sample_cn
from ssm_lab.link.channel import Scenario, gen_scenario, noise_variance, select
from ssm_lab.link.constellation import ConstellationKind, build
from ssm_lab.link.modulation import PaSplit, random_symbol, spectral_efficiency
from ssm_lab.secrecy.ergodic import ergodic_secrecy_rate
from ssm_lab.secrecy.mutual_information import NoiseBank, secrecy_rate_with_noise
from ssm_lab.selection.tas import (
    EdasMode,
    TasStrategy,
    tas_edas,
    tas_exhaustive_sr,
    tas_max_slnr,
    tas_random,
)

logger = structlog.get_logger(__name__)

BER_COLUMNS = ("snr_db", "detector", "trials", "bit_errors", "ber", "ci95")
SR_COLUMNS = ("snr_db", "strategy", "sr_mean", "sr_stderr", "n_channels")
COMPLEXITY_COLUMNS = ("n_t", "n_r", "m", "detector", "measured_cm", "formula_cm", "match")
TRAINING_LOG_COLUMNS = ("epoch", "train_mse", "val_mse")
EVALUATION_COLUMNS = (
    "predictor", "n_samples", "beta_mse", "sr_mean", "sr_stderr", "sr_label_mean", "sr_ratio",
)

BER_BLOCK_TRIALS = 2000
GATE_TOLERANCE = 1e-12


class ExperimentKind(StrEnum):
    """Experiments the harness can run."""

    BER_SWEEP = "ber-sweep"
    SR_SNR_SWEEP = "sr-snr-sweep"
    TAS_COMPARE = "tas-compare"
    PA_COMPARE = "pa-compare"
    DNN_DATASET = "dnn-dataset"
    DNN_TRAIN = "dnn-train"
    DNN_EVAL = "dnn-eval"
    COMPLEXITY_TABLE = "complexity-table"


SECRECY_KINDS = {
    ExperimentKind.SR_SNR_SWEEP,
    ExperimentKind.TAS_COMPARE,
    ExperimentKind.PA_COMPARE,
    ExperimentKind.DNN_DATASET,
}
ALL_ANTENNAS_KINDS = {
    ExperimentKind.PA_COMPARE,
    ExperimentKind.DNN_DATASET,
    ExperimentKind.DNN_TRAIN,
    ExperimentKind.DNN_EVAL,
}


class ExperimentConfig(BaseModel):
    """Full description of one run; echoed into the result sidecar."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ExperimentKind

    # Dimensions
    n_a: int = Field(4, ge=1)
    n_t: int = Field(4, ge=1)
    n_b: int = Field(2, ge=1)
    n_e: int = Field(2, ge=1)
    n_r: int = Field(4, ge=1)

    # Signalling
    modulation: ConstellationKind = ConstellationKind.QAM
    order: int = 4
    power: float = Field(1.0, gt=0)
    beta: float = Field(1.0, gt=0, le=1)

    # Monte Carlo sizes
    snr_db: list[float] = Field(default_factory=lambda: [0.0, 10.0, 20.0, 30.0], min_length=1)
    trials: int = Field(10_000, ge=0)
    channels: int = Field(200, ge=0)
    noise_samples: int = Field(default_factory=lambda: settings.noise_samples, ge=1)

    # Antenna selection
    tas_strategy: TasStrategy = TasStrategy.MAX_SLNR
    tas_strategies: list[TasStrategy] = Field(default_factory=lambda: list(TasStrategy))
    edas_mode: EdasMode = EdasMode.DESIRED

    # Power allocation
    pa_strategies: list[PaStrategy] = Field(
        default_factory=lambda: [
            PaStrategy.GRID_SEARCH,
            PaStrategy.FIXED,
            PaStrategy.SR_GRADIENT,
            PaStrategy.MAX_P_SINR_ANSNR,
        ]
    )
    fixed_betas: list[float] = Field(default_factory=lambda: [0.1, 0.5, 0.9])
    grid_step: float = Field(0.05, gt=0)
    gd_max_iters: int = Field(8, ge=1)

    # Learned power allocation
    samples: int = Field(8000, ge=0)
    snr_min_db: float = 0.0
    snr_max_db: float = 30.0
    epochs: int = Field(50, ge=1)
    batch_size: int = Field(32, ge=1)
    learning_rate: float = Field(1e-3, gt=0)
    val_fraction: float = Field(0.1, ge=0, lt=1)
    network_file: Path | None = None
    dataset_file: Path | None = None

    # Complexity table
    n_t_values: list[int] = Field(default_factory=lambda: [2, 4, 8])
    n_r_values: list[int] = Field(default_factory=lambda: [2, 4])
    orders: list[int] = Field(default_factory=lambda: [4, 16, 64, 256])

    # Reproducibility
    seed: int = Field(default_factory=lambda: settings.seed)
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        """Reject dimension combinations the experiment cannot run."""
        if self.kind is not ExperimentKind.COMPLEXITY_TABLE:
            build(self.modulation, self.order)
            spectral_efficiency(self.n_t, self.order)
            if self.n_t > self.n_a:
                raise ValueError(f"n_t={self.n_t} exceeds n_a={self.n_a}")
        if self.kind in SECRECY_KINDS and self.n_t <= self.n_b:
            raise ValueError(f"n_t={self.n_t} must exceed n_b={self.n_b} to leave AN dimensions")
        if self.kind in ALL_ANTENNAS_KINDS:
            if self.n_a != self.n_t:
                raise ValueError(f"{self.kind} uses every antenna: n_a must equal n_t")
            if self.n_b != self.n_e:
                raise ValueError(f"{self.kind} stacks both channels: n_b must equal n_e")
        if self.snr_max_db < self.snr_min_db:
            raise ValueError(f"Empty SNR range [{self.snr_min_db}, {self.snr_max_db}]")
        for beta in self.fixed_betas:
            pa_fixed(beta)
        if self.kind is ExperimentKind.DNN_TRAIN and self.dataset_file is None:
            raise ValueError("dnn-train needs a dataset file")
        if self.kind is ExperimentKind.DNN_EVAL and (
            self.dataset_file is None or self.network_file is None
        ):
            raise ValueError("dnn-eval needs a dataset file and a model file")
        if (
            self.kind is ExperimentKind.PA_COMPARE
            and PaStrategy.DNN in self.pa_strategies
            and self.network_file is None
        ):
            raise ValueError("The dnn strategy needs a model file")
        return self

    def echo(self) -> dict[str, Any]:
        """JSON-ready copy of every field."""
        return self.model_dump(mode="json")


def load_config(
    kind: ExperimentKind | str,
    preset: str | None = None,
    config_file: Path | None = None,
    overrides: dict[str, Any] | None = None,
    presets: ExperimentPresets | None = None,
) -> ExperimentConfig:
    """
    Build a config from a preset or TOML file, then apply overrides.

    Args:
        kind: Experiment to run
        preset: Name of a preset in experiments.toml
        config_file: TOML file whose top-level keys are config fields
        overrides: Field values that win over the preset or file; None values
            are ignored
        presets: Preset source (defaults to the global one)

    Returns:
        Validated ExperimentConfig

    Raises:
        KeyError: If the preset is unknown
        ValueError: If the preset is for another experiment or a field is invalid
    """
    kind = ExperimentKind(kind)
    fields: dict[str, Any] = {}
    if preset is not None:
        fields.update((presets or experiment_presets).get_preset(preset))
    if config_file is not None:
        with open(config_file, "rb") as f:
            fields.update(tomllib.load(f))
    if "kind" in fields and ExperimentKind(fields["kind"]) is not kind:
        raise ValueError(f"Configuration is for {fields['kind']}, not {kind}")
    fields.update({k: v for k, v in (overrides or {}).items() if v is not None})
    fields["kind"] = kind
    return ExperimentConfig(**fields)


@dataclass
class RunResult:
    """Outcome of one experiment."""

    table: ResultTable
    gates: dict[str, bool] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    samples: list[PaSample] | None = None
    training: TrainingResult | None = None

    @property
    def passed(self) -> bool:
        return all(self.gates.values())


# BER sweep


def _ber_block(task: tuple[ExperimentConfig, int, int, int]) -> tuple[dict[Detector, int], int]:
    cfg, snr_index, start, stop = task
    c = build(cfg.modulation, cfg.order)
    sigma2 = noise_variance(cfg.snr_db[snr_index], cfg.power)
    # AN is nulled at Bob, so only the message share of P reaches him
    scale = np.sqrt(cfg.beta * cfg.power)

    errors = dict.fromkeys(Detector, 0)
    mismatches = 0
    for trial in range(start, stop):
        rng = RngStream(cfg.seed, (snr_index, trial))
        h_eff = scale * sample_cn(rng, (cfg.n_r, cfg.n_t))
        sym = random_symbol(rng, cfg.n_t, c)
        y = h_eff[:, sym.antenna] * sym.point + sample_cn(rng, cfg.n_r, sigma2)

        decisions = {d: DETECTORS[d](y, h_eff, c) for d in Detector}
        sent = np.array(sym.bits)
        for d, result in decisions.items():
            errors[d] += int(np.count_nonzero(np.array(result.bits) != sent))
        ml, proposed = decisions[Detector.JOINT_ML], decisions[Detector.PROPOSED]
        if (ml.antenna, ml.point_index) != (proposed.antenna, proposed.point_index):
            mismatches += 1
    return errors, mismatches


def run_ber_sweep(cfg: ExperimentConfig) -> RunResult:
    """
    BER versus SNR of the three detectors on shared (channel, noise, bits) draws.

    Gates:
        proposed_matches_joint_ml: identical decisions in every trial
    """
    bits_per_trial = spectral_efficiency(cfg.n_t, cfg.order)
    tasks = [
        (cfg, snr_index, start, min(start + BER_BLOCK_TRIALS, cfg.trials))
        for snr_index in range(len(cfg.snr_db))
        for start in range(0, cfg.trials, BER_BLOCK_TRIALS)
    ]
    blocks = run_ordered(_ber_block, tasks, workers=cfg.workers)

    table = ResultTable(BER_COLUMNS)
    total_mismatches = 0
    for snr_index, snr_db in enumerate(cfg.snr_db):
        errors = dict.fromkeys(Detector, 0)
        for (_, block_snr, _, _), (block_errors, mismatches) in zip(tasks, blocks, strict=True):
            if block_snr == snr_index:
                total_mismatches += mismatches
                for d in Detector:
                    errors[d] += block_errors[d]

        n_bits = cfg.trials * bits_per_trial
        for d in Detector:
            ber = errors[d] / n_bits if n_bits else float("nan")
            ci95 = 1.96 * float(np.sqrt(ber * (1.0 - ber) / n_bits)) if n_bits else float("nan")
            table.add(
                snr_db=snr_db, detector=str(d), trials=cfg.trials, bit_errors=errors[d],
                ber=ber, ci95=ci95,
            )
        logger.info(
            "ber_sweep_snr_done",
            snr_db=snr_db,
            **{f"ber_{d.name.lower()}": errors[d] / n_bits if n_bits else None for d in Detector},
        )

    return RunResult(
        table=table,
        gates={"proposed_matches_joint_ml": total_mismatches == 0},
        extra={"decision_mismatches": total_mismatches},
    )


# Secrecy-rate experiments


def _channel_draw(cfg: ExperimentConfig, channel: int) -> tuple[Scenario, RngStream]:
    rng = RngStream(cfg.seed, (channel,))
    s = gen_scenario(rng.child(0), cfg.n_a, cfg.n_b, cfg.n_e, cfg.snr_db[0], cfg.power)
    return s, rng


def _noise_bank(cfg: ExperimentConfig, rng: RngStream, snr_index: int) -> NoiseBank:
    return NoiseBank.draw(rng.child(2 + snr_index), cfg.noise_samples, max(cfg.n_b, cfg.n_e))


def _tas_channel(
    task: tuple[ExperimentConfig, int, tuple[TasStrategy, ...]],
) -> list[dict[str, float]]:
    cfg, channel, strategies = task
    s0, rng = _channel_draw(cfg, channel)
    c = build(cfg.modulation, cfg.order)
    pa = PaSplit(beta=cfg.beta, power=cfg.power)

    # selections that do not depend on the noise level
    fixed: dict[TasStrategy, tuple[int, ...]] = {}
    if TasStrategy.RANDOM in strategies:
        fixed[TasStrategy.RANDOM] = tas_random(rng.child(1), cfg.n_a, cfg.n_t).selection
    if TasStrategy.EDAS in strategies:
        fixed[TasStrategy.EDAS] = tas_edas(s0, c, cfg.edas_mode, cfg.n_t).selection

    per_snr = []
    for snr_index, snr_db in enumerate(cfg.snr_db):
        s = s0.with_sigma2(noise_variance(snr_db, cfg.power))
        bank = _noise_bank(cfg, rng, snr_index)
        values: dict[str, float] = {}
        for strategy in strategies:
            if strategy is TasStrategy.EXHAUSTIVE_SR:
                result = tas_exhaustive_sr(s, pa, c, cfg.noise_samples, rng, cfg.n_t, bank=bank)
                values[str(strategy)] = result.score
                continue
            if strategy is TasStrategy.MAX_SLNR:
                selection = tas_max_slnr(s, pa, cfg.n_t).selection
            else:
                selection = fixed[strategy]
            values[str(strategy)] = secrecy_rate_with_noise(select(s, selection), pa, c, bank).sr
        per_snr.append(values)
    return per_snr


def _sr_table(
    cfg: ExperimentConfig, labels: list[str], per_channel: list[list[dict[str, float]]]
) -> tuple[ResultTable, dict[str, list[float]]]:
    """Ergodic rows per (SNR, strategy) and the mean curve of each strategy."""
    table = ResultTable(SR_COLUMNS)
    curves: dict[str, list[float]] = {label: [] for label in labels}
    if not per_channel:
        return table, curves
    for snr_index, snr_db in enumerate(cfg.snr_db):
        for label in labels:
            estimate = ergodic_secrecy_rate(ch[snr_index][label] for ch in per_channel)
            curves[label].append(estimate.mean)
            table.add(
                snr_db=snr_db, strategy=label, sr_mean=estimate.mean,
                sr_stderr=estimate.std_error, n_channels=estimate.n_channels,
            )
        logger.info("sr_snr_point_done", snr_db=snr_db, n_channels=len(per_channel))
    return table, curves


def _crests(cfg: ExperimentConfig, curves: dict[str, list[float]]) -> dict[str, Any]:
    crests = {}
    for label, curve in curves.items():
        if curve:
            peak = int(np.argmax(curve))
            crests[label] = {
                "snr_db": cfg.snr_db[peak],
                "interior": 0 < peak < len(curve) - 1,
            }
    return crests


def _dominates(curves: dict[str, list[float]], top: str, others: list[str]) -> bool:
    return all(
        a >= b - GATE_TOLERANCE
        for other in others
        for a, b in zip(curves[top], curves[other], strict=True)
    )


def run_sr_snr_sweep(cfg: ExperimentConfig) -> RunResult:
    """Ergodic SR versus SNR under one antenna-selection strategy and a fixed beta."""
    strategies = (cfg.tas_strategy,)
    per_channel = run_ordered(
        _tas_channel, [(cfg, ch, strategies) for ch in range(cfg.channels)], workers=cfg.workers
    )
    table, curves = _sr_table(cfg, [str(cfg.tas_strategy)], per_channel)
    return RunResult(table=table, extra={"crests": _crests(cfg, curves)})


def run_tas_compare(cfg: ExperimentConfig) -> RunResult:
    """
    Ergodic SR of the antenna-selection strategies on common random numbers.

    Gates:
        es_dominates: exhaustive search is never below another strategy
    """
    strategies = tuple(dict.fromkeys(cfg.tas_strategies))
    labels = [str(s) for s in strategies]
    per_channel = run_ordered(
        _tas_channel, [(cfg, ch, strategies) for ch in range(cfg.channels)], workers=cfg.workers
    )
    table, curves = _sr_table(cfg, labels, per_channel)

    gates = {}
    es = str(TasStrategy.EXHAUSTIVE_SR)
    if es in curves and per_channel:
        gates["es_dominates"] = _dominates(curves, es, [lab for lab in labels if lab != es])
    return RunResult(table=table, gates=gates, extra={"crests": _crests(cfg, curves)})


def _fixed_label(beta: float) -> str:
    return f"fixed-{beta:g}"


def _pa_channel(
    task: tuple[ExperimentConfig, int, PaModel | None],
) -> list[dict[str, tuple[float, int]]]:
    cfg, channel, network = task
    s0, rng = _channel_draw(cfg, channel)
    c = build(cfg.modulation, cfg.order)

    per_snr = []
    for snr_index, snr_db in enumerate(cfg.snr_db):
        ss = select(s0.with_sigma2(noise_variance(snr_db, cfg.power)), range(cfg.n_t))
        bank = _noise_bank(cfg, rng, snr_index)

        def sr_at(beta: float, ss=ss, bank=bank) -> float:
            return secrecy_rate_with_noise(ss, PaSplit(beta=beta, power=ss.power), c, bank).sr

        values: dict[str, tuple[float, int]] = {}
        for strategy in cfg.pa_strategies:
            if strategy is PaStrategy.GRID_SEARCH:
                r = pa_grid_search(ss, c, cfg.grid_step, cfg.noise_samples, rng, bank=bank)
                values[str(strategy)] = (float(r.sr_at_beta), r.evaluations)
            elif strategy is PaStrategy.FIXED:
                for beta in cfg.fixed_betas:
                    values[_fixed_label(beta)] = (sr_at(pa_fixed(beta).beta), 1)
            elif strategy is PaStrategy.SR_GRADIENT:
                r = pa_sr_gradient(
                    ss, c, cfg.noise_samples, rng, max_iters=cfg.gd_max_iters, bank=bank
                )
                values[str(strategy)] = (float(r.sr_at_beta), r.evaluations)
            elif strategy is PaStrategy.MAX_P_SINR_ANSNR:
                r = pa_max_p_sinr_ansnr(ss, c, bank=bank)
                values[str(strategy)] = (float(r.sr_at_beta), r.evaluations)
        if network is not None:
            beta = network.predict(
                channel_planes(ss.hb_s, ss.he_s), [noise_feature(ss.sigma2, ss.power)]
            )[0]
            values[str(PaStrategy.DNN)] = (sr_at(float(beta)), 1)
        per_snr.append(values)
    return per_snr


def run_pa_compare(cfg: ExperimentConfig) -> RunResult:
    """
    Ergodic SR of the power-allocation strategies on common random numbers.

    The dnn strategy is included when a model file is configured.

    Gates:
        es_dominates_fixed: the grid search is never below a fixed beta
    """
    network = load_model(cfg.network_file) if cfg.network_file is not None else None
    per_channel_raw = run_ordered(
        _pa_channel, [(cfg, ch, network) for ch in range(cfg.channels)], workers=cfg.workers
    )

    labels: list[str] = []
    for strategy in cfg.pa_strategies:
        if strategy is PaStrategy.FIXED:
            labels.extend(_fixed_label(b) for b in cfg.fixed_betas)
        elif strategy is not PaStrategy.DNN:
            labels.append(str(strategy))
    if network is not None:
        labels.append(str(PaStrategy.DNN))
    labels = list(dict.fromkeys(labels))

    per_channel = [[{k: v[0] for k, v in point.items()} for point in ch] for ch in per_channel_raw]
    table, curves = _sr_table(cfg, labels, per_channel)

    evaluations = {
        label: float(np.mean([point[label][1] for ch in per_channel_raw for point in ch]))
        for label in labels
        if per_channel_raw
    }
    logger.info("pa_compare_evaluations", **evaluations)

    gates = {}
    es = str(PaStrategy.GRID_SEARCH)
    fixed = [lab for lab in labels if lab.startswith("fixed-")]
    if es in curves and fixed and per_channel:
        gates["es_dominates_fixed"] = _dominates(curves, es, fixed)
    return RunResult(table=table, gates=gates, extra={"mean_sr_evaluations": evaluations})


# Learned power allocation


def dataset_params(cfg: ExperimentConfig) -> DatasetParams:
    return DatasetParams(
        n_t=cfg.n_t,
        n_b=cfg.n_b,
        n_e=cfg.n_e,
        snr_min_db=cfg.snr_min_db,
        snr_max_db=cfg.snr_max_db,
        modulation=cfg.modulation,
        order=cfg.order,
        power=cfg.power,
        grid_step=cfg.grid_step,
        noise_samples=cfg.noise_samples,
    )


def run_dnn_dataset(cfg: ExperimentConfig) -> RunResult:
    """Grid-search-labeled samples; the table summarizes the label distribution."""
    samples = generate_dataset(cfg.seed, cfg.samples, dataset_params(cfg), workers=cfg.workers)
    labels = np.array([s.beta_star for s in samples])
    table = ResultTable(("n_samples", "label_mean", "label_std", "label_min", "label_max"))
    if samples:
        table.add(
            n_samples=len(samples),
            label_mean=float(labels.mean()),
            label_std=float(labels.std()),
            label_min=float(labels.min()),
            label_max=float(labels.max()),
        )
    return RunResult(table=table, samples=samples)


def run_dnn_train(cfg: ExperimentConfig) -> RunResult:
    """Train the network on a dataset file; the table is the per-epoch log."""
    dataset = PaDataset.from_samples(read_dataset(cfg.dataset_file))
    result = train(
        dataset,
        TrainingConfig(
            epochs=cfg.epochs,
            batch_size=cfg.batch_size,
            val_fraction=cfg.val_fraction,
            lr=cfg.learning_rate,
            seed=cfg.seed,
        ),
        NetworkConfig(n_b=cfg.n_b, n_t=cfg.n_t),
    )
    table = ResultTable(TRAINING_LOG_COLUMNS)
    for record in result.log:
        table.add(epoch=record.epoch, train_mse=record.train_mse, val_mse=record.val_mse)
    return RunResult(
        table=table,
        training=result,
        extra={"best_epoch": result.best_epoch, "best_val_mse": result.best_val_mse},
    )


def run_dnn_eval(cfg: ExperimentConfig) -> RunResult:
    """
    Score a trained model and the bracket-midpoint baseline on a held-out set.

    Gates:
        dnn_beats_midpoint: the model's SR ratio exceeds the baseline's
    """
    model = load_model(cfg.network_file)
    samples = read_dataset(cfg.dataset_file)
    c = build(cfg.modulation, cfg.order)
    midpoint = 0.5 * (model.config.beta_min + model.config.beta_max)

    table = ResultTable(EVALUATION_COLUMNS)
    reports = {}
    for name, predictor in (("dnn", model), ("midpoint", ConstantPredictor(midpoint))):
        report = evaluate(predictor, samples, c, cfg.noise_samples, cfg.seed, workers=cfg.workers)
        reports[name] = report
        table.add(
            predictor=name,
            n_samples=report.n_samples,
            beta_mse=report.beta_mse,
            sr_mean=report.sr_predicted.mean,
            sr_stderr=report.sr_predicted.std_error,
            sr_label_mean=report.sr_labels.mean,
            sr_ratio=report.sr_ratio,
        )
    return RunResult(
        table=table,
        gates={"dnn_beats_midpoint": reports["dnn"].sr_ratio > reports["midpoint"].sr_ratio},
    )


# Complexity


def run_complexity_table(cfg: ExperimentConfig) -> RunResult:
    """
    Measured CM counts of every detector against the closed forms.

    Gates:
        formulas_match: zero deviations over the whole sweep
    """
    table = ResultTable(COMPLEXITY_COLUMNS)
    instance = 0
    for n_t in cfg.n_t_values:
        for n_r in cfg.n_r_values:
            for order in cfg.orders:
                c = build(cfg.modulation, order)
                rng = RngStream(cfg.seed, (instance,))
                instance += 1
                h = sample_cn(rng, (n_r, n_t))
                sym = random_symbol(rng, n_t, c)
                y = h[:, sym.antenna] * sym.point + sample_cn(rng, n_r, 0.1)
                for d in Detector:
                    measured = DETECTORS[d](y, h, c).cm_count
                    formula = cm_formula(d, n_t, n_r, order)
                    table.add(
                        n_t=n_t, n_r=n_r, m=order, detector=str(d),
                        measured_cm=measured, formula_cm=formula, match=measured == formula,
                    )
    return RunResult(table=table, gates={"formulas_match": all(table.column("match"))})


RUNNERS: dict[ExperimentKind, Callable[[ExperimentConfig], RunResult]] = {
    ExperimentKind.BER_SWEEP: run_ber_sweep,
    ExperimentKind.SR_SNR_SWEEP: run_sr_snr_sweep,
    ExperimentKind.TAS_COMPARE: run_tas_compare,
    ExperimentKind.PA_COMPARE: run_pa_compare,
    ExperimentKind.DNN_DATASET: run_dnn_dataset,
    ExperimentKind.DNN_TRAIN: run_dnn_train,
    ExperimentKind.DNN_EVAL: run_dnn_eval,
    ExperimentKind.COMPLEXITY_TABLE: run_complexity_table,
}


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    """
    Run the experiment a config describes.

    Args:
        cfg: Validated configuration

    Returns:
        RunResult with the table and gate outcomes
    """
    logger.info("experiment_started", kind=str(cfg.kind), seed=cfg.seed, workers=cfg.workers)
    result = RUNNERS[cfg.kind](cfg)
    logger.info(
        "experiment_completed",
        kind=str(cfg.kind),
        rows=len(result.table.rows),
        gates=result.gates,
    )
    return result
