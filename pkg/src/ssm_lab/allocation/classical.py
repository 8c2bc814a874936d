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

"""Classical power-allocation strategies between message and artificial noise.

Every strategy returns a factor beta inside the bracket [beta_min, beta_max]
(settings, default [0.05, 0.95]). Strategies that score secrecy rates use one
noise bank per call, so all candidate betas share common random numbers.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import structlog

from ssm_lab.config import settings
from ssm_lab.exceptions import BracketError, NullSpaceEmptyError
from ssm_lab.linalg import RngStream
from ssm_lab.link.channel import SelectedScenario
from ssm_lab.link.constellation import Constellation
from ssm_lab.link.modulation import PaSplit
from ssm_lab.secrecy.mutual_information import NoiseBank, SrEstimate, secrecy_rate_with_noise

logger = structlog.get_logger(__name__)

INVERSE_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class PaStrategy(StrEnum):
    """Power-allocation strategies."""

    FIXED = "fixed"
    GRID_SEARCH = "es"
    SR_GRADIENT = "gd"
    MAX_P_SINR_ANSNR = "max-p-sinr-ansnr"
    DNN = "dnn"


@dataclass(frozen=True)
class PaResult:
    """Chosen power-allocation factor and what it cost to find it."""

    beta: float
    sr_at_beta: float | None
    strategy: PaStrategy
    evaluations: int
    converged: bool = True


def default_bracket() -> tuple[float, float]:
    """The configured (beta_min, beta_max)."""
    return settings.beta_min, settings.beta_max


def _bank_for(ss: SelectedScenario, noise_samples: int, rng: RngStream) -> NoiseBank:
    return NoiseBank.draw(rng, noise_samples, max(ss.base.n_b, ss.base.n_e))


def _evaluate(ss: SelectedScenario, c: Constellation, bank: NoiseBank, beta: float) -> SrEstimate:
    return secrecy_rate_with_noise(ss, PaSplit(beta=beta, power=ss.power), c, bank)


def pa_fixed(beta: float, bracket: tuple[float, float] | None = None) -> PaResult:
    """
    Fixed power-allocation factor.

    Args:
        beta: Factor to use
        bracket: Allowed (beta_min, beta_max)

    Returns:
        PaResult with no SR evaluation

    Raises:
        BracketError: If beta lies outside the bracket
    """
    lo, hi = bracket or default_bracket()
    if not lo <= beta <= hi:
        raise BracketError(f"beta={beta} outside the bracket [{lo}, {hi}]")
    return PaResult(beta=beta, sr_at_beta=None, strategy=PaStrategy.FIXED, evaluations=0)


def beta_grid(grid_step: float, bracket: tuple[float, float] | None = None) -> np.ndarray:
    """
    Evenly spaced betas covering the bracket, endpoints included.

    Raises:
        ValueError: If the step does not divide the bracket
    """
    lo, hi = bracket or default_bracket()
    steps = (hi - lo) / grid_step
    if grid_step <= 0 or abs(steps - round(steps)) > 1e-9:
        raise ValueError(f"Grid step {grid_step} does not divide the bracket [{lo}, {hi}]")
    return np.round(lo + grid_step * np.arange(int(round(steps)) + 1), 12)


def pa_grid_search(
    ss: SelectedScenario,
    c: Constellation,
    grid_step: float,
    noise_samples: int,
    rng: RngStream,
    *,
    bank: NoiseBank | None = None,
    bracket: tuple[float, float] | None = None,
) -> PaResult:
    """
    Exhaustive search of the secrecy rate over a beta grid.

    Args:
        ss: Selected scenario
        c: Constellation
        grid_step: Grid spacing; must divide the bracket
        noise_samples: Noise draws K (used when no bank is given)
        rng: Random stream for the noise bank
        bank: Shared noise bank
        bracket: Allowed (beta_min, beta_max)

    Returns:
        PaResult at the best grid point; ties go to the smaller beta
    """
    grid = beta_grid(grid_step, bracket)
    bank = bank or _bank_for(ss, noise_samples, rng)

    best_beta, best_sr = float(grid[0]), -np.inf
    for beta in grid:
        sr = _evaluate(ss, c, bank, float(beta)).sr
        if sr > best_sr:
            best_beta, best_sr = float(beta), sr

    return PaResult(
        beta=best_beta,
        sr_at_beta=float(best_sr),
        strategy=PaStrategy.GRID_SEARCH,
        evaluations=len(grid),
    )


@dataclass(frozen=True)
class StepSchedule:
    """Decaying step size eta_t = initial / (1 + decay * t), capped per step."""

    initial: float = 0.05
    decay: float = 0.5
    max_step: float = 0.2

    def step(self, iteration: int, gradient: float) -> float:
        """Signed beta increment for one ascent step."""
        raw = self.initial / (1.0 + self.decay * iteration) * gradient
        return float(np.clip(raw, -self.max_step, self.max_step))


def pa_sr_gradient(
    ss: SelectedScenario,
    c: Constellation,
    noise_samples: int,
    rng: RngStream,
    beta0: float = 0.5,
    schedule: StepSchedule | None = None,
    max_iters: int = 8,
    *,
    fd_step: float = 0.02,
    tol: float = 1e-3,
    bank: NoiseBank | None = None,
    bracket: tuple[float, float] | None = None,
) -> PaResult:
    """
    Projected gradient ascent on the Monte Carlo secrecy rate.

    The gradient is a central finite difference of the unclipped
    I_bob - I_eve on a fixed noise bank, so the objective is smooth in beta
    and does not stall where the clipped secrecy rate is flat at zero.

    Args:
        ss: Selected scenario
        c: Constellation
        noise_samples: Noise draws K (used when no bank is given)
        rng: Random stream for the noise bank
        beta0: Starting point inside the bracket
        schedule: Step-size schedule
        max_iters: Iteration cap
        fd_step: Finite-difference half-width
        tol: Stop when |delta beta| falls below this
        bank: Shared noise bank
        bracket: Allowed (beta_min, beta_max)

    Returns:
        PaResult at the best visited iterate; ``converged`` is False when the
        iteration cap was hit first
    """
    lo, hi = bracket or default_bracket()
    if not lo <= beta0 <= hi:
        raise BracketError(f"beta0={beta0} outside the bracket [{lo}, {hi}]")
    schedule = schedule or StepSchedule()
    bank = bank or _bank_for(ss, noise_samples, rng)

    beta = beta0
    best_beta, best_value = beta0, -np.inf
    evaluations = 0
    converged = False

    for iteration in range(max_iters):
        upper, lower = min(beta + fd_step, hi), max(beta - fd_step, lo)
        f_upper = _evaluate(ss, c, bank, upper).difference
        f_lower = _evaluate(ss, c, bank, lower).difference
        evaluations += 2

        # midpoint estimate of the objective at beta, for best-iterate tracking
        value = 0.5 * (f_upper + f_lower)
        if value > best_value:
            best_beta, best_value = beta, value

        gradient = (f_upper - f_lower) / (upper - lower)
        new_beta = float(np.clip(beta + schedule.step(iteration, gradient), lo, hi))
        delta = new_beta - beta
        beta = new_beta
        logger.debug("pa_gradient_step", iteration=iteration, beta=beta, gradient=gradient)
        if abs(delta) < tol:
            converged = True
            break

    if not converged:
        logger.debug("pa_gradient_not_converged", max_iters=max_iters, beta=beta)

    final = _evaluate(ss, c, bank, best_beta if not converged else beta)
    evaluations += 1
    return PaResult(
        beta=best_beta if not converged else beta,
        sr_at_beta=final.sr,
        strategy=PaStrategy.SR_GRADIENT,
        evaluations=evaluations,
        converged=converged,
    )


def p_sinr_ansnr_objective(ss: SelectedScenario, beta: float) -> float:
    """
    Product of Bob's SINR and Eve's AN-to-signal-plus-noise ratio.

    SINR_b = beta P avg_j ||Hb_S e_j||^2 / (N_b sigma2)
    ANSNR_e = ((1 - beta) P / (N_t - N_b)) ||He_S T||_F^2
              / (beta P avg_j ||He_S e_j||^2 + N_e sigma2)

    Args:
        ss: Selected scenario
        beta: Power-allocation factor

    Returns:
        SINR_b(beta) * ANSNR_e(beta)
    """
    power, sigma2 = ss.power, ss.sigma2
    bob_gain = float(np.mean(np.sum(np.abs(ss.hb_s) ** 2, axis=0)))
    eve_gain = float(np.mean(np.sum(np.abs(ss.he_s) ** 2, axis=0)))
    leakage = float(np.linalg.norm(ss.he_s @ ss.projector) ** 2)

    sinr = beta * power * bob_gain / (ss.base.n_b * sigma2)
    ansnr = ((1.0 - beta) * power / ss.nullity) * leakage / (
        beta * power * eve_gain + ss.base.n_e * sigma2
    )
    return sinr * ansnr


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-6,
) -> float:
    """
    Maximize a unimodal function on [lo, hi] by golden-section search.

    Args:
        f: Objective
        lo: Left end of the bracket
        hi: Right end of the bracket
        tol: Final bracket width

    Returns:
        Midpoint of the final bracket
    """
    a, b = lo, hi
    inner_lo = b - INVERSE_GOLDEN * (b - a)
    inner_hi = a + INVERSE_GOLDEN * (b - a)
    f_lo, f_hi = f(inner_lo), f(inner_hi)
    while b - a > tol:
        if f_lo >= f_hi:
            b, inner_hi, f_hi = inner_hi, inner_lo, f_lo
            inner_lo = b - INVERSE_GOLDEN * (b - a)
            f_lo = f(inner_lo)
        else:
            a, inner_lo, f_lo = inner_lo, inner_hi, f_hi
            inner_hi = a + INVERSE_GOLDEN * (b - a)
            f_hi = f(inner_hi)
    return 0.5 * (a + b)


def pa_max_p_sinr_ansnr(
    ss: SelectedScenario,
    c: Constellation | None = None,
    noise_samples: int | None = None,
    rng: RngStream | None = None,
    *,
    bank: NoiseBank | None = None,
    bracket: tuple[float, float] | None = None,
) -> PaResult:
    """
    Maximize the SINR x ANSNR product over the bracket.

    The criterion itself needs no secrecy-rate evaluation; when a
    constellation and noise source are given, the secrecy rate at the chosen
    beta is evaluated once for reporting.

    Args:
        ss: Selected scenario with N_t > N_b
        c: Constellation for the optional SR report
        noise_samples: Noise draws K for the optional SR report
        rng: Random stream for the optional SR report
        bank: Shared noise bank for the optional SR report
        bracket: Allowed (beta_min, beta_max)

    Returns:
        PaResult with beta* to 1e-6

    Raises:
        NullSpaceEmptyError: If the selection has no AN dimensions
    """
    if ss.nullity < 1 or ss.n_t <= ss.base.n_b:
        raise NullSpaceEmptyError(f"N_t={ss.n_t} must exceed N_b={ss.base.n_b}")
    lo, hi = bracket or default_bracket()
    beta = golden_section_max(lambda b: p_sinr_ansnr_objective(ss, b), lo, hi)

    sr_at_beta = None
    evaluations = 0
    if c is not None and (bank is not None or (rng is not None and noise_samples)):
        bank = bank or _bank_for(ss, int(noise_samples or 0), rng)
        sr_at_beta = _evaluate(ss, c, bank, beta).sr
        evaluations = 1

    return PaResult(
        beta=beta,
        sr_at_beta=sr_at_beta,
        strategy=PaStrategy.MAX_P_SINR_ANSNR,
        evaluations=evaluations,
    )
