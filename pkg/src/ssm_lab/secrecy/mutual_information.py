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

"""Monte Carlo finite-alphabet mutual information and secrecy rate.

For N equiprobable candidates u_i observed in unit-variance complex AWGN,

    I = log2 N - E_w[ (1/N) sum_i log2 sum_j exp(-||u_i - u_j + w||^2 + ||w||^2) ]

which is evaluated with log-sum-exp over noise draws w ~ CN(0, I). Eve's
colored noise (thermal plus artificial noise) is whitened first.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import structlog
from scipy.special import logsumexp

from ssm_lab.linalg import RngStream, cholesky_whitener, sample_cn
from ssm_lab.link.channel import SelectedScenario
from ssm_lab.link.constellation import Constellation
from ssm_lab.link.modulation import PaSplit

logger = structlog.get_logger(__name__)

# Upper bound on the (noise chunk x N x N) work array, in elements
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class MiEstimate:
    """Mutual information in bits per channel use."""

    value: float
    std_error: float
    noise_samples: int


@dataclass(frozen=True)
class SrEstimate:
    """Secrecy rate [I_bob - I_eve]^+ with its constituent estimates."""

    sr: float
    mi_bob: MiEstimate
    mi_eve: MiEstimate

    @property
    def difference(self) -> float:
        """Unclipped I_bob - I_eve."""
        return self.mi_bob.value - self.mi_eve.value

    @property
    def std_error(self) -> float:
        """Combined standard error of the two MI estimates."""
        return float(np.hypot(self.mi_bob.std_error, self.mi_eve.std_error))


@dataclass(frozen=True, eq=False)
class NoiseBank:
    """
    Unit-variance noise draws shared for common random numbers.

    One bank per channel draw is reused for Bob and Eve (first N_b / N_e
    columns) and across every power split and antenna subset compared on
    that draw.
    """

    samples: npt.NDArray[np.complex128]

    @classmethod
    def draw(cls, rng: RngStream, noise_samples: int, dim: int) -> "NoiseBank":
        """
        Draw a bank of CN(0, I) vectors.

        Args:
            rng: Random stream to consume
            noise_samples: Number of draws K
            dim: Vector length (at least max(N_b, N_e))

        Returns:
            NoiseBank of shape (K, dim)
        """
        if noise_samples < 1:
            raise ValueError(f"Need at least one noise sample, got {noise_samples}")
        return cls(samples=sample_cn(rng, (noise_samples, dim)))

    @property
    def size(self) -> int:
        return self.samples.shape[0]

    def columns(self, dim: int) -> npt.NDArray[np.complex128]:
        """Leading ``dim`` coordinates of every draw."""
        if dim > self.samples.shape[1]:
            raise ValueError(f"Noise bank has {self.samples.shape[1]} dimensions, need {dim}")
        return self.samples[:, :dim]


def mi_finite_alphabet(
    candidates: npt.ArrayLike,
    noise_samples: int | None = None,
    rng: RngStream | None = None,
    *,
    noise: npt.ArrayLike | None = None,
) -> MiEstimate:
    """
    Mutual information of equiprobable candidates in unit-variance AWGN.

    Args:
        candidates: Array of shape (N, D), already whitened
        noise_samples: Number of noise draws K (ignored when ``noise`` is given)
        rng: Random stream for the noise draws
        noise: Pre-drawn CN(0, I) samples of shape (K, D), for common random numbers

    Returns:
        MiEstimate with the standard error of the per-sample terms
    """
    u = np.atleast_2d(np.asarray(candidates, dtype=np.complex128))
    n, dim = u.shape
    if n < 1:
        raise ValueError("Need at least one candidate")

    if noise is None:
        if rng is None or noise_samples is None or noise_samples < 1:
            raise ValueError("Provide either pre-drawn noise or (noise_samples >= 1, rng)")
        w = sample_cn(rng, (noise_samples, dim))
    else:
        w = np.asarray(noise, dtype=np.complex128)
        if w.ndim != 2 or w.shape[1] != dim:
            raise ValueError(f"Noise of shape {w.shape} does not match candidates {u.shape}")
    k = w.shape[0]

    if n == 1:
        return MiEstimate(value=0.0, std_error=0.0, noise_samples=k)

    diff = u[:, None, :] - u[None, :, :]
    dist2 = np.sum(np.abs(diff) ** 2, axis=2)
    chunk = max(1, _CHUNK_ELEMENTS // (n * n))

    terms = np.empty((k, n))
    for start in range(0, k, chunk):
        block = w[start:start + chunk]
        # -||d + w||^2 + ||w||^2 = -||d||^2 - 2 Re(d^H w)
        cross = np.real(np.einsum("ijd,kd->kij", diff.conj(), block))
        exponent = -dist2[None, :, :] - 2.0 * cross
        terms[start:start + chunk] = logsumexp(exponent, axis=2) / np.log(2.0)

    value = float(np.log2(n) - terms.mean())
    std_error = float(terms.std(ddof=1) / np.sqrt(terms.size)) if terms.size > 1 else 0.0
    return MiEstimate(value=value, std_error=std_error, noise_samples=k)


def bob_candidates(
    ss: SelectedScenario, pa: PaSplit, c: Constellation
) -> npt.NDArray[np.complex128]:
    """Bob's noiseless received points, whitened to unit noise, indexed j*M + m."""
    whitener = cholesky_whitener(ss.sigma2 * np.eye(ss.base.n_b))
    return _received_points(ss.hb_s, pa, c) @ whitener.T


def eve_covariance(ss: SelectedScenario, pa: PaSplit) -> npt.NDArray[np.complex128]:
    """Eve's noise-plus-AN covariance sigma2 I + ((1-beta)P/nullity) (He T)(He T)^H."""
    leakage = ss.he_s @ ss.projector
    an_scale = pa.noise_power / ss.nullity
    return ss.sigma2 * np.eye(ss.base.n_e) + an_scale * (leakage @ leakage.conj().T)


def eve_candidates(
    ss: SelectedScenario, pa: PaSplit, c: Constellation
) -> npt.NDArray[np.complex128]:
    """Eve's noiseless received points after whitening her colored noise."""
    whitener = cholesky_whitener(eve_covariance(ss, pa))
    return _received_points(ss.he_s, pa, c) @ whitener.T


def _received_points(channel, pa: PaSplit, c: Constellation) -> npt.NDArray[np.complex128]:
    points = np.einsum("rj,m->jmr", channel, c.points).reshape(-1, channel.shape[0])
    return np.sqrt(pa.message_power) * points


def secrecy_rate_with_noise(
    ss: SelectedScenario,
    pa: PaSplit,
    c: Constellation,
    bank: NoiseBank,
) -> SrEstimate:
    """
    Secrecy rate using a pre-drawn noise bank (common random numbers).

    Args:
        ss: Selected scenario
        pa: Power split
        c: Constellation
        bank: Shared noise draws with at least max(N_b, N_e) columns

    Returns:
        SrEstimate
    """
    mi_bob = mi_finite_alphabet(bob_candidates(ss, pa, c), noise=bank.columns(ss.base.n_b))
    mi_eve = mi_finite_alphabet(eve_candidates(ss, pa, c), noise=bank.columns(ss.base.n_e))
    sr = max(0.0, mi_bob.value - mi_eve.value)
    return SrEstimate(sr=sr, mi_bob=mi_bob, mi_eve=mi_eve)


def secrecy_rate(
    ss: SelectedScenario,
    pa: PaSplit,
    c: Constellation,
    noise_samples: int,
    rng: RngStream,
) -> SrEstimate:
    """
    Monte Carlo secrecy rate of one selected scenario.

    Args:
        ss: Selected scenario
        pa: Power split
        c: Constellation
        noise_samples: Noise draws K per candidate
        rng: Random stream for the noise bank

    Returns:
        SrEstimate with sr = [I_bob - I_eve]^+

    Raises:
        NotPositiveDefiniteError: Propagated from the whitener
    """
    bank = NoiseBank.draw(rng, noise_samples, max(ss.base.n_b, ss.base.n_e))
    return secrecy_rate_with_noise(ss, pa, c, bank)
