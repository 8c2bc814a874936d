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
Small convolutional network mapping channel state to a power-allocation factor.

Layer stack (NCHW, real weights):

    planes (B, 4, N_b, N_t) -> conv 2x2 -> ReLU -> max-pool -> conv 2x2 -> ReLU
    -> flatten ++ noise feature -> dense -> ReLU -> dense(1) -> sigmoid -> bracket

Convolutions use stride 1 with zero padding on the bottom and right edge, so
every conv keeps its input's spatial size. The pool is 2x2 when both spatial
dimensions allow it, 1x2 when only the width does, and the identity otherwise.
"""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
import structlog
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit

from ssm_lab.config import settings
from ssm_lab.exceptions import DimensionMismatchError, ModelFormatError
from ssm_lab.linalg import RngStream
from ssm_lab.link.channel import Scenario

logger = structlog.get_logger(__name__)

Array = npt.NDArray[np.float64]

PARAMETER_NAMES = (
    "conv1_w", "conv1_b", "conv2_w", "conv2_b", "dense1_w", "dense1_b", "dense2_w", "dense2_b",
)


@dataclass(frozen=True)
class NetworkConfig:
    """Architecture and output bracket of a PaModel."""

    n_b: int
    n_t: int
    conv1_filters: int = 8
    conv2_filters: int = 16
    kernel: int = 2
    dense_units: int = 32
    beta_min: float = field(default_factory=lambda: settings.beta_min)
    beta_max: float = field(default_factory=lambda: settings.beta_max)

    def __post_init__(self):
        """Validate sizes."""
        sizes = (self.n_b, self.n_t, self.conv1_filters, self.conv2_filters, self.kernel,
                 self.dense_units)
        if min(sizes) < 1:
            raise ValueError(f"All network sizes must be >= 1, got {self}")
        if not 0.0 <= self.beta_min < self.beta_max <= 1.0:
            raise ValueError(f"Invalid bracket [{self.beta_min}, {self.beta_max}]")

    @property
    def pool(self) -> tuple[int, int]:
        """Pooling window (height, width)."""
        if self.n_b >= 2 and self.n_t >= 2:
            return 2, 2
        if self.n_t >= 2:
            return 1, 2
        return 1, 1

    @property
    def pooled_shape(self) -> tuple[int, int]:
        ph, pw = self.pool
        return self.n_b // ph, self.n_t // pw

    @property
    def flat_size(self) -> int:
        """Length of the flattened conv features, before the noise feature."""
        h, w = self.pooled_shape
        return self.conv2_filters * h * w

    def parameter_shapes(self) -> dict[str, tuple[int, ...]]:
        k = self.kernel
        return {
            "conv1_w": (self.conv1_filters, 4, k, k),
            "conv1_b": (self.conv1_filters,),
            "conv2_w": (self.conv2_filters, self.conv1_filters, k, k),
            "conv2_b": (self.conv2_filters,),
            "dense1_w": (self.flat_size + 1, self.dense_units),
            "dense1_b": (self.dense_units,),
            "dense2_w": (self.dense_units, 1),
            "dense2_b": (1,),
        }

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def channel_planes(h_b: npt.ArrayLike, h_e: npt.ArrayLike) -> Array:
    """
    Stack the real and imaginary parts of both channels into four planes.

    Args:
        h_b: Desired channel restricted to the active antennas (N_b x N_t)
        h_e: Eavesdropping channel restricted the same way; it must have
            N_b rows so both fit one plane shape

    Returns:
        Array of shape (4, N_b, N_t): Re H_b, Im H_b, Re H_e, Im H_e

    Raises:
        DimensionMismatchError: If the two channels differ in shape
    """
    hb = np.asarray(h_b, dtype=np.complex128)
    he = np.asarray(h_e, dtype=np.complex128)
    if hb.shape != he.shape:
        raise DimensionMismatchError(
            f"Channel planes need N_b == N_e, got {hb.shape} and {he.shape}"
        )
    return np.stack([hb.real, hb.imag, he.real, he.imag])


def noise_feature(sigma2: float, power: float) -> float:
    """
    Noise input of the network, log10(sigma2 / P) = -SNR_dB / 10.

    The network is fed this logarithm rather than the raw sigma2, which spans
    several decades over a 0-30 dB SNR range.
    """
    return float(np.log10(sigma2 / power))


def scenario_inputs(s: Scenario) -> tuple[Array, float]:
    """Network inputs for a scenario whose every antenna is active."""
    return channel_planes(s.h_b, s.h_e), noise_feature(s.sigma2, s.power)


def _conv_forward(x: Array, w: Array, b: Array) -> tuple[Array, Array]:
    k = w.shape[-1]
    padded = np.pad(x, ((0, 0), (0, 0), (0, k - 1), (0, k - 1)))
    windows = sliding_window_view(padded, (k, k), axis=(2, 3))  # (B, C, H, W, k, k)
    out = np.einsum("bchwij,fcij->bfhw", windows, w) + b[None, :, None, None]
    return out, windows


def _conv_backward(
    dout: Array, windows: Array, w: Array, input_shape: tuple[int, ...]
) -> tuple[Array, Array, Array]:
    k = w.shape[-1]
    _, _, h, wd = input_shape
    dw = np.einsum("bchwij,bfhw->fcij", windows, dout)
    db = dout.sum(axis=(0, 2, 3))
    dpadded = np.zeros(input_shape[:2] + (h + k - 1, wd + k - 1))
    for i in range(k):
        for j in range(k):
            dpadded[:, :, i:i + h, j:j + wd] += np.einsum("bfhw,fc->bchw", dout, w[:, :, i, j])
    return dpadded[:, :, :h, :wd], dw, db


def _pool_forward(x: Array, pool: tuple[int, int]) -> tuple[Array, Array]:
    ph, pw = pool
    b, c, h, w = x.shape
    ho, wo = h // ph, w // pw
    blocks = (
        x[:, :, :ho * ph, :wo * pw]
        .reshape(b, c, ho, ph, wo, pw)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(b, c, ho, wo, ph * pw)
    )
    # np.argmax picks the first maximum, which is where ties route the gradient
    argmax = np.argmax(blocks, axis=-1)
    out = np.take_along_axis(blocks, argmax[..., None], axis=-1)[..., 0]
    return out, argmax


def _pool_backward(
    dout: Array, argmax: Array, pool: tuple[int, int], input_shape: tuple[int, ...]
) -> Array:
    ph, pw = pool
    b, c, h, w = input_shape
    ho, wo = dout.shape[2:]
    blocks = np.zeros((b, c, ho, wo, ph * pw))
    np.put_along_axis(blocks, argmax[..., None], dout[..., None], axis=-1)
    dx = np.zeros(input_shape)
    dx[:, :, :ho * ph, :wo * pw] = (
        blocks.reshape(b, c, ho, wo, ph, pw)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(b, c, ho * ph, wo * pw)
    )
    return dx


class PaModel:
    """Trainable power-allocation network with analytic backpropagation."""

    def __init__(self, config: NetworkConfig, params: dict[str, Array]):
        """
        Wrap a parameter dictionary.

        Args:
            config: Architecture
            params: Arrays named as in PARAMETER_NAMES

        Raises:
            DimensionMismatchError: If a parameter is missing or misshaped
        """
        shapes = config.parameter_shapes()
        for name, shape in shapes.items():
            if name not in params:
                raise DimensionMismatchError(f"Missing parameter {name}")
            if tuple(np.shape(params[name])) != shape:
                raise DimensionMismatchError(
                    f"Parameter {name} has shape {np.shape(params[name])}, expected {shape}"
                )
        self.config = config
        self.params = {name: np.array(params[name], dtype=np.float64) for name in shapes}

    @classmethod
    def zeros(cls, config: NetworkConfig) -> "PaModel":
        """All-zero weights; predicts the bracket midpoint everywhere."""
        return cls(config, {n: np.zeros(s) for n, s in config.parameter_shapes().items()})

    @classmethod
    def initialize(cls, config: NetworkConfig, rng: RngStream) -> "PaModel":
        """He-normal weights and zero biases."""
        params = {}
        for name, shape in config.parameter_shapes().items():
            if name.endswith("_b"):
                params[name] = np.zeros(shape)
            else:
                fan_in = int(np.prod(shape[1:])) if name.startswith("conv") else shape[0]
                params[name] = rng.generator.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
        return cls(config, params)

    def copy(self) -> "PaModel":
        return PaModel(self.config, {n: p.copy() for n, p in self.params.items()})

    def _check_inputs(self, planes: npt.ArrayLike, noise: npt.ArrayLike) -> tuple[Array, Array]:
        x = np.asarray(planes, dtype=np.float64)
        if x.ndim == 3:
            x = x[None]
        expected = (4, self.config.n_b, self.config.n_t)
        if x.ndim != 4 or x.shape[1:] != expected:
            raise DimensionMismatchError(
                f"Input planes of shape {x.shape[1:]} do not match the model's {expected}"
            )
        nf = np.atleast_1d(np.asarray(noise, dtype=np.float64))
        if nf.shape != (x.shape[0],):
            raise DimensionMismatchError(
                f"Expected {x.shape[0]} noise features, got shape {nf.shape}"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(nf))):
            raise ValueError("Network inputs must be finite")
        return x, nf

    def _forward(self, x: Array, nf: Array) -> tuple[Array, dict[str, Any]]:
        p = self.params
        lo, hi = self.config.beta_min, self.config.beta_max

        c1, win1 = _conv_forward(x, p["conv1_w"], p["conv1_b"])
        a1 = np.maximum(c1, 0.0)
        pooled, argmax = _pool_forward(a1, self.config.pool)
        c2, win2 = _conv_forward(pooled, p["conv2_w"], p["conv2_b"])
        a2 = np.maximum(c2, 0.0)
        features = np.concatenate([a2.reshape(len(x), -1), nf[:, None]], axis=1)
        d1 = features @ p["dense1_w"] + p["dense1_b"]
        a3 = np.maximum(d1, 0.0)
        logit = (a3 @ p["dense2_w"] + p["dense2_b"])[:, 0]
        squash = expit(logit)
        beta = lo + (hi - lo) * squash

        cache = {
            "x": x, "win1": win1, "c1": c1, "a1": a1, "argmax": argmax, "pooled": pooled,
            "win2": win2, "c2": c2, "features": features, "d1": d1, "a3": a3, "squash": squash,
        }
        return beta, cache

    def predict(self, planes: npt.ArrayLike, noise: npt.ArrayLike) -> Array:
        """
        Predict power-allocation factors.

        Args:
            planes: (B, 4, N_b, N_t) or a single (4, N_b, N_t) input
            noise: Noise feature per input (see noise_feature)

        Returns:
            Array of B factors inside [beta_min, beta_max]

        Raises:
            DimensionMismatchError: If the inputs do not match the model
        """
        x, nf = self._check_inputs(planes, noise)
        beta, _ = self._forward(x, nf)
        return beta

    def predict_scenario(self, s: Scenario) -> float:
        planes, nf = scenario_inputs(s)
        return float(self.predict(planes, [nf])[0])

    def loss_and_gradients(
        self, planes: npt.ArrayLike, noise: npt.ArrayLike, labels: npt.ArrayLike
    ) -> tuple[float, dict[str, Array]]:
        """
        Mean squared error on beta and its gradient for every parameter.

        Args:
            planes: (B, 4, N_b, N_t) inputs
            noise: (B,) noise features
            labels: (B,) target factors

        Returns:
            (loss, gradients keyed like ``params``)
        """
        x, nf = self._check_inputs(planes, noise)
        y = np.asarray(labels, dtype=np.float64).reshape(-1)
        if y.shape != (len(x),):
            raise DimensionMismatchError(f"Expected {len(x)} labels, got shape {y.shape}")

        p = self.params
        beta, cache = self._forward(x, nf)
        error = beta - y
        loss = float(np.mean(error ** 2))

        lo, hi = self.config.beta_min, self.config.beta_max
        squash = cache["squash"]
        dlogit = (2.0 / len(x)) * error * (hi - lo) * squash * (1.0 - squash)

        grads: dict[str, Array] = {}
        grads["dense2_w"] = cache["a3"].T @ dlogit[:, None]
        grads["dense2_b"] = np.array([dlogit.sum()])
        dd1 = (dlogit[:, None] @ p["dense2_w"].T) * (cache["d1"] > 0)
        grads["dense1_w"] = cache["features"].T @ dd1
        grads["dense1_b"] = dd1.sum(axis=0)
        dfeatures = dd1 @ p["dense1_w"].T

        dc2 = dfeatures[:, :-1].reshape(cache["c2"].shape) * (cache["c2"] > 0)
        dpooled, grads["conv2_w"], grads["conv2_b"] = _conv_backward(
            dc2, cache["win2"], p["conv2_w"], cache["pooled"].shape
        )
        da1 = _pool_backward(dpooled, cache["argmax"], self.config.pool, cache["a1"].shape)
        dc1 = da1 * (cache["c1"] > 0)
        _, grads["conv1_w"], grads["conv1_b"] = _conv_backward(
            dc1, cache["win1"], p["conv1_w"], cache["x"].shape
        )
        return loss, grads

    def state(self) -> dict[str, Any]:
        """Architecture plus row-major weight lists, ready for JSON."""
        return {
            "config": self.config.to_dict(),
            "params": {
                name: {"shape": list(arr.shape), "values": arr.ravel().tolist()}
                for name, arr in self.params.items()
            },
        }

    @classmethod
    def from_state(cls, state: dict[str, Any]) -> "PaModel":
        """Inverse of :meth:`state`."""
        config = NetworkConfig(**state["config"])
        params = {
            name: np.asarray(entry["values"], dtype=np.float64).reshape(entry["shape"])
            for name, entry in state["params"].items()
        }
        return cls(config, params)


MODEL_FORMAT = "ssm-lab-pa-model"
MODEL_FORMAT_VERSION = 1


def save_model(model: PaModel, path: Path) -> None:
    """
    Write a model as versioned JSON.

    Args:
        model: Model to save
        path: Destination file
    """
    document = {"format": MODEL_FORMAT, "version": MODEL_FORMAT_VERSION, **model.state()}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=1) + "\n", encoding="utf-8")
    logger.info("model_saved", path=str(path), n_b=model.config.n_b, n_t=model.config.n_t)


def load_model(path: Path) -> PaModel:
    """
    Read a model written by :func:`save_model`.

    Args:
        path: Model file

    Returns:
        PaModel

    Raises:
        ModelFormatError: If the file is not a model of a supported version
    """
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{path} is not valid JSON: {e}") from e

    if not isinstance(document, dict) or document.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"{path} is not an ssm-lab model file")
    if document.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"Unsupported model version {document.get('version')} in {path}, "
            f"expected {MODEL_FORMAT_VERSION}"
        )
    try:
        return PaModel.from_state(document)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"Malformed model file {path}: {e}") from e
