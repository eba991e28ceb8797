"""
Feed-forward Q-network (ReLU, ReLU, linear) with Adam and a binary model file.

Weights are stored with shape ``(fan_in, fan_out)`` so a batch of row vectors
maps as ``x @ W + b``.
"""
import logging
import struct
import zlib
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON, MODEL_MAGIC
from qube.errors import DimensionError, ModelFormatError, NonFiniteError

logger = logging.getLogger(__name__)

HIDDEN_LAYERS = 2


@dataclass
class MLPModel:
    """
    Attributes:
        layer_dims: (input, hidden1, hidden2, output)
        weights: One ``(fan_in, fan_out)`` matrix per layer
        biases: One ``(fan_out,)`` vector per layer
        phase: Phase tag written to the model file (0 if untagged)
    """
    layer_dims: Tuple[int, ...]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    phase: int = 0

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def output_dim(self) -> int:
        return self.layer_dims[-1]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "MLPModel":
        return MLPModel(
            tuple(self.layer_dims),
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.phase,
        )


@dataclass
class AdamState:
    """First/second moment accumulators, one array per parameter tensor."""
    m_w: List[np.ndarray]
    v_w: List[np.ndarray]
    m_b: List[np.ndarray]
    v_b: List[np.ndarray]
    step: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPSILON

    @classmethod
    def for_model(cls, model: MLPModel) -> "AdamState":
        return cls(
            m_w=[np.zeros_like(w) for w in model.weights],
            v_w=[np.zeros_like(w) for w in model.weights],
            m_b=[np.zeros_like(b) for b in model.biases],
            v_b=[np.zeros_like(b) for b in model.biases],
        )


@dataclass
class TrainingBatch:
    """Transitions stacked column-wise."""
    observations: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    terminals: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.terminals is None:
            self.terminals = np.zeros(len(self.actions), dtype=bool)

    @property
    def size(self) -> int:
        return len(self.actions)


def validate_dims(dims: Sequence[int]) -> Tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != HIDDEN_LAYERS + 2:
        raise DimensionError(f"Expected {HIDDEN_LAYERS + 2} layer dims, got {dims}")
    if any(d <= 0 for d in dims):
        raise DimensionError(f"Layer dims must be positive, got {dims}")
    return dims


def init_model(dims: Sequence[int], rng: np.random.Generator, phase: int = 0) -> MLPModel:
    """
    Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and zero biases.

    Args:
        dims: (input, hidden1, hidden2, output)
        rng: Seeded generator
        phase: Phase tag

    Returns:
        Freshly initialised model
    """
    dims = validate_dims(dims)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MLPModel(dims, weights, biases, phase)


def _check_input(model: MLPModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.input_dim:
        raise DimensionError(f"Observation of length {x.shape[-1]} for a network with input {model.input_dim}")
    return x


def _forward_layers(model: MLPModel, x: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Pre-activations and activations of every layer (activations[0] is the input)."""
    activations = [x]
    pre = []
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = activations[-1] @ w + b
        pre.append(z)
        activations.append(z if i == last else np.maximum(z, 0.0))
    return pre, activations


def forward(model: MLPModel, observation: np.ndarray) -> np.ndarray:
    """Q-values for one observation (1-D) or a batch (2-D)."""
    x = _check_input(model, observation)
    _, activations = _forward_layers(model, np.atleast_2d(x))
    q = activations[-1]
    return q[0] if x.ndim == 1 else q


def td_targets(online: MLPModel, target: MLPModel, batch: TrainingBatch, gamma: float) -> np.ndarray:
    """
    Double-Q targets: the online net picks the bootstrap action, the target net values it.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must be in [0, 1), got {gamma}")
    if online.layer_dims != target.layer_dims:
        raise DimensionError(f"Online {online.layer_dims} and target {target.layer_dims} differ")
    rewards = np.asarray(batch.rewards, dtype=np.float64)
    if gamma == 0.0:
        return rewards.copy()
    best = np.argmax(forward(online, batch.next_observations), axis=1)
    q_next = forward(target, batch.next_observations)[np.arange(batch.size), best]
    return rewards + gamma * q_next * (~np.asarray(batch.terminals, dtype=bool))


def loss_and_gradients(model: MLPModel, observations: np.ndarray, actions: np.ndarray,
                       targets: np.ndarray) -> Tuple[float, List[np.ndarray], List[np.ndarray]]:
    """
    MSE between Q(s, a) of the taken actions and the targets, with gradients.

    Returns:
        Tuple of (loss, weight gradients, bias gradients)
    """
    x = np.atleast_2d(_check_input(model, observations))
    actions = np.asarray(actions, dtype=np.int64)
    n = x.shape[0]
    rows = np.arange(n)
    pre, activations = _forward_layers(model, x)
    error = activations[-1][rows, actions] - targets
    loss = float(np.mean(error ** 2))

    # Only the taken-action outputs carry gradient.
    delta = np.zeros_like(activations[-1])
    delta[rows, actions] = 2.0 * error / n

    grads_w: List[np.ndarray] = [None] * len(model.weights)
    grads_b: List[np.ndarray] = [None] * len(model.biases)
    for i in reversed(range(len(model.weights))):
        grads_w[i] = activations[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * (pre[i - 1] > 0)
    return loss, grads_w, grads_b


def _adam_update(param: np.ndarray, grad: np.ndarray, m: np.ndarray, v: np.ndarray,
                 adam: AdamState, lr: float) -> None:
    m *= adam.beta1
    m += (1 - adam.beta1) * grad
    v *= adam.beta2
    v += (1 - adam.beta2) * grad ** 2
    m_hat = m / (1 - adam.beta1 ** adam.step)
    v_hat = v / (1 - adam.beta2 ** adam.step)
    param -= lr * m_hat / (np.sqrt(v_hat) + adam.eps)


def sgd_step(model: MLPModel, adam: AdamState, batch: TrainingBatch, targets: np.ndarray, lr: float) -> float:
    """
    One Adam update on the taken-action MSE. Returns the pre-update loss.

    Raises:
        NonFiniteError: If the loss or a gradient is NaN or infinite
    """
    if lr <= 0:
        raise ValueError(f"Learning rate must be positive, got {lr}")
    loss, grads_w, grads_b = loss_and_gradients(model, batch.observations, batch.actions, targets)
    if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads_w + grads_b):
        logger.error(f"Non-finite loss {loss} at Adam step {adam.step}")
        raise NonFiniteError(f"Non-finite loss {loss} at Adam step {adam.step}")
    adam.step += 1
    for i in range(len(model.weights)):
        _adam_update(model.weights[i], grads_w[i], adam.m_w[i], adam.v_w[i], adam, lr)
        _adam_update(model.biases[i], grads_b[i], adam.m_b[i], adam.v_b[i], adam, lr)
    return loss


def sync(target: MLPModel, online: MLPModel) -> None:
    """Copy online parameters into the target network in place."""
    if target.layer_dims != online.layer_dims:
        raise DimensionError(f"Cannot sync {online.layer_dims} into {target.layer_dims}")
    for dst, src in zip(target.weights + target.biases, online.weights + online.biases):
        np.copyto(dst, src)


# =============================================================================
# Model files
# =============================================================================

_LE_F64 = np.dtype("<f8")


def model_to_bytes(model: MLPModel, phase: Optional[int] = None) -> bytes:
    phase = model.phase if phase is None else phase
    body = bytearray(struct.pack("<BI", phase, len(model.layer_dims)))
    body += struct.pack(f"<{len(model.layer_dims)}I", *model.layer_dims)
    for w in model.weights:
        body += np.ascontiguousarray(w, dtype=_LE_F64).tobytes()
    for b in model.biases:
        body += np.ascontiguousarray(b, dtype=_LE_F64).tobytes()
    return MODEL_MAGIC + bytes(body) + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)


def model_from_bytes(data: bytes, phase: Optional[int] = None) -> MLPModel:
    """
    Decode a model file.

    Args:
        data: File contents
        phase: Phase the caller expects, checked against the header tag

    Raises:
        ModelFormatError: On bad magic, phase, dims, truncation or checksum
    """
    magic_len = len(MODEL_MAGIC)
    if data[:magic_len] != MODEL_MAGIC:
        raise ModelFormatError("Bad magic; not a QUBE model file", 0)
    offset = magic_len
    if len(data) < offset + 5:
        raise ModelFormatError("Truncated header", len(data))
    tag, count = struct.unpack_from("<BI", data, offset)
    if phase is not None and tag != phase:
        raise ModelFormatError(f"Model is tagged for phase {tag}, expected phase {phase}", offset)
    offset += 5
    if count != HIDDEN_LAYERS + 2:
        raise ModelFormatError(f"Unsupported layer count {count}", offset - 4)
    if len(data) < offset + 4 * count:
        raise ModelFormatError("Truncated layer dims", len(data))
    dims = struct.unpack_from(f"<{count}I", data, offset)
    if any(d == 0 for d in dims):
        raise ModelFormatError(f"Zero layer dim in {dims}", offset)
    offset += 4 * count

    shapes = list(zip(dims[:-1], dims[1:]))
    n_values = sum(a * b for a, b in shapes) + sum(dims[1:])
    end = offset + 8 * n_values
    if len(data) < end + 4:
        raise ModelFormatError(f"Truncated payload: need {end + 4} bytes, have {len(data)}", len(data))
    if len(data) > end + 4:
        raise ModelFormatError("Trailing bytes after checksum", end + 4)
    (stored,) = struct.unpack_from("<I", data, end)
    if zlib.crc32(data[magic_len:end]) & 0xFFFFFFFF != stored:
        raise ModelFormatError("Checksum mismatch", end)

    values = np.frombuffer(data, dtype=_LE_F64, count=n_values, offset=offset).astype(np.float64)
    weights, biases = [], []
    pos = 0
    for fan_in, fan_out in shapes:
        weights.append(values[pos:pos + fan_in * fan_out].reshape(fan_in, fan_out).copy())
        pos += fan_in * fan_out
    for _, fan_out in shapes:
        biases.append(values[pos:pos + fan_out].copy())
        pos += fan_out
    return MLPModel(tuple(dims), weights, biases, tag)


def save_model(model: MLPModel, path: str, phase: Optional[int] = None) -> None:
    with open(path, "wb") as f:
        f.write(model_to_bytes(model, phase))
    logger.info(f"Saved model {model.layer_dims} to {path}")


def load_model(path: str, phase: Optional[int] = None) -> MLPModel:
    with open(path, "rb") as f:
        data = f.read()
    return model_from_bytes(data, phase)
