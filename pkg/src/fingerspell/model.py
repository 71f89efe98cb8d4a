"""Dense feed-forward classifier built from scratch on numpy.

Architecture: 42 inputs -> hidden ReLU layers -> 26-way softmax. Training is
plain mini-batch SGD on softmax cross-entropy, fully deterministic for a
given (dataset, config): one seeded generator drives initialization and every
epoch shuffle, and batches are reduced in a fixed order.

Weight files are JSON with format name "slr-model", version 1; floats are
serialized with shortest round-trip repr so load(save(p)) reproduces p.
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import LABELS, Dataset
from .errors import (
    AllFramesDegenerate,
    DegenerateHand,
    DimensionMismatch,
    EmptyDataset,
    EmptyInput,
    FormatError,
)
from .fileio import atomic_write_text
from .landmarks import NUM_FEATURES, extract_features

logger = logging.getLogger(__name__)

RELU = "relu"
SOFTMAX = "softmax"

MODEL_FORMAT = "slr-model"
MODEL_VERSIONS = (1,)

INPUT_DIM = NUM_FEATURES
OUTPUT_DIM = len(LABELS)


@dataclass
class Layer:
    weights: np.ndarray  # (out_dim, in_dim); row r feeds output unit r
    biases: np.ndarray  # (out_dim,)
    activation: str  # RELU | SOFTMAX


@dataclass
class ModelParams:
    layers: list
    labels: tuple = LABELS
    format_version: int = 1


@dataclass
class TrainConfig:
    epochs: int = 50
    learning_rate: float = 0.01
    batch_size: int = 32
    hidden_dims: tuple = (128, 64)
    seed: int = 42

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        self.hidden_dims = tuple(int(d) for d in self.hidden_dims)
        if any(d < 1 for d in self.hidden_dims):
            raise ValueError(f"hidden dims must be >= 1, got {self.hidden_dims}")


@dataclass
class EpochStats:
    epoch: int
    mean_loss: float
    train_accuracy: float


# ------------------------------------------------------------ initialization


def _init_layers(rng: np.random.Generator, hidden_dims) -> list:
    dims = [INPUT_DIM, *hidden_dims, OUTPUT_DIM]
    layers = []
    for i in range(len(dims) - 1):
        fan_in, fan_out = dims[i], dims[i + 1]
        limit = math.sqrt(6.0 / fan_in)
        weights = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        activation = SOFTMAX if i == len(dims) - 2 else RELU
        layers.append(Layer(weights, np.zeros(fan_out), activation))
    return layers


def init_params(config: TrainConfig) -> ModelParams:
    """Fresh parameters: weights uniform in +-sqrt(6/fan_in), biases zero,
    deterministic per config.seed."""
    rng = np.random.default_rng(config.seed)
    return ModelParams(_init_layers(rng, config.hidden_dims))


# ------------------------------------------------------------------- forward


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _log_probs(layers, x: np.ndarray):
    """Forward pass on a (B, 42) batch. Returns (log_probs, activations)
    where activations[i] is the input to layer i."""
    acts = [x]
    for layer in layers[:-1]:
        z = acts[-1] @ layer.weights.T + layer.biases
        acts.append(np.maximum(z, 0.0))
    last = layers[-1]
    z = acts[-1] @ last.weights.T + last.biases
    shifted = z - z.max(axis=-1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    return log_probs, acts


def forward(params: ModelParams, features) -> np.ndarray:
    """Probability vector over the 26 classes for one feature vector.

    Softmax is computed with max-subtraction, so the output sums to 1 within
    1e-9 and every entry is strictly inside (0, 1) for finite input.
    """
    x = np.asarray(features, dtype=np.float64).ravel()
    if x.shape[0] != params.layers[0].weights.shape[1]:
        raise DimensionMismatch(
            f"expected {params.layers[0].weights.shape[1]} features, got {x.shape[0]}"
        )
    a = x
    for layer in params.layers:
        z = layer.weights @ a + layer.biases
        a = _softmax_rows(z) if layer.activation == SOFTMAX else np.maximum(z, 0.0)
    return a


# ------------------------------------------------------------ loss/gradients


def _as_batch(params, features, labels):
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    y = np.asarray(labels, dtype=np.int64).ravel()
    if x.shape[0] == 0:
        raise EmptyInput("empty batch")
    if x.shape[1] != params.layers[0].weights.shape[1]:
        raise DimensionMismatch(
            f"expected {params.layers[0].weights.shape[1]} features, got {x.shape[1]}"
        )
    if y.shape[0] != x.shape[0]:
        raise DimensionMismatch(f"{x.shape[0]} feature rows but {y.shape[0]} labels")
    return x, y


def _loss(params: ModelParams, x: np.ndarray, y: np.ndarray) -> float:
    log_probs, _ = _log_probs(params.layers, x)
    return float(-log_probs[np.arange(len(y)), y].mean())


def loss_and_grads(params: ModelParams, features, labels):
    """Mean categorical cross-entropy over the batch, plus backprop gradients.

    features: (B, 42) array-like; labels: (B,) class indices.
    Returns (loss, grads) with grads a list of (dW, db) matching the layers.
    The output-layer logit gradient is softmax - one_hot, averaged over the
    batch.
    """
    loss, grads, _ = _loss_grads_probs(params, features, labels)
    return loss, grads


def _loss_grads_probs(params, features, labels):
    x, y = _as_batch(params, features, labels)
    batch = x.shape[0]
    log_probs, acts = _log_probs(params.layers, x)
    loss = float(-log_probs[np.arange(batch), y].mean())
    probs = np.exp(log_probs)

    delta = probs.copy()
    delta[np.arange(batch), y] -= 1.0
    delta /= batch

    grads = [None] * len(params.layers)
    for i in range(len(params.layers) - 1, -1, -1):
        grads[i] = (delta.T @ acts[i], delta.sum(axis=0))
        if i > 0:
            delta = (delta @ params.layers[i].weights) * (acts[i] > 0.0)
    return loss, grads, probs


def apply_sgd(params: ModelParams, grads, learning_rate: float) -> ModelParams:
    """One plain gradient step: p <- p - learning_rate * g. Returns new params."""
    if len(grads) != len(params.layers):
        raise DimensionMismatch(
            f"{len(grads)} gradient pairs for {len(params.layers)} layers"
        )
    layers = []
    for layer, (gw, gb) in zip(params.layers, grads):
        if gw.shape != layer.weights.shape or gb.shape != layer.biases.shape:
            raise DimensionMismatch(
                f"gradient shape {gw.shape}/{gb.shape} does not match "
                f"layer {layer.weights.shape}/{layer.biases.shape}"
            )
        layers.append(
            Layer(
                layer.weights - learning_rate * gw,
                layer.biases - learning_rate * gb,
                layer.activation,
            )
        )
    return ModelParams(layers, params.labels, params.format_version)


# ------------------------------------------------------------------ training


def train(train_set: Dataset, config: TrainConfig):
    """Mini-batch SGD over the dataset; returns (params, per-epoch stats).

    Features are extracted once up front; degenerate frames are skipped with
    a counted warning. Per epoch: seeded shuffle, then batches of
    config.batch_size (last one may be smaller). Loss and accuracy are
    accumulated from each batch's forward pass before its update.
    """
    if len(train_set) == 0:
        raise EmptyDataset("training set is empty")

    feats, labs = [], []
    skipped = 0
    for frame, label in zip(train_set.frames, train_set.labels):
        try:
            feats.append(extract_features(frame))
        except DegenerateHand:
            skipped += 1
            continue
        labs.append(label)
    if skipped:
        logger.warning("skipped %d degenerate frame(s) during training", skipped)
    if not feats:
        raise AllFramesDegenerate(f"all {skipped} frames were degenerate")

    x = np.stack(feats)
    y = np.array(labs, dtype=np.int64)
    n = len(y)

    rng = np.random.default_rng(config.seed)
    params = ModelParams(_init_layers(rng, config.hidden_dims))

    stats = []
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        loss_sum = 0.0
        correct = 0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            loss, grads, probs = _loss_grads_probs(params, x[idx], y[idx])
            params = apply_sgd(params, grads, config.learning_rate)
            loss_sum += loss * len(idx)
            correct += int((probs.argmax(axis=1) == y[idx]).sum())
        stats.append(EpochStats(epoch, loss_sum / n, correct / n))
    return params, stats


def predict(params: ModelParams, frame):
    """Classify one landmark frame. Returns (letter, confidence, probs);
    exact probability ties resolve to the lowest class index."""
    probs = forward(params, extract_features(frame))
    index = int(np.argmax(probs))
    return params.labels[index], float(probs[index]), probs


# -------------------------------------------------------------- verification


def grad_check(params: ModelParams, features, labels, epsilon: float = 1e-5) -> float:
    """Compare every analytic gradient entry against a central finite
    difference of the loss; returns the max relative error
    |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    x, y = _as_batch(params, features, labels)
    _, grads = loss_and_grads(params, x, y)

    max_err = 0.0
    for layer, (gw, gb) in zip(params.layers, grads):
        for arr, analytic in ((layer.weights, gw), (layer.biases, gb)):
            for idx in np.ndindex(arr.shape):
                original = arr[idx]
                arr[idx] = original + epsilon
                plus = _loss(params, x, y)
                arr[idx] = original - epsilon
                minus = _loss(params, x, y)
                arr[idx] = original
                numeric = (plus - minus) / (2.0 * epsilon)
                a = float(analytic[idx])
                err = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
                max_err = max(max_err, err)
    return max_err


# -------------------------------------------------------------- persistence


def save_model(params: ModelParams, path: str) -> None:
    """Write the "slr-model" JSON weight file (atomic, full float precision)."""
    doc = {
        "format": MODEL_FORMAT,
        "version": params.format_version,
        "labels": list(params.labels),
        "layers": [
            {
                "in_dim": layer.weights.shape[1],
                "out_dim": layer.weights.shape[0],
                "activation": layer.activation,
                "biases": layer.biases.tolist(),
                "weights": layer.weights.tolist(),
            }
            for layer in params.layers
        ],
    }
    atomic_write_text(path, json.dumps(doc) + "\n")


def load_model(path: str) -> ModelParams:
    """Read and fully validate a weight file; raises FormatError on any
    violation (bad version, broken dimension chain, non-finite values)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from None

    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise FormatError(f"not a {MODEL_FORMAT} file")
    version = doc.get("version")
    if version not in MODEL_VERSIONS:
        supported = ", ".join(str(v) for v in MODEL_VERSIONS)
        raise FormatError(f"unsupported version {version!r} (supported: {supported})")
    if doc.get("labels") != list(LABELS):
        raise FormatError("labels must be A..Z in index order")

    raw_layers = doc.get("layers")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise FormatError("layers must be a non-empty list")

    layers = []
    for i, raw in enumerate(raw_layers):
        if not isinstance(raw, dict):
            raise FormatError(f"layer {i} is not an object")
        try:
            weights = np.asarray(raw["weights"], dtype=np.float64)
            biases = np.asarray(raw["biases"], dtype=np.float64)
            activation = raw["activation"]
            in_dim, out_dim = int(raw["in_dim"]), int(raw["out_dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"layer {i}: {exc}") from None
        if weights.shape != (out_dim, in_dim):
            raise FormatError(
                f"layer {i}: weights shape {weights.shape} != ({out_dim}, {in_dim})"
            )
        if biases.shape != (out_dim,):
            raise FormatError(f"layer {i}: biases length {biases.shape} != {out_dim}")
        if not (np.isfinite(weights).all() and np.isfinite(biases).all()):
            raise FormatError(f"layer {i}: non-finite values")
        expected_act = SOFTMAX if i == len(raw_layers) - 1 else RELU
        if activation != expected_act:
            raise FormatError(f"layer {i}: activation must be {expected_act!r}")
        layers.append(Layer(weights, biases, activation))

    if layers[0].weights.shape[1] != INPUT_DIM:
        raise FormatError(f"first layer must take {INPUT_DIM} inputs")
    if layers[-1].weights.shape[0] != OUTPUT_DIM:
        raise FormatError(f"last layer must emit {OUTPUT_DIM} outputs")
    for i in range(1, len(layers)):
        if layers[i].weights.shape[1] != layers[i - 1].weights.shape[0]:
            raise FormatError(f"layer {i} input dim does not chain with layer {i - 1}")

    return ModelParams(layers, LABELS, int(version))
