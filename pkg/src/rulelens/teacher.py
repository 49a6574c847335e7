"""Black-box teachers: the classifiers whose behavior gets explained.

Built-ins are a from-scratch MLP (ReLU, softmax cross-entropy, SGD with
momentum) and a 1-nearest-neighbor baseline. Anything else can be plugged in
over the subprocess protocol in :mod:`rulelens.external`. All teachers are
frozen after training and answer batch label queries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import DataTable, DatasetSchema, validate_instance
from .errors import Divergence, NoData, SchemaMismatch


class Oracle:
    """Frozen classifier interface: batch labels and class probabilities.

    predict(x) must equal argmax of predict_proba(x), ties going to the
    lowest class index.
    """

    schema: DatasetSchema
    class_count: int

    def predict_proba(self, rows: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, rows: np.ndarray) -> np.ndarray:
        proba = self.predict_proba(rows)
        return proba.argmax(axis=1).astype(np.int64)

    def describe(self) -> dict:
        return {"kind": self.__class__.__name__}


def predict_batch(oracle: Oracle, rows) -> np.ndarray:
    """Validated batch query. Empty batches are fine; output aligns with input."""
    arr = np.asarray(rows, dtype=np.float64)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    for row in arr:
        validate_instance(oracle.schema, row)
    labels = np.asarray(oracle.predict(arr), dtype=np.int64)
    if labels.shape != (arr.shape[0],):
        raise SchemaMismatch("oracle returned a wrong-length label vector")
    return labels


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


@dataclass
class MlpTeacher(Oracle):
    """Feed-forward ReLU network with softmax output.

    Continuous features are z-scored with statistics frozen at train time, so
    callers always pass raw feature units.
    """

    schema: DatasetSchema
    layer_sizes: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    l2_penalty: float
    mean: np.ndarray
    scale: np.ndarray
    train_accuracy: float = 0.0
    activation: str = "relu"

    @property
    def class_count(self) -> int:
        return self.schema.class_count

    def _standardize(self, rows: np.ndarray) -> np.ndarray:
        return (rows - self.mean) / self.scale

    def _forward(self, x: np.ndarray) -> np.ndarray:
        h = x
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            h = np.maximum(h @ W + b, 0.0)
        return h @ self.weights[-1] + self.biases[-1]

    def predict_proba(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        if rows.shape[1] != self.schema.k:
            raise SchemaMismatch(f"expected {self.schema.k} features")
        return _softmax(self._forward(self._standardize(rows)))

    def l2_scale(self, batch_size: int = 32, momentum: float = 0.9) -> float:
        """Effective quadratic-penalty coefficient.

        The raw penalty is divided by the reference batch size and the
        momentum gain 1/(1-m), so a given l2_penalty exerts the same pull
        whether the decay rides the momentum buffer or is applied directly.
        """
        return self.l2_penalty / (batch_size * (1.0 - momentum))

    def loss_and_grad(self, rows: np.ndarray, labels: np.ndarray):
        """Full-batch penalized cross-entropy and its exact gradient.

        Loss = mean CE + l2_scale/2 * sum of squared weights (biases
        unpenalized), the objective the trainer descends. Used by the
        finite-difference check.
        """
        x = self._standardize(np.asarray(rows, dtype=np.float64))
        y = np.asarray(labels, dtype=np.int64)
        n = x.shape[0]
        lam = self.l2_scale()
        acts = [x]
        h = x
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            h = np.maximum(h @ W + b, 0.0)
            acts.append(h)
        logits = h @ self.weights[-1] + self.biases[-1]
        proba = _softmax(logits)
        ce = -np.log(np.clip(proba[np.arange(n), y], 1e-300, None)).mean()
        reg = sum(float(np.sum(W * W)) for W in self.weights)
        loss = ce + 0.5 * lam * reg

        delta = proba.copy()
        delta[np.arange(n), y] -= 1.0
        delta /= n
        grads_W: list[np.ndarray] = [None] * len(self.weights)
        grads_b: list[np.ndarray] = [None] * len(self.biases)
        for layer in range(len(self.weights) - 1, -1, -1):
            grads_W[layer] = acts[layer].T @ delta + lam * self.weights[layer]
            grads_b[layer] = delta.sum(axis=0)
            if layer > 0:
                delta = (delta @ self.weights[layer].T) * (acts[layer] > 0.0)
        return loss, grads_W, grads_b

    def describe(self) -> dict:
        hidden = [W.shape[1] for W in self.weights[:-1]]
        return {"kind": "mlp", "hidden_layers": hidden, "l2_penalty": self.l2_penalty,
                "train_accuracy": self.train_accuracy}


def train_mlp(
    train: DataTable,
    layer_sizes: list[int],
    l2_penalty: float = 1.0,
    epochs: int = 40,
    learning_rate: float = 0.02,
    seed: int = 0,
    batch_size: int = 32,
    momentum: float = 0.9,
) -> MlpTeacher:
    """Train the reference MLP with mini-batch SGD.

    The L2 term is applied as a proximal shrink after each gradient step at
    its momentum-equilibrium rate, which stays stable for arbitrarily large
    penalties. Deterministic for a fixed seed.
    """
    if train.n == 0:
        raise NoData("cannot train on an empty table")
    rng = np.random.default_rng(seed)
    x_raw = train.rows
    y = train.labels
    n, k = x_raw.shape
    n_classes = train.schema.class_count

    mean = x_raw.mean(axis=0)
    scale = x_raw.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    x = (x_raw - mean) / scale

    sizes = [k] + list(layer_sizes) + [n_classes]
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(2.0 / fan_in)
        weights.append(rng.normal(0.0, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))

    vel_W = [np.zeros_like(W) for W in weights]
    vel_b = [np.zeros_like(b) for b in biases]
    lam = l2_penalty / (batch_size * (1.0 - momentum))
    shrink = 1.0 / (1.0 + learning_rate * lam)

    def forward_cached(xb):
        acts = [xb]
        h = xb
        for W, b in zip(weights[:-1], biases[:-1]):
            h = np.maximum(h @ W + b, 0.0)
            acts.append(h)
        logits = h @ weights[-1] + biases[-1]
        return acts, _softmax(logits)

    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            xb, yb = x[idx], y[idx]
            m = len(idx)
            acts, proba = forward_cached(xb)
            delta = proba
            delta[np.arange(m), yb] -= 1.0
            delta /= m
            for layer in range(len(weights) - 1, -1, -1):
                gW = acts[layer].T @ delta
                gb = delta.sum(axis=0)
                if layer > 0:
                    delta = (delta @ weights[layer].T) * (acts[layer] > 0.0)
                vel_W[layer] = momentum * vel_W[layer] - learning_rate * gW
                vel_b[layer] = momentum * vel_b[layer] - learning_rate * gb
                weights[layer] = (weights[layer] + vel_W[layer]) * shrink
                biases[layer] = biases[layer] + vel_b[layer]
        _, proba = forward_cached(x)
        epoch_loss = -np.log(np.clip(proba[np.arange(n), y], 1e-300, None)).mean()
        if not np.isfinite(epoch_loss):
            raise Divergence(epoch)

    _, proba = forward_cached(x)
    train_acc = float((proba.argmax(axis=1) == y).mean())
    return MlpTeacher(
        schema=train.schema,
        layer_sizes=sizes,
        weights=weights,
        biases=biases,
        l2_penalty=l2_penalty,
        mean=mean,
        scale=scale,
        train_accuracy=train_acc,
    )


@dataclass
class NearestNeighborTeacher(Oracle):
    """1-NN over the standardized training set; ties go to the lowest class."""

    schema: DatasetSchema
    points: np.ndarray
    labels: np.ndarray
    mean: np.ndarray
    scale: np.ndarray

    @property
    def class_count(self) -> int:
        return self.schema.class_count

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        q = (rows - self.mean) / self.scale
        out = np.empty(q.shape[0], dtype=np.int64)
        for i, point in enumerate(q):
            d = np.square(self.points - point).sum(axis=1)
            best = np.flatnonzero(d == d.min())
            out[i] = self.labels[best].min()  # lowest class index on ties
        return out

    def predict_proba(self, rows: np.ndarray) -> np.ndarray:
        labels = self.predict(rows)
        proba = np.zeros((len(labels), self.class_count))
        proba[np.arange(len(labels)), labels] = 1.0
        return proba

    def describe(self) -> dict:
        return {"kind": "1nn", "train_size": int(len(self.labels))}


def train_nearest_neighbor(train: DataTable) -> NearestNeighborTeacher:
    if train.n == 0:
        raise NoData("cannot fit 1-NN on an empty table")
    mean = train.rows.mean(axis=0)
    scale = train.rows.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return NearestNeighborTeacher(
        schema=train.schema,
        points=(train.rows - mean) / scale,
        labels=train.labels.copy(),
        mean=mean,
        scale=scale,
    )
