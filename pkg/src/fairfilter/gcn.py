"""Two-layer graph convolutional network trained with full-batch gradient
descent, written directly against numpy.

The layers have no bias terms: ``logits = A_hat relu(A_hat X W0) W1``.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_mask, check_matrix
from .exceptions import DimensionMismatchError, InvalidConfigError
from .graph import as_graph, normalized_adjacency

NUM_CLASSES = 2


@dataclass
class GcnModel:
    W0: np.ndarray  # F x H
    W1: np.ndarray  # H x 2

    @property
    def hidden_dim(self):
        return self.W0.shape[1]

    @property
    def in_features(self):
        return self.W0.shape[0]

    def copy(self):
        return GcnModel(self.W0.copy(), self.W1.copy())

    def to_dict(self):
        return {
            "in_features": self.in_features,
            "hidden_dim": self.hidden_dim,
            "num_classes": NUM_CLASSES,
            "W0": self.W0.tolist(),
            "W1": self.W1.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        W0 = np.asarray(d["W0"], dtype=np.float64).reshape(d["in_features"], d["hidden_dim"])
        W1 = np.asarray(d["W1"], dtype=np.float64).reshape(d["hidden_dim"], d["num_classes"])
        return cls(W0, W1)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class TrainConfig:
    hidden_dim: int = 16
    learning_rate: float = 0.5
    epochs: int = 300
    weight_decay: float = 5e-4
    seed: int = 0
    early_stop_patience: int = 50

    def __post_init__(self):
        if not 0 <= self.learning_rate < 10:
            raise InvalidConfigError(f"learning_rate must be in [0, 10), got {self.learning_rate}")
        if self.epochs < 1:
            raise InvalidConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.weight_decay < 0:
            raise InvalidConfigError("weight_decay must be non-negative")
        if self.hidden_dim < 1 or self.early_stop_patience < 1:
            raise InvalidConfigError("hidden_dim and early_stop_patience must be positive")


def init_model(in_features, hidden_dim, seed):
    """Glorot-uniform initialization, deterministic under ``seed``."""
    if in_features < 1 or hidden_dim < 1:
        raise ValueError("in_features and hidden_dim must be >= 1")
    rng = np.random.default_rng(seed)

    def glorot(fan_in, fan_out):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-bound, bound, size=(fan_in, fan_out))

    return GcnModel(glorot(in_features, hidden_dim), glorot(hidden_dim, NUM_CLASSES))


def _check_chain(A_hat, X, model):
    n = A_hat.shape[0]
    if A_hat.shape != (n, n) or X.shape[0] != n:
        raise DimensionMismatchError(f"A_hat {A_hat.shape} incompatible with X {X.shape}")
    if X.shape[1] != model.W0.shape[0]:
        raise DimensionMismatchError(
            f"X has {X.shape[1]} features, model expects {model.W0.shape[0]}"
        )


def _forward(AX, A_hat, model):
    Z1 = AX @ model.W0
    H1 = np.maximum(Z1, 0.0)
    P = A_hat @ H1
    return Z1, P, P @ model.W1


def forward(A_hat, X, model):
    """Logits of shape ``(N, 2)``."""
    _check_chain(A_hat, X, model)
    return _forward(A_hat @ X, A_hat, model)[2]


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _decay(model, weight_decay):
    if model is None or weight_decay == 0:
        return 0.0
    return 0.5 * weight_decay * (np.sum(model.W0**2) + np.sum(model.W1**2))


def loss(logits, y, mask, model=None, weight_decay=0.0):
    """Masked mean softmax cross-entropy plus optional L2 penalty."""
    logits = np.asarray(logits, dtype=np.float64)
    idx = check_mask(mask, logits.shape[0])
    y = np.asarray(y, dtype=np.int64)
    logp = _log_softmax(logits[idx])
    ce = -np.mean(logp[np.arange(idx.size), y[idx]])
    return float(ce + _decay(model, weight_decay))


def _grads(AX, A_hat, y, idx, model, weight_decay):
    Z1, P, logits = _forward(AX, A_hat, model)
    G = np.zeros_like(logits)
    probs = np.exp(_log_softmax(logits[idx]))
    probs[np.arange(idx.size), y[idx]] -= 1.0
    G[idx] = probs / idx.size
    dW1 = P.T @ G
    dZ1 = (A_hat.T @ (G @ model.W1.T)) * (Z1 > 0)
    dW0 = AX.T @ dZ1
    if weight_decay:
        dW0 = dW0 + weight_decay * model.W0
        dW1 = dW1 + weight_decay * model.W1
    return dW0, dW1, logits


def gradients(A_hat, X, y, mask, model, weight_decay=0.0):
    """Analytic gradients ``(dW0, dW1)`` of :func:`loss` w.r.t. the weights."""
    A_hat = np.asarray(A_hat, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    _check_chain(A_hat, X, model)
    idx = check_mask(mask, X.shape[0])
    dW0, dW1, _ = _grads(A_hat @ X, A_hat, np.asarray(y, dtype=np.int64), idx, model, weight_decay)
    return dW0, dW1


def predict_from_logits(logits):
    """Argmax over the two classes; exact ties go to class 0."""
    return (logits[:, 1] > logits[:, 0]).astype(np.int64)


def predict(model, A_hat, X):
    return predict_from_logits(forward(A_hat, X, model))


@dataclass
class History:
    epoch: list = field(default_factory=list)
    loss: list = field(default_factory=list)
    train_accuracy: list = field(default_factory=list)
    val_accuracy: list = field(default_factory=list)
    best_epoch: int = 0

    def __len__(self):
        return len(self.epoch)


def train(A_hat, X, y, train_mask, val_mask, cfg, model=None):
    """Full-batch gradient descent with early stopping on validation accuracy.

    Epoch 0 records the initial model. Training stops once validation
    accuracy has not strictly improved for ``cfg.early_stop_patience``
    epochs; the model from the best validation epoch is returned.
    """
    A_hat = np.asarray(A_hat, dtype=np.float64)
    X = check_matrix(X, A_hat.shape[0])
    n = X.shape[0]
    tr = check_mask(train_mask, n)
    va = check_mask(val_mask, n)
    if np.intersect1d(tr, va).size:
        raise ValueError("train and validation masks overlap")
    return _train(A_hat, X, y, tr, va, cfg, model)


def _train(A_hat, X, y, tr, va, cfg, model):
    y = np.asarray(y, dtype=np.int64)
    if not np.isin(y[np.union1d(tr, va)], (0, 1)).all():
        raise ValueError("labels on train/validation nodes must be 0 or 1")
    if model is None:
        model = init_model(X.shape[1], cfg.hidden_dim, cfg.seed)
    else:
        model = model.copy()
    _check_chain(A_hat, X, model)

    AX = A_hat @ X
    wd = cfg.weight_decay
    hist = History()
    best, best_val, since_best = model.copy(), -1.0, 0
    for epoch in range(cfg.epochs + 1):
        dW0, dW1, logits = _grads(AX, A_hat, y, tr, model, wd)
        pred = predict_from_logits(logits)
        val_acc = float(np.mean(pred[va] == y[va]))
        hist.epoch.append(epoch)
        hist.loss.append(loss(logits, y, tr, model, wd))
        hist.train_accuracy.append(float(np.mean(pred[tr] == y[tr])))
        hist.val_accuracy.append(val_acc)
        if val_acc > best_val:
            best, best_val, since_best = model.copy(), val_acc, 0
            hist.best_epoch = epoch
        else:
            since_best += 1
            if since_best >= cfg.early_stop_patience:
                break
        if epoch < cfg.epochs:
            model.W0 -= cfg.learning_rate * dW0
            model.W1 -= cfg.learning_rate * dW1
    return best, hist


class GCNClassifier(ClassifierMixin, BaseEstimator):
    """Transductive two-layer GCN node classifier.

    ``fit`` receives features for every node of the graph plus the indices
    of the training and validation nodes; ``predict`` returns a label for
    every node.

    Parameters
    ----------
    hidden_dim : int, default=16
    learning_rate : float, default=0.5
    epochs : int, default=300
    weight_decay : float, default=5e-4
    patience : int, default=50
        Early-stopping patience on validation accuracy.
    random_state : int, default=0
        Seed for weight initialization.
    """

    def __init__(self, hidden_dim=16, learning_rate=0.5, epochs=300,
                 weight_decay=5e-4, patience=50, random_state=0):
        self.hidden_dim = hidden_dim
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.weight_decay = weight_decay
        self.patience = patience
        self.random_state = random_state

    def _config(self):
        return TrainConfig(
            hidden_dim=self.hidden_dim,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            weight_decay=self.weight_decay,
            seed=self.random_state,
            early_stop_patience=self.patience,
        )

    def fit(self, X, y, *, graph, train_idx, val_idx=None):
        """Train on ``train_idx`` and early-stop on ``val_idx``.

        Without ``val_idx`` the training nodes double as the stopping set.
        """
        self.a_hat_ = normalized_adjacency(as_graph(graph))
        X = check_matrix(X, self.a_hat_.shape[0])
        n = X.shape[0]
        tr = check_mask(train_idx, n)
        if val_idx is None:
            va = tr
        else:
            va = check_mask(val_idx, n)
            if np.intersect1d(tr, va).size:
                raise ValueError("train_idx and val_idx overlap")
        self.model_, self.history_ = _train(self.a_hat_, X, y, tr, va, self._config(), None)
        self.classes_ = np.arange(NUM_CLASSES)
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "model_")
        X = check_matrix(X, self.a_hat_.shape[0])
        logits = forward(self.a_hat_, X, self.model_)
        return logits[:, 1] - logits[:, 0]

    def predict_proba(self, X):
        check_is_fitted(self, "model_")
        X = check_matrix(X, self.a_hat_.shape[0])
        return np.exp(_log_softmax(forward(self.a_hat_, X, self.model_)))

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_matrix(X, self.a_hat_.shape[0])
        return predict(self.model_, self.a_hat_, X)
