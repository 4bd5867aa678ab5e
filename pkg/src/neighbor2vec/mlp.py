"""Three-layer perceptron classifier (numpy, from scratch).

Two ReLU hidden layers with inverted dropout, a softmax output and
cross-entropy loss, trained by mini-batch Adam (plain SGD available).  The
network is deliberately self-contained so tests can finite-difference its
gradients and instrument exactly which rows contribute to training.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, NumericError


@dataclass
class MlpConfig:
    hidden_dims: tuple = (256, 256)
    dropout: float = 0.5
    epochs: int = 100
    lr: float = 1e-3
    batch: int = 1024
    seed: int = 0
    optimizer: str = "adam"

    def validate(self) -> None:
        if len(self.hidden_dims) != 2:
            raise ValueError("exactly two hidden layers (a 3-layer MLP) are supported")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.epochs < 0 or self.batch < 1 or self.lr <= 0:
            raise ValueError("epochs >= 0, batch >= 1 and lr > 0 required")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError("optimizer must be 'adam' or 'sgd'")


def _log_softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


@dataclass
class MlpModel:
    params: list = field(repr=False)
    dropout: float = 0.0

    @classmethod
    def init(cls, in_dim: int, hidden_dims, num_classes: int, dropout: float, rng) -> "MlpModel":
        dims = [in_dim, *hidden_dims, num_classes]
        params = []
        for a, b in zip(dims[:-1], dims[1:]):
            params.append(rng.normal(0.0, np.sqrt(2.0 / a), (a, b)))
            params.append(np.zeros(b))
        return cls(params=params, dropout=dropout)

    def _forward(self, x, train: bool, rng):
        """Returns (logits, cache) where cache holds activations and masks."""
        w1, b1, w2, b2, w3, b3 = self.params
        h1 = np.maximum(0.0, x @ w1 + b1)
        m1 = None
        if train and self.dropout > 0:
            m1 = (rng.random(h1.shape) >= self.dropout) / (1.0 - self.dropout)
            h1 = h1 * m1
        h2 = np.maximum(0.0, h1 @ w2 + b2)
        m2 = None
        if train and self.dropout > 0:
            m2 = (rng.random(h2.shape) >= self.dropout) / (1.0 - self.dropout)
            h2 = h2 * m2
        logits = h2 @ w3 + b3
        return logits, (x, h1, m1, h2, m2)

    def loss_and_grads(self, x, y, rng=None, train: bool = True):
        """Mean cross-entropy over the batch plus gradients for every param."""
        w1, b1, w2, b2, w3, b3 = self.params
        logits, (x0, h1, m1, h2, m2) = self._forward(x, train, rng)
        logp = _log_softmax(logits)
        n = len(y)
        loss = -float(logp[np.arange(n), y].mean())

        dlogits = np.exp(logp)
        dlogits[np.arange(n), y] -= 1.0
        dlogits /= n

        dw3 = h2.T @ dlogits
        db3 = dlogits.sum(axis=0)
        dh2 = dlogits @ w3.T
        if m2 is not None:
            dh2 = dh2 * m2
        dh2[h2 <= 0] = 0.0
        dw2 = h1.T @ dh2
        db2 = dh2.sum(axis=0)
        dh1 = dh2 @ w2.T
        if m1 is not None:
            dh1 = dh1 * m1
        dh1[h1 <= 0] = 0.0
        dw1 = x0.T @ dh1
        db1 = dh1.sum(axis=0)
        return loss, [dw1, db1, dw2, db2, dw3, db3]

    def predict_proba(self, x) -> np.ndarray:
        logits, _ = self._forward(np.asarray(x, np.float64), train=False, rng=None)
        return np.exp(_log_softmax(logits))

    def predict(self, x) -> np.ndarray:
        return self.predict_proba(x).argmax(axis=1)

    def copy_params(self):
        return [p.copy() for p in self.params]


def train_mlp(
    features: np.ndarray,
    labels: np.ndarray,
    cfg: MlpConfig,
    train_ids: np.ndarray,
    valid_score_fn=None,
    num_classes: int | None = None,
) -> MlpModel:
    """Fit the classifier on the train split only.

    ``valid_score_fn(model) -> float`` is evaluated after every epoch when
    given; the parameters of the best-scoring epoch are restored at the end
    (standard validation-checkpoint selection).  Without it the final-epoch
    model is returned.  Deterministic for a fixed cfg.seed.
    """
    cfg.validate()
    features = np.asarray(features, np.float64)
    labels = np.asarray(labels, np.int64)
    train_ids = np.asarray(train_ids, np.int64)
    if len(train_ids) == 0:
        raise DataError("empty train split")
    if num_classes is None:
        num_classes = int(labels[train_ids].max()) + 1
    if int(labels[train_ids].max()) >= num_classes or int(labels[train_ids].min()) < 0:
        raise DataError("class id out of range")
    if not np.isfinite(features[train_ids]).all():
        raise NumericError("non-finite feature rows in the train split")

    rng = np.random.default_rng(cfg.seed)
    model = MlpModel.init(features.shape[1], cfg.hidden_dims, num_classes, cfg.dropout, rng)

    opt_m = [np.zeros_like(p) for p in model.params]
    opt_v = [np.zeros_like(p) for p in model.params]
    step = 0
    best_score, best_params = -np.inf, None

    for _epoch in range(cfg.epochs):
        order = rng.permutation(train_ids)
        for at in range(0, len(order), cfg.batch):
            batch = order[at : at + cfg.batch]
            loss, grads = model.loss_and_grads(features[batch], labels[batch], rng=rng, train=True)
            if not np.isfinite(loss):
                raise NumericError("non-finite MLP training loss")
            step += 1
            if cfg.optimizer == "adam":
                b1, b2, eps = 0.9, 0.999, 1e-8
                for p, g, m, v in zip(model.params, grads, opt_m, opt_v):
                    m *= b1
                    m += (1 - b1) * g
                    v *= b2
                    v += (1 - b2) * g * g
                    mhat = m / (1 - b1**step)
                    vhat = v / (1 - b2**step)
                    p -= cfg.lr * mhat / (np.sqrt(vhat) + eps)
            else:
                for p, g in zip(model.params, grads):
                    p -= cfg.lr * g
        if valid_score_fn is not None:
            score = float(valid_score_fn(model))
            if score > best_score:
                best_score, best_params = score, model.copy_params()

    if best_params is not None:
        model.params = best_params
    return model
