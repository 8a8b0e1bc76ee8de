"""Agenda-weighted outlier scoring learned by gradient descent.

Each agenda (attribute subset) yields one score per object from the size of
the object's concept extent in the agenda's subcontext.  A logistic model
over these scores is fitted by full-batch gradient descent on a
class-weighted cross-entropy; normalized absolute weights form the learned
agenda (a mass function over the bank).
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import bits
from .fca import FormalContext, extent_of, intent_of
from .mass import MassFunction

LOGIT_CLAMP = 30.0


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class AgendaBank:
    """Distinct attribute subsets of one context's attribute list."""

    attributes: tuple[str, ...]
    agendas: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.agendas:
            raise TrainingError("agenda bank is empty")
        if len(set(self.agendas)) != len(self.agendas):
            raise TrainingError("agenda bank contains duplicates")
        mask = bits.full(len(self.attributes))
        if any(a < 0 or a & ~mask for a in self.agendas):
            raise TrainingError("agenda outside the attribute list")

    @classmethod
    def from_names(cls, attributes: Sequence[str], agendas: Sequence[Sequence[str]]) -> AgendaBank:
        return cls(tuple(attributes), tuple(bits.from_names(a, attributes) for a in agendas))

    def __len__(self) -> int:
        return len(self.agendas)

    def names(self) -> list[list[str]]:
        return [bits.names(a, self.attributes) for a in self.agendas]


@dataclass(frozen=True)
class TrainingSet:
    objects: tuple[str, ...]
    labels: tuple[int, ...]
    pos_weight: float = 10.0

    def __post_init__(self) -> None:
        if len(self.objects) != len(self.labels):
            raise TrainingError("one label per training object required")
        if any(l not in (0, 1) for l in self.labels):
            raise TrainingError("labels must be 0 (inlier) or 1 (outlier)")


@dataclass(frozen=True)
class Hyper:
    gamma: float = 4.0
    lr: float = 0.1
    epochs: int = 200
    seed: int = 7
    pos_weight: float = 10.0
    init_scale: float = 0.01

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise TrainingError("epochs must be at least 1")
        if self.gamma <= 0 or self.lr <= 0 or self.pos_weight <= 0:
            raise TrainingError("gamma, lr and pos_weight must be positive")


@dataclass
class TrainedModel:
    attributes: tuple[str, ...]
    bank: AgendaBank
    weights: np.ndarray
    bias: float
    hyper: Hyper
    loss_trace: list[float] = field(default_factory=list)
    final_loss: float = math.nan

    def learned_agenda(self) -> MassFunction:
        return weights_to_mass(self)

    def to_dict(self) -> dict:
        agenda = self.learned_agenda() if np.any(self.weights != 0) else None
        return {
            "attributes": list(self.attributes),
            "agendas": self.bank.names(),
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "hyperparameters": {
                "gamma": self.hyper.gamma,
                "lr": self.hyper.lr,
                "epochs": self.hyper.epochs,
                "seed": self.hyper.seed,
                "pos_weight": self.hyper.pos_weight,
            },
            "loss_trace": [float(v) for v in self.loss_trace],
            "final_loss": float(self.final_loss),
            "mass": None
            if agenda is None
            else [{"set": agenda.names(f), "mass": float(w)} for f, w in agenda.focal.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> TrainedModel:
        attributes = tuple(data["attributes"])
        h = data["hyperparameters"]
        return cls(
            attributes=attributes,
            bank=AgendaBank.from_names(attributes, data["agendas"]),
            weights=np.asarray(data["weights"], dtype=float),
            bias=float(data["bias"]),
            hyper=Hyper(h["gamma"], h["lr"], h["epochs"], h["seed"], h["pos_weight"]),
            loss_trace=list(data.get("loss_trace", [])),
            final_loss=float(data.get("final_loss", math.nan)),
        )


def closure_size(ctx: FormalContext, agenda: int, obj: int) -> int:
    """Size of the smallest extent containing object ``obj`` in the agenda's subcontext."""
    return bits.popcount(extent_of(ctx, intent_of(ctx, 1 << obj) & agenda))


def extent_score(ctx: FormalContext, agenda: int, obj: int, gamma: float = 4.0) -> float:
    """exp(-gamma * (closure size / number of objects)^2); small categories score near 1."""
    frac = closure_size(ctx, agenda, obj) / ctx.n_objects
    return math.exp(-gamma * frac * frac)


def score_matrix(ctx: FormalContext, bank: AgendaBank, gamma: float) -> np.ndarray:
    if tuple(bank.attributes) != tuple(ctx.attributes):
        raise TrainingError("agenda bank and context disagree on the attribute list")
    S = np.empty((ctx.n_objects, len(bank)))
    for a in range(ctx.n_objects):
        for i, agenda in enumerate(bank.agendas):
            S[a, i] = extent_score(ctx, agenda, a, gamma)
    return S


def _logits(scores: np.ndarray, w: np.ndarray, b: float) -> np.ndarray:
    if scores.shape[-1] != w.shape[0]:
        raise TrainingError(f"{scores.shape[-1]} scores for {w.shape[0]} weights")
    return np.clip(scores @ w + b, -LOGIT_CLAMP, LOGIT_CLAMP)


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def aggregate(scores: Sequence[float], w: Sequence[float], b: float) -> float:
    return float(sigmoid(_logits(np.asarray(scores, float), np.asarray(w, float), b)))


def loss(p: np.ndarray, y: np.ndarray, pos_weight: float = 10.0) -> float:
    """Mean cross-entropy with positive examples weighted by ``pos_weight``."""
    p = np.asarray(p, float)
    y = np.asarray(y, float)
    floor, ceil = sigmoid(-LOGIT_CLAMP), sigmoid(LOGIT_CLAMP)
    if np.any(p < floor) or np.any(p > ceil):
        raise TrainingError("predictions outside the clamped open interval (0, 1)")
    terms = -(pos_weight * y * np.log(p) + (1 - y) * np.log1p(-p))
    return float(terms.mean())


def loss_and_gradient(
    S: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, pos_weight: float
) -> tuple[float, np.ndarray, float]:
    z = _logits(S, w, b)
    p = sigmoid(z)
    # d loss / d logit, per example; zero where the logit is clamped
    dz = (pos_weight * y * (p - 1) + (1 - y) * p) / len(y)
    dz = np.where(np.abs(S @ w + b) >= LOGIT_CLAMP, 0.0, dz)
    return loss(p, y, pos_weight), S.T @ dz, float(dz.sum())


def _training_rows(ctx: FormalContext, train: TrainingSet) -> np.ndarray:
    index = {o: i for i, o in enumerate(ctx.objects)}
    missing = [o for o in train.objects if o not in index]
    if missing:
        raise TrainingError(f"training objects not in the context: {missing[:5]}")
    return np.array([index[o] for o in train.objects], dtype=int)


def train(
    ctx: FormalContext,
    bank: AgendaBank,
    train_set: TrainingSet,
    hyper: Hyper = Hyper(),
    scores: np.ndarray | None = None,
) -> TrainedModel:
    labels = np.asarray(train_set.labels, float)
    if labels.min() == labels.max():
        raise TrainingError("training set needs both outliers and inliers")
    rows = _training_rows(ctx, train_set)
    # lattices do not depend on labels: score every object once
    S_all = score_matrix(ctx, bank, hyper.gamma) if scores is None else scores
    S = S_all[rows]
    rng = np.random.default_rng(hyper.seed)
    w = rng.normal(0.0, hyper.init_scale, len(bank))
    b = 0.0
    trace = []
    for _ in range(hyper.epochs):
        value, gw, gb = loss_and_gradient(S, labels, w, b, hyper.pos_weight)
        trace.append(value)
        w = w - hyper.lr * gw
        b = b - hyper.lr * gb
    final, _, _ = loss_and_gradient(S, labels, w, b, hyper.pos_weight)
    return TrainedModel(tuple(ctx.attributes), bank, w, float(b), hyper, trace, final)


def weights_to_mass(model: TrainedModel) -> MassFunction:
    """Mass |w_i| / sum |w_j| on agenda i; zero-weight agendas drop out."""
    mags = np.abs(model.weights)
    total = mags.sum()
    if total == 0:
        raise TrainingError("all weights are zero")
    focal: dict[int, float] = {}
    for agenda, m in zip(model.bank.agendas, mags):
        if m > 0:
            focal[agenda] = float(m / total)
    return MassFunction(model.attributes, focal)


@dataclass(frozen=True)
class PredictionReport:
    objects: tuple[str, ...]
    scores: np.ndarray
    contributions: np.ndarray
    bias: float
    probabilities: np.ndarray
    threshold: float

    @property
    def flagged(self) -> list[str]:
        return [o for o, p in zip(self.objects, self.probabilities) if p >= self.threshold]

    def explain(self, obj: str, agenda_names: Sequence[Sequence[str]]) -> dict:
        i = self.objects.index(obj)
        parts = sorted(
            zip(agenda_names, self.scores[i], self.contributions[i]),
            key=lambda t: -abs(t[2]),
        )
        return {
            "object": obj,
            "probability": float(self.probabilities[i]),
            "bias": self.bias,
            "agendas": [
                {"agenda": list(names), "score": float(s), "contribution": float(c)}
                for names, s, c in parts
            ],
        }

    def to_dict(self, agenda_names: Sequence[Sequence[str]]) -> dict:
        return {
            "threshold": self.threshold,
            "bias": self.bias,
            "objects": [
                {
                    "object": o,
                    "probability": float(p),
                    "flagged": bool(p >= self.threshold),
                    "scores": [float(v) for v in s],
                    "contributions": [float(v) for v in c],
                }
                for o, p, s, c in zip(self.objects, self.probabilities, self.scores, self.contributions)
            ],
            "agendas": [list(a) for a in agenda_names],
        }


AGGREGATORS = ("logistic", "max", "min")


def predict(
    model: TrainedModel,
    ctx: FormalContext,
    objects: Sequence[str] | None = None,
    threshold: float = 0.5,
    aggregator: str = "logistic",
) -> PredictionReport:
    """Scores, per-agenda contributions w_i * s_i and outlier probabilities.

    ``max``/``min`` replace the logistic output by the largest/smallest raw
    score among agendas with nonzero weight; they are for inference only.
    """
    if aggregator not in AGGREGATORS:
        raise TrainingError(f"unknown aggregator {aggregator!r}")
    if tuple(ctx.attributes) != model.attributes:
        raise TrainingError("context attributes differ from the model's")
    objects = tuple(ctx.objects if objects is None else objects)
    index = {o: i for i, o in enumerate(ctx.objects)}
    unknown = [o for o in objects if o not in index]
    if unknown:
        raise TrainingError(f"unknown objects: {unknown[:5]}")
    S_all = score_matrix(ctx, model.bank, model.hyper.gamma)
    S = S_all[[index[o] for o in objects]]
    contributions = S * model.weights
    if aggregator == "logistic":
        p = sigmoid(_logits(S, model.weights, model.bias))
    else:
        active = model.weights != 0
        pick = np.max if aggregator == "max" else np.min
        p = pick(S[:, active], axis=1) if active.any() else np.full(len(objects), 0.5)
    return PredictionReport(objects, S, contributions, model.bias, p, threshold)


def auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Probability that a random positive outranks a random negative (ties count half)."""
    scores = np.asarray(scores, float)
    labels = np.asarray(labels, int)
    pos, neg = scores[labels == 1], scores[labels == 0]
    if len(pos) == 0 or len(neg) == 0:
        raise TrainingError("AUC needs both classes")
    greater = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((greater + 0.5 * ties) / (len(pos) * len(neg)))
