"""Single neuron driven by gate expectation values, and perceptron training."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..exceptions import ComplexInputError
from ..gates import expectation

ACTIVATIONS = {
    "identity": lambda u: u,
    "step": lambda u: np.where(np.asarray(u) >= 0, 1.0, 0.0),
    "logistic": lambda u: 1.0 / (1.0 + np.exp(-np.asarray(u))),
}


@dataclass(frozen=True)
class NeuronParams:
    weights: tuple
    bias: float = 0.0
    activation: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (len(self.weights),):
            raise ValueError(f"expected {len(self.weights)} inputs, got shape {x.shape}")
        return float(ACTIVATIONS[self.activation](np.dot(self.weights, x) + self.bias))


def gate_features(gate_inputs: Sequence, imag_tol: float = 1e-9) -> np.ndarray:
    """Real expectation values ``<f_i|L_i|f_i>`` from ``(space, state, op)`` triples."""
    xs = []
    for i, (space, f, L) in enumerate(gate_inputs):
        v = expectation(space, L, f)
        if abs(v.imag) > imag_tol:
            raise ComplexInputError(f"input {i} has expectation {v} with non-negligible imaginary part")
        xs.append(v.real)
    return np.array(xs)


def neuron_forward(params: NeuronParams, gate_inputs: Sequence) -> float:
    """``activation(sum w_i x_i + b)`` with ``x_i`` measured gate expectations."""
    return params(gate_features(gate_inputs))


@dataclass
class PerceptronResult:
    params: NeuronParams
    errors: list = field(default_factory=list)  # misclassifications per epoch


def perceptron_train(
    samples: Sequence,
    epochs: int = 50,
    learning_rate: float = 1.0,
    initial: NeuronParams | None = None,
) -> PerceptronResult:
    """Rosenblatt perceptron on binary targets with a step activation.

    ``samples`` holds ``(inputs, target)`` pairs where ``inputs`` is either a
    feature vector or a list of ``(space, state, op)`` triples.
    """
    X, y = [], []
    for inputs, target in samples:
        first = inputs[0] if len(inputs) else None
        X.append(gate_features(inputs) if isinstance(first, tuple) else np.asarray(inputs, float))
        if target not in (0, 1):
            raise ValueError(f"targets must be 0 or 1, got {target}")
        y.append(float(target))
    X = np.array(X)
    if initial is None:
        w, b = np.zeros(X.shape[1]), 0.0
    else:
        w, b = np.array(initial.weights, dtype=float), float(initial.bias)
    errors = []
    for _ in range(epochs):
        wrong = 0
        for xi, ti in zip(X, y):
            pred = 1.0 if np.dot(w, xi) + b >= 0 else 0.0
            if pred != ti:
                wrong += 1
                w = w + learning_rate * (ti - pred) * xi
                b = b + learning_rate * (ti - pred)
        errors.append(wrong)
    return PerceptronResult(NeuronParams(tuple(w), b, "step"), errors)
