"""Fully connected function approximators with analytic gradients.

Parameters live in one flat float64 vector; each layer's weight matrix
(shape fan_out x fan_in, row-major) is followed by its bias. Hidden layers
use the rectifier; the output head is chosen per use.
"""

from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import UsageError


class Activation(str, Enum):
    """Output head activations."""

    IDENTITY = "identity"
    TANH = "tanh"
    SIGMOID = "sigmoid"


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # split by sign so large |z| never overflows exp
    out = np.empty_like(z)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    exp_z = np.exp(z[~positive])
    out[~positive] = exp_z / (1.0 + exp_z)
    return out


class Approximator:
    """Multi-layer perceptron over a flat parameter vector."""

    def __init__(
        self,
        layer_sizes: Sequence[int],
        output_activation: Activation = Activation.IDENTITY,
        output_scale: float = 1.0,
        params: Optional[np.ndarray] = None,
        rng: Optional[np.random.Generator] = None,
    ):
        """Initialize approximator.

        Args:
            layer_sizes: Input size, hidden sizes, output size
            output_activation: Activation of the output head
            output_scale: Multiplier applied after a tanh head
            params: Flat parameter vector; drawn uniformly in +-1/sqrt(fan_in) if omitted
            rng: Generator used for initialization
        """
        sizes = [int(size) for size in layer_sizes]
        if len(sizes) < 2 or any(size <= 0 for size in sizes):
            raise UsageError(f"invalid layer sizes {list(layer_sizes)}")
        self.layer_sizes: List[int] = sizes
        self.output_activation = Activation(output_activation)
        self.output_scale = float(output_scale)

        self._shapes: List[Tuple[int, int]] = list(zip(sizes[1:], sizes[:-1]))
        self.n_params = sum((fan_in + 1) * fan_out for fan_out, fan_in in self._shapes)

        if params is None:
            rng = rng if rng is not None else np.random.default_rng()
            params = self._initial_params(rng)
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.n_params,):
            raise UsageError(f"expected {self.n_params} parameters, got shape {params.shape}")
        self.params = params.copy()

    def _initial_params(self, rng: np.random.Generator) -> np.ndarray:
        chunks = []
        for fan_out, fan_in in self._shapes:
            bound = 1.0 / np.sqrt(fan_in)
            chunks.append(rng.uniform(-bound, bound, size=fan_out * fan_in))
            chunks.append(rng.uniform(-bound, bound, size=fan_out))
        return np.concatenate(chunks)

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    def layers(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Weight and bias views into the flat parameter vector."""
        views = []
        offset = 0
        for fan_out, fan_in in self._shapes:
            weight = self.params[offset : offset + fan_out * fan_in].reshape(fan_out, fan_in)
            offset += fan_out * fan_in
            bias = self.params[offset : offset + fan_out]
            offset += fan_out
            views.append((weight, bias))
        return views

    def copy(self) -> "Approximator":
        return Approximator(
            self.layer_sizes, self.output_activation, self.output_scale, params=self.params
        )

    # -- forward / backward ------------------------------------------------

    def _as_batch(self, x: np.ndarray) -> Tuple[np.ndarray, bool]:
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        batch = x[None, :] if single else x
        if batch.ndim != 2 or batch.shape[1] != self.input_size:
            raise UsageError(
                f"input of shape {x.shape} does not match input size {self.input_size}"
            )
        return batch, single

    def _head(self, z: np.ndarray) -> np.ndarray:
        if self.output_activation is Activation.TANH:
            return self.output_scale * np.tanh(z)
        if self.output_activation is Activation.SIGMOID:
            return _sigmoid(z)
        return z

    def _head_derivative(self, output: np.ndarray) -> np.ndarray:
        if self.output_activation is Activation.TANH:
            scaled = output / self.output_scale
            return self.output_scale * (1.0 - scaled**2)
        if self.output_activation is Activation.SIGMOID:
            return output * (1.0 - output)
        return np.ones_like(output)

    def _forward_cached(self, batch: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
        activations = [batch]
        hidden = batch
        layers = self.layers()
        for index, (weight, bias) in enumerate(layers):
            z = hidden @ weight.T + bias
            if index < len(layers) - 1:
                hidden = np.maximum(z, 0.0)
                activations.append(hidden)
            else:
                hidden = self._head(z)
        return hidden, activations

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the network on one input vector or a batch of rows."""
        batch, single = self._as_batch(x)
        output, _ = self._forward_cached(batch)
        return output[0] if single else output

    __call__ = forward

    def backward(self, x: np.ndarray, upstream: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Gradients of sum(upstream * forward(x)) w.r.t. parameters and inputs.

        Args:
            x: One input vector or a batch of rows
            upstream: Same leading shape as forward(x)

        Returns:
            (flat parameter gradient summed over the batch, input gradient)
        """
        batch, single = self._as_batch(x)
        upstream = np.asarray(upstream, dtype=np.float64)
        upstream_batch = upstream[None, :] if single else upstream
        if upstream_batch.shape != (batch.shape[0], self.output_size):
            raise UsageError(
                f"upstream of shape {upstream.shape} does not match output size {self.output_size}"
            )

        output, activations = self._forward_cached(batch)
        delta = upstream_batch * self._head_derivative(output)

        layers = self.layers()
        grads: List[np.ndarray] = [np.empty(0)] * (2 * len(layers))
        for index in range(len(layers) - 1, -1, -1):
            weight, _ = layers[index]
            layer_input = activations[index]
            grads[2 * index] = (delta.T @ layer_input).reshape(-1)
            grads[2 * index + 1] = delta.sum(axis=0)
            delta = delta @ weight
            if index > 0:
                delta = delta * (layer_input > 0.0)

        param_grad = np.concatenate(grads)
        input_grad = delta[0] if single else delta
        return param_grad, input_grad

    def gradient(self, x: np.ndarray, upstream: np.ndarray) -> np.ndarray:
        """Flat parameter gradient of upstream . forward(x)."""
        return self.backward(x, upstream)[0]

    def input_gradient(self, x: np.ndarray, upstream: np.ndarray) -> np.ndarray:
        return self.backward(x, upstream)[1]
