"""Small feed-forward networks on a flat float64 parameter vector.

Layout, layer by layer from the input: the weight matrix of shape
``(fan_out, fan_in)`` in row-major order, then the bias of length
``fan_out``.  Column ``v`` of the first weight matrix therefore holds every
weight fed by input ``v``.  Hidden layers use swish, the output is affine.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from .errors import InvalidInputError, ParseError


@dataclass(frozen=True)
class MlpSpec:
    input_dim: int
    depth: int
    width: int
    output_dim: int = 1

    def __post_init__(self):
        for name in ("input_dim", "depth", "width", "output_dim"):
            if int(getattr(self, name)) < 1:
                raise InvalidInputError(f"{name} must be >= 1")

    @property
    def layer_dims(self):
        """``(fan_in, fan_out)`` of every affine layer."""
        dims = [self.input_dim] + [self.width] * self.depth + [self.output_dim]
        return list(zip(dims[:-1], dims[1:]))

    @property
    def n_params(self) -> int:
        return sum(fi * fo + fo for fi, fo in self.layer_dims)

    def to_dict(self):
        return {"input_dim": self.input_dim, "d": self.depth, "w": self.width, "output_dim": self.output_dim}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["input_dim"]), int(d["d"]), int(d["w"]), int(d["output_dim"]))


def mlp_param_count(spec: MlpSpec) -> int:
    return spec.n_params


def swish(x):
    return x * expit(x)


def _swish_grad(x):
    s = expit(x)
    return s + x * s * (1.0 - s)


class Mlp:
    """A network is its spec plus a flat parameter vector (not copied)."""

    def __init__(self, spec: MlpSpec, params=None):
        self.spec = spec
        if params is None:
            params = np.zeros(spec.n_params)
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (spec.n_params,):
            raise InvalidInputError(f"expected {spec.n_params} parameters, got {params.shape}")
        self.params = params

    def layers(self, params=None):
        """Views ``[(W, b), ...]`` into the flat vector."""
        params = self.params if params is None else params
        out, pos = [], 0
        for fi, fo in self.spec.layer_dims:
            w = params[pos:pos + fi * fo].reshape(fo, fi)
            pos += fi * fo
            out.append((w, params[pos:pos + fo]))
            pos += fo
        return out

    def input_weight_slice(self) -> slice:
        fi, fo = self.spec.layer_dims[0]
        return slice(0, fi * fo)

    def input_weights(self):
        return self.layers()[0][0]

    def copy(self):
        return Mlp(self.spec, self.params.copy())

    def __call__(self, x):
        return mlp_forward(self, x)

    def to_dict(self):
        return {"spec": self.spec.to_dict(), "params": self.params.tolist()}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(MlpSpec.from_dict(d["spec"]), np.asarray(d["params"], dtype=np.float64))
        except KeyError as exc:
            raise ParseError("missing required field", field=exc.args[0]) from None


def init_mlp(spec: MlpSpec, rng, zero_input: bool = False) -> Mlp:
    """Glorot-uniform weights, zero biases; optionally a zero input layer."""
    rng = np.random.default_rng(rng)
    net = Mlp(spec)
    for i, ((w, _), (fi, fo)) in enumerate(zip(net.layers(), spec.layer_dims)):
        if i == 0 and zero_input:
            continue
        bound = math.sqrt(6.0 / (fi + fo))
        w[...] = rng.uniform(-bound, bound, size=w.shape)
    return net


def _as_batch(net: Mlp, x):
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != net.spec.input_dim:
        raise InvalidInputError(f"expected inputs of length {net.spec.input_dim}, got shape {np.shape(x)}")
    return x, single


def mlp_forward(net: Mlp, x):
    """Outputs for a single input (1-D) or a batch (2-D, one row per input)."""
    x, single = _as_batch(net, x)
    layers = net.layers()
    h = x
    for w, b in layers[:-1]:
        h = swish(h @ w.T + b)
    w, b = layers[-1]
    out = h @ w.T + b
    return out[0] if single else out


def mlp_backward(net: Mlp, x, cotangent):
    """Gradient of ``sum_rows <cotangent, forward(x)>``.

    Returns ``(param_grad, input_grad)``; the parameter gradient is summed
    over the batch, the input gradient has one row per input.
    """
    x, single = _as_batch(net, x)
    ct = np.asarray(cotangent, dtype=np.float64)
    if single:
        ct = ct.reshape(1, -1)
    if ct.shape != (x.shape[0], net.spec.output_dim):
        raise InvalidInputError(f"cotangent shape {np.shape(cotangent)} does not match the output")
    layers = net.layers()
    pre, acts = [], [x]
    h = x
    for w, b in layers[:-1]:
        z = h @ w.T + b
        pre.append(z)
        h = swish(z)
        acts.append(h)
    grad = np.empty_like(net.params)
    gviews = net.layers(grad)
    delta = ct
    for i in range(len(layers) - 1, -1, -1):
        gw, gb = gviews[i]
        gw[...] = delta.T @ acts[i]
        gb[...] = delta.sum(axis=0)
        delta = delta @ layers[i][0]
        if i > 0:
            delta = delta * _swish_grad(pre[i - 1])
    return grad, (delta[0] if single else delta)


class Optimizer:
    """SGD or Adam with bias correction; updates parameters in place.

    ``last_scale`` holds the per-coordinate multiplier applied to the
    gradient in the latest step (``lr`` for SGD, ``lr / (sqrt(v_hat) + eps)``
    for Adam); proximal updates use it as their metric.
    """

    def __init__(self, algorithm: str = "adam", lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        if algorithm not in ("adam", "sgd"):
            raise InvalidInputError(f"unknown optimizer {algorithm!r}")
        self.algorithm = algorithm
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = self.v = None
        self.t = 0
        self.last_scale = None

    def step(self, params, grad):
        grad = np.asarray(grad, dtype=np.float64)
        if grad.shape != params.shape:
            raise InvalidInputError("gradient and parameters differ in length")
        self.t += 1
        if self.algorithm == "sgd":
            self.last_scale = self.lr
            params -= self.lr * grad
            return params
        if self.m is None:
            self.m = np.zeros_like(params)
            self.v = np.zeros_like(params)
        self.m *= self.beta1
        self.m += (1.0 - self.beta1) * grad
        self.v *= self.beta2
        self.v += (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1**self.t)
        v_hat = self.v / (1.0 - self.beta2**self.t)
        self.last_scale = self.lr / (np.sqrt(v_hat) + self.eps)
        params -= self.last_scale * m_hat
        return params

    def state_dict(self):
        return {"algorithm": self.algorithm, "lr": self.lr, "beta1": self.beta1, "beta2": self.beta2,
                "eps": self.eps, "t": self.t}


def optimizer_step(state: Optimizer, params, grad):
    return state.step(params, grad)


def write_net(net: Mlp, path, extra: dict | None = None):
    d = net.to_dict()
    if extra:
        d.update(extra)
    Path(path).write_text(json.dumps(d) + "\n")


def read_net(path) -> Mlp:
    try:
        return Mlp.from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, path=path) from exc


def finite_difference_gradient(f, x, h: float = 1e-5):
    """Central differences of a scalar function at ``x``."""
    x = np.array(x, dtype=np.float64)
    g = np.empty_like(x)
    for i in range(x.size):
        old = x[i]
        x[i] = old + h
        fp = f(x)
        x[i] = old - h
        fm = f(x)
        x[i] = old
        g[i] = (fp - fm) / (2 * h)
    return g


def relative_error(a, b) -> float:
    """``max|a - b|`` relative to the larger of ``max|a|`` and ``max|b|``."""
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    return 0.0 if scale == 0 else float(np.max(np.abs(a - b)) / scale)

