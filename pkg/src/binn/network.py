"""Residual-block tanh network and its derivatives.

The trial function is a small multilayer perceptron: a dense tanh stem,
two residual blocks (each two dense tanh layers plus the skip), and a
linear output layer. Spatial derivatives are propagated forward-mode
(two tangent directions) and parameter gradients reverse-mode through
both the value and tangent paths, so losses built from the outputs and
their spatial Jacobians differentiate exactly.

Batched evaluation runs on a compiled Cython core when available, with a
pure-numpy fallback selected at import (override with BINN_BACKEND=
python|compiled).
"""

import os
from dataclasses import dataclass

import numpy as np

from .duals import Dual2

CHECKPOINT_VERSION = 1


def _select_backend():
    choice = os.environ.get("BINN_BACKEND", "auto")
    if choice not in ("auto", "python", "compiled"):
        raise ValueError(f"BINN_BACKEND must be auto|python|compiled, got {choice!r}")
    if choice in ("auto", "compiled"):
        try:
            from . import _mlp_core
            return _mlp_core
        except ImportError:
            if choice == "compiled":
                raise
    from . import _mlp_numpy
    return _mlp_numpy


backend = _select_backend()


def backend_name():
    return backend.NAME


def get_backend(name):
    """Explicit backend module by name (used by the bench command and tests)."""
    if name == "python":
        from . import _mlp_numpy
        return _mlp_numpy
    if name == "compiled":
        from . import _mlp_core
        return _mlp_core
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class Architecture:
    width: int = 20
    n_out: int = 1
    n_blocks: int = 2
    n_in: int = 2

    def __post_init__(self):
        if self.width < 1 or self.n_out < 1 or self.n_blocks < 1:
            raise ValueError(f"invalid architecture {self}")

    def layer_shapes(self):
        h, d, m = self.width, self.n_in, self.n_out
        shapes = [(h, d), (h,)]
        for _ in range(self.n_blocks):
            shapes += [(h, h), (h,), (h, h), (h,)]
        shapes += [(m, h), (m,)]
        return shapes


class NetworkParams:
    """Architecture plus the weight arrays in canonical order."""

    def __init__(self, arch, weights):
        shapes = arch.layer_shapes()
        if len(weights) != len(shapes):
            raise ValueError(f"expected {len(shapes)} arrays, got {len(weights)}")
        for w, s in zip(weights, shapes):
            if w.shape != s:
                raise ValueError(f"weight shape {w.shape} does not match {s}")
            if not np.all(np.isfinite(w)):
                raise ValueError("non-finite network parameter")
        self.arch = arch
        self.weights = [np.ascontiguousarray(w, dtype=float) for w in weights]

    def copy(self):
        return NetworkParams(self.arch, [w.copy() for w in self.weights])

    def n_parameters(self):
        return sum(w.size for w in self.weights)


def init_xavier(arch, seed):
    """Uniform Xavier weights (+-sqrt(6/(fan_in+fan_out))), zero biases."""
    rng = np.random.default_rng(seed)
    weights = []
    for shape in arch.layer_shapes():
        if len(shape) == 2:
            fan_out, fan_in = shape
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-bound, bound, size=shape))
        else:
            weights.append(np.zeros(shape))
    return NetworkParams(arch, weights)


def forward(params, x):
    """Network value at a single point, shape (n_out,)."""
    Y, _ = backend.eval_batch(params.weights, np.asarray(x, dtype=float)[None, :])
    return Y[0]


def forward_with_spatial_grad(params, x):
    """Value and spatial Jacobian at a single point via dual numbers.

    Returns (value (n_out,), jacobian (n_out, 2)). Kept independent of the
    batched backend so the two paths cross-check each other.
    """
    ws = params.weights
    n_blocks = params.arch.n_blocks
    x = np.asarray(x, dtype=float)
    z = [Dual2.variable(x[0], 0), Dual2.variable(x[1], 1)]

    def dense_tanh(W, b, a):
        out = []
        for i in range(W.shape[0]):
            acc = Dual2.constant(b[i])
            for j, aj in enumerate(a):
                acc = acc + W[i, j] * aj
            out.append(acc.tanh())
        return out

    z = dense_tanh(ws[0], ws[1], z)
    for blk in range(n_blocks):
        Wa, ba, Wb, bb = ws[2 + 4 * blk: 6 + 4 * blk]
        v = dense_tanh(Wb, bb, dense_tanh(Wa, ba, z))
        z = [zi + vi for zi, vi in zip(z, v)]
    Wf, bf = ws[-2], ws[-1]
    value = np.empty(params.arch.n_out)
    jac = np.empty((params.arch.n_out, 2))
    for i in range(Wf.shape[0]):
        acc = Dual2.constant(bf[i])
        for j, zj in enumerate(z):
            acc = acc + Wf[i, j] * zj
        value[i] = acc.value
        jac[i] = acc.grad
    return value, jac


def forward_batch(params, X):
    """Values (N, n_out) and spatial Jacobians (N, n_out, 2) for a batch."""
    return backend.eval_batch(params.weights, np.ascontiguousarray(X, dtype=float))


def forward_batch_cached(params, X):
    return backend.eval_batch_cached(params.weights,
                                     np.ascontiguousarray(X, dtype=float))


def vjp_batch(params, X, cache, Ybar, Gbar):
    """Parameter gradients of sum(Ybar*Y) + sum(Gbar*G)."""
    return backend.vjp_batch(params.weights,
                             np.ascontiguousarray(X, dtype=float), cache,
                             np.ascontiguousarray(Ybar, dtype=float),
                             np.ascontiguousarray(Gbar, dtype=float))


def loss_gradient(params, loss_fn):
    """Gradient of a scalar loss built from batched network evaluations.

    loss_fn receives (Y, G) for the points it registered via its closure
    and must return (loss_value, Ybar, Gbar); see the bie modules for the
    residual-based losses. Provided as the generic hook; training uses the
    assembled systems directly.
    """
    X, fn = loss_fn
    Y, G, cache = forward_batch_cached(params, X)
    loss, Ybar, Gbar = fn(Y, G)
    grads = vjp_batch(params, X, cache, Ybar, Gbar)
    return loss, grads


def save_checkpoint(path, params, meta=None):
    """Write parameters plus architecture header; round-trips bit-exactly."""
    payload = {
        "version": np.int64(CHECKPOINT_VERSION),
        "width": np.int64(params.arch.width),
        "n_out": np.int64(params.arch.n_out),
        "n_blocks": np.int64(params.arch.n_blocks),
        "n_in": np.int64(params.arch.n_in),
    }
    for i, w in enumerate(params.weights):
        payload[f"w{i:02d}"] = w
    for key, val in (meta or {}).items():
        payload[f"meta_{key}"] = np.asarray(val)
    np.savez(path, **payload)


def load_checkpoint(path):
    with np.load(path, allow_pickle=False) as data:
        version = int(data["version"])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        arch = Architecture(width=int(data["width"]), n_out=int(data["n_out"]),
                            n_blocks=int(data["n_blocks"]), n_in=int(data["n_in"]))
        n = len(arch.layer_shapes())
        weights = [data[f"w{i:02d}"] for i in range(n)]
        meta = {k[5:]: data[k] for k in data.files if k.startswith("meta_")}
    return NetworkParams(arch, weights), meta
