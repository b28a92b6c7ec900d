"""Dense float64 tensors with reverse-mode differentiation.

Everything is 64-bit and row-major. Ops build a graph of `Tensor` nodes;
`backward` traces the graph below a scalar loss in topological order and
accumulates gradients without mutating the nodes, so parameter tensors can
be reused across training steps. Broadcasting follows numpy semantics with
the usual sum-over-broadcast-axes rule in the backward pass.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

import numpy as np

from ..errors import ContractViolationError, ShapeError

Array = np.ndarray

GradRule = Callable[[Array], Array]


class Tensor:
    """One node of a computation graph.

    Leaf nodes (parameters, inputs, constants) reject non-finite values;
    interior nodes record their parent tensors and one gradient rule per
    parent mapping the output gradient to that parent's contribution.
    """

    __slots__ = ("data", "op", "parents", "grad_rules")

    def __init__(
        self,
        data,
        op: str = "leaf",
        parents: tuple["Tensor", ...] = (),
        grad_rules: tuple[GradRule, ...] = (),
    ):
        arr = np.asarray(data, dtype=np.float64)
        if op == "leaf" and not np.all(np.isfinite(arr)):
            raise ContractViolationError("non-finite values at graph boundary")
        self.data = arr
        self.op = op
        self.parents = parents
        self.grad_rules = grad_rules

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:
        return f"Tensor(op={self.op!r}, shape={self.shape})"

    # arithmetic sugar; full op set lives in the module functions below
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)


def _unbroadcast(grad: Array, shape: tuple[int, ...]) -> Array:
    """Sum `grad` down to `shape` (inverse of numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


def _binary(a, b, fwd, da_rule, db_rule, op: str) -> Tensor:
    ta = a if isinstance(a, Tensor) else None
    tb = b if isinstance(b, Tensor) else None
    av = ta.data if ta is not None else np.asarray(a, dtype=np.float64)
    bv = tb.data if tb is not None else np.asarray(b, dtype=np.float64)
    out = fwd(av, bv)
    parents, rules = [], []
    if ta is not None:
        parents.append(ta)
        rules.append(lambda g, av=av, bv=bv: _unbroadcast(da_rule(g, av, bv), av.shape))
    if tb is not None:
        parents.append(tb)
        rules.append(lambda g, av=av, bv=bv: _unbroadcast(db_rule(g, av, bv), bv.shape))
    return Tensor(out, op=op, parents=tuple(parents), grad_rules=tuple(rules))


def add(a, b) -> Tensor:
    return _binary(a, b, lambda x, y: x + y, lambda g, x, y: g, lambda g, x, y: g, "add")


def sub(a, b) -> Tensor:
    return _binary(a, b, lambda x, y: x - y, lambda g, x, y: g, lambda g, x, y: -g, "sub")


def mul(a, b) -> Tensor:
    return _binary(
        a, b, lambda x, y: x * y, lambda g, x, y: g * y, lambda g, x, y: g * x, "mul"
    )


def div(a, b) -> Tensor:
    return _binary(
        a,
        b,
        lambda x, y: x / y,
        lambda g, x, y: g / y,
        lambda g, x, y: -g * x / (y * y),
        "div",
    )


def neg(a: Tensor) -> Tensor:
    return Tensor(-a.data, op="neg", parents=(a,), grad_rules=(lambda g: -g,))


def matmul(a: Tensor, b) -> Tensor:
    tb = b if isinstance(b, Tensor) else None
    bv = tb.data if tb is not None else np.asarray(b, dtype=np.float64)
    if a.data.ndim != 2 or bv.ndim != 2:
        raise ShapeError(f"matmul expects rank-2 operands, got {a.data.shape} @ {bv.shape}")
    if a.data.shape[1] != bv.shape[0]:
        raise ShapeError(f"matmul inner dims differ: {a.data.shape} @ {bv.shape}")
    out = a.data @ bv
    parents: list[Tensor] = [a]
    rules: list[GradRule] = [lambda g, bv=bv: g @ bv.T]
    if tb is not None:
        parents.append(tb)
        av = a.data
        rules.append(lambda g, av=av: av.T @ g)
    return Tensor(out, op="matmul", parents=tuple(parents), grad_rules=tuple(rules))


def relu(a: Tensor) -> Tensor:
    mask = a.data > 0
    return Tensor(
        np.where(mask, a.data, 0.0),
        op="relu",
        parents=(a,),
        grad_rules=(lambda g, mask=mask: g * mask,),
    )


def tanh(a: Tensor) -> Tensor:
    y = np.tanh(a.data)
    return Tensor(y, op="tanh", parents=(a,), grad_rules=(lambda g, y=y: g * (1.0 - y * y),))


def exp(a: Tensor) -> Tensor:
    y = np.exp(a.data)
    return Tensor(y, op="exp", parents=(a,), grad_rules=(lambda g, y=y: g * y,))


def log(a: Tensor) -> Tensor:
    return Tensor(
        np.log(a.data), op="log", parents=(a,), grad_rules=(lambda g, x=a.data: g / x,)
    )


def square(a: Tensor) -> Tensor:
    return Tensor(
        a.data * a.data,
        op="square",
        parents=(a,),
        grad_rules=(lambda g, x=a.data: 2.0 * g * x,),
    )


def tsum(a: Tensor, axis: int | None = None, keepdims: bool = False) -> Tensor:
    out = a.data.sum(axis=axis, keepdims=keepdims)

    def rule(g: Array, shape=a.data.shape, axis=axis, keepdims=keepdims) -> Array:
        if axis is None:
            return np.broadcast_to(g, shape).copy()
        if not keepdims:
            g = np.expand_dims(g, axis)
        return np.broadcast_to(g, shape).copy()

    return Tensor(out, op="sum", parents=(a,), grad_rules=(rule,))


def tmean(a: Tensor) -> Tensor:
    n = a.data.size
    return Tensor(
        a.data.mean(),
        op="mean",
        parents=(a,),
        grad_rules=(lambda g, n=n, shape=a.data.shape: np.broadcast_to(g / n, shape).copy(),),
    )


def logsumexp(a: Tensor, axis: int = -1, keepdims: bool = False) -> Tensor:
    """log(sum(exp(a), axis)); gradient is the softmax along `axis`."""
    m = a.data.max(axis=axis, keepdims=True)
    e = np.exp(a.data - m)
    s = e.sum(axis=axis, keepdims=True)
    out = m + np.log(s)
    soft = e / s
    if not keepdims:
        out = out.squeeze(axis=axis)

    def rule(g: Array, soft=soft, axis=axis, keepdims=keepdims) -> Array:
        if not keepdims:
            g = np.expand_dims(g, axis)
        return g * soft

    return Tensor(out, op="logsumexp", parents=(a,), grad_rules=(rule,))


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    return Tensor(
        a.data.reshape(shape),
        op="reshape",
        parents=(a,),
        grad_rules=(lambda g, s=a.data.shape: g.reshape(s),),
    )


def slice_last(a: Tensor, start: int, stop: int) -> Tensor:
    """Static slice [start:stop] along the last axis."""
    out = a.data[..., start:stop]

    def rule(g: Array, shape=a.data.shape, start=start, stop=stop) -> Array:
        full = np.zeros(shape)
        full[..., start:stop] = g
        return full

    return Tensor(out, op="slice", parents=(a,), grad_rules=(rule,))


class ComputationTape:
    """Topologically ordered record of the graph below one output node."""

    def __init__(self, nodes: list[Tensor]):
        self.nodes = nodes

    @classmethod
    def trace(cls, output: Tensor) -> "ComputationTape":
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(output, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node.parents:
                if id(p) not in seen:
                    stack.append((p, False))
        return cls(order)


def backward(
    loss: Tensor,
    params: Mapping[str, Tensor] | Iterable[tuple[str, Tensor]] | None = None,
    tape: ComputationTape | None = None,
) -> dict[str, Array]:
    """Gradients of a scalar loss with respect to named leaf tensors.

    Parameters not reachable from the loss get exact zero gradients. The
    tape is traced from the loss when not supplied; each node is visited
    exactly once.
    """
    if loss.data.size != 1:
        raise ContractViolationError(
            f"backward requires a scalar loss, got shape {loss.data.shape}"
        )
    if tape is None:
        tape = ComputationTape.trace(loss)
    grads: dict[int, Array] = {id(loss): np.ones_like(loss.data)}
    for node in reversed(tape.nodes):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        for parent, rule in zip(node.parents, node.grad_rules):
            contrib = rule(g)
            key = id(parent)
            if key in grads:
                grads[key] = grads[key] + contrib
            else:
                grads[key] = contrib
        if node.parents:
            continue
        # leaves keep their gradient for the result lookup below
        grads[id(node)] = g
    if params is None:
        return {}
    items = params.items() if isinstance(params, Mapping) else params
    return {
        name: grads.get(id(t), np.zeros_like(t.data)) for name, t in items
    }
