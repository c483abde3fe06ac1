"""Reverse-mode automatic differentiation over real-valued arrays.

A :class:`Tape` records a computation as an ordered list of nodes, each
holding the numpy value produced by an op plus a vector-Jacobian-product
closure over its inputs. :class:`Var` is a lightweight handle (tape, index)
with operator overloading, so numeric code reads like plain numpy.

Only real float64 values live on the tape; complex quantities are expressed
as (re, im) pairs (see :mod:`emtwin.numerics.ctape`). Gradients are exact
reverse-mode derivatives: ``tape.backward(out)`` walks the node list once in
reverse recording order, which is a valid topological order by construction.

A tape is single-writer while recording; reading values is always safe.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..errors import DomainError

Array = np.ndarray


def _as_array(x) -> Array:
    a = np.asarray(x, dtype=np.float64)
    return a


def _unbroadcast(grad: Array, shape: tuple) -> Array:
    """Sum ``grad`` down to ``shape`` (reverses numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Var:
    """Handle to one node on a tape."""

    __slots__ = ("tape", "index")

    def __init__(self, tape: "Tape", index: int):
        self.tape = tape
        self.index = index

    @property
    def value(self) -> Array:
        return self.tape._values[self.index]

    @property
    def shape(self) -> tuple:
        return self.value.shape

    def __repr__(self):
        return f"Var(#{self.index}, shape={self.shape})"

    # -- arithmetic sugar ---------------------------------------------------

    def __add__(self, other):
        return add(self, self.tape.lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, self.tape.lift(other))

    def __rsub__(self, other):
        return sub(self.tape.lift(other), self)

    def __mul__(self, other):
        return mul(self, self.tape.lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, self.tape.lift(other))

    def __rtruediv__(self, other):
        return div(self.tape.lift(other), self)

    def __pow__(self, p):
        return pow_const(self, p)

    def __neg__(self):
        return neg(self)

    def __matmul__(self, other):
        return matmul(self, other)

    def sum(self, axis=None, keepdims=False):
        return sum_(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return mean_(self, axis=axis, keepdims=keepdims)


class Tape:
    """Ordered record of a real-valued computation graph.

    ``nodes[i]`` stores (op kind, input indices, vjp closure) and
    ``_values[i]`` the forward value, so every node's inputs precede it and
    one reverse sweep yields all leaf gradients.
    """

    def __init__(self):
        self._values: list[Array] = []
        self._ops: list[str] = []
        self._inputs: list[tuple[int, ...]] = []
        self._vjps: list[Callable | None] = []
        self._leaves: list[int] = []

    # -- recording ----------------------------------------------------------

    def _record(self, op: str, value: Array, inputs: tuple[int, ...],
                vjp: Callable | None) -> Var:
        self._values.append(value)
        self._ops.append(op)
        self._inputs.append(inputs)
        self._vjps.append(vjp)
        return Var(self, len(self._values) - 1)

    def leaf(self, value) -> Var:
        """Register a differentiable input (parameter)."""
        v = self._record("leaf", _as_array(value), (), None)
        self._leaves.append(v.index)
        return v

    def constant(self, value) -> Var:
        """Register a non-differentiable input."""
        return self._record("const", _as_array(value), (), None)

    def lift(self, x) -> Var:
        """Wrap plain numbers/arrays as constants; pass Vars through."""
        if isinstance(x, Var):
            if x.tape is not self:
                raise ValueError("cannot mix Vars from different tapes")
            return x
        return self.constant(x)

    @property
    def n_nodes(self) -> int:
        return len(self._values)

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(self._leaves)

    def op_kind(self, index: int) -> str:
        return self._ops[index]

    # -- differentiation ----------------------------------------------------

    def backward(self, output) -> list[Array]:
        """Gradient of a scalar output with respect to every leaf.

        Returns one array per leaf, in leaf registration order; leaves the
        output does not depend on get zeros. Each node is visited exactly
        once.
        """
        out_index = output.index if isinstance(output, Var) else int(output)
        if not 0 <= out_index < len(self._values):
            raise IndexError(f"output index {out_index} out of range")
        out_val = self._values[out_index]
        if out_val.size != 1:
            raise DomainError("backward requires a scalar output node")

        adjoint: dict[int, Array] = {out_index: np.ones_like(out_val)}
        for i in range(out_index, -1, -1):
            g = adjoint.get(i)
            if g is None:
                continue
            if not self._inputs[i]:
                continue  # leaf or const: adjoint stays for reading below
            del adjoint[i]  # interior node: free once propagated
            partials = self._vjps[i](g)
            for j, pg in zip(self._inputs[i], partials):
                if pg is None:
                    continue
                acc = adjoint.get(j)
                adjoint[j] = pg if acc is None else acc + pg

        grads = []
        for li in self._leaves:
            g = adjoint.get(li) if li <= out_index else None
            grads.append(g if g is not None else np.zeros_like(self._values[li]))
        return grads

    def gradient(self, output, wrt: Sequence[Var]) -> list[Array]:
        """Gradients for a chosen subset of leaves."""
        all_grads = self.backward(output)
        pos = {li: k for k, li in enumerate(self._leaves)}
        out = []
        for v in wrt:
            if v.index not in pos:
                raise ValueError("gradient target is not a leaf on this tape")
            out.append(all_grads[pos[v.index]])
        return out


def tape_backward(tape: Tape, output_index: int) -> list[Array]:
    """Functional alias for :meth:`Tape.backward`."""
    return tape.backward(output_index)


# ---------------------------------------------------------------------------
# ops
# ---------------------------------------------------------------------------

def _binary(op, a: Var, b: Var, value, vjp) -> Var:
    return a.tape._record(op, value, (a.index, b.index), vjp)


def _unary(op, a: Var, value, vjp) -> Var:
    return a.tape._record(op, value, (a.index,), vjp)


def add(a: Var, b: Var) -> Var:
    av, bv = a.value, b.value
    return _binary("add", a, b, av + bv,
                   lambda g: (_unbroadcast(g, av.shape), _unbroadcast(g, bv.shape)))


def sub(a: Var, b: Var) -> Var:
    av, bv = a.value, b.value
    return _binary("sub", a, b, av - bv,
                   lambda g: (_unbroadcast(g, av.shape), _unbroadcast(-g, bv.shape)))


def mul(a: Var, b: Var) -> Var:
    av, bv = a.value, b.value
    return _binary("mul", a, b, av * bv,
                   lambda g: (_unbroadcast(g * bv, av.shape), _unbroadcast(g * av, bv.shape)))


def div(a: Var, b: Var) -> Var:
    av, bv = a.value, b.value
    out = av / bv
    return _binary("div", a, b, out,
                   lambda g: (_unbroadcast(g / bv, av.shape),
                              _unbroadcast(-g * out / bv, bv.shape)))


def neg(a: Var) -> Var:
    return _unary("neg", a, -a.value, lambda g: (-g,))


def pow_const(a: Var, p) -> Var:
    p = float(p)
    av = a.value
    out = av ** p
    return _unary("pow_const", a, out, lambda g: (g * p * av ** (p - 1.0),))


def exp(a: Var) -> Var:
    out = np.exp(a.value)
    return _unary("exp", a, out, lambda g: (g * out,))


def log(a: Var) -> Var:
    av = a.value
    return _unary("log", a, np.log(av), lambda g: (g / av,))


def sqrt(a: Var) -> Var:
    out = np.sqrt(a.value)
    return _unary("sqrt", a, out, lambda g: (g * 0.5 / out,))


def sin(a: Var) -> Var:
    av = a.value
    return _unary("sin", a, np.sin(av), lambda g: (g * np.cos(av),))


def cos(a: Var) -> Var:
    av = a.value
    return _unary("cos", a, np.cos(av), lambda g: (-g * np.sin(av),))


def tanh(a: Var) -> Var:
    out = np.tanh(a.value)
    return _unary("tanh", a, out, lambda g: (g * (1.0 - out * out),))


def sigmoid(a: Var) -> Var:
    out = 1.0 / (1.0 + np.exp(-a.value))
    return _unary("sigmoid", a, out, lambda g: (g * out * (1.0 - out),))


def abs_(a: Var) -> Var:
    av = a.value
    return _unary("abs", a, np.abs(av), lambda g: (g * np.sign(av),))


def maximum_const(a: Var, c) -> Var:
    av = a.value
    mask = (av >= c).astype(np.float64)
    return _unary("maximum_const", a, np.maximum(av, c), lambda g: (g * mask,))


def where_mask(mask, a: Var, b: Var) -> Var:
    """Elementwise select with a constant boolean mask."""
    m = np.asarray(mask, dtype=bool)
    av, bv = a.value, b.value
    out = np.where(m, av, bv)
    return _binary("where", a, b, out,
                   lambda g: (_unbroadcast(np.where(m, g, 0.0), av.shape),
                              _unbroadcast(np.where(m, 0.0, g), bv.shape)))


def sum_(a: Var, axis=None, keepdims=False) -> Var:
    av = a.value
    out = np.sum(av, axis=axis, keepdims=keepdims)

    def vjp(g):
        gg = np.asarray(g)
        if axis is not None and not keepdims:
            gg = np.expand_dims(gg, axis)
        return (np.broadcast_to(gg, av.shape).copy(),)

    return _unary("sum", a, np.asarray(out), vjp)


def mean_(a: Var, axis=None, keepdims=False) -> Var:
    av = a.value
    n = av.size if axis is None else av.shape[axis]
    return mul(sum_(a, axis=axis, keepdims=keepdims), a.tape.constant(1.0 / n))


def matmul(a: Var, b: Var) -> Var:
    av, bv = a.value, b.value
    return _binary("matmul", a, b, av @ bv,
                   lambda g: (g @ bv.T, av.T @ g))


def gather(a: Var, idx) -> Var:
    """Row gather along axis 0; backward scatter-adds."""
    idx = np.asarray(idx, dtype=np.intp)
    av = a.value

    def vjp(g):
        out = np.zeros_like(av)
        np.add.at(out, idx, g)
        return (out,)

    return _unary("gather", a, av[idx], vjp)


def concat(parts: Sequence[Var], axis: int = -1) -> Var:
    tape = parts[0].tape
    vals = [p.value for p in parts]
    sizes = [v.shape[axis] for v in vals]
    splits = np.cumsum(sizes)[:-1]

    def vjp(g):
        return tuple(np.split(g, splits, axis=axis))

    return tape._record("concat", np.concatenate(vals, axis=axis),
                        tuple(p.index for p in parts), vjp)


def slice_(a: Var, key) -> Var:
    """Static indexing (slices / int arrays not allowed; basic indexing only)."""
    av = a.value

    def vjp(g):
        out = np.zeros_like(av)
        out[key] = g
        return (out,)

    return _unary("slice", a, av[key], vjp)


def reshape(a: Var, shape) -> Var:
    av = a.value
    return _unary("reshape", a, av.reshape(shape), lambda g: (g.reshape(av.shape),))
