"""Complex values on the gradient tape, stored as (re, im) pairs of Vars.

Every complex op decomposes into real ops on the underlying tape, which
keeps the optimizers purely real and sidesteps Wirtinger-derivative
ambiguity. A :class:`CVar` mixes freely with Python/numpy complex constants
through operator overloading.
"""

from __future__ import annotations

import numpy as np

from . import tape as T
from .tape import Tape, Var


class CVar:
    """A complex array on a tape, held as a real/imaginary Var pair."""

    __slots__ = ("re", "im")

    def __init__(self, re: Var, im: Var):
        if re.tape is not im.tape:
            raise ValueError("re and im must live on the same tape")
        self.re = re
        self.im = im

    @property
    def tape(self) -> Tape:
        return self.re.tape

    @property
    def value(self) -> np.ndarray:
        return self.re.value + 1j * self.im.value

    def __repr__(self):
        return f"CVar(re={self.re!r}, im={self.im!r})"

    # -- constructors ---------------------------------------------------

    @staticmethod
    def constant(tape: Tape, z) -> "CVar":
        z = np.asarray(z, dtype=np.complex128)
        return CVar(tape.constant(z.real.copy()), tape.constant(z.imag.copy()))

    @staticmethod
    def from_real(re: Var) -> "CVar":
        return CVar(re, re.tape.constant(np.zeros(re.shape)))

    def _coerce(self, other) -> "CVar":
        if isinstance(other, CVar):
            return other
        if isinstance(other, Var):
            return CVar.from_real(other)
        return CVar.constant(self.tape, other)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return CVar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return CVar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        return CVar(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        return CVar(self.re * o.re - self.im * o.im,
                    self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        d = o.re * o.re + o.im * o.im
        return CVar((self.re * o.re + self.im * o.im) / d,
                    (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return CVar(-self.re, -self.im)

    def conj(self) -> "CVar":
        return CVar(self.re, -self.im)

    def abs2(self) -> Var:
        return self.re * self.re + self.im * self.im

    def abs(self) -> Var:
        return T.sqrt(self.abs2())


def csqrt_tape(z: CVar) -> CVar:
    """Principal square root on the tape.

    Uses sqrt(z) = u + j*im/(2u) with u = sqrt((|z|+re)/2), which is smooth
    and backward-stable whenever re(z) > -|z|, i.e. away from the negative
    real axis. Every tape-side usage (impedances, transmission cosines with
    air incidence) satisfies re(z) > 0.
    """
    r = T.sqrt(z.re * z.re + z.im * z.im)
    u = T.sqrt((r + z.re) * 0.5)
    return CVar(u, z.im / (u * 2.0))


def cexp_tape(z: CVar) -> CVar:
    m = T.exp(z.re)
    return CVar(m * T.cos(z.im), m * T.sin(z.im))
