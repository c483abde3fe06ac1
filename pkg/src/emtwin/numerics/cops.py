"""Complex scalar ops, polarization 2-vectors, Jones matrices, 2x2 solves.

The free functions (:func:`cadd` ... :func:`csqrt`) dispatch on type: plain
``complex`` / numpy complex arrays evaluate eagerly, :class:`~.ctape.CVar`
arguments record onto a gradient tape. Physics formulas written against
these functions therefore run identically in the simulator (eager) and in
training (differentiable), with a single source of truth.

Branch convention for ``csqrt``: principal branch, Re >= 0; on the tie
Re == 0 the imaginary part is taken non-negative (so ``csqrt(-1) == 1j``
even for a ``-0.0`` imaginary input).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import DomainError, SingularSystemError
from .ctape import CVar, cexp_tape, csqrt_tape


def _is_tape(z) -> bool:
    return isinstance(z, CVar)


def cadd(a, b):
    return a + b


def cmul(a, b):
    return a * b


def cdiv(a, b):
    if not _is_tape(b):
        if np.all(b == 0):
            raise DomainError("complex division by exact zero")
    return a / b


def conj(z):
    if _is_tape(z):
        return z.conj()
    return np.conjugate(z)


def cabs(z):
    if _is_tape(z):
        return z.abs()
    return np.abs(z)


def csqrt(z):
    if _is_tape(z):
        return csqrt_tape(z)
    z = np.asarray(z, dtype=np.complex128)
    # normalize -0.0 imaginary parts so the tie lands on the Im >= 0 branch
    fixed = np.where(z.imag == 0.0, z.real + 0.0j, z)
    out = np.sqrt(fixed)
    return out[()] if out.ndim == 0 else out


def cexp(z):
    if _is_tape(z):
        return cexp_tape(z)
    out = np.exp(np.asarray(z, dtype=np.complex128))
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# polarization algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexVec2:
    """Complex 2-vector in the s/p polarization basis (fields in V/m).

    ``p`` is the in-plane-of-incidence component, ``s`` the perpendicular
    one; entries may be complex scalars, complex arrays, or CVars.
    """

    p: Any
    s: Any

    def norm2(self):
        if _is_tape(self.p):
            return self.p.abs2() + self.s.abs2()
        return np.abs(self.p) ** 2 + np.abs(self.s) ** 2

    def scale(self, factor) -> "ComplexVec2":
        return ComplexVec2(self.p * factor, self.s * factor)

    def add(self, other: "ComplexVec2") -> "ComplexVec2":
        return ComplexVec2(self.p + other.p, self.s + other.s)


@dataclass(frozen=True)
class Jones2x2:
    """2x2 complex reflection operator acting on (p, s) field components."""

    m_pp: Any
    m_ps: Any
    m_sp: Any
    m_ss: Any

    def apply(self, v: ComplexVec2) -> ComplexVec2:
        return ComplexVec2(self.m_pp * v.p + self.m_ps * v.s,
                           self.m_sp * v.p + self.m_ss * v.s)

    def as_array(self) -> np.ndarray:
        return np.array([[complex(self.m_pp), complex(self.m_ps)],
                         [complex(self.m_sp), complex(self.m_ss)]])

    @staticmethod
    def identity() -> "Jones2x2":
        return Jones2x2(1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j)

    @staticmethod
    def diagonal(r_p, r_s) -> "Jones2x2":
        return Jones2x2(r_p, 0.0j, 0.0j, r_s)


def solve2x2(a: Jones2x2, b: ComplexVec2,
             eps_det: float = 1e-12) -> ComplexVec2:
    """Solve the 2x2 complex system A x = b by Cramer's rule.

    Raises :class:`SingularSystemError` when |det| <= eps_det times the
    squared max row norm, below which a double-precision 2x2 solve cannot
    be trusted.
    """
    a11, a12 = complex(a.m_pp), complex(a.m_ps)
    a21, a22 = complex(a.m_sp), complex(a.m_ss)
    b1, b2 = complex(b.p), complex(b.s)
    det = a11 * a22 - a12 * a21
    row = max(abs(a11) + abs(a12), abs(a21) + abs(a22))
    if abs(det) <= eps_det * max(row * row, np.finfo(float).tiny):
        raise SingularSystemError("singular 2x2 system", abs(det))
    return ComplexVec2((b1 * a22 - b2 * a12) / det,
                       (a11 * b2 - a21 * b1) / det)
