"""Qubit states, the spin-flip complement, and two-state sets."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, LinearlyDependentPair, NotNormalized
from .linalg import hermitian_eig

NORM_TOL = 1e-12
INDEPENDENCE_TOL = 1e-9


@dataclass(frozen=True)
class QubitState:
    """Pure qubit ``alpha|0> + beta|1>``; construction checks unit norm."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm2 = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalized(f"|alpha|^2 + |beta|^2 = {norm2!r}")

    @classmethod
    def from_vector(cls, v: Sequence[complex]) -> "QubitState":
        if len(v) != 2:
            raise DimensionMismatch(f"qubit vector must have 2 entries, got {len(v)}")
        return cls(v[0], v[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def inner(self, other: "QubitState") -> complex:
        """``<self|other>``"""
        return self.alpha.conjugate() * other.alpha + self.beta.conjugate() * other.beta


def complement(s: QubitState) -> QubitState:
    """The antipodal state ``beta*|0> - alpha*|1>``.

    The map is anti-unitary, so ``complement(c * s) = conj(c) * complement(s)``
    and applying it twice returns ``-s``.
    """
    return QubitState(s.beta.conjugate(), -s.alpha.conjugate())


def from_bloch(theta: float, phi: float) -> QubitState:
    theta = math.fmod(theta, 2 * math.pi)
    phi = math.fmod(phi, 2 * math.pi)
    return QubitState(math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2))


def independence_rank(vectors: Sequence[Sequence[complex]], tol: float = INDEPENDENCE_TOL) -> int:
    """Numerical rank of a family of vectors, read off their Gram eigenvalues."""
    if not vectors:
        return 0
    mat = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if len({v.shape[0] for v in mat}) != 1:
        raise DimensionMismatch("vectors have different lengths")
    m = np.column_stack(mat)
    lam = hermitian_eig(m.conj().T @ m).eigenvalues
    return int(np.sum(lam >= tol))


@dataclass(frozen=True)
class StateSet:
    """The two base states and their derived complements.

    Build with :func:`make_state_set`; complements are never passed in.
    """

    psi1: QubitState
    psi2: QubitState
    psibar1: QubitState = field(init=False)
    psibar2: QubitState = field(init=False)
    pair_overlap: complex = field(init=False)
    determinant: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "psibar1", complement(self.psi1))
        object.__setattr__(self, "psibar2", complement(self.psi2))
        object.__setattr__(self, "pair_overlap", self.psi1.inner(self.psi2))
        det = self.psi1.alpha * self.psi2.beta - self.psi2.alpha * self.psi1.beta
        object.__setattr__(self, "determinant", det)

    @property
    def independent(self) -> bool:
        return abs(self.determinant) > INDEPENDENCE_TOL

    @property
    def psi(self) -> tuple[QubitState, QubitState]:
        return (self.psi1, self.psi2)

    @property
    def psibar(self) -> tuple[QubitState, QubitState]:
        return (self.psibar1, self.psibar2)

    @property
    def is_real(self) -> bool:
        return all(
            abs(z.imag) <= NORM_TOL
            for s in self.psi
            for z in (s.alpha, s.beta)
        )


def make_state_set(psi1: QubitState, psi2: QubitState) -> StateSet:
    s = StateSet(psi1, psi2)
    if not s.independent:
        raise LinearlyDependentPair(
            f"|det| = {abs(s.determinant):.3e}; the two states are proportional"
        )
    return s
