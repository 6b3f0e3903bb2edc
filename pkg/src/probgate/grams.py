"""Gram matrices of the gate's input and target families.

For a gate ``|psi> -> a|psi> + b|psibar>``, ``|psibar> -> b*|psi> - a*|psibar>``
the two branches compare the input Gram matrix against the Gram matrix of
the targets, optionally weighted entrywise by the overlaps of the success
probes. The Hadamard-like gate is the special case ``a = b = 1/sqrt(2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGate, InvalidProbeOverlap
from .linalg import psd_classify
from .states import StateSet

GATE_NORM_TOL = 1e-12


@dataclass(frozen=True)
class GateSpec:
    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        norm2 = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm2 - 1.0) > GATE_NORM_TOL:
            raise InvalidGate(f"|a|^2 + |b|^2 = {norm2!r}, expected 1")

    @classmethod
    def hadamard(cls) -> "GateSpec":
        r = 1 / math.sqrt(2)
        return cls(r, r)

    @classmethod
    def identity(cls) -> "GateSpec":
        return cls(1.0, 0.0)


def plus_target(psi: np.ndarray, psibar: np.ndarray, gate: GateSpec) -> np.ndarray:
    return gate.a * psi + gate.b * psibar


def minus_target(psi: np.ndarray, psibar: np.ndarray, gate: GateSpec) -> np.ndarray:
    return gate.b.conjugate() * psi - gate.a.conjugate() * psibar


def targets(states: StateSet, gate: GateSpec, branch: str) -> list[np.ndarray]:
    """Unit-norm success targets for ``branch`` in ``{"plus", "minus"}``."""
    fn = plus_target if branch == "plus" else minus_target
    return [fn(p.vector, q.vector, gate) for p, q in zip(states.psi, states.psibar)]


def gram(vectors) -> np.ndarray:
    m = np.column_stack(vectors)
    return m.conj().T @ m


@dataclass(frozen=True)
class GramSet:
    x_in_plus: np.ndarray
    x_out_plus: np.ndarray
    x_in_minus: np.ndarray
    x_out_minus: np.ndarray
    probe_overlap: np.ndarray

    def branch(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        if name == "plus":
            return self.x_in_plus, self.x_out_plus
        if name == "minus":
            return self.x_in_minus, self.x_out_minus
        raise ValueError(f"unknown branch {name!r}")


def _validate_probe_overlap(p) -> np.ndarray:
    if p is None:
        return np.ones((2, 2), dtype=complex)
    p = np.array(p, dtype=complex)
    if p.shape != (2, 2):
        raise InvalidProbeOverlap(f"probe overlap must be 2x2, got {p.shape}")
    if np.max(np.abs(p - p.conj().T)) > 1e-12 or np.max(np.abs(np.diag(p) - 1)) > 1e-12:
        raise InvalidProbeOverlap("probe overlap must be Hermitian with unit diagonal")
    if not psd_classify(p).is_psd:
        raise InvalidProbeOverlap("probe overlap is not positive semidefinite")
    return p


def build_grams(states: StateSet, gate: GateSpec, probe_overlap=None) -> GramSet:
    p = _validate_probe_overlap(probe_overlap)
    psi = [s.vector for s in states.psi]
    psibar = [s.vector for s in states.psibar]
    return GramSet(
        x_in_plus=gram(psi),
        x_out_plus=gram(targets(states, gate, "plus")) * p,
        x_in_minus=gram(psibar),
        x_out_minus=gram(targets(states, gate, "minus")) * p,
        probe_overlap=p,
    )
