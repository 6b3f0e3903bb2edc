"""Residual-matrix feasibility and closed-form efficiency bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EffOutOfRange
from .grams import GramSet, build_grams, GateSpec
from .linalg import PSD_TOL, PsdClass, psd_classify
from .states import StateSet

EFF_SLACK = 1e-12
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class EfficiencyPair:
    gamma: tuple[float, float]
    delta: tuple[float, float]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gamma)
        d = tuple(float(x) for x in self.delta)
        if len(g) != 2 or len(d) != 2:
            raise EffOutOfRange("gamma and delta need two components each")
        for x in g + d:
            if not (-EFF_SLACK <= x <= 1 + EFF_SLACK):
                raise EffOutOfRange(f"efficiency {x!r} outside [0, 1]")
        object.__setattr__(self, "gamma", tuple(min(1.0, max(0.0, x)) for x in g))
        object.__setattr__(self, "delta", tuple(min(1.0, max(0.0, x)) for x in d))

    def branch(self, name: str) -> tuple[float, float]:
        return self.gamma if name == "plus" else self.delta


@dataclass(frozen=True)
class FeasibilityReport:
    residual_plus: np.ndarray
    residual_minus: np.ndarray
    class_plus: PsdClass
    class_minus: PsdClass

    @property
    def feasible(self) -> bool:
        return self.class_plus.is_psd and self.class_minus.is_psd


def _check_eff(eff: Sequence[float]) -> np.ndarray:
    e = np.asarray(eff, dtype=float)
    if e.shape != (2,) or np.any(e < -EFF_SLACK) or np.any(e > 1 + EFF_SLACK):
        raise EffOutOfRange(f"efficiencies {list(e)} not in [0, 1]^2")
    return np.clip(e, 0.0, 1.0)


def residual(x_in, x_out, eff: Sequence[float]) -> np.ndarray:
    """``x_in - D x_out D`` with ``D = diag(sqrt(eff))``."""
    d = np.sqrt(_check_eff(eff))
    r = np.asarray(x_in, dtype=complex) - np.outer(d, d) * np.asarray(x_out, dtype=complex)
    return 0.5 * (r + r.conj().T)


def check_feasible(grams: GramSet, eff: EfficiencyPair, tol: float = PSD_TOL) -> FeasibilityReport:
    r_plus = residual(grams.x_in_plus, grams.x_out_plus, eff.gamma)
    r_minus = residual(grams.x_in_minus, grams.x_out_minus, eff.delta)
    return FeasibilityReport(
        residual_plus=r_plus,
        residual_minus=r_minus,
        class_plus=psd_classify(r_plus, tol),
        class_minus=psd_classify(r_minus, tol),
    )


@dataclass(frozen=True)
class Bound:
    value: float
    raw: float | None  # uncapped ratio; None when the denominator vanishes

    @property
    def capped(self) -> bool:
        return self.raw is None or self.raw > 1.0


def _bound(x_in: np.ndarray, x_out: np.ndarray) -> Bound:
    num = 1.0 - float(abs(x_in[0, 1]))
    den = 1.0 - float(abs(x_out[0, 1]))
    if den <= DENOMINATOR_FLOOR:
        return Bound(1.0, None)
    raw = num / den
    return Bound(min(1.0, raw), raw)


def bound_plus_detail(grams: GramSet) -> Bound:
    return _bound(grams.x_in_plus, grams.x_out_plus)


def bound_minus_detail(grams: GramSet) -> Bound:
    return _bound(grams.x_in_minus, grams.x_out_minus)


def bound_plus(grams: GramSet) -> float:
    """Upper bound on the mean success efficiency of the psi branch, capped at 1."""
    return bound_plus_detail(grams).value


def bound_minus(grams: GramSet) -> float:
    """Upper bound on the mean success efficiency of the psibar branch, capped at 1."""
    return bound_minus_detail(grams).value


def is_polar_great_circle(states: StateSet, tol: float = 1e-12) -> bool:
    """True when the plain overlap, the complement overlap and both Hadamard
    half-sums of cross overlaps all coincide, which makes both target Gram
    matrices equal to the input ones.
    """
    g = build_grams(states, GateSpec.hadamard())
    chain = [
        g.x_in_plus[0, 1],
        g.x_in_minus[0, 1],
        g.x_out_plus[0, 1],
        g.x_out_minus[0, 1],
    ]
    return all(abs(z - chain[0]) <= tol for z in chain[1:])
