"""
Maximize the mean success efficiency of one branch.

The feasible region {e in [0,1]^2 : x_in - D x_out D >= 0} is star-shaped
about the origin: along a ray e = s*d the determinant of the residual is a
convex quadratic in s that is non-positive where the ray leaves the unit box,
so each ray meets the boundary once. The optimizer bisects along a fan of
rays, then refines the best angle by golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import psd_classify

N_RAYS = 64
SCALE_TOL = 1e-13
ANGLE_TOL = 1e-10
FEAS_TOL = 1e-12
_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class OptimizationResult:
    best_eff: tuple[float, float]
    best_average: float
    boundary_certificate: float  # min residual eigenvalue at the optimum
    iterations: int

    @property
    def capped(self) -> bool:
        return self.best_eff == (1.0, 1.0)


def min_eig_2x2(x_in: np.ndarray, x_out: np.ndarray, e1: float, e2: float) -> float:
    """Smallest eigenvalue of the 2x2 residual from its trace and determinant."""
    s1, s2 = math.sqrt(e1), math.sqrt(e2)
    r11 = (x_in[0, 0] - e1 * x_out[0, 0]).real
    r22 = (x_in[1, 1] - e2 * x_out[1, 1]).real
    r12 = x_in[0, 1] - s1 * s2 * x_out[0, 1]
    half_gap = math.hypot(0.5 * (r11 - r22), abs(r12))
    return 0.5 * (r11 + r22) - half_gap


class _Search:
    def __init__(self, x_in, x_out, tol):
        self.x_in = np.asarray(x_in, dtype=complex)
        self.x_out = np.asarray(x_out, dtype=complex)
        self.tol = tol
        self.iterations = 0

    def feasible(self, e1: float, e2: float) -> bool:
        return min_eig_2x2(self.x_in, self.x_out, e1, e2) >= -self.tol

    def ray(self, omega: float) -> tuple[float, float]:
        """Furthest feasible point along the ray at angle ``omega`` in [0, pi/2]."""
        if omega == math.pi / 4:
            d1 = d2 = 1.0
        else:
            c, s = math.cos(omega), math.sin(omega)
            m = max(c, s)
            d1, d2 = min(1.0, c / m), min(1.0, s / m)
        if self.feasible(d1, d2):
            return d1, d2
        lo, hi = 0.0, 1.0
        while hi - lo > SCALE_TOL:
            self.iterations += 1
            mid = 0.5 * (lo + hi)
            if self.feasible(mid * d1, mid * d2):
                lo = mid
            else:
                hi = mid
        return lo * d1, lo * d2

    def push(self, e1: float, e2: float, axis: int) -> tuple[float, float]:
        """Raise one coordinate as far as feasibility allows."""
        def at(t):
            return (t, e2) if axis == 0 else (e1, t)

        lo = e1 if axis == 0 else e2
        if self.feasible(*at(1.0)):
            return at(1.0)
        hi = 1.0
        while hi - lo > SCALE_TOL:
            self.iterations += 1
            mid = 0.5 * (lo + hi)
            if self.feasible(*at(mid)):
                lo = mid
            else:
                hi = mid
        return at(lo)


def _key(p: tuple[float, float]):
    # mean first, then larger e1, then larger e2
    return (round(0.5 * (p[0] + p[1]), 14), p[0], p[1])


def maximize_branch(x_in, x_out, equal_eff: bool = False, tol: float = FEAS_TOL) -> OptimizationResult:
    """Largest ``(e1 + e2) / 2`` keeping ``x_in - D x_out D`` PSD.

    With ``equal_eff`` only the diagonal ``e1 = e2`` is searched.
    """
    search = _Search(x_in, x_out, tol)
    diag = math.pi / 4

    if equal_eff:
        best = search.ray(diag)
    else:
        angles = [0.0, math.pi / 2, diag]
        angles += [(k + 0.5) * (math.pi / 2) / N_RAYS for k in range(N_RAYS)]
        angles.sort()
        scored = [(search.ray(w), w) for w in angles]
        best, w_best = max(scored, key=lambda t: _key(t[0]))

        if best != (1.0, 1.0):
            i = angles.index(w_best)
            lo = angles[max(0, i - 1)]
            hi = angles[min(len(angles) - 1, i + 1)]
            a = hi - _GOLDEN * (hi - lo)
            b = lo + _GOLDEN * (hi - lo)
            pa, pb = search.ray(a), search.ray(b)
            while hi - lo > ANGLE_TOL:
                if _key(pa) >= _key(pb):
                    hi, b, pb = b, a, pa
                    a = hi - _GOLDEN * (hi - lo)
                    pa = search.ray(a)
                else:
                    lo, a, pa = a, b, pb
                    b = lo + _GOLDEN * (hi - lo)
                    pb = search.ray(b)
            for cand in (pa, pb):
                if _key(cand) > _key(best):
                    best = cand
            for axis in (0, 1):
                cand = search.push(best[0], best[1], axis)
                if _key(cand) > _key(best):
                    best = cand

    e1, e2 = float(best[0]), float(best[1])
    r = np.asarray(x_in, dtype=complex) - np.outer(np.sqrt([e1, e2]), np.sqrt([e1, e2])) * np.asarray(
        x_out, dtype=complex
    )
    cert = psd_classify(0.5 * (r + r.conj().T)).min_eigenvalue
    return OptimizationResult(
        best_eff=(e1, e2),
        best_average=0.5 * (e1 + e2),
        boundary_certificate=cert,
        iterations=search.iterations,
    )


def grid_oracle(x_in, x_out, step: float, tol: float = 1e-9) -> tuple[float, float, float]:
    """Exhaustive scan of the ``step`` grid on [0,1]^2 using LAPACK eigenvalues."""
    if not (0 < step <= 0.1):
        raise ValueError("step must lie in (0, 0.1]")
    n = int(math.floor(1.0 / step + 1e-9))
    ticks = np.minimum(np.arange(n + 1) * step, 1.0)
    e1, e2 = np.meshgrid(ticks, ticks, indexing="ij")
    s1, s2 = np.sqrt(e1), np.sqrt(e2)
    x_in = np.asarray(x_in, dtype=complex)
    x_out = np.asarray(x_out, dtype=complex)

    r = np.empty(e1.shape + (2, 2), dtype=complex)
    r[..., 0, 0] = x_in[0, 0] - e1 * x_out[0, 0]
    r[..., 1, 1] = x_in[1, 1] - e2 * x_out[1, 1]
    r[..., 0, 1] = x_in[0, 1] - s1 * s2 * x_out[0, 1]
    r[..., 1, 0] = np.conj(r[..., 0, 1])
    lam_min = np.linalg.eigvalsh(r)[..., 0]
    scale = np.maximum(1.0, np.linalg.norm(r, axis=(-2, -1)))
    ok = lam_min >= -tol * scale

    avg = np.where(ok, 0.5 * (e1 + e2), -1.0).ravel()
    order = np.lexsort((e2.ravel(), e1.ravel(), np.round(avg, 12)))
    k = order[-1]
    return float(e1.ravel()[k]), float(e2.ravel()[k]), float(avg[k])
