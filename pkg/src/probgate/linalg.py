"""
Small dense complex linear algebra.

Everything here works on numpy complex arrays of size n <= 16. The
eigensolver is a cyclic Jacobi iteration so that results are reproducible
bit-for-bit for identical input, independent of the LAPACK build.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AmbientTooSmall,
    DependentInputs,
    DimensionMismatch,
    GramMismatch,
    NonHermitianInput,
    NotPsd,
)

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9
JACOBI_OFF_TOL = 1e-14
ROUNDOFF_FLOOR = 1e-15
MAX_SWEEPS = 64


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # real, ascending
    basis: np.ndarray  # unitary, columns are eigenvectors


class PsdTag(str, enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class PsdClass:
    tag: PsdTag
    min_eigenvalue: float

    @property
    def is_psd(self) -> bool:
        return self.tag is not PsdTag.INDEFINITE


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
    return a


def frobenius(m) -> float:
    return float(np.linalg.norm(np.asarray(m), "fro"))


def _check_hermitian(m: np.ndarray) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > HERMITIAN_TOL * max(1.0, frobenius(m)):
        raise NonHermitianInput(f"|M - M^H| reaches {dev:.3e}")
    return 0.5 * (m + m.conj().T)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest-modulus component real positive; argmax takes the lowest index on ties
    k = int(np.argmax(np.abs(v)))
    if abs(v[k]) == 0.0:
        return v
    return v * (abs(v[k]) / v[k])


def hermitian_eig(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies a real Givens rotation, so the sweep order (row-major over the
    strict upper triangle) fully determines the result.
    """
    a = _check_hermitian(as_matrix(m))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, frobenius(a))

    for _ in range(MAX_SWEEPS):
        off = frobenius(a - np.diag(np.diag(a)))
        if off < JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mod = abs(b)
                if mod == 0.0:
                    continue
                phase = b / mod
                theta = 0.5 * np.arctan2(2.0 * mod, a[p, p].real - a[q, q].real)
                c, s = np.cos(theta), np.sin(theta)
                j = np.array([[c, -s], [s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    basis = np.column_stack([_fix_phase(v[:, k]) for k in order]) if n else v
    return EigenDecomposition(eigenvalues=w[order], basis=basis)


def _effective_tol(m: np.ndarray, tol: float) -> float:
    return tol * max(1.0, frobenius(m))


def psd_classify(m, tol: float = PSD_TOL) -> PsdClass:
    """Classify a Hermitian matrix by its smallest eigenvalue.

    ``tol`` is relative to ``max(1, ||M||_F)``.
    """
    a = as_matrix(m)
    if tol < 0:
        raise ValueError("tol must be non-negative")
    lam = hermitian_eig(a).eigenvalues
    lo = float(lam[0]) if lam.size else 0.0
    eff = _effective_tol(a, tol)
    if lo > eff:
        tag = PsdTag.POSITIVE_DEFINITE
    elif lo >= -eff:
        tag = PsdTag.POSITIVE_SEMIDEFINITE
    else:
        tag = PsdTag.INDEFINITE
    return PsdClass(tag=tag, min_eigenvalue=lo)


def _clamped_eig(m: np.ndarray, tol: float) -> EigenDecomposition:
    dec = hermitian_eig(m)
    eff = _effective_tol(m, tol)
    lo = float(dec.eigenvalues[0]) if dec.eigenvalues.size else 0.0
    if lo < -eff:
        raise NotPsd(f"minimum eigenvalue {lo:.3e} below -{eff:.1e}")
    lam = dec.eigenvalues.copy()
    # round-off sized eigenvalues would otherwise leave sqrt(1e-16) ~ 1e-8 noise
    lam[lam <= ROUNDOFF_FLOOR * max(1.0, frobenius(m))] = 0.0
    return EigenDecomposition(lam, dec.basis)


def principal_sqrt_psd(m, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root ``V diag(sqrt(w)) V^H``.

    Eigenvalues in ``[-tol, 0)``, and positive ones at round-off level, are
    treated as zero.
    """
    a = as_matrix(m)
    dec = _clamped_eig(a, tol)
    s = (dec.basis * np.sqrt(dec.eigenvalues)) @ dec.basis.conj().T
    return 0.5 * (s + s.conj().T)


def gram_factor(g, ambient_dim: int, tol: float = PSD_TOL) -> list[np.ndarray]:
    """Vectors ``v_i`` of length ``ambient_dim`` with ``<v_i|v_j> = G[i, j]``.

    Components are taken along eigenvectors in order of decreasing eigenvalue,
    so only the first ``rank`` components can be nonzero.
    """
    a = as_matrix(g)
    dec = _clamped_eig(a, tol)
    eff = _effective_tol(a, tol)
    lam = dec.eigenvalues[::-1]
    basis = dec.basis[:, ::-1]
    rank = int(np.sum(lam > eff))
    if ambient_dim < rank:
        raise AmbientTooSmall(f"rank {rank} exceeds ambient dimension {ambient_dim}")
    coords = np.zeros((a.shape[0], ambient_dim), dtype=complex)
    coords[:, :rank] = basis[:, :rank].conj() * np.sqrt(lam[:rank])
    return [row.copy() for row in coords]


def _orthonormal_completion(q: np.ndarray) -> np.ndarray:
    """Extend the orthonormal columns of ``q`` to a full unitary.

    At each step the unused canonical vector with the largest component
    outside the current span is added; ties go to the lowest index.
    """
    dim, k = q.shape
    cols = [q[:, i] for i in range(k)]
    unused = list(range(dim))
    while len(cols) < dim:
        b = np.column_stack(cols) if cols else np.zeros((dim, 0), dtype=complex)
        best, best_norm, best_vec = -1, -1.0, None
        for m in unused:
            r = np.zeros(dim, dtype=complex)
            r[m] = 1.0
            for _ in range(2):
                r = r - b @ (b.conj().T @ r)
            nrm = float(np.linalg.norm(r))
            if nrm > best_norm:
                best, best_norm, best_vec = m, nrm, r
        unused.remove(best)
        cols.append(best_vec / best_norm)
    return np.column_stack(cols)


def _inverse_sqrt_pd(g: np.ndarray) -> np.ndarray:
    dec = hermitian_eig(g)
    return (dec.basis / np.sqrt(dec.eigenvalues)) @ dec.basis.conj().T


def unitary_completion(
    partial_map: Sequence[tuple[Sequence[complex], Sequence[complex]]],
    dim: int,
    gram_tol: float = 1e-8,
    indep_tol: float = PSD_TOL,
) -> np.ndarray:
    """A ``dim x dim`` unitary sending each input vector to its paired output.

    Such a unitary exists exactly when the two families have the same Gram
    matrix. Both families are orthonormalized with the same (symmetric)
    transform and then completed to full bases independently.
    """
    if not partial_map:
        return np.eye(dim, dtype=complex)
    xin = np.column_stack([np.asarray(p[0], dtype=complex) for p in partial_map])
    xout = np.column_stack([np.asarray(p[1], dtype=complex) for p in partial_map])
    if xin.shape[0] != dim or xout.shape[0] != dim:
        raise DimensionMismatch(f"vectors must have length {dim}")

    g_in = xin.conj().T @ xin
    g_out = xout.conj().T @ xout
    dev = float(np.max(np.abs(g_in - g_out)))
    if dev > gram_tol:
        raise GramMismatch(dev)
    g_in = 0.5 * (g_in + g_in.conj().T)
    lam = hermitian_eig(g_in).eigenvalues
    if lam[0] <= _effective_tol(g_in, indep_tol):
        raise DependentInputs(f"input Gram matrix has eigenvalue {lam[0]:.3e}")

    w = _inverse_sqrt_pd(g_in)
    e = xin @ w
    f = xout @ w
    # absorb any residual Gram mismatch so the result stays exactly unitary
    ff = f.conj().T @ f
    f = f @ _inverse_sqrt_pd(0.5 * (ff + ff.conj().T))

    u = _orthonormal_completion(f) @ _orthonormal_completion(e).conj().T
    return u
