"""
Explicit unitary-plus-probe machines.

A machine acts on system (qubit) x probe (qutrit, basis P0, P1, P2). Vectors
are laid out as ``np.kron(system, probe)``. For branch inputs ``|in_i> P0``
the machine produces::

    sqrt(e_i) |target_i> P0  +  sum_j c_ij |0> P_j

where the failure amplitudes ``c_ij`` come from the Hermitian square root of
the residual matrix, so the output Gram matrix equals the input one and a
unitary completion exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InfeasibleEfficiency, LinearlyDependentPair
from .feasibility import EfficiencyPair, residual
from .grams import GateSpec, build_grams, targets
from .linalg import PSD_TOL, frobenius, hermitian_eig, principal_sqrt_psd, psd_classify, unitary_completion
from .states import StateSet

PLUS = "plus"
MINUS = "minus"
SYSTEM_DIM = 2
PROBE_DIM = 3
TOTAL_DIM = SYSTEM_DIM * PROBE_DIM


@dataclass(frozen=True)
class ProbeSpace:
    dimension: int = PROBE_DIM
    labels: tuple[str, ...] = ("P0", "P1", "P2")

    def basis(self, j: int) -> np.ndarray:
        v = np.zeros(self.dimension, dtype=complex)
        v[j] = 1.0
        return v

    @property
    def success_projector(self) -> np.ndarray:
        return np.kron(np.eye(SYSTEM_DIM), np.outer(self.basis(0), self.basis(0)))

    def split(self, vec: np.ndarray) -> np.ndarray:
        """Reshape a joint vector to ``(system, probe)`` amplitudes."""
        return np.asarray(vec).reshape(SYSTEM_DIM, self.dimension)


PROBE = ProbeSpace()
FAILURE_STATE = np.array([1.0, 0.0], dtype=complex)


def embed(system_vec, probe_index: int = 0) -> np.ndarray:
    return np.kron(np.asarray(system_vec, dtype=complex), PROBE.basis(probe_index))


@dataclass(frozen=True)
class BranchSynthesis:
    branch: str
    gate: GateSpec
    eff: tuple[float, float]
    residual: np.ndarray
    coeff_matrix: np.ndarray
    residual_eigs: tuple[float, float]
    inputs: tuple[np.ndarray, np.ndarray]  # system vectors
    targets: tuple[np.ndarray, np.ndarray]  # unit-norm success targets
    rows: tuple[tuple[np.ndarray, np.ndarray], ...]
    failure_states: tuple[np.ndarray, ...] = field(default=(FAILURE_STATE, FAILURE_STATE))


def build_branch(
    states: StateSet,
    gate: GateSpec,
    eff: Sequence[float],
    branch: str = PLUS,
    tol: float = PSD_TOL,
) -> BranchSynthesis:
    if branch not in (PLUS, MINUS):
        raise ValueError(f"unknown branch {branch!r}")
    if not states.independent:
        raise LinearlyDependentPair("base states are linearly dependent")
    x_in, x_out = build_grams(states, gate).branch(branch)
    res = residual(x_in, x_out, eff)
    cls = psd_classify(res, tol)
    if not cls.is_psd:
        raise InfeasibleEfficiency(
            f"{branch} residual has eigenvalue {cls.min_eigenvalue:.3e} at efficiencies {tuple(eff)}"
        )
    coeff = principal_sqrt_psd(res, tol)
    eff = tuple(float(min(1.0, max(0.0, e))) for e in eff)

    ins = [s.vector for s in (states.psi if branch == PLUS else states.psibar)]
    tgt = targets(states, gate, branch)
    rows = []
    for i in range(2):
        out = np.sqrt(eff[i]) * embed(tgt[i], 0)
        for j in range(2):
            # conj(A[i, j]) so that <out_i|out_k> picks up (A A^H)[i, k]
            out = out + np.conj(coeff[i, j]) * embed(FAILURE_STATE, j + 1)
        rows.append((embed(ins[i], 0), out))

    eigs = hermitian_eig(res).eigenvalues
    return BranchSynthesis(
        branch=branch,
        gate=gate,
        eff=eff,
        residual=res,
        coeff_matrix=coeff,
        residual_eigs=(float(eigs[0]), float(eigs[1])),
        inputs=tuple(ins),
        targets=tuple(tgt),
        rows=tuple(rows),
    )


@dataclass(frozen=True)
class SynthesisResult:
    branch: str
    unitary: np.ndarray
    probe: ProbeSpace
    gate: GateSpec
    failure_states: tuple[np.ndarray, ...]
    source: BranchSynthesis

    @property
    def unitarity_residual(self) -> float:
        u = self.unitary
        return frobenius(u.conj().T @ u - np.eye(u.shape[0]))

    @property
    def map_residual(self) -> float:
        return max(float(np.linalg.norm(self.unitary @ x - y)) for x, y in self.source.rows)

    @property
    def gram_residual(self) -> float:
        xin = np.column_stack([r[0] for r in self.source.rows])
        xout = np.column_stack([r[1] for r in self.source.rows])
        return float(np.max(np.abs(xin.conj().T @ xin - xout.conj().T @ xout)))

    def success_block(self) -> np.ndarray:
        """The 2x2 action of U from system x P0 back into system x P0."""
        idx = [s * PROBE_DIM for s in range(SYSTEM_DIM)]
        return self.unitary[np.ix_(idx, idx)]


def synthesize(branch_syn: BranchSynthesis) -> SynthesisResult:
    u = unitary_completion(branch_syn.rows, TOTAL_DIM)
    return SynthesisResult(
        branch=branch_syn.branch,
        unitary=u,
        probe=PROBE,
        gate=branch_syn.gate,
        failure_states=branch_syn.failure_states,
        source=branch_syn,
    )


def phase_adjusted_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``min_{|c|=1} ||u - c v||``"""
    ov = np.vdot(v, u)
    c = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(u - c * v))


@dataclass(frozen=True)
class AuditRow:
    strict_residual: float
    phase_residual: float
    success_prob: float
    post_fidelity: float | None


@dataclass(frozen=True)
class AuditReport:
    rows: tuple[AuditRow, AuditRow]
    expansion: np.ndarray  # column i: psibar_i in the (psi_1, psi_2) basis
    images: tuple[np.ndarray, np.ndarray]  # U (psibar_i x P0) by linearity
    plus_machine: SynthesisResult


def joint_audit(
    states: StateSet,
    gate: GateSpec,
    eff_pair: EfficiencyPair,
    tol: float = PSD_TOL,
) -> AuditReport:
    """Check how a single psi-branch machine treats the complement inputs.

    The four inputs live in a 2-dimensional space, so once U is fixed on
    ``psi_1, psi_2`` its action on ``psibar_i`` follows by linearity. Each
    complement row is compared with its requested output both strictly and
    up to a global phase.
    """
    plus = synthesize(build_branch(states, gate, eff_pair.gamma, PLUS, tol))
    minus = build_branch(states, gate, eff_pair.delta, MINUS, tol)

    basis = np.column_stack([s.vector for s in states.psi])
    expansion = np.linalg.solve(basis, np.column_stack([s.vector for s in states.psibar]))
    plus_out = [r[1] for r in plus.source.rows]

    rows, images = [], []
    for i in range(2):
        image = expansion[0, i] * plus_out[0] + expansion[1, i] * plus_out[1]
        wanted = minus.rows[i][1]
        success = PROBE.split(image)[:, 0]
        p = float(np.vdot(success, success).real)
        fid = None
        if p >= 1e-14:
            fid = float(abs(np.vdot(minus.targets[i], success)) ** 2 / p)
        rows.append(
            AuditRow(
                strict_residual=float(np.linalg.norm(image - wanted)),
                phase_residual=phase_adjusted_distance(image, wanted),
                success_prob=p,
                post_fidelity=fid,
            )
        )
        images.append(image)
    return AuditReport(rows=tuple(rows), expansion=expansion, images=tuple(images), plus_machine=plus)
