"""Run a synthesized machine: evolve, measure the probe, post-select on P0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroSuccessProbability
from .grams import plus_target, minus_target
from .states import QubitState, complement
from .synthesis import MINUS, PROBE, SynthesisResult, embed

ZERO_PROB = 1e-14
MASK64 = (1 << 64) - 1
GAMMA64 = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 generator; one 64-bit output per state increment."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA64) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def splitmix64_block(seed: int, n: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset+1 .. offset+n`` of ``SplitMix64(seed)`` in one shot."""
    k = np.arange(offset + 1, offset + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GAMMA64)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, n: int, offset: int = 0) -> np.ndarray:
    return (splitmix64_block(seed, n, offset) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _as_vector(x) -> np.ndarray:
    if isinstance(x, QubitState):
        return x.vector
    return np.asarray(x, dtype=complex)


def default_target(machine: SynthesisResult, state) -> np.ndarray:
    """The gate's ideal output for ``state`` on the machine's branch."""
    v = _as_vector(state)
    vbar = complement(QubitState.from_vector(v)).vector
    if machine.branch == MINUS:
        # the input is itself a complement, psi = -complement(input)
        return minus_target(-vbar, v, machine.gate)
    return plus_target(v, vbar, machine.gate)


def probe_probabilities(machine: SynthesisResult, state) -> np.ndarray:
    out = machine.unitary @ embed(_as_vector(state), 0)
    amps = PROBE.split(out)
    return np.sum(np.abs(amps) ** 2, axis=0)


@dataclass(frozen=True)
class ExactRun:
    success_prob: float
    post_state: np.ndarray
    fidelity: float
    probe_probs: np.ndarray


def exact_run(machine: SynthesisResult, state, target=None) -> ExactRun:
    """Evolve ``state x P0``, project the probe on P0, and score the result.

    Raises :class:`ZeroSuccessProbability` when the success branch is empty.
    """
    v = _as_vector(state)
    out = machine.unitary @ embed(v, 0)
    amps = PROBE.split(out)
    probs = np.sum(np.abs(amps) ** 2, axis=0)
    p = float(probs[0])
    if p < ZERO_PROB:
        raise ZeroSuccessProbability(f"success probability {p:.3e}")
    post = amps[:, 0] / np.sqrt(p)
    t = default_target(machine, v) if target is None else _as_vector(target)
    t = t / np.linalg.norm(t)
    fid = float(min(1.0, abs(np.vdot(t, post)) ** 2))
    return ExactRun(success_prob=min(1.0, p), post_state=post, fidelity=fid, probe_probs=probs)


@dataclass(frozen=True)
class SimulationReport:
    exact_success_prob: float
    observed_success_freq: float
    trials: int
    post_fidelity: float | None  # None when nothing survives post-selection
    seed: int
    counts: tuple[int, int, int]


def monte_carlo(machine: SynthesisResult, state, trials: int, seed: int, target=None) -> SimulationReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    probs = probe_probabilities(machine, state)
    probs = probs / probs.sum()
    u = uniforms(seed, trials)
    edges = np.cumsum(probs)
    outcome = np.searchsorted(edges[:-1], u, side="right")
    counts = np.bincount(outcome, minlength=3)
    try:
        fid = exact_run(machine, state, target).fidelity
    except ZeroSuccessProbability:
        fid = None
    return SimulationReport(
        exact_success_prob=float(min(1.0, probs[0])),
        observed_success_freq=float(counts[0] / trials),
        trials=trials,
        post_fidelity=fid,
        seed=seed,
        counts=tuple(int(c) for c in counts),
    )
