"""Acceptance criteria 1-8.

Each test gathers its metrics first, prints a single PASS/FAIL line (shown
even without ``-s``), then asserts.
"""

import math
import time

import numpy as np
import pytest

from conftest import random_state
from probgate import (
    MINUS,
    PLUS,
    EfficiencyPair,
    GateSpec,
    bound_minus,
    bound_plus,
    build_branch,
    build_grams,
    check_feasible,
    exact_run,
    from_bloch,
    grid_oracle,
    joint_audit,
    make_state_set,
    maximize_branch,
    monte_carlo,
    synthesize,
)
from probgate.synthesis import PROBE, embed

R2 = 1 / math.sqrt(2)
H = GateSpec.hadamard()
BOUNDS = {PLUS: bound_plus, MINUS: bound_minus}


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def polar_set():
    return make_state_set(from_bloch(0, 0), from_bloch(math.pi / 3, 0))


def random_set(g, real=False):
    while True:
        s = make_state_set(random_state(g, real), random_state(g, real))
        if abs(s.determinant) > 1e-3:
            return s


def random_gate(g):
    v = g.normal(size=2) + 1j * g.normal(size=2)
    return GateSpec(*(v / np.linalg.norm(v)))


def feasible_instances(seed, n):
    """(set, gate, branch, eff) with eff a random shrink of the optimum."""
    g = np.random.default_rng(seed)
    out = []
    for k in range(n):
        s = random_set(g)
        gate = H if k % 2 == 0 else random_gate(g)
        branch = PLUS if k % 2 == 0 else MINUS
        best = np.array(maximize_branch(*build_grams(s, gate).branch(branch)).best_eff)
        shrink = 1.0 if k % 3 == 0 else g.uniform(0.3, 1.0)
        out.append((s, gate, branch, tuple(best * shrink)))
    return out


def test_criterion_1_polar_unity(capsys):
    t0 = time.perf_counter()
    s = polar_set()
    grams = build_grams(s, H)
    b = (bound_plus(grams), bound_minus(grams))
    avgs = [maximize_branch(*grams.branch(br)).best_average for br in (PLUS, MINUS)]
    elapsed = time.perf_counter() - t0
    ok = all(abs(x - 1) <= 1e-9 for x in (*b, *avgs)) and elapsed < 1.0
    report(capsys, 1, ok, f"bounds={b} best_average={avgs} runtime={elapsed:.3f}s")


def test_criterion_2_real_pairs_keep_gram(capsys):
    g = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        grams = build_grams(random_set(g, real=True), H)
        worst = max(
            worst,
            float(np.max(np.abs(grams.x_out_plus - grams.x_in_plus))),
            float(np.max(np.abs(grams.x_out_minus - grams.x_in_minus))),
        )
    report(capsys, 2, worst <= 1e-12, f"max |X_out - X_in| over 100 real pairs = {worst:.2e}")


def test_criterion_3_bound_is_necessary(capsys):
    g = np.random.default_rng(3)
    ticks = np.round(np.arange(21) * 0.05, 12)
    worst, feasible_points = -np.inf, 0
    for _ in range(100):
        grams = build_grams(random_set(g), H)
        caps = {br: BOUNDS[br](grams) for br in (PLUS, MINUS)}
        for e1 in ticks:
            for e2 in ticks:
                rep = check_feasible(grams, EfficiencyPair((e1, e2), (e1, e2)))
                for br, cls in ((PLUS, rep.class_plus), (MINUS, rep.class_minus)):
                    if cls.is_psd:
                        feasible_points += 1
                        worst = max(worst, 0.5 * (e1 + e2) - caps[br])
    ok = worst <= 1e-9
    report(capsys, 3, ok, f"max(average - bound) = {worst:.2e} over {feasible_points} feasible grid points")


def test_criterion_4_construction(capsys):
    worst = dict(sqrt=0.0, unitary=0.0, map=0.0, failure=0.0)
    for s, gate, branch, eff in feasible_instances(4, 50):
        b = build_branch(s, gate, eff, branch)
        m = synthesize(b)
        a = b.coeff_matrix
        worst["sqrt"] = max(worst["sqrt"], float(np.max(np.abs(a @ a.conj().T - b.residual))))
        worst["unitary"] = max(worst["unitary"], m.unitarity_residual)
        worst["map"] = max(worst["map"], m.map_residual)
        for (vin, _), e, t in zip(b.rows, b.eff, b.targets):
            failure = m.unitary @ vin - math.sqrt(e) * embed(t, 0)
            worst["failure"] = max(worst["failure"], float(np.linalg.norm(PROBE.split(failure)[:, 0])))
    ok = worst["sqrt"] <= 1e-9 and worst["unitary"] <= 1e-10 and worst["map"] <= 1e-9 and worst["failure"] <= 1e-10
    report(capsys, 4, ok, ", ".join(f"{k}={v:.2e}" for k, v in worst.items()))


def test_criterion_5_postselection(capsys):
    trials = 100_000
    worst_p, worst_f, worst_z, slowest = 0.0, 0.0, 0.0, 0.0
    for k, (s, gate, branch, eff) in enumerate(feasible_instances(5, 12)):
        t0 = time.perf_counter()
        b = build_branch(s, gate, eff, branch)
        m = synthesize(b)
        for i, vin in enumerate(b.inputs):
            e = b.eff[i]
            if e <= 1e-9:
                continue
            run = exact_run(m, vin)
            mc = monte_carlo(m, vin, trials, seed=1000 + 2 * k + i)
            sigma = math.sqrt(e * (1 - e) / trials)
            dev = abs(mc.observed_success_freq - e)
            worst_p = max(worst_p, abs(run.success_prob - e))
            worst_f = max(worst_f, 1 - run.fidelity)
            worst_z = max(worst_z, dev / sigma if sigma > 0 else (0.0 if dev == 0 else math.inf))
        slowest = max(slowest, time.perf_counter() - t0)
    ok = worst_p <= 1e-9 and worst_f <= 1e-9 and worst_z <= 4 and slowest < 5
    report(
        capsys,
        5,
        ok,
        f"|p - e|={worst_p:.2e} 1-fidelity={worst_f:.2e} max z={worst_z:.2f} slowest={slowest:.3f}s",
    )


def test_criterion_6_optimizer_vs_grid(capsys):
    g = np.random.default_rng(6)
    worst_gap, cert_lo, cert_hi, capped = -np.inf, np.inf, -np.inf, 0
    bad = []
    for k in range(50):
        s = random_set(g)
        gate = H if k % 2 == 0 else random_gate(g)
        for br in (PLUS, MINUS):
            x_in, x_out = build_grams(s, gate).branch(br)
            res = maximize_branch(x_in, x_out)
            oracle = grid_oracle(x_in, x_out, 0.01)[2]
            worst_gap = max(worst_gap, oracle - 0.01 - res.best_average)
            if res.best_eff == (1.0, 1.0):
                capped += 1
                continue
            c = res.boundary_certificate
            cert_lo, cert_hi = min(cert_lo, c), max(cert_hi, c)
            if not (-1e-9 <= c <= 0.02):
                bad.append((k, br, c))
    ok = worst_gap <= 0 and not bad
    report(
        capsys,
        6,
        ok,
        f"max(oracle - 0.01 - optimum)={worst_gap:.2e} certificate range=[{cert_lo:.2e}, {cert_hi:.2e}] "
        f"capped={capped}/100",
    )


def test_criterion_7_general_gate_reduction(capsys):
    g = np.random.default_rng(7)
    ident = GateSpec(1, 0)
    worst_block, worst_gram, eff_ok = 0.0, 0.0, True
    for _ in range(20):
        s = random_set(g)
        grams = build_grams(s, ident)
        for br in (PLUS, MINUS):
            eff_ok &= maximize_branch(*grams.branch(br)).best_eff == (1.0, 1.0)
        m = synthesize(build_branch(s, ident, (1, 1), PLUS))
        worst_block = max(worst_block, float(np.max(np.abs(m.success_block() - np.eye(2)))))

        h = build_grams(s, GateSpec(R2, R2))
        x1 = np.array([[1, s.pair_overlap], [np.conj(s.pair_overlap), 1]])
        x3 = np.array([[1, s.psibar1.inner(s.psibar2)], [s.psibar2.inner(s.psibar1), 1]])
        # X5/X6 against the half-sum closed forms of X2/X4
        a12 = 0.5 * (s.pair_overlap + s.psibar1.inner(s.psibar2) + s.psi1.inner(s.psibar2) + s.psibar1.inner(s.psi2))
        m12 = 0.5 * (s.pair_overlap + s.psibar1.inner(s.psibar2) - s.psi1.inner(s.psibar2) - s.psibar1.inner(s.psi2))
        x2 = np.array([[1, a12], [np.conj(a12), 1]])
        x4 = np.array([[1, m12], [np.conj(m12), 1]])
        worst_gram = max(
            worst_gram,
            float(np.max(np.abs(h.x_out_plus - x2))),
            float(np.max(np.abs(h.x_out_minus - x4))),
            float(np.max(np.abs(h.x_in_plus - x1))),
            float(np.max(np.abs(h.x_in_minus - x3))),
        )
    ok = eff_ok and worst_block <= 1e-10 and worst_gram <= 1e-12
    report(
        capsys,
        7,
        ok,
        f"identity best_eff=(1,1): {eff_ok}, |block - I|={worst_block:.2e}, |X5/X6 - X2/X4|={worst_gram:.2e}",
    )


def test_criterion_8_joint_audit(capsys):
    s = polar_set()
    rep = joint_audit(s, H, EfficiencyPair((1, 1), (1, 1)))
    rot = np.array([[R2, R2], [-R2, R2]])  # rotation by -pi/4 about y
    phase = max(r.phase_residual for r in rep.rows)
    strict_dev = max(abs(r.strict_residual - 2) for r in rep.rows)
    oracle_dev = 0.0
    for i, bar in enumerate(s.psibar):
        oracle_dev = max(oracle_dev, float(np.linalg.norm(PROBE.split(rep.images[i])[:, 0] - rot @ bar.vector)))

    g = np.random.default_rng(8)
    generic_ok, n_generic = True, 0
    while n_generic < 20:
        t = random_set(g)
        gate = H if n_generic % 2 == 0 else random_gate(g)
        grams = build_grams(t, gate)
        gamma = maximize_branch(*grams.branch(PLUS)).best_eff
        delta = maximize_branch(*grams.branch(MINUS)).best_eff
        r = joint_audit(t, gate, EfficiencyPair(gamma, delta))
        for row in r.rows:
            vals = [row.strict_residual, row.phase_residual, row.success_prob]
            if row.post_fidelity is not None:
                vals.append(row.post_fidelity)
            generic_ok &= all(math.isfinite(v) for v in vals)
        n_generic += 1
    ok = phase <= 1e-9 and strict_dev <= 1e-9 and oracle_dev <= 1e-9 and generic_ok
    report(
        capsys,
        8,
        ok,
        f"polar phase residual={phase:.2e} |strict - 2|={strict_dev:.2e} |image - rotation|={oracle_dev:.2e} "
        f"generic finite={generic_ok} ({n_generic} sets)",
    )
