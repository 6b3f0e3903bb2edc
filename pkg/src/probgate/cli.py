"""Command-line front end.

Every command prints exactly one JSON document on stdout. Exit status is 0 on
success, 2 when the requested efficiencies are infeasible and 1 for any other
input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import NotNormalized, ParseError, ProbGateError, ZeroSuccessProbability
from .feasibility import EfficiencyPair, bound_minus_detail, bound_plus_detail, is_polar_great_circle
from .grams import GateSpec, GramSet, build_grams
from .optimize import OptimizationResult, maximize_branch
from .simulate import exact_run, monte_carlo
from .states import QubitState, StateSet, from_bloch, make_state_set
from .synthesis import MINUS, PLUS, SynthesisResult, build_branch, joint_audit, synthesize

SCHEMA_VERSION = 1
COMMANDS = ("bound", "optimize", "synthesize", "simulate", "audit", "demo")
RENORM_SLACK = 1e-6
POLAR_PRESET = ("bloch:0,0", "bloch:1.0471975511965976,0")

log = logging.getLogger("probgate")


def parse_state_spec(text: str) -> QubitState:
    """``bloch:theta,phi`` (radians) or ``amp:re0,im0,re1,im1``."""
    kind, sep, body = str(text).partition(":")
    if not sep:
        raise ParseError(f"state spec {text!r} needs a 'bloch:' or 'amp:' prefix")
    try:
        nums = [float(x) for x in body.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad number in state spec {text!r}") from exc
    if not all(math.isfinite(x) for x in nums):
        raise ParseError(f"non-finite number in state spec {text!r}")

    kind = kind.strip().lower()
    if kind == "bloch":
        if len(nums) != 2:
            raise ParseError("bloch spec takes exactly theta,phi")
        return from_bloch(*nums)
    if kind == "amp":
        if len(nums) != 4:
            raise ParseError("amp spec takes exactly re0,im0,re1,im1")
        v = np.array([complex(nums[0], nums[1]), complex(nums[2], nums[3])])
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > RENORM_SLACK:
            raise NotNormalized(f"amplitude norm {norm:.9g} is not within {RENORM_SLACK} of 1")
        v = v / norm
        return QubitState(v[0], v[1])
    raise ParseError(f"unknown state spec kind {kind!r}")


def parse_gate(text: str) -> GateSpec:
    text = str(text).strip()
    if text.lower() == "hadamard":
        return GateSpec.hadamard()
    try:
        nums = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad gate spec {text!r}") from exc
    if len(nums) != 4:
        raise ParseError("gate takes 'hadamard' or a_re,a_im,b_re,b_im")
    a, b = complex(nums[0], nums[1]), complex(nums[2], nums[3])
    norm = math.hypot(abs(a), abs(b))
    if abs(norm - 1.0) > RENORM_SLACK:
        raise NotNormalized(f"gate coefficients have norm {norm:.9g}")
    return GateSpec(a / norm, b / norm)


def parse_eff(text: str) -> EfficiencyPair:
    try:
        nums = [float(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise ParseError(f"bad efficiency list {text!r}") from exc
    if len(nums) == 2:
        nums = nums * 2
    if len(nums) != 4:
        raise ParseError("--eff takes g1,g2 or g1,g2,d1,d2")
    return EfficiencyPair(tuple(nums[:2]), tuple(nums[2:]))


@dataclass
class RunConfig:
    command: str
    gate: GateSpec
    state1: QubitState
    state2: QubitState
    eff: EfficiencyPair | None = None
    trials: int = 100_000
    seed: int = 0
    tol: float = 1e-9
    equal_eff: bool = False
    figures: Path | None = None


# --------------------------------------------------------------------------
# JSON encoding


def _c(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _mat(m) -> list:
    return [[_c(z) for z in row] for row in np.asarray(m)]


def _vec(v) -> list:
    return [_c(z) for z in np.asarray(v)]


def _state(s: QubitState) -> dict:
    return {"alpha": _c(s.alpha), "beta": _c(s.beta)}


def _check_finite(obj: Any, path: str = "$") -> None:
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError(f"non-finite number at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _check_finite(v, f"{path}[{i}]")


# --------------------------------------------------------------------------
# report sections


def _grams_section(g: GramSet) -> dict:
    return {
        "x_in_plus": _mat(g.x_in_plus),
        "x_out_plus": _mat(g.x_out_plus),
        "x_in_minus": _mat(g.x_in_minus),
        "x_out_minus": _mat(g.x_out_minus),
    }


def _bounds_section(g: GramSet) -> dict:
    out = {}
    for name, b in ((PLUS, bound_plus_detail(g)), (MINUS, bound_minus_detail(g))):
        out[name] = {"value": b.value, "capped": b.capped, "uncapped": b.raw}
    return out


def _opt_section(r: OptimizationResult) -> dict:
    return {
        "best_eff": list(r.best_eff),
        "best_average": r.best_average,
        "boundary_certificate": r.boundary_certificate,
        "iterations": r.iterations,
    }


def _synth_section(m: SynthesisResult) -> dict:
    src = m.source
    return {
        "eff": list(src.eff),
        "residual_eigs": list(src.residual_eigs),
        "coeff_matrix": _mat(src.coeff_matrix),
        "unitarity_residual": m.unitarity_residual,
        "gram_residual": m.gram_residual,
        "map_residual": m.map_residual,
        "unitary": _mat(m.unitary),
    }


def _sim_section(m: SynthesisResult, states: StateSet, cfg: RunConfig) -> list[dict]:
    names = ("psi1", "psi2") if m.branch == PLUS else ("psibar1", "psibar2")
    inputs = states.psi if m.branch == PLUS else states.psibar
    rows = []
    for k, (name, s) in enumerate(zip(names, inputs)):
        try:
            ex = exact_run(m, s)
            exact = {"success_prob": ex.success_prob, "post_state": _vec(ex.post_state), "fidelity": ex.fidelity}
        except ZeroSuccessProbability:
            exact = {"success_prob": 0.0, "post_state": None, "fidelity": None}
        mc = monte_carlo(m, s, cfg.trials, cfg.seed + k)
        rows.append(
            {
                "input": name,
                "exact": exact,
                "monte_carlo": {
                    "trials": mc.trials,
                    "seed": mc.seed,
                    "observed_success_freq": mc.observed_success_freq,
                    "counts": list(mc.counts),
                    "post_fidelity": mc.post_fidelity,
                },
            }
        )
    return rows


def _audit_section(states: StateSet, cfg: RunConfig, eff: EfficiencyPair) -> dict:
    rep = joint_audit(states, cfg.gate, eff, cfg.tol)
    return {
        "gamma": list(eff.gamma),
        "delta": list(eff.delta),
        "expansion": _mat(rep.expansion),
        "rows": [
            {
                "input": f"psibar{i + 1}",
                "strict_residual": r.strict_residual,
                "phase_residual": r.phase_residual,
                "success_prob": r.success_prob,
                "post_fidelity": r.post_fidelity,
            }
            for i, r in enumerate(rep.rows)
        ],
    }


def run(cfg: RunConfig) -> dict:
    """Execute one command and return the report document."""
    states = make_state_set(cfg.state1, cfg.state2)
    grams = build_grams(states, cfg.gate)
    report: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "command": cfg.command,
        "inputs": {
            "gate": {"a": _c(cfg.gate.a), "b": _c(cfg.gate.b)},
            "state1": _state(cfg.state1),
            "state2": _state(cfg.state2),
            "eff": None if cfg.eff is None else {"gamma": list(cfg.eff.gamma), "delta": list(cfg.eff.delta)},
            "trials": cfg.trials,
            "seed": cfg.seed,
            "tol": cfg.tol,
            "equal_eff": cfg.equal_eff,
        },
        "states": {
            "pair_overlap": _c(states.pair_overlap),
            "independent": bool(states.independent),
            "polar_great_circle": bool(is_polar_great_circle(states)),
        },
        "grams": _grams_section(grams),
        "bounds": _bounds_section(grams),
    }
    if cfg.command == "bound":
        return report

    opt = None
    if cfg.command in ("optimize", "demo") or cfg.eff is None:
        opt = {b: maximize_branch(*grams.branch(b), equal_eff=cfg.equal_eff) for b in (PLUS, MINUS)}
        report["optimizer"] = {b: _opt_section(r) for b, r in opt.items()}
    if cfg.command == "optimize":
        return report

    eff = cfg.eff or EfficiencyPair(opt[PLUS].best_eff, opt[MINUS].best_eff)

    if cfg.command in ("synthesize", "simulate", "demo"):
        machines = {b: synthesize(build_branch(states, cfg.gate, eff.branch(b), b, cfg.tol)) for b in (PLUS, MINUS)}
        report["synthesis"] = {b: _synth_section(m) for b, m in machines.items()}
        if cfg.command in ("simulate", "demo"):
            report["simulation"] = {b: _sim_section(m, states, cfg) for b, m in machines.items()}

    if cfg.command in ("audit", "demo"):
        report["audit"] = _audit_section(states, cfg, eff)

    if cfg.figures is not None:
        from . import plotting

        report["figures"] = plotting.render_report_figures(report, grams, cfg.figures)
    return report


# --------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="probgate",
        description="Probabilistic complement gates on two qubit states. Prints one JSON report.",
        epilog="commands: bound (Gram matrices and bounds), optimize (+ best efficiencies), "
        "synthesize (+ unitaries), simulate (+ post-selection runs), audit (+ single-machine check), "
        "demo (everything; polar preset states by default)",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--gate", help="'hadamard' or a_re,a_im,b_re,b_im")
    p.add_argument("--state1", help="bloch:theta,phi or amp:re0,im0,re1,im1")
    p.add_argument("--state2")
    p.add_argument("--eff", help="g1,g2[,d1,d2]; omitted means use the optimizer")
    p.add_argument("--trials", type=int, help="Monte Carlo trials per input (default 100000)")
    p.add_argument("--seed", type=int, help="SplitMix64 seed (default 0)")
    p.add_argument("--tol", type=float, help="PSD tolerance (default 1e-9)")
    p.add_argument("--equal-eff", action="store_true", default=None, help="optimize with e1 = e2")
    p.add_argument("--input", type=Path, help="JSON object with the same keys as the flags")
    p.add_argument("--figures", type=Path, help="directory for PNG figures")
    return p


def _merge(ns: argparse.Namespace) -> dict:
    opts: dict[str, Any] = {}
    if ns.input is not None:
        try:
            data = json.loads(Path(ns.input).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read --input file: {exc}") from exc
        if not isinstance(data, dict):
            raise ParseError("--input file must hold a JSON object")
        for k, v in data.items():
            opts[k.lstrip("-").replace("-", "_")] = v
    for k, v in vars(ns).items():
        if v is not None and k not in ("command", "input"):
            opts[k] = v
    return opts


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = _merge(ns)
    s1, s2 = opts.get("state1"), opts.get("state2")
    if s1 is None and s2 is None and ns.command == "demo":
        s1, s2 = POLAR_PRESET
    if s1 is None or s2 is None:
        raise ParseError("--state1 and --state2 are required")
    trials = int(opts.get("trials", 100_000))
    if trials < 1:
        raise ParseError("--trials must be >= 1")
    return RunConfig(
        command=ns.command,
        gate=parse_gate(opts.get("gate", "hadamard")),
        state1=parse_state_spec(s1),
        state2=parse_state_spec(s2),
        eff=parse_eff(opts["eff"]) if opts.get("eff") is not None else None,
        trials=trials,
        seed=int(opts.get("seed", 0)),
        tol=float(opts.get("tol", 1e-9)),
        equal_eff=bool(opts.get("equal_eff", False)),
        figures=Path(opts["figures"]) if opts.get("figures") else None,
    )


def _emit(doc: dict, stream) -> None:
    _check_finite(doc)
    stream.write(json.dumps(doc, indent=2, allow_nan=False, ensure_ascii=False))
    stream.write("\n")


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        doc = run(cfg)
    except ProbGateError as exc:
        log.error("%s: %s", exc.name, exc)
        _emit(
            {"schema": SCHEMA_VERSION, "command": ns.command, "error": {"name": exc.name, "message": str(exc)}},
            stdout,
        )
        return exc.exit_code
    _emit(doc, stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
