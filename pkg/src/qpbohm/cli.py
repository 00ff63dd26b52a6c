"""Command-line front-end: qp, bohm, ontology, and verify subcommands.

Outputs are deterministic: a fixed scenario and seed reproduce files byte
for byte.  Every emitted file starts with a comment header carrying the
tool version, a hash of the scenario, and the alpha parameter in use.
Complex values are always written as separate re/im columns with
shortest-round-trip decimal formatting.

Exit codes: 0 success, 1 identity failure (verify), 2 validation error,
3 runtime error (such as a trajectory hitting an undefined region).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .alpha import parse_alpha
from .bohm import (
    BohmConfig,
    Grid1D,
    WaveFunction,
    build_hamiltonian,
    equivariance_check,
    evolve,
    integrate_trajectories,
    local_value,
    momentum_operator,
    sample_initial_positions,
    velocity_field,
)
from .errors import (
    DimMismatch,
    NodeEncounter,
    NonHermitian,
    NotProjector,
    OrthogonalPrePost,
    SolverFailure,
    WrongKind,
    ZeroDensityPoint,
)
from .hilbert import Observable, StateVector
from .ontology import (
    CLASSICAL_TOY_OBSERVABLES,
    CLASSICAL_TOY_PREPARATIONS,
    OS_TOY_OBSERVABLES,
    OS_TOY_PREPARATIONS,
    bohmian_grid_model,
    classical_toy_model,
    classify_synlogicality,
    os_toy_model,
)
from .quasiprob import conditional_qp, joint_qp, marginal_qp
from .verify import random_hermitian, random_state, run_identity_suite

VALIDATION_ERRORS = (
    ValueError,
    KeyError,
    DimMismatch,
    NonHermitian,
    NotProjector,
    WrongKind,
    OrthogonalPrePost,
    json.JSONDecodeError,
    FileNotFoundError,
)
RUNTIME_ERRORS = (NodeEncounter, SolverFailure, ZeroDensityPoint)


def _fmt(x: float) -> str:
    return repr(float(x))


def _scenario_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _header(scenario_hash: str, alpha: complex) -> str:
    return (
        f"# qpbohm {__version__}\n"
        f"# scenario: {scenario_hash}\n"
        f"# alpha: {_fmt(alpha.real)},{_fmt(alpha.imag)}\n"
    )


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


PAULI = {
    "pauli-x": np.array([[0, 1], [1, 0]], dtype=complex),
    "pauli-y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "pauli-z": np.array([[1, 0], [0, -1]], dtype=complex),
}

NAMED_STATES = {
    "+z": [1, 0],
    "0": [1, 0],
    "-z": [0, 1],
    "1": [0, 1],
    "+x": [2**-0.5, 2**-0.5],
    "-x": [2**-0.5, -(2**-0.5)],
    "+y": [2**-0.5, 2**-0.5 * 1j],
    "-y": [2**-0.5, -(2**-0.5) * 1j],
}


def resolve_observable(spec: str) -> Observable:
    """A named builtin (pauli-*, spin-J) or a JSON file with dim/re/im."""
    if spec in PAULI:
        return Observable(PAULI[spec])
    if spec.startswith("spin-"):
        j = Fraction(spec[len("spin-") :])
        if j <= 0 or (2 * j).denominator != 1:
            raise ValueError(f"spin label must be a positive (half-)integer, got {spec!r}")
        m_values = [float(j - k) for k in range(int(2 * j) + 1)]
        return Observable(np.diag(m_values).astype(complex))
    return Observable.from_json_dict(json.loads(Path(spec).read_text()))


def resolve_state(spec: str) -> StateVector:
    """A named qubit state (+x, -y, 0, ...) or a JSON file with dim/re/im."""
    if spec in NAMED_STATES:
        return StateVector(np.asarray(NAMED_STATES[spec], dtype=complex))
    return StateVector.from_json_dict(json.loads(Path(spec).read_text()))


# ---------------------------------------------------------------------------
# qp


def _distribution_csv(dist, scenario_hash: str) -> str:
    lines = [_header(scenario_hash, dist.alpha).rstrip("\n")]
    if dist.kind == "joint":
        lines.append("b,a,re,im")
        for (b, a), v in zip(dist.outcomes, dist.values):
            lines.append(f"{_fmt(b)},{_fmt(a)},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        lines.append("outcome,re,im")
        for o, v in zip(dist.outcomes, dist.values):
            lines.append(f"{_fmt(o)},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def _distribution_json(dist, scenario_hash: str) -> str:
    doc = {
        "meta": {
            "tool": "qpbohm",
            "version": __version__,
            "scenario": scenario_hash,
            "alpha": [dist.alpha.real, dist.alpha.imag],
        },
        "kind": dist.kind,
        "outcomes": [list(o) if isinstance(o, tuple) else o for o in dist.outcomes],
        "re": dist.values.real.tolist(),
        "im": dist.values.imag.tolist(),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def run_qp(args) -> int:
    modes = [m for m in ("conditional", "joint", "marginal") if getattr(args, m)]
    if len(modes) != 1:
        raise ValueError("exactly one of --conditional/--joint/--marginal is required")
    mode = modes[0]
    alpha = parse_alpha(args.alpha)
    A = resolve_observable(args.A)
    psi = resolve_state(args.pre)

    if mode == "conditional":
        if args.post is None:
            raise ValueError("--conditional requires --post (the post-selected state)")
        dist = conditional_qp(A, psi, resolve_state(args.post), alpha)
    else:
        if args.B is None:
            raise ValueError(f"--{mode} requires --B (the reference observable)")
        B = resolve_observable(args.B)
        dist = joint_qp(B, A, psi, alpha) if mode == "joint" else marginal_qp(B, A, psi, alpha)

    payload = {
        "command": "qp",
        "mode": mode,
        "A": args.A,
        "B": args.B,
        "pre": args.pre,
        "post": args.post,
        "alpha": args.alpha,
    }
    h = _scenario_hash(payload)
    text = _distribution_csv(dist, h) if args.format == "csv" else _distribution_json(dist, h)
    _write_text(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# bohm


def _build_bohm_inputs(scenario: dict):
    g = scenario["grid"]
    grid = Grid1D(n_points=int(g["n_points"]), x_min=float(g["x_min"]), x_max=float(g["x_max"]))
    pot = scenario.get("potential", {"kind": "free"})
    kind = pot.get("kind", "free")
    if kind == "free":
        potential = None
    elif kind == "harmonic":
        omega = float(pot["omega"])
        center = float(pot.get("center", 0.0))
        mass = float(scenario.get("mass", 1.0))
        potential = 0.5 * mass * omega**2 * (grid.points - center) ** 2
    elif kind == "table":
        potential = np.asarray(pot["values"], dtype=float)
    else:
        raise ValueError(f"unknown potential kind {kind!r}")
    cfg = BohmConfig(
        hbar=float(scenario.get("hbar", 1.0)),
        mass=float(scenario.get("mass", 1.0)),
        dt=float(scenario["dt"]),
        potential=potential,
    )
    init = scenario["initial"]
    if init.get("kind", "gaussian") != "gaussian":
        raise ValueError(f"unknown initial kind {init.get('kind')!r}")
    psi0 = WaveFunction.gaussian(
        grid, x0=float(init["x0"]), sigma0=float(init["sigma0"]), k0=float(init.get("k0", 0.0))
    )
    return grid, cfg, psi0


def _field_csv(x: np.ndarray, values: np.ndarray, scenario_hash: str, alpha: complex) -> str:
    lines = [_header(scenario_hash, alpha).rstrip("\n"), "x,re,im"]
    values = np.asarray(values, dtype=complex)
    for xi, v in zip(x, values):
        lines.append(f"{_fmt(xi)},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def run_bohm(args) -> int:
    if args.scenario is None:
        raise ValueError("bohm requires --scenario FILE")
    scenario = json.loads(Path(args.scenario).read_text())
    grid, cfg, psi0 = _build_bohm_inputs(scenario)
    alpha = parse_alpha(str(scenario.get("alpha", "0.5"))) if not isinstance(
        scenario.get("alpha"), list
    ) else complex(scenario["alpha"][0], scenario["alpha"][1])
    seed = int(scenario.get("seed", args.seed))
    m = int(scenario["trajectories"])
    t_final = float(scenario["t_final"])

    H = build_hamiltonian(grid, cfg)
    x0 = sample_initial_positions(psi0, m, seed)
    ensemble = integrate_trajectories(psi0, H, cfg, x0, t_final, seed=seed)
    n_steps = ensemble.times.size - 1
    psi_t = evolve(psi0, H, cfg, n_steps)
    ks = equivariance_check(ensemble, psi_t)

    h = _scenario_hash({"command": "bohm", "scenario": scenario})
    outdir = Path(args.out) if args.out else Path(".")
    outdir.mkdir(parents=True, exist_ok=True)

    lines = [_header(h, alpha).rstrip("\n")]
    lines.append("t," + ",".join(f"x_{k + 1}" for k in range(m)))
    for t, row in zip(ensemble.times, ensemble.positions):
        lines.append(_fmt(t) + "," + ",".join(_fmt(v) for v in row))
    (outdir / "trajectories.csv").write_text("\n".join(lines) + "\n")

    v_final, _ = velocity_field(psi_t, cfg)
    momentum_field = local_value(momentum_operator(grid, cfg.hbar), psi_t, alpha)
    (outdir / "field_final_wavefunction.csv").write_text(
        _field_csv(grid.points, psi_t.amplitudes, h, alpha)
    )
    (outdir / "field_final_velocity.csv").write_text(_field_csv(grid.points, v_final, h, alpha))
    (outdir / "field_final_local_momentum.csv").write_text(
        _field_csv(grid.points, momentum_field.values, h, alpha)
    )

    report = {
        "meta": {"tool": "qpbohm", "version": __version__, "scenario": h},
        "ks_statistic": ks,
        "n_trajectories": m,
        "t_final": t_final,
        "ordering_preserved": ensemble.ordering_preserved,
    }
    (outdir / "equivariance.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# ontology


def run_ontology(args) -> int:
    if args.scenario is None:
        raise ValueError("ontology requires --scenario FILE")
    scenario = json.loads(Path(args.scenario).read_text())
    name = scenario["model"]
    seed = int(scenario.get("seed", args.seed))

    if name == "bohmian-grid":
        dim = int(scenario.get("dim", 8))
        alpha_spec = scenario.get("alpha", 0.5)
        alpha = (
            complex(alpha_spec[0], alpha_spec[1])
            if isinstance(alpha_spec, list)
            else parse_alpha(str(alpha_spec))
        )
        rng = np.random.default_rng(seed)
        n_obs = int(scenario.get("n_observables", 2))
        n_prep = int(scenario.get("n_preparations", 2))
        model = bohmian_grid_model(dim, alpha)
        observables = [random_hermitian(rng, dim) for _ in range(n_obs)]
        preparations = [random_state(rng, dim) for _ in range(n_prep)]
    elif name == "classical-toy":
        model = classical_toy_model()
        observables = list(CLASSICAL_TOY_OBSERVABLES)
        preparations = list(CLASSICAL_TOY_PREPARATIONS)
    elif name == "os-toy":
        model = os_toy_model()
        observables = list(OS_TOY_OBSERVABLES)
        preparations = list(OS_TOY_PREPARATIONS)
    else:
        raise ValueError(f"unknown model {name!r}; expected bohmian-grid, classical-toy, or os-toy")

    report = classify_synlogicality(model, observables, preparations)
    doc = {
        "meta": {
            "tool": "qpbohm",
            "version": __version__,
            "scenario": _scenario_hash({"command": "ontology", "scenario": scenario}),
            "model": name,
        },
        "report": report.to_json_dict(),
    }
    _write_text(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify


def run_verify(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be at least 1")
    report = run_identity_suite(
        dim=args.dim, trials=args.trials, seed=args.seed, perturb=args.perturb
    )
    report["meta"] = {"tool": "qpbohm", "version": __version__}
    _write_text(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0 if report["all_passed"] else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpbohm",
        description="quasiprobability distributions, guided trajectories, model classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    qp = sub.add_parser("qp", help="conditional / joint / marginal quasiprobabilities")
    qp.add_argument("--conditional", action="store_true")
    qp.add_argument("--joint", action="store_true")
    qp.add_argument("--marginal", action="store_true")
    qp.add_argument("--A", required=True, help="observable: pauli-x/y/z, spin-J, or JSON file")
    qp.add_argument("--B", default=None, help="reference observable (joint/marginal)")
    qp.add_argument("--pre", required=True, help="pre-selected state: +x, -y, 0, ..., or JSON file")
    qp.add_argument("--post", default=None, help="post-selected state (conditional)")
    qp.add_argument("--alpha", default="0.5", help="RE or RE,IM (default 0.5: real symmetric mixture)")
    qp.add_argument("--out", default=None)
    qp.add_argument("--format", choices=("csv", "json"), default="csv")
    qp.set_defaults(func=run_qp)

    bohm = sub.add_parser("bohm", help="guided-trajectory simulation from a scenario file")
    bohm.add_argument("--scenario", required=True)
    bohm.add_argument("--out", default=None, help="output directory (default: current)")
    bohm.add_argument("--seed", type=int, default=0)
    bohm.add_argument("--format", choices=("csv", "json"), default="csv")
    bohm.set_defaults(func=run_bohm)

    onto = sub.add_parser("ontology", help="classify a built-in hidden-state model")
    onto.add_argument("--scenario", required=True)
    onto.add_argument("--out", default=None)
    onto.add_argument("--seed", type=int, default=0)
    onto.add_argument("--format", choices=("csv", "json"), default="json")
    onto.set_defaults(func=run_ontology)

    ver = sub.add_parser("verify", help="run the randomized identity suite")
    ver.add_argument("--dim", type=int, default=4)
    ver.add_argument("--trials", type=int, default=50)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--perturb", type=float, default=0.0, help="fault injection, test-only")
    ver.add_argument("--out", default=None)
    ver.add_argument("--format", choices=("json",), default="json")
    ver.set_defaults(func=run_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except RUNTIME_ERRORS as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
