"""Command line surface: degree evaluation, sweeps, figure data, self-checks.

Exit codes: 0 success, 1 failed validation or optimizer failure, 2 malformed
state spec or arguments, 3 semiclassical degree requested for the vacuum.
All numeric output uses 12 significant digits so that identical inputs and
seeds reproduce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import metrics, two_manifold
from .degrees import (
    OptimizerSettings,
    degree_bures_diagonal,
    degree_bures_general,
    degree_bures_pure,
    degree_discrete,
    degree_hs,
    BuresOptimizationError,
    project_weighted_simplex,
)
from .fock import DensityMatrix, dimension
from .sampling import (
    random_block_unitary,
    random_density_matrix,
    random_unpolarized_spectrum,
)
from .state_spec import LoadedState, StateSpecError, load_state
from .states import CoherentSpec, diagonal_mixture, fock_state, su2_coherent, two_mode_coherent
from .stokes import apply_unitary, semiclassical_degree, stokes_matrix
from .two_manifold import FIGURE1_COLUMNS, TwoManifoldState, figure1_sweep, make_row
from .unpolarized import UnpolarizedSpectrum, hs_closest, to_density

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_SPEC = 2
EXIT_VACUUM = 3

MEASURES = ("hs", "bures", "sc", "discrete")


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by all subcommands."""

    cutoff: int | None = None
    tail_tol: float = 1e-12
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    output_format: str = "csv"
    seed: int = 0

    def __post_init__(self):
        if self.tail_tol <= 0 or self.optimizer.kkt_tol <= 0 or self.optimizer.fd_step <= 0:
            raise ValueError("tolerances must be positive")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _config_from_args(args) -> RunConfig:
    opt = OptimizerSettings(
        max_iter=args.max_iter,
        kkt_tol=args.kkt_tol,
        alternative_definition=getattr(args, "alternative_bures", False),
    )
    return RunConfig(
        cutoff=args.cutoff,
        tail_tol=args.tail_tol,
        optimizer=opt,
        output_format=args.format,
        seed=args.seed,
    )


def _bures_report(loaded: LoadedState, cfg: RunConfig):
    alt = cfg.optimizer.alternative_definition
    if loaded.pure is not None:
        return degree_bures_pure(loaded.pure, alternative=alt)
    if loaded.diagonal_probs is not None:
        return degree_bures_diagonal(loaded.diagonal_probs, alternative=alt)
    return degree_bures_general(loaded.rho, cfg.optimizer)


def cmd_degree(args, out) -> int:
    cfg = _config_from_args(args)
    measures = [m.strip() for m in args.measures.split(",") if m.strip()]
    for m in measures:
        if m not in MEASURES:
            print(f"error: unknown measure {m!r}", file=sys.stderr)
            return EXIT_BAD_SPEC
    try:
        loaded = load_state(args.state_spec, cutoff_override=cfg.cutoff,
                            tail_tol=cfg.tail_tol)
    except StateSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC

    results = {}
    for m in measures:
        if m == "hs":
            results[m] = degree_hs(loaded.rho)
        elif m == "bures":
            try:
                results[m] = _bures_report(loaded, cfg)
            except BuresOptimizationError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CHECK_FAILED
        elif m == "sc":
            try:
                results[m] = semiclassical_degree(loaded.rho)
            except ValueError:
                print("error: semiclassical degree undefined for vacuum", file=sys.stderr)
                return EXIT_VACUUM
        else:
            results[m] = degree_discrete(loaded.rho)

    if cfg.output_format == "json":
        payload = {"state": str(args.state_spec), "measures": {}}
        if loaded.tail_mass is not None:
            payload["truncation_tail_mass"] = loaded.tail_mass
        for m, r in results.items():
            if m in ("sc", "discrete"):
                payload["measures"][m] = {"value": float(r)}
            else:
                payload["measures"][m] = {
                    "value": r.value,
                    "method": r.method,
                    "iterations": r.iterations,
                    "residual": r.residual,
                    "optimal_spectrum": [float(v) for v in r.optimal_spectrum.lambdas],
                }
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write("measure,value,method,iterations,residual,optimal_spectrum\n")
        for m, r in results.items():
            if m in ("sc", "discrete"):
                out.write(f"{m},{_fmt(r)},closed_form,0,0,\n")
            else:
                spectrum = " ".join(_fmt(v) for v in r.optimal_spectrum.lambdas)
                out.write(
                    f"{m},{_fmt(r.value)},{r.method},{r.iterations},"
                    f"{_fmt(r.residual)},{spectrum}\n"
                )
    return EXIT_OK


def cmd_figure1(args, out) -> int:
    if args.n1 == args.n2 or args.n1 < 0 or args.n2 < 0:
        print("error: manifolds must be distinct and nonnegative", file=sys.stderr)
        return EXIT_BAD_SPEC
    rows = figure1_sweep(args.n1, args.n2, args.resolution)
    if (args.n1, args.n2) == (1, 2):
        rows.append(make_row(1, 2, 0.9, 0.09, "A"))
        rows.append(make_row(1, 2, 4.0 / 7.0, 0.0, "B"))
        rows.sort(key=lambda r: (r.p, r.case))
    if args.format == "json":
        payload = [
            {c: getattr(r, a) for c, a in zip(FIGURE1_COLUMNS, (
                "p", "q_squared", "case", "p_hs", "p_bures", "lambda1", "lambda2"))}
            for r in rows
        ]
        json.dump(payload, out, indent=2)
        out.write("\n")
    else:
        out.write(",".join(FIGURE1_COLUMNS) + "\n")
        for r in rows:
            out.write(
                f"{_fmt(r.p)},{_fmt(r.q_squared)},{r.case},{_fmt(r.p_hs)},"
                f"{_fmt(r.p_bures)},{_fmt(r.lambda1)},{_fmt(r.lambda2)}\n"
            )
    return EXIT_OK


def _sweep_state(family: str, value: float, args, cfg: RunConfig):
    if family == "fock":
        n = int(value)
        return fock_state(n, n, max(n, cfg.cutoff or 0)), None
    if family == "su2_coherent":
        n = int(value)
        return su2_coherent(n, args.theta, args.phi, max(n, cfg.cutoff or 0)), None
    spec = CoherentSpec.from_mean_photon(value, args.theta, args.phi, cfg.tail_tol)
    trunc = two_mode_coherent(spec, cutoff=cfg.cutoff)
    return trunc.state, trunc.tail_mass


def cmd_sweep(args, out) -> int:
    cfg = _config_from_args(args)
    measures = [m.strip() for m in args.measures.split(",") if m.strip()]
    for m in measures:
        if m not in MEASURES:
            print(f"error: unknown measure {m!r}", file=sys.stderr)
            return EXIT_BAD_SPEC
    try:
        values = sorted(float(v) for v in args.values.split(","))
    except ValueError:
        print("error: --values must be a comma-separated list of numbers", file=sys.stderr)
        return EXIT_BAD_SPEC

    rows = []
    for value in values:
        try:
            psi, _tail = _sweep_state(args.family, value, args, cfg)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_SPEC
        rho = DensityMatrix.from_pure(psi)
        row = {"param": value}
        for m in measures:
            if m == "hs":
                row["P_HS"] = degree_hs(rho).value
            elif m == "bures":
                alt = cfg.optimizer.alternative_definition
                row["P_B"] = degree_bures_pure(psi, alternative=alt).value
            elif m == "sc":
                try:
                    row["P_sc"] = semiclassical_degree(rho)
                except ValueError:
                    print("error: semiclassical degree undefined for vacuum", file=sys.stderr)
                    return EXIT_VACUUM
            else:
                row["P_dis"] = float(degree_discrete(rho))
        rows.append(row)

    columns = list(rows[0].keys()) if rows else ["param"]
    if cfg.output_format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate: oracle cross-checks with pass/fail per check
# ---------------------------------------------------------------------------


def _check_commutators() -> tuple[bool, str]:
    cutoff = 3
    s = {name: np.asarray(stokes_matrix(name, cutoff)) for name in ("S0", "S1", "S2", "S3")}
    worst = 0.0
    for a, b, c in (("S1", "S2", "S3"), ("S2", "S3", "S1"), ("S3", "S1", "S2")):
        dev = np.abs(s[a] @ s[b] - s[b] @ s[a] - 2j * s[c]).max()
        worst = max(worst, dev)
    for name in ("S1", "S2", "S3"):
        worst = max(worst, np.abs(s[name] @ s["S0"] - s["S0"] @ s[name]).max())
    return worst < 1e-12, f"max commutator deviation {worst:.3e}"


def _check_uhlmann_closed_form() -> tuple[bool, str]:
    worst = 0.0
    for p in np.linspace(0.05, 0.95, 7):
        for frac in np.linspace(0.0, 1.0, 5):
            state = TwoManifoldState(1, 2, float(p), math.sqrt(frac * p * (1 - p)))
            rho = two_manifold.embed(state, 2)
            for t in (0.25, 0.5, 0.75):
                lam1 = t / 2.0
                lam2 = (1.0 - 2.0 * lam1) / 3.0
                sigma = to_density(UnpolarizedSpectrum(2, np.array([0.0, lam1, lam2])))
                closed = two_manifold.fidelity_closed(state, lam1, lam2)
                worst = max(worst, abs(metrics.fidelity(rho, sigma) - closed))
    return worst < 1e-10, f"max |uhlmann - closed form| = {worst:.3e}"


def _check_bures_grid(rng) -> tuple[bool, str]:
    worst_lam = 0.0
    worst_val = 0.0
    grid = np.linspace(0.0, 0.5, 5001)
    for _ in range(5):
        p = float(rng.uniform(0.05, 0.95))
        frac = float(rng.uniform(0.0, 1.0))
        state = TwoManifoldState(1, 2, p, math.sqrt(frac * p * (1 - p)))
        lam2 = (1.0 - 2.0 * grid) / 3.0
        gap = state.coherence_gap
        fid = grid * p + lam2 * (1 - p) + 2 * np.sqrt(np.maximum(grid * lam2 * gap, 0.0))
        lam1_star, _ = two_manifold.optimal_spectrum(state)
        best = int(np.argmax(fid))
        worst_lam = max(worst_lam, abs(grid[best] - lam1_star))
        worst_val = max(worst_val, abs(fid[best] - two_manifold.sup_fidelity(state)))
    ok = worst_lam < 2e-4 and worst_val < 1e-7
    return ok, f"grid-vs-closed-form: |dlam1| = {worst_lam:.3e}, |dF| = {worst_val:.3e}"


def _check_diagonal_vs_optimizer(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(5):
        cutoff = 3
        raw = [rng.uniform(0.0, 1.0, size=n + 1) for n in range(cutoff + 1)]
        total = sum(r.sum() for r in raw)
        probs = [list(r / total) for r in raw]
        closed = degree_bures_diagonal(probs).value
        numeric = degree_bures_general(diagonal_mixture(probs, cutoff=cutoff)).value
        worst = max(worst, abs(closed - numeric))
    return worst < 1e-7, f"max |closed form - optimizer| = {worst:.3e}"


def _check_hs_minimality(rng, injection: float) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(20):
        rho = random_density_matrix(3, rng)
        spec = hs_closest(rho)
        lam = spec.lambdas.copy()
        if injection:
            bump = np.zeros_like(lam)
            bump[0] = injection
            lam = project_weighted_simplex(lam + bump, spec.weights)
        base = metrics.hs_distance(rho, to_density(UnpolarizedSpectrum(3, lam)))
        candidates = [random_unpolarized_spectrum(3, rng).lambdas for _ in range(30)]
        candidates += [
            project_weighted_simplex(lam + 1e-3 * rng.standard_normal(lam.size), spec.weights)
            for _ in range(30)
        ]
        for cand in candidates:
            d = metrics.hs_distance(rho, to_density(UnpolarizedSpectrum(3, cand)))
            worst = max(worst, base - d)
    return worst <= 1e-12, f"max minimality violation {worst:.3e}"


def _check_degree_invariance(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(10):
        rho = random_density_matrix(3, rng)
        hs0 = degree_hs(rho).value
        b0 = degree_bures_general(rho).value
        for _ in range(3):
            u = random_block_unitary(3, rng)
            rot = apply_unitary(rho, u)
            worst = max(worst, abs(degree_hs(rot).value - hs0))
            worst = max(worst, abs(degree_bures_general(rot).value - b0))
    return worst < 1e-8, f"max degree shift under block unitaries {worst:.3e}"


def _check_pure_closed_forms() -> tuple[bool, str]:
    worst = 0.0
    for n in range(7):
        psi = fock_state(n, n, n)
        rho = DensityMatrix.from_pure(psi)
        worst = max(worst, abs(degree_hs(rho).value - n / (n + 1)))
        worst = max(worst, abs(degree_bures_general(rho).value - (1 - 1 / math.sqrt(n + 1))))
    return worst < 1e-7, f"max closed-form deviation {worst:.3e}"


def cmd_validate(args, out) -> int:
    rng = np.random.default_rng(args.seed)
    injection = args.inject_hs_perturbation
    checks = [
        ("stokes-commutators", lambda: _check_commutators()),
        ("uhlmann-vs-closed-form", lambda: _check_uhlmann_closed_form()),
        ("bures-closed-form-vs-grid", lambda: _check_bures_grid(rng)),
        ("diagonal-vs-optimizer", lambda: _check_diagonal_vs_optimizer(rng)),
        ("hs-closest-minimality", lambda: _check_hs_minimality(rng, injection)),
        ("degree-invariance", lambda: _check_degree_invariance(rng)),
        ("pure-state-closed-forms", lambda: _check_pure_closed_forms()),
    ]
    all_ok = True
    for name, fn in checks:
        ok, detail = fn()
        all_ok &= ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cutoff", type=int, default=None, help="override the truncation cutoff")
    parser.add_argument("--tail-tol", type=float, default=1e-12,
                        help="allowed truncation mass for coherent states")
    parser.add_argument("--kkt-tol", type=float, default=1e-9,
                        help="first-order residual target of the Bures optimizer")
    parser.add_argument("--max-iter", type=int, default=10_000,
                        help="iteration budget of the Bures optimizer")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument("--alternative-bures", action="store_true",
                        help="report 1 - sup F instead of 1 - sup sqrt(F)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poldeg",
        description="Degrees of polarization of two-mode quantum field states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_degree = sub.add_parser("degree", help="evaluate degrees for a state spec file")
    p_degree.add_argument("state_spec", help="JSON state specification file")
    p_degree.add_argument("--measures", default="hs,bures",
                          help="comma separated subset of hs,bures,sc,discrete")
    _add_common(p_degree)
    p_degree.set_defaults(func=cmd_degree)

    p_fig = sub.add_parser("figure1", help="degree curves for two-manifold states")
    p_fig.add_argument("--n1", type=int, default=1)
    p_fig.add_argument("--n2", type=int, default=2)
    p_fig.add_argument("--resolution", type=int, default=101)
    _add_common(p_fig)
    p_fig.set_defaults(func=cmd_figure1)

    p_sweep = sub.add_parser("sweep", help="degrees along a one-parameter state family")
    p_sweep.add_argument("--family", choices=("fock", "su2_coherent", "coherent"),
                         required=True)
    p_sweep.add_argument("--values", required=True,
                         help="comma separated parameter values (photon number or nbar)")
    p_sweep.add_argument("--measures", default="hs,bures")
    p_sweep.add_argument("--theta", type=float, default=math.pi / 2)
    p_sweep.add_argument("--phi", type=float, default=0.0)
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the oracle cross-check suite")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--inject-hs-perturbation", type=float, default=0.0,
                       help="test hook: corrupt the closest-spectrum formula by this amount")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
