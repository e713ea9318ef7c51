"""Command-line front end: ``tarstab <command> --config run.json``.

Every command prints (or writes under ``--out``) one JSON report and exits
with 0 when the verdict is definitive and positive, 1 when it is
definitive and negative or a library error occurred, 2 on usage and
config errors, and 3 when the numerical verdict is inconclusive.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from . import reports
from .collapsed import (
    Verdict,
    build_nu,
    check_near_equilibrium,
    estimate_lyapunov,
    estimate_lyapunov_alt,
    stationarity_diagnostic,
)
from .config import RunConfig, load_config
from .errors import ConfigError, ConstructionError, NotApplicableError, TarstabError
from .fullchain import empirical_drift, simulate
from .matrixprod import estimate_gamma
from .model import ModelSpec, check_assumptions, threshold_bounds
from .moments import (
    GrowthParams,
    MomentVerdict,
    build_lambda,
    check_drift_3_6,
    corollary22_check,
    default_starts,
    growth_rate,
    order1_analysis,
    solve_kappa,
    tarch_delay1_condition,
)
from .sphere import sphere_grid, uniform
from .stats import agree
from .streams import RandomStream

logger = logging.getLogger("tarstab")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

AGREEMENT_K = 4.0
MIN_DIAGNOSTIC_STEPS = 10_000
MIN_NU_GRID = 100
MIN_NU_INNER = 1000

Result = tuple[dict, int]


def _verdict_exit(verdict: Verdict | MomentVerdict) -> int:
    if verdict in (Verdict.INCONCLUSIVE, MomentVerdict.INCONCLUSIVE):
        return EXIT_INCONCLUSIVE
    if verdict in (Verdict.TRANSIENT, MomentVerdict.INFINITE):
        return EXIT_NEGATIVE
    return EXIT_OK


def _trace_frame(rows: np.ndarray, p: int) -> pd.DataFrame:
    columns = ["t", *(f"theta_{i + 1}" for i in range(p)), "log_w"]
    return pd.DataFrame(rows, columns=columns)


def _order1_coeffs(spec: ModelSpec) -> tuple[float, float, float, float]:
    """(a1, a2, b1, b2) of an order-1 model: x < 0 side first."""
    if spec.p != 1:
        raise ConfigError(f"order1 needs a model with p = 1, got p = {spec.p}")
    if spec.m == 0:
        (coeffs,) = spec.regimes.values()
        a, b = float(coeffs.avec[0]), float(coeffs.bvec[0])
        return a, a, b, b
    if spec.m != 1:
        raise ConfigError("order1 needs at most one threshold")
    minus, plus = spec.regimes[(-1,)], spec.regimes[(1,)]
    return float(minus.avec[0]), float(plus.avec[0]), float(minus.bvec[0]), float(plus.bvec[0])


def _delay1_coeffs(spec: ModelSpec) -> tuple[np.ndarray, np.ndarray] | None:
    """ARCH vectors of a delay-1 TARCH model, or None for any other shape."""
    if spec.m != 1 or spec.hyperplanes[0, 0] != 1 or np.any(spec.hyperplanes[0, 1:]):
        return None
    if any(np.any(c.avec) for c in spec.regimes.values()):
        return None
    return spec.regimes[(-1,)].bvec, spec.regimes[(1,)].bvec


def _probes(spec: ModelSpec, count: int, stream: RandomStream) -> np.ndarray:
    if spec.p == 1:
        return np.array([[-1.0], [1.0]])
    return uniform(stream, count, spec.p)


def cmd_check(config: RunConfig, args: argparse.Namespace) -> Result:
    report = check_assumptions(config.model, config.errors)
    return reports.envelope("check", config, report), EXIT_OK if report.passed else EXIT_NEGATIVE


def _lyapunov_diagnostics(config: RunConfig, root: RandomStream, log_rho: float) -> dict:
    """Stationarity of the collapsed chain and the near-equilibrium check of ν."""
    spec, dist, a = config.model, config.errors, config.analysis
    stationarity = stationarity_diagnostic(
        spec, dist, max(a.n_steps // 10, MIN_DIAGNOSTIC_STEPS), a.burn_in,
        root.child("stationarity"), thin=a.thin,
    )
    grid = sphere_grid(spec.p, max(a.grid_size, MIN_NU_GRID), hyperplanes=spec.hyperplanes)
    inner = max(a.inner_samples, MIN_NU_INNER)
    nu = build_nu(spec, dist, a.nu_horizon, grid, inner, root.child("nu"))
    equilibrium = check_near_equilibrium(
        spec, dist, nu, _probes(spec, a.probes, root.child("probes")), inner,
        root.child("equilibrium"), log_rho,
    )
    return {"stationarity": stationarity, "near_equilibrium": equilibrium}


def cmd_lyapunov(config: RunConfig, args: argparse.Namespace) -> Result:
    spec, dist, a = config.model, config.errors, config.analysis
    assumptions = check_assumptions(spec, dist)
    if not assumptions.passed and not args.force:
        report = reports.envelope(
            "lyapunov",
            config,
            None,
            assumptions=assumptions,
            error={"message": f"assumptions fail: {assumptions.failures}; use --force"},
        )
        return report, EXIT_NEGATIVE
    root = RandomStream(config.seed, ("model-sim",))
    est = estimate_lyapunov(
        spec, dist, a.n_steps, a.burn_in, root.child("logw"),
        replicates=a.replicates, threads=args.threads, trace=a.trace,
    )
    alt = estimate_lyapunov_alt(
        spec, dist, a.n_steps, a.burn_in, root.child("ratio"),
        replicates=a.replicates, threads=args.threads,
    )
    verdict = est.verdict()
    result: dict[str, Any] = {
        "log_rho": est.mean_logw,
        "stderr": est.stderr,
        "verdict": verdict,
        "estimate": est,
        "alternative": alt,
        "estimators_agree": agree(
            est.mean_logw, est.stderr, alt.mean_logw, alt.stderr, AGREEMENT_K
        ),
    }
    result["diagnostics"] = _lyapunov_diagnostics(config, root, est.mean_logw)
    if not est.reliable:
        result["reason"] = f"{est.underflow_rate:.3g} of log w terms clamped at the floor"
    if a.trace and est.trace is not None:
        frame = _trace_frame(est.trace, spec.p)
        result["trace_csv"] = str(reports.write_table(frame, args.out, "lyapunov_trace"))
    report = reports.envelope("lyapunov", config, result, assumptions=assumptions)
    return report, _verdict_exit(verdict)


def _closed_forms(config: RunConfig) -> dict:
    spec, dist, r = config.model, config.errors, config.analysis.r
    out: dict[str, Any] = {}
    try:
        out["coefficient_bounds"] = corollary22_check(*threshold_bounds(spec), dist, r)
    except NotApplicableError as exc:
        out["coefficient_bounds"] = {"not_applicable": str(exc)}
    delay1 = _delay1_coeffs(spec)
    if delay1 is not None:
        try:
            out["delay1_tarch"] = tarch_delay1_condition(*delay1, dist, r)
        except (NotApplicableError, ConfigError) as exc:
            out["delay1_tarch"] = {"not_applicable": str(exc)}
    if spec.p == 1:
        out["order1"] = order1_analysis(*_order1_coeffs(spec), dist, r)
    return out


def cmd_moments(config: RunConfig, args: argparse.Namespace) -> Result:
    spec, dist, a = config.model, config.errors, config.analysis
    root = RandomStream(config.seed, ("moments",))
    starts = default_starts(
        spec, dist, root.child("starts"), grid_size=a.grid_size, stationary=a.stationary_starts
    )
    growth = growth_rate(
        spec, dist, a.r, a.n_max, a.growth_replicates, starts, root.child("growth"),
        particles=a.particles, threads=args.threads,
    )
    result: dict[str, Any] = {
        "r": a.r,
        "rate": growth.rate,
        "stderr": growth.stderr,
        "verdict": growth.verdict,
        "growth": growth,
        "closed_form": _closed_forms(config),
    }
    grid = sphere_grid(spec.p, a.grid_size, hyperplanes=spec.hyperplanes)
    try:
        lam = build_lambda(
            spec, dist, a.r, a.lambda_n, a.delta, grid, a.inner_samples, root.child("lambda")
        )
        drift = check_drift_3_6(
            spec, dist, a.r, lam, _probes(spec, a.probes, root.child("probes")),
            a.inner_samples, root.child("drift"),
        )
        result["drift_condition"] = {"lambda": lam, "check": drift}
    except ConstructionError as exc:
        result["drift_condition"] = {"error": str(exc)}
    if args.out is not None:
        result["growth_csv"] = str(reports.write_table(growth.table, args.out, "growth"))
    return reports.envelope("moments", config, result), _verdict_exit(growth.verdict)


def cmd_kappa(config: RunConfig, args: argparse.Namespace) -> Result:
    a = config.analysis
    params = GrowthParams(
        n_max=a.n_max,
        replicates=a.growth_replicates,
        particles=a.particles,
        grid_size=a.grid_size,
        stationary_starts=a.stationary_starts,
        threads=args.threads,
    )
    solution = solve_kappa(
        config.model, config.errors, a.bracket, a.tol, params,
        RandomStream(config.seed, ("moments", "kappa")),
    )
    extra = {}
    if args.out is not None:
        extra["history_csv"] = str(reports.write_table(solution.history, args.out, "kappa"))
    code = EXIT_OK if solution.converged else EXIT_INCONCLUSIVE
    return reports.envelope("kappa", config, solution, **extra), code


def cmd_order1(config: RunConfig, args: argparse.Namespace) -> Result:
    analysis = order1_analysis(*_order1_coeffs(config.model), config.errors, config.analysis.r)
    if analysis.log_rho < 0:
        verdict = Verdict.ERGODIC
    elif analysis.log_rho > 0:
        verdict = Verdict.TRANSIENT
    else:
        verdict = Verdict.INCONCLUSIVE
    report = reports.envelope("order1", config, analysis, verdict=verdict)
    return report, _verdict_exit(verdict)


def cmd_crosscheck(config: RunConfig, args: argparse.Namespace) -> Result:
    spec, dist, a = config.model, config.errors, config.analysis
    est = estimate_lyapunov(
        spec, dist, a.n_steps, a.burn_in, RandomStream(config.seed, ("model-sim", "logw")),
        replicates=a.replicates, threads=args.threads,
    )
    alt = estimate_lyapunov_alt(
        spec, dist, a.n_steps, a.burn_in, RandomStream(config.seed, ("model-sim", "ratio")),
        replicates=a.replicates, threads=args.threads,
    )
    flags: dict[str, bool | None] = {
        "estimators": agree(est.mean_logw, est.stderr, alt.mean_logw, alt.stderr, AGREEMENT_K)
    }
    result: dict[str, Any] = {"log_rho": est.mean_logw, "stderr": est.stderr, "alternative": alt}

    if spec.is_pure_arch:
        gamma = estimate_gamma(
            spec.arch_coeffs, dist, a.matrix_steps, a.growth_replicates,
            RandomStream(config.seed, ("matrix",)), norm=a.norm,
        )
        result["gamma"] = gamma
        result["half_gamma"] = gamma.gamma / 2
        flags["matrix"] = agree(
            gamma.gamma / 2, gamma.stderr / 2, est.mean_logw, est.stderr, AGREEMENT_K
        )
    else:
        result["matrix_note"] = "skipped: not a pure ARCH model"
        flags["matrix"] = None

    drift = empirical_drift(
        spec, dist, a.radii, a.horizons, a.drift_replicates, RandomStream(config.seed, ("drift",))
    )
    last = drift.table.iloc[-1]
    flags["drift"] = agree(
        float(last["drift"]), float(last["stderr"]), est.mean_logw, est.stderr, AGREEMENT_K
    )
    result["drift"] = drift
    result["agreement"] = flags
    if args.out is not None:
        result["drift_csv"] = str(reports.write_table(drift.table, args.out, "drift"))
    ok = all(v for v in flags.values() if v is not None)
    for name, value in flags.items():
        if value is False:
            logger.warning("crosscheck: %s disagrees with log rho", name)
    return reports.envelope("crosscheck", config, result), EXIT_OK if ok else EXIT_NEGATIVE


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> Result:
    spec, a = config.model, config.analysis
    x0 = a.x0 if a.x0 is not None else np.zeros(spec.p)
    path = simulate(spec, config.errors, x0, a.length, RandomStream(config.seed, ("model-sim",)))
    csv = reports.write_table(path.to_frame(), args.out, "simulate")
    return reports.envelope("simulate", config, path, csv=str(csv)), EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], Result]] = {
    "check": cmd_check,
    "lyapunov": cmd_lyapunov,
    "moments": cmd_moments,
    "kappa": cmd_kappa,
    "order1": cmd_order1,
    "crosscheck": cmd_crosscheck,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tarstab", description="Stability analysis of threshold AR-ARCH models."
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, type=Path, help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    parser.add_argument(
        "--threads", type=int, default=1, help="worker cap; results do not depend on it"
    )
    parser.add_argument("--out", type=Path, default=None, help="directory for JSON and CSV output")
    parser.add_argument("--force", action="store_true", help="run even if assumptions fail")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _setup_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    _setup_logging(args.verbose)
    if args.threads < 1:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    config = None
    try:
        config = load_config(args.config).with_seed(args.seed)
        logger.info("%s: seed %d", args.command, config.seed)
        report, code = COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"tarstab: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TarstabError as exc:
        logger.error("%s failed: %s", args.command, exc)
        reports.emit(reports.error_report(args.command, exc, config), args.out, args.command)
        return EXIT_NEGATIVE
    reports.emit(report, args.out, args.command)
    return code


if __name__ == "__main__":
    sys.exit(main())
