"""Command-line front end: load inputs, dispatch checks, emit reports.

Every command writes a deterministic JSON report (sorted keys, no
timestamps), so identical configuration and seed give byte-identical output;
CSV is available for sampled curves and convergence tables.  Exit codes:
0 all checks passed, 1 an identity check failed (the offending case is
printed), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from . import continuum as cont
from . import eigenproduct as ep
from . import identities as ids
from . import sampling
from .errors import (
    AdmissibilityError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    SpectralAmbiguityError,
)
from .scattering import Potential, jost_polynomial, phase_function
from .tridiag import MirrorJacobiSpec

ENV_PREFIX = "MIRRORSPEC_"

COMMANDS = (
    "product-identity",
    "product-identity-exact",
    "trig-identities",
    "scattering",
    "scattering-identities",
    "bridge",
    "continuum",
    "sweep",
)


@dataclass
class RunConfig:
    """Fully resolved invocation; the seed pins down every random sweep."""

    command: str
    input_path: Optional[str] = None
    seed: int = 0
    trials: int = 0
    M: Optional[int] = None
    M_list: Optional[list] = None
    J: int = 6
    strength: float = 1.0
    count_list: list = field(default_factory=lambda: [10, 25, 50, 100])
    quad: int = 4096
    grid: int = 4096
    tolerances: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    fmt: str = "json"
    threads: int = 1

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input_path": self.input_path,
            "seed": self.seed,
            "trials": self.trials,
            "M": self.M,
            "M_list": self.M_list,
            "J": self.J,
            "strength": self.strength,
            "count_list": list(self.count_list),
            "quad": self.quad,
            "grid": self.grid,
            "tolerances": dict(sorted(self.tolerances.items())),
            "output_path": self.output_path,
            "format": self.fmt,
            "threads": self.threads,
        }

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    # seeding by (seed, index) makes trials independent of thread scheduling
    return np.random.default_rng([seed, index])


def _map_trials(config: RunConfig, fn, count: int) -> list:
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(i) for i in range(count)]


def _load_potential(config: RunConfig) -> Potential:
    if not config.input_path:
        raise DomainError("this command needs --potential <file>")
    try:
        with open(config.input_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read potential file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"potential file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("potential file must hold a JSON object with key 'v'")
    return Potential.from_dict(data)


def _write_json(config: RunConfig, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(config: RunConfig, header: list, rows: list) -> None:
    target = config.output_path
    if target:
        fh = open(target, "w", newline="", encoding="utf-8")
    else:
        fh = sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    finally:
        if target:
            fh.close()


def _report_skeleton(config: RunConfig) -> dict:
    return {"command": config.command, "version": __version__, "config": config.to_dict()}


# ---------------------------------------------------------------------------
# Commands.
# ---------------------------------------------------------------------------


def _cmd_product_identity(config: RunConfig) -> int:
    M = config.M or 8
    trials = config.trials or 20
    dlog_tol = config.tol("dlog", 1e-8 * M * M)

    def one(i: int) -> dict:
        rng = _trial_rng(config.seed, i)
        spec = sampling.real_spec(rng, M)
        try:
            rep = ep.report(spec)
        except SpectralAmbiguityError:
            return {"trial": i, "skipped": "near-degenerate draw"}
        return {
            "trial": i,
            "lhs_sign": rep.lhs_sign,
            "rhs_sign": rep.rhs_sign,
            "dlog": abs(rep.lhs_log_abs - rep.rhs_log_abs),
            "sign_match": rep.lhs_sign == rep.rhs_sign,
            "spec": spec.to_dict(),
        }

    results = _map_trials(config, one, trials)
    failures = [
        r for r in results if "skipped" not in r and (not r["sign_match"] or r["dlog"] > dlog_tol)
    ]
    report = _report_skeleton(config)
    report["results"] = {
        "trials": [{k: v for k, v in r.items() if k != "spec"} for r in results],
        "dlog_tolerance": dlog_tol,
        "failures": failures,
    }
    report["status"] = "fail" if failures else "pass"
    _write_json(config, report)
    if failures:
        print(f"identity violated on {len(failures)} trial(s); first: {failures[0]}", file=sys.stderr)
        return 1
    return 0


def _cmd_product_identity_exact(config: RunConfig) -> int:
    M = config.M or 4
    trials = config.trials or 100

    def one(i: int) -> dict:
        rng = _trial_rng(config.seed, i)
        spec = sampling.integer_spec(rng, M)
        res = ep.resultant_exact(spec)
        rhs = ep.closed_form_rhs_exact(spec)
        return {
            "trial": i,
            "exact_match": res == rhs,
            "resultant": str(res),
            "spec": spec.to_dict(),
        }

    results = _map_trials(config, one, trials)
    failures = [r for r in results if not r["exact_match"]]
    report = _report_skeleton(config)
    report["results"] = {
        "trials": [{k: v for k, v in r.items() if k != "spec"} for r in results],
        "failures": failures,
    }
    report["status"] = "fail" if failures else "pass"
    _write_json(config, report)
    if failures:
        print(f"exact identity violated; first offending spec: {failures[0]['spec']}", file=sys.stderr)
        return 1
    return 0


def _cmd_trig_identities(config: RunConfig) -> int:
    m_max = config.M or 40
    chain_tol = config.tol("chain", 1e-9)
    product_tol = config.tol("product", 1e-12)
    chain = {M: ep.free_chain_product_residual(M) for M in range(1, m_max + 1)}
    alphas = np.linspace(0.0, math.pi, 100)
    shifted = {
        M: max(ep.shifted_sine_product_residual(M, 2, float(al)) for al in alphas)
        for M in range(1, min(m_max, 10) + 1)
    }
    cosine = {M: ep.cosine_product_residual(M) for M in range(1, min(m_max, 30) + 1)}
    worst = {
        "free_chain": max(chain.values()),
        "shifted_sine": max(shifted.values()),
        "cosine": max(cosine.values()),
    }
    ok = worst["free_chain"] < chain_tol and worst["shifted_sine"] < product_tol and worst["cosine"] < product_tol
    report = _report_skeleton(config)
    report["results"] = {
        "free_chain_residuals": {str(k): v for k, v in chain.items()},
        "shifted_sine_worst": {str(k): v for k, v in shifted.items()},
        "cosine_residuals": {str(k): v for k, v in cosine.items()},
        "worst": worst,
    }
    report["status"] = "pass" if ok else "fail"
    _write_json(config, report)
    if not ok:
        print(f"trigonometric identity residuals too large: {worst}", file=sys.stderr)
        return 1
    return 0


def _cmd_scattering(config: RunConfig) -> int:
    pot = _load_potential(config)
    jost = jost_polynomial(pot)
    from .scattering import discrete_spectrum

    if config.fmt == "csv":
        if not jost.admissible:
            raise DomainError("phase samples require an admissible potential")
        phase = phase_function(jost, config.grid)
        rows = list(zip(phase.grid.tolist(), phase.eta.tolist(), phase.sigma.tolist()))
        _write_csv(config, ["p", "eta", "sigma"], rows)
        return 0
    report = _report_skeleton(config)
    report["results"] = {
        "support": pot.J,
        "coefficients": jost.coeffs.tolist(),
        "roots": [[float(r.real), float(r.imag)] for r in jost.roots],
        "admissible": jost.admissible,
        "bound_states": discrete_spectrum(jost).tolist(),
    }
    report["status"] = "pass"
    _write_json(config, report)
    return 0


def _cmd_scattering_identities(config: RunConfig) -> int:
    pot = _load_potential(config)
    rep = ids.scattering_report(pot, n_quad=config.quad, abs_tol=config.tol("pv", 1e-5) * 1e-2, grid_size=config.grid)
    report = _report_skeleton(config)
    report["results"] = rep.to_dict()
    if not rep.admissible:
        report["status"] = "flagged"
        _write_json(config, report)
        return 0
    bad = (
        rep.pv_residual > config.tol("pv", 1e-5)
        or rep.contour_residual > config.tol("contour", 1e-8)
        or rep.root_residual > config.tol("root", 1e-8)
    )
    report["status"] = "fail" if bad else "pass"
    _write_json(config, report)
    if bad:
        print(f"scattering identity residuals out of tolerance: {rep.to_dict()}", file=sys.stderr)
        return 1
    return 0


def _cmd_bridge(config: RunConfig) -> int:
    pot = _load_potential(config)
    m_values = config.M_list or [config.M or max(2 * pot.J, 10)]
    sum_tol = config.tol("sum", 1e-7)
    cross_tol = config.tol("crosscheck", 1e-9)
    reports = [ids.bridge_report(pot, M) for M in m_values]
    if config.fmt == "csv":
        _write_csv(config, ["M", "sum_S"], [(r.M, r.sum_S) for r in reports])
        return 0
    failures = [r.to_dict() for r in reports if abs(r.sum_S) > sum_tol or r.spectra_crosscheck > cross_tol]
    report = _report_skeleton(config)
    report["results"] = {"bridges": [r.to_dict() for r in reports], "failures": failures}
    report["status"] = "fail" if failures else "pass"
    _write_json(config, report)
    if failures:
        print(f"bridge identity out of tolerance: {failures[0]}", file=sys.stderr)
        return 1
    return 0


def _cmd_continuum(config: RunConfig) -> int:
    counts = sorted(config.count_list)
    gap_tol = config.tol("gap", 1e-2)
    rows = []
    table = {}
    for n in counts:
        res = cont.spectral_product_gap(config.strength, n)
        table[n] = res
        for name, pg in sorted(res.items()):
            rows.append((config.strength, n, name, pg.lhs_log, pg.rhs_log, pg.gap, pg.tail_deviation))
    if config.fmt == "csv":
        _write_csv(
            config,
            ["strength", "count", "pairing", "lhs_log", "rhs_log", "gap", "tail_deviation"],
            rows,
        )
        return 0
    winner = cont.converging_pairing(config.strength, counts)
    gaps = [table[n][winner].gap for n in counts]
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1] < gap_tol
    report = _report_skeleton(config)
    report["results"] = {
        "converging_pairing": winner,
        "gaps": {str(n): table[n][winner].to_dict() for n in counts},
        "monotone_decreasing": monotone,
    }
    report["status"] = "pass" if ok else "fail"
    _write_json(config, report)
    if not ok:
        print(f"continuum products not converging: gaps {gaps}", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(config: RunConfig) -> int:
    trials = config.trials or 50
    summary: dict = {}
    failures: list = []

    def exact_trial(i: int):
        rng = _trial_rng(config.seed, i)
        M = 1 + i % 10
        spec = sampling.integer_spec(rng, M)
        ok = ep.check_exact(spec)
        return ok, spec

    exact = _map_trials(config, exact_trial, trials)
    summary["exact"] = {"trials": trials, "passed": sum(1 for ok, _ in exact if ok)}
    failures += [("exact", s.to_dict()) for ok, s in exact if not ok]

    def float_trial(i: int):
        rng = _trial_rng(config.seed, 10_000 + i)
        M = 1 + i % 30
        spec = sampling.real_spec(rng, M)
        try:
            rep = ep.report(spec)
        except SpectralAmbiguityError:
            return True, spec, 0.0
        ok = rep.lhs_sign == rep.rhs_sign and rep.residual < 1e-8 * M * M
        return ok, spec, rep.residual

    floats = _map_trials(config, float_trial, trials)
    summary["floating"] = {
        "trials": trials,
        "passed": sum(1 for ok, _, _ in floats if ok),
        "worst_residual": max(r for _, _, r in floats),
    }
    failures += [("floating", s.to_dict()) for ok, s, _ in floats if not ok]

    def scattering_trial(i: int):
        rng = _trial_rng(config.seed, 20_000 + i)
        pot = sampling.admissible_potential(rng, config.J)
        rep = ids.scattering_report(pot, n_quad=config.quad)
        ok = (
            rep.pv_residual < config.tol("pv", 1e-5)
            and rep.contour_residual < config.tol("contour", 1e-8)
            and rep.root_residual < config.tol("root", 1e-8)
        )
        return ok, pot, rep

    n_scatter = max(4, trials // 5)
    scatter = _map_trials(config, scattering_trial, n_scatter)
    summary["scattering"] = {
        "trials": n_scatter,
        "passed": sum(1 for ok, _, _ in scatter if ok),
        "worst_pv": max(r.pv_residual for _, _, r in scatter),
        "worst_contour": max(r.contour_residual for _, _, r in scatter),
        "worst_root": max(r.root_residual for _, _, r in scatter),
    }
    failures += [("scattering", p.to_dict()) for ok, p, _ in scatter if not ok]

    report = _report_skeleton(config)
    report["results"] = summary
    report["failures"] = [{"suite": kind, "input": data} for kind, data in failures]
    report["status"] = "fail" if failures else "pass"
    _write_json(config, report)
    if failures:
        print(f"sweep failures: {failures[:3]}", file=sys.stderr)
        return 1
    return 0


_DISPATCH = {
    "product-identity": _cmd_product_identity,
    "product-identity-exact": _cmd_product_identity_exact,
    "trig-identities": _cmd_trig_identities,
    "scattering": _cmd_scattering,
    "scattering-identities": _cmd_scattering_identities,
    "bridge": _cmd_bridge,
    "continuum": _cmd_continuum,
    "sweep": _cmd_sweep,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    handler = _DISPATCH.get(config.command)
    if handler is None:
        print(f"unknown command {config.command!r}", file=sys.stderr)
        return 2
    try:
        return handler(config)
    except (DomainError, DegenerateInputError, AdmissibilityError) as exc:
        print(f"{config.command}: {exc}", file=sys.stderr)
        return 2
    except (SpectralAmbiguityError, ConvergenceError) as exc:
        print(f"{config.command}: numerical failure: {exc}", file=sys.stderr)
        return 1


def _env_override(name: str, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        return fallback


def _parse_int_list(text: str) -> list:
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_tolerances(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise DomainError(f"--tol expects name=value, got {item!r}")
        name, _, value = item.partition("=")
        out[name.strip()] = float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirrorspec",
        description="Spectral identity checks for mirror-symmetric Jacobi matrices "
        "and half-line scattering data.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--M", type=int, default=None, help="half-size / max index, per command")
    parser.add_argument("--M-list", type=_parse_int_list, default=None, help="comma list of half-sizes (bridge)")
    parser.add_argument("--J", type=int, default=_env_override("J", int, 6), help="max potential support for sweeps")
    parser.add_argument("--potential", default=_env_override("potential", str, None), help="JSON file with {'v': [...]}")
    parser.add_argument("--trials", type=int, default=_env_override("trials", int, 0))
    parser.add_argument("--seed", type=int, default=_env_override("seed", int, 0))
    parser.add_argument("--strength", type=float, default=_env_override("strength", float, 1.0), help="interface strength (continuum)")
    parser.add_argument("--count-list", type=_parse_int_list, default=[10, 25, 50, 100], help="truncation counts (continuum)")
    parser.add_argument("--quad", type=int, default=_env_override("quad", int, 4096), help="contour quadrature size (power of two)")
    parser.add_argument("--grid", type=int, default=_env_override("grid", int, 4096), help="phase grid size")
    parser.add_argument("--tol", action="append", metavar="NAME=VAL", help="override a named tolerance")
    parser.add_argument("--out", default=_env_override("out", str, None), help="report path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default=_env_override("format", str, "json"))
    parser.add_argument("--threads", type=int, default=_env_override("threads", int, 1))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tolerances = _parse_tolerances(args.tol)
    except (DomainError, ValueError) as exc:
        print(f"bad --tol: {exc}", file=sys.stderr)
        return 2
    config = RunConfig(
        command=args.command,
        input_path=args.potential,
        seed=args.seed,
        trials=args.trials,
        M=args.M,
        M_list=args.M_list,
        J=args.J,
        strength=args.strength,
        count_list=args.count_list,
        quad=args.quad,
        grid=args.grid,
        tolerances=tolerances,
        output_path=args.out,
        fmt=args.format,
        threads=max(1, args.threads),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
