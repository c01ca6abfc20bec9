"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails, 2 for
configuration errors, 3 when a resource cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Mapping

import numpy as np

from .dual_action import decompose, diagonal_component, spectral_project
from .errors import ConfigurationError, GradeAlgError, ResourceError, ValidationError
from .group import GeneratingSet, group_from_spec, shell_constant, ugrs_profile, validate_weight, weight_from_spec
from .models.config import build_element, build_model
from .models.kgraph import KGraph
from .numerics import (fredholm_probe, invert_graded, neumann_inverse, spectral_radius_profile,
                       window_stability)
from .report import Report
from .suites import kgraph_suite, verify_model

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3
COMMANDS = ("verify", "invert", "project", "radius", "fredholm", "kgraph", "weights")


def _windows(config: Mapping, override: str | None) -> list[int]:
    if override:
        try:
            ws = [int(x) for x in override.split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigurationError(f"bad --window list {override!r}") from exc
    else:
        ws = [int(x) for x in config.get("windows", [])]
    if any(w < 1 for w in ws):
        raise ConfigurationError("window sizes must be positive")
    if any(b <= a for a, b in zip(ws, ws[1:])):
        raise ConfigurationError("window sizes must be strictly increasing")
    return ws


def _tol(config: Mapping, name: str, default: float) -> float:
    t = float(config.get("tolerances", {}).get(name, default))
    if not t > 0:
        raise ConfigurationError(f"tolerance {name!r} must be positive")
    return t


def _model(config: Mapping, window: int | None = None):
    if "model" not in config:
        raise ConfigurationError("config has no 'model'")
    return build_model(config["model"], window)


def _element(model, config: Mapping):
    if "element" not in config:
        raise ConfigurationError("config has no 'element'")
    return build_element(model, config["element"])


# commands


def cmd_verify(config, report: Report, rng, windows):
    model = _model(config, windows[0] if windows else None)
    verify_model(model, rng, int(config.get("samples", 100)), report, int(config.get("depth", 3)))
    report.results["model"] = model.describe() if not isinstance(model, KGraph) else {"model": "kgraph"}


def cmd_invert(config, report: Report, rng, windows):
    model = _model(config, windows[0] if windows else None)
    phi = _element(model, config)
    if not windows:
        windows = [getattr(model, "window", None)] if not model.exact else [None]
    results = []
    for w in windows:
        res = invert_graded(phi, model, window=w)
        results.append(res)
        tag = f"profile_w{w}" if w is not None else "profile"
        report.add_profile(tag, res.profile)
        report.check("inverse_residual", res.residual, _tol(config, "residual", 1e-8))
        report.check("inverse_recomposition", res.recomposition_error, _tol(config, "residual", 1e-8))
    if len(windows) >= 2 and windows[0] is not None:
        st = window_stability(phi, model, windows, int(config.get("stable_shells", windows[0] // 4)))
        report.check("window_stability", st.max_difference, _tol(config, "stability", 1e-6))
    oracle = config.get("oracle")
    if oracle is not None:
        lam = complex(oracle.get("neumann", 1.0))
        shells = int(oracle.get("shells", 20))
        ref = neumann_inverse(phi, lam)
        psi = results[-1].psi
        worst = 0.0
        for g, x in ref.items():
            if phi.group.length(g) > shells:
                continue
            ref_n = ref.fibers.norm(x, g)
            if ref_n < 1e-300:
                continue
            y = psi.get(g)
            err = ref_n if y is None else ref.fibers.distance(y, x, g)
            worst = max(worst, err / ref_n)
        report.check("neumann_oracle", worst, _tol(config, "oracle", 1e-6))
    last = results[-1]
    report.results.update(condition=last.condition, l1_norm=last.psi.l1_norm(),
                          windows=[w for w in windows])


def cmd_project(config, report: Report, rng, windows):
    model = _model(config, windows[0] if windows else None)
    phi = _element(model, config)
    A = model.matrix(phi)
    charges = model.charges()
    degrees = config.get("degrees")
    if degrees is None:
        degrees = list(phi.support)
    degrees = [tuple(d) if isinstance(d, list) else d for d in degrees]
    M = config.get("M")
    dec = decompose(A, degrees, charges, model.group, M)
    report.check("projection_reconstruction", dec.residual, _tol(config, "reconstruction", 1e-12))
    worst = 0.0
    for g in degrees:
        P = spectral_project(A, g, M, charges, model.group)
        worst = max(worst, float(np.abs(P - diagonal_component(A, g, charges)).max(initial=0.0)))
    report.check("projection_matches_diagonal", worst, _tol(config, "reconstruction", 1e-12))
    report.results.update(aliasing=dec.aliasing,
                          component_norms={str(g): float(np.linalg.norm(dec.element[g], 2))
                                           for g in dec.element.support})


def cmd_radius(config, report: Report, rng, windows):
    model = _model(config, windows[0] if windows else None)
    phi = _element(model, config)
    n_max = int(config.get("n_max", 50))
    norms = config.get("norms", ["l1"])
    weight = weight_from_spec(config.get("weight"), model.group) if "weight" in config else None
    seqs = {}
    for norm in norms:
        seqs[norm] = spectral_radius_profile(phi, norm, n_max, weight=weight, rep=model).values
    report.results["profiles"] = {k: v.tolist() for k, v in seqs.items()}
    if "l1" in seqs and "l1nu" in seqs:
        report.check("radius_gap", abs(seqs["l1nu"][-1] - seqs["l1"][-1]), float(config.get("gap", 0.05)))
    if "l1" in seqs and "operator" in seqs:
        report.check("operator_below_l1", max(float(np.max(seqs["operator"] - seqs["l1"])), 0.0), 1e-10)


def cmd_fredholm(config, report: Report, rng, windows):
    if len(windows) < 3:
        raise ConfigurationError("fredholm needs at least three windows")
    base = _model(config, windows[0])

    def family(w):
        m = base.with_window(w)
        return m.matrix(build_element(m, config["element"]))

    if "element" not in config:
        raise ConfigurationError("config has no 'element'")
    rep = fredholm_probe(family, windows, float(config.get("kernel_tol", 1e-8)))
    report.results["probes"] = [{"window": p.window, "sigma_min": p.sigma_min, "near_kernel": p.near_kernel,
                                 "near_cokernel": p.near_cokernel} for p in rep.probes]
    if "sigma_floor" in config:
        floor = float(config["sigma_floor"])
        report.check("sigma_min_floor", max(floor - float(rep.sigma_min.min()), 0.0), 0.0)


def cmd_kgraph(config, report: Report, rng, windows):
    spec = config.get("graph") or (config.get("model", {}).get("graph") if "model" in config else None)
    if spec is None:
        raise ConfigurationError("config has no 'graph'")
    g = build_model({"kind": "kgraph", "graph": spec})
    kgraph_suite(g, report, int(config.get("depth", 3)), config.get("cap"))
    if "expect_aperiodic" in config:
        got = report.results["aperiodic"]
        report.check("aperiodicity", float(got != bool(config["expect_aperiodic"])), 0.0)


def cmd_weights(config, report: Report, rng, windows):
    if "group" not in config:
        raise ConfigurationError("config has no 'group'")
    group = group_from_spec(config["group"])
    nu = weight_from_spec(config.get("weight"), group)
    V = GeneratingSet.standard(group)
    radius = int(config.get("radius", 4))
    wr = validate_weight(group, V, nu, radius)
    report.check("weight_axioms", float(len(wr.violations)), 0.0)
    prof = ugrs_profile(group, V, nu, int(config.get("n_max", 100)))
    est = prof.limit_estimate()
    report.results.update(violations=[[v.kind, repr(v.witness), v.detail] for v in wr.violations[:20]],
                          ugrs_values=list(prof.values), limit_estimate=est,
                          shell_constant=shell_constant(group, V, nu, min(radius, 8)).constant)
    if "expect_ugrs" in config:
        report.check("ugrs_verdict", float(prof.appears_ugrs() != bool(config["expect_ugrs"])), 0.0)
    if "expect_limit" in config:
        report.check("ugrs_limit", abs(est - float(config["expect_limit"])), _tol(config, "limit", 0.01))


HANDLERS = {"verify": cmd_verify, "invert": cmd_invert, "project": cmd_project, "radius": cmd_radius,
            "fredholm": cmd_fredholm, "kgraph": cmd_kgraph, "weights": cmd_weights}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gradealg", description="Graded l1-algebra experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, help="JSON experiment config")
        s.add_argument("--seed", type=int, default=0, help="seed of the random generator (recorded)")
        s.add_argument("--out", default=None, help="directory for report.json and CSV profiles")
        s.add_argument("--window", default=None, help="comma-separated increasing window sizes")
    return p


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigurationError("config must be a JSON object")
    return cfg


def run(command: str, config: dict, seed: int = 0, window: str | None = None) -> Report:
    """Run one command on a parsed config and return its report."""
    if command not in HANDLERS:
        raise ConfigurationError(f"unknown command {command!r}")
    if not 0 <= seed < 2 ** 64:
        raise ConfigurationError("seed must fit in an unsigned 64-bit integer")
    report = Report(command, config, seed)
    rng = np.random.default_rng(seed)
    HANDLERS[command](config, report, rng, _windows(config, window))
    return report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        report = run(args.command, config, args.seed, args.window)
    except ResourceError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigurationError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GradeAlgError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} value={c.value:.3e} tol={c.tolerance:.1e}")
    if args.out is not None:
        try:
            report.emit(args.out)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(report.to_json())
    if not report.passed:
        print("failing checks: " + ", ".join(report.failing()), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
