"""Check registry and deterministic JSON/CSV reports."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ConfigurationError

SCHEMA_VERSION = 1


class CheckRegistry:
    """Named checks, each with a non-empty anchor string naming the property checked."""

    def __init__(self):
        self._anchors: dict[str, str] = {}

    def register(self, name: str, anchor: str) -> None:
        if not isinstance(anchor, str) or not anchor.strip():
            raise ConfigurationError(f"check {name!r} needs an anchor string")
        if name in self._anchors and self._anchors[name] != anchor:
            raise ConfigurationError(f"check {name!r} registered twice with different anchors")
        self._anchors[name] = anchor

    def anchor(self, name: str) -> str:
        try:
            return self._anchors[name]
        except KeyError:
            raise ConfigurationError(f"unregistered check {name!r}") from None

    def __contains__(self, name):
        return name in self._anchors

    def names(self) -> list[str]:
        return sorted(self._anchors)


REGISTRY = CheckRegistry()

_ANCHORS = {
    # algebra
    "associativity": "graded product is associative",
    "involution_antimultiplicative": "involution reverses products",
    "l1_submultiplicative": "l1 norm is submultiplicative",
    "operator_le_l1": "window operator norm is bounded by the l1 norm",
    "symmetry_min_eigenvalue": "spectrum of b* b is nonnegative",
    "grading_products": "products of homogeneous elements land in the product degree",
    # models
    "car_anticommutator_aa": "CAR relation a(r)a(s) + a(s)a(r) = 0",
    "car_anticommutator_astar_a": "CAR relation a*(r)a(s) + a(s)a*(r) = (r|s)",
    "car_degree": "a(e_j) is homogeneous of degree g_j",
    "bd_isometry": "S*S = 1 on finitely supported vectors",
    "bd_adjoint_product": "S_a* S_b = M_(conj(a) b)",
    "bd_multiplier_shift": "M_(tilde a) S_b = S_(a b)",
    "bd_gauge_degree": "gauge projection P_1(S_a) = S_a",
    "uhf_covariance": "connecting map intertwines the gauge actions",
    "uhf_fiber_dimension": "degree-k subspace has dimension p - |k|",
    "uhf_gauge": "gauge acts on degree k by z^k",
    "wh_isometry": "W_p* W_p = 1 on finitely supported vectors",
    "wh_degree_zero_diagonal": "degree-0 element W_p W_p* is the diagonal indicator of p + N^k",
    "wh_boundary_rank": "rank(1 - W_1 W_1*) = 1 on every window",
    "cocycle_identity": "2-cocycle identity and normalization",
    "partial_action_axioms": "partial action axioms on the group window",
    "orbit_relations": "g_yz^-1 = g_zy and g_zy = g_xy g_zx",
    "orbit_multiplicative": "orbit representation is a *-homomorphism",
    # numerics
    "inverse_residual": "window inverse residual on interior rows",
    "inverse_recomposition": "recomposed inverse equals the matrix inverse on the interior",
    "window_stability": "shell partial sums stable under window enlargement",
    "neumann_oracle": "inverse components match the Neumann series",
    "projection_reconstruction": "band-limited input equals the sum of its spectral components",
    "projection_matches_diagonal": "character average equals the charge-difference mask",
    "radius_gap": "weighted and unweighted spectral radius estimates agree",
    "operator_below_l1": "operator-norm radius profile below the l1 profile",
    "sigma_min_floor": "smallest singular value bounded below across windows",
    # k-graphs
    "kgraph_squares": "every bicoloured path has a unique square completion",
    "kgraph_factorization": "unique factorization up to the degree cap",
    "kgraph_admissible": "every vertex receives paths of every degree",
    "mce_bruteforce": "minimal common extensions agree with path pairing",
    "aperiodicity": "bounded-depth aperiodicity verdict",
    "ck_relation_a": "vertex projections are mutually orthogonal",
    "ck_relation_b": "S_lambda S_mu = S_(lambda mu)",
    "ck_relation_c": "S_lambda* S_lambda = S_s(lambda)",
    "ck_relation_d": "sum over paths of degree n from v of S_lambda S_lambda* = S_v",
    # weights
    "weight_axioms": "weight is >= 1, symmetric and submultiplicative",
    "ugrs_verdict": "uGRS behaviour of the weight",
    "ugrs_limit": "limit estimate of the n-th root weight profile",
}

for _name, _anchor in _ANCHORS.items():
    REGISTRY.register(_name, _anchor)


def jsonable(x):
    """Convert numpy scalars, complex numbers, tuples and non-finite floats for strict JSON."""
    if isinstance(x, Mapping):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(float(x.real)), jsonable(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool

    def to_json(self, registry: CheckRegistry = REGISTRY) -> dict:
        return {"name": self.name, "paper_anchor": registry.anchor(self.name), "value": jsonable(self.value),
                "tolerance": jsonable(self.tolerance), "pass": bool(self.passed)}


@dataclass
class Report:
    command: str
    config: dict
    seed: int
    checks: list = field(default_factory=list)
    profiles: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    registry: CheckRegistry = field(default=REGISTRY, repr=False)

    def check(self, name: str, value: float, tolerance: float, passed: bool | None = None) -> CheckResult:
        """Record ``value`` against ``tolerance`` (pass iff ``value <= tolerance`` unless given)."""
        self.registry.anchor(name)
        value = float(value)
        ok = (value <= tolerance) if passed is None else bool(passed)
        res = CheckResult(name, value, float(tolerance), bool(ok and not math.isnan(value)))
        self.checks.append(res)
        return res

    def add_profile(self, name: str, profile) -> None:
        self.profiles.append((name, profile))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": jsonable(self.config),
            "seed": self.seed,
            "checks": [c.to_json(self.registry) for c in self.checks],
            "profiles": [{"name": n, "file": f"{n}.csv", "rows": len(p)} for n, p in self.profiles],
            "results": jsonable(self.results),
            "status": "pass" if self.passed else "fail",
            "failing": self.failing(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    def emit(self, out_dir: str) -> list[str]:
        """Write ``report.json`` and one CSV per profile; returns the written paths."""
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        path = os.path.join(out_dir, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
        paths.append(path)
        for name, profile in self.profiles:
            p = os.path.join(out_dir, f"{name}.csv")
            with open(p, "w", encoding="utf-8", newline="") as fh:
                fh.write(profile.to_csv())
            paths.append(p)
        return paths
