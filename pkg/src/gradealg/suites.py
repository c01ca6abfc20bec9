"""Property suites shared by the ``verify`` command.

Each suite records defects into a :class:`~gradealg.report.Report`; a check
passes when its defect is at most the tolerance.
"""

from __future__ import annotations

import numpy as np

from .dual_action import spectral_project
from .errors import UnsupportedError
from .graded import GradedElement
from .models.bunce_deddens import BunceDeddensModel
from .models.car import CARModel
from .models.group_algebra import GroupAlgebraModel
from .models.kgraph import CKElement, KGraph
from .models.orbit import OrbitModel
from .models.uhf import UHFModel
from .models.weights import OrthantSum
from .models.wiener_hopf import WienerHopfModel
from .numerics import boundary_rank, check_symmetric_sample
from .partial_action import theta_conv, validate_partial_action
from .report import Report

IDENTITY_TOL = 1e-10
RELATION_TOL = 1e-12


def _rel(a: GradedElement, b: GradedElement) -> float:
    return a.distance(b) / max(1.0, b.l1_norm())


def algebra_laws(model, rng, samples: int, report: Report, radius: int = 2) -> None:
    """Associativity, anti-multiplicative involution, l1 submultiplicativity,
    operator norm below l1 norm and positivity of ``phi* phi``."""
    assoc = anti = sub = op = 0.0
    eig = np.inf
    for _ in range(samples):
        x, y, z = (model.random_element(rng, radius) for _ in range(3))
        xy = x * y
        assoc = max(assoc, _rel(xy * z, x * (y * z)))
        anti = max(anti, _rel(xy.adjoint(), y.adjoint() * x.adjoint()))
        sub = max(sub, xy.l1_norm() - x.l1_norm() * y.l1_norm() * (1 + IDENTITY_TOL))
        op = max(op, float(np.linalg.norm(model.matrix(x), 2)) - x.l1_norm())
        eig = min(eig, check_symmetric_sample(x, model))
    report.check("associativity", assoc, IDENTITY_TOL)
    report.check("involution_antimultiplicative", anti, IDENTITY_TOL)
    report.check("l1_submultiplicative", max(sub, 0.0), 0.0)
    report.check("operator_le_l1", max(op, 0.0), IDENTITY_TOL)
    report.check("symmetry_min_eigenvalue", -eig, 1e-9)
    report.results["min_eigenvalue"] = eig


def _bd_suite(m: BunceDeddensModel, rng, samples, report):
    q = m.q
    iso = adj = mult = gauge = 0.0
    S = m.S()
    iso = (S.adjoint() * S).distance(m.unit())
    vec = {int(n): complex(c) for n, c in zip(rng.integers(0, 40, 6), rng.standard_normal(6))}
    back = m.apply(S.adjoint(), m.apply(S, vec))
    iso = max(iso, max(abs(back.get(n, 0) - c) for n, c in vec.items()))
    for _ in range(samples):
        a, b = m.random_periodic(rng), m.random_periodic(rng)
        adj = max(adj, (m.S_a(a).adjoint() * m.S_a(b)).distance(m.M(np.conj(a) * b)))
        mult = max(mult, (m.M(m.tilde(a)) * m.S_a(b)).distance(m.S_a(a * b)))
        A = m.matrix(m.S_a(a))
        P = spectral_project(A, 1, charges=m.charges(), group=m.group)
        gauge = max(gauge, float(np.abs(P - A).max()))
    report.check("bd_isometry", iso, 0.0)
    report.check("bd_adjoint_product", adj, RELATION_TOL)
    report.check("bd_multiplier_shift", mult, RELATION_TOL)
    report.check("bd_gauge_degree", gauge, RELATION_TOL)
    report.results["period"] = q


def _uhf_suite(m: UHFModel, rng, samples, report):
    nxt = m.next_stage() if m.stage + 1 < len(m.p_list) else None
    cov = gauge = 0.0
    dims = max(abs(m.fiber_dimension(k) - (m.p - abs(k))) for k in range(-m.p + 1, m.p))
    for _ in range(samples):
        z = np.exp(2j * np.pi * rng.random())
        A = rng.standard_normal((m.p, m.p)) + 1j * rng.standard_normal((m.p, m.p))
        u = z ** np.arange(m.p)
        if nxt is not None:
            v = z ** np.arange(nxt.p)
            lhs = m.connecting((u[:, None] * A) * u.conj()[None, :])
            rhs = (v[:, None] * m.connecting(A)) * v.conj()[None, :]
            cov = max(cov, float(np.abs(lhs - rhs).max()))
        k = int(rng.integers(-m.p + 1, m.p))
        Ak = m.extract(A, k)
        gauge = max(gauge, float(np.abs((u[:, None] * Ak) * u.conj()[None, :] - z ** k * Ak).max()))
    report.check("uhf_fiber_dimension", dims, 0.0)
    report.check("uhf_covariance", cov, RELATION_TOL)
    report.check("uhf_gauge", gauge, RELATION_TOL)


def _car_suite(m: CARModel, rng, samples, report):
    aa = asa = deg = 0.0
    eye = np.eye(m.dim)
    for _ in range(samples):
        r = rng.standard_normal(m.d) + 1j * rng.standard_normal(m.d)
        s = rng.standard_normal(m.d) + 1j * rng.standard_normal(m.d)
        ar, as_ = m.a_matrix(r), m.a_matrix(s)
        aa = max(aa, float(np.abs(ar @ as_ + as_ @ ar).max()))
        ars = m.a_star_matrix(r)
        asa = max(asa, float(np.abs(ars @ as_ + as_ @ ars - np.vdot(r, s) * eye).max()))
    for j in range(m.d):
        A = m.a_matrix(np.eye(m.d)[j])
        deg = max(deg, float(np.abs(m.extract(A, m.degrees[j]) - A).max()))
    report.check("car_anticommutator_aa", aa, RELATION_TOL)
    report.check("car_anticommutator_astar_a", asa, RELATION_TOL)
    report.check("car_degree", deg, 0.0)


def _wh_suite(m: WienerHopfModel, rng, samples, report):
    iso = diag = 0.0
    k = m.k
    for _ in range(min(samples, 20)):
        p = tuple(int(x) for x in rng.integers(0, 3, k))
        Wp = m.W(p)
        iso = max(iso, (Wp.adjoint() * Wp).distance(m.unit()))
        vec = {tuple(int(x) for x in rng.integers(0, 5, k)): 1.0 + 0j}
        back = m.apply(Wp.adjoint(), m.apply(Wp, vec))
        iso = max(iso, sum(abs(back.get(v, 0) - c) for v, c in vec.items()))
        P = Wp * Wp.adjoint()
        zero = (0,) * k
        expect = OrthantSum.indicator(p)
        bad = set(P.support) - {zero}
        diag = max(diag, float(len(bad)), (P[zero] - expect).sup() if zero in P else 1.0)
    e1 = tuple(int(i == 0) for i in range(k))
    A = m.matrix(m.W(e1))
    defect = abs(boundary_rank(A) - m.window ** (k - 1))
    report.check("wh_isometry", iso, 0.0)
    report.check("wh_degree_zero_diagonal", diag, 0.0)
    report.check("wh_boundary_rank", float(defect), 0.0)


def _orbit_suite(m: OrbitModel, rng, samples, report):
    rep = validate_partial_action(m.act)
    report.check("partial_action_axioms", float(len(rep.violations)), 0.0)
    rel = m.table.relation_violations(m.Y)
    report.check("orbit_relations", float(len(rel)), 0.0)
    worst = 0.0
    for _ in range(samples):
        x, y = m.random_element(rng), m.random_element(rng)
        worst = max(worst, float(np.abs(m.matrix(theta_conv(x, y)) - m.matrix(x) @ m.matrix(y)).max()),
                    float(np.abs(m.matrix(x.adjoint()) - m.matrix(x).conj().T).max()))
    report.check("orbit_multiplicative", worst, RELATION_TOL)


def _group_algebra_suite(m: GroupAlgebraModel, rng, samples, report):
    if m.cocycle is None:
        return
    pts = m.sample_degrees(2)
    report.check("cocycle_identity", float(len(m.cocycle.violations(pts))), 0.0)


def kgraph_suite(g: KGraph, report: Report, depth: int = 3, cap=None) -> None:
    cap = tuple(cap) if cap is not None else g.cap
    report.check("kgraph_squares", float(len(g.check_squares_complete())), 0.0)
    report.check("kgraph_factorization", float(len(g.check_factorization(cap))), 0.0)
    report.check("kgraph_admissible", float(len(g.check_admissible(cap))), 0.0)
    half = tuple(max(1, c // 2) for c in cap)
    paths = [p for n in g.degrees_up_to(half) for p in g.morphisms(n)]
    bad = 0
    for mu in paths:
        for nu in paths:
            if set(g.mce(mu, nu)) != g.mce_bruteforce(mu, nu):
                bad += 1
    report.check("mce_bruteforce", float(bad), 0.0)
    ck = ck_relation_defects(g, half)
    for key in ("a", "b", "c", "d"):
        report.check(f"ck_relation_{key}", float(ck[key]), 0.0)
    verdict = g.is_aperiodic(depth)
    report.results["aperiodic"] = bool(verdict.aperiodic)
    report.results["aperiodicity_depth"] = depth
    report.results["aperiodicity_pairs_checked"] = verdict.pairs_checked
    report.results["aperiodicity_obstruction"] = None if verdict.obstruction is None else [repr(p) for p in verdict.obstruction]


def ck_relation_defects(g: KGraph, cap) -> dict:
    """Count failures of the Cuntz-Krieger relations (a)-(d) on enumerated paths."""
    out = {"a": 0, "b": 0, "c": 0, "d": 0}
    zero = CKElement(g, {})
    for v in g.vertices:
        for w in g.vertices:
            prod = CKElement.vertex(g, v) * CKElement.vertex(g, w)
            want = CKElement.vertex(g, v) if v == w else zero
            out["a"] += not prod.equals(want)
    paths = [p for n in g.degrees_up_to(cap) for p in g.morphisms(n)]
    for lam in paths:
        S = CKElement.S(g, lam)
        out["c"] += not (S.adjoint() * S).equals(CKElement.vertex(g, lam.s))
        for mu in paths:
            if lam.s == mu.r:
                out["b"] += not (S * CKElement.S(g, mu)).equals(CKElement.S(g, g.compose(lam, mu)))
    for n in g.degrees_up_to(cap):
        for v in g.vertices:
            total = zero
            for lam in g.range_morphisms(v, n):
                S = CKElement.S(g, lam)
                total = total + S * S.adjoint()
            out["d"] += not total.equals(CKElement.vertex(g, v))
    return out


_MODEL_SUITES = {
    BunceDeddensModel: _bd_suite,
    UHFModel: _uhf_suite,
    CARModel: _car_suite,
    WienerHopfModel: _wh_suite,
    OrbitModel: _orbit_suite,
    GroupAlgebraModel: _group_algebra_suite,
}


def verify_model(model, rng, samples: int, report: Report, depth: int = 3) -> None:
    """Run the algebra laws and the model's defining relations."""
    if isinstance(model, KGraph):
        kgraph_suite(model, report, depth)
        return
    algebra_laws(model, rng, samples, report)
    suite = _MODEL_SUITES.get(type(model))
    if suite is None:
        raise UnsupportedError(f"no relation suite for {type(model).__name__}")
    suite(model, rng, samples, report)

