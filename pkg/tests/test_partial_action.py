import itertools

import numpy as np
import pytest

from gradealg.errors import OrbitLookupError, StructuralError, ValidationError
from gradealg.group import Integers
from gradealg.partial_action import (INF, L1ThetaElement, OrbitTable, PartialSystem, TopPartialAction,
                                     block_shift_system, cyclic_rotation, global_block_rotation,
                                     global_convolution, half_line, induce_function_system,
                                     interior_rows, l1_theta_norm, orbit_rep, partial_shift, pi_rep,
                                     theta_adjoint, theta_conv, u_rep, validate_partial_action)

ACTIONS = [partial_shift(6), cyclic_rotation(5), half_line(6)]
SYSTEMS = [block_shift_system(4), global_block_rotation(4), block_shift_system(3, 3)]


@pytest.mark.parametrize("act", ACTIONS, ids=lambda a: a.name)
def test_builtin_actions_satisfy_axioms(act):
    rep = validate_partial_action(act)
    assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("system", SYSTEMS + [induce_function_system(a) for a in ACTIONS], ids=lambda s: s.name)
def test_builtin_systems_satisfy_axioms(system):
    assert validate_partial_action(system).ok


def test_partial_shift_domains():
    act = partial_shift(4)
    assert act.open_set(1) == frozenset(range(1, 5))
    assert act.open_set(-1) == frozenset(range(0, 4))
    assert act.theta(2) == {0: 2, 1: 3, 2: 4}
    assert act.theta(5) == {}


def test_corrupted_codomain_reported_with_witness():
    good = partial_shift(4)

    def theta(n):
        t = dict(good.theta(n))
        if n == 1:
            t[3] = 0  # sends 3 to 0 instead of 4
        return t

    bad = TopPartialAction(Integers(), good.points, theta, name="corrupted")
    rep = validate_partial_action(bad)
    assert not rep.ok
    assert rep.violations[0].witness
    assert {"inverse", "composition", "well-defined", "ideal compatibility"} & set(rep.by_axiom())
    with pytest.raises(ValidationError):
        induce_function_system(bad)


def test_fixed_orbit_point_breaks_isotropy():
    act = TopPartialAction.from_global(cyclic_rotation(4).group, range(4), lambda g, x: x, orbit=[0, 1])
    assert "trivial isotropy" in validate_partial_action(act).by_axiom()


def test_mismatched_block_sizes_detected():
    s = PartialSystem(Integers(), [1, 2], lambda n: {0: 1} if n == 1 else ({1: 0} if n == -1 else
                                                                           ({0: 0, 1: 1} if n == 0 else {})))
    assert "well-defined" in validate_partial_action(s, range(-2, 3)).by_axiom()


# induced function systems


def test_global_rotation_has_full_ideals():
    s = induce_function_system(cyclic_rotation(5))
    for g in range(5):
        assert s.ideal(g) == frozenset(range(5))


def test_partial_shift_ideal_and_pullback():
    act = partial_shift(5)
    s = induce_function_system(act)
    assert s.ideal(1) == frozenset(range(1, 6))
    a = s.diag((np.arange(6) + 1.0) * s.projection(-1))
    moved = np.diag(s.theta(1, a)).real
    # theta_1(a)(x) = a(x - 1) on {1..5}
    assert np.allclose(moved[1:], np.arange(5) + 1.0) and moved[0] == 0


# the theta product


def test_singleton_product_formula():
    s = block_shift_system(4)
    rng = np.random.default_rng(0)
    a, b = s.random_in_ideal(1, rng), s.random_in_ideal(2, rng)
    p = theta_conv(L1ThetaElement(s, {1: a}), L1ThetaElement(s, {2: b}))
    expect = s.theta(1, s.theta(-1, a) @ b)
    assert p.support == (3,)
    assert np.allclose(p[3], expect, atol=1e-14)


@pytest.mark.parametrize("system", SYSTEMS, ids=lambda s: s.name)
def test_unit_is_two_sided(system):
    rng = np.random.default_rng(1)
    one = L1ThetaElement(system, {system.group.identity(): system.unit()})
    for _ in range(10):
        x = system.random_element(rng, system.default_window())
        assert theta_conv(one, x).allclose(x, 1e-14) and theta_conv(x, one).allclose(x, 1e-14)


@pytest.mark.parametrize("system", [global_block_rotation(4), global_block_rotation(3, 3),
                                    induce_function_system(cyclic_rotation(6))], ids=lambda s: s.name)
def test_global_actions_match_crossed_product_oracle(system):
    rng = np.random.default_rng(2)
    G = system.group
    for _ in range(50):
        x = system.random_element(rng, system.default_window())
        y = system.random_element(rng, system.default_window())
        got = theta_conv(x, y)
        ref = global_convolution(dict(x.items()), dict(y.items()), lambda h, b: system.theta(h, b), G)
        for g in set(got.support) | set(ref):
            assert np.abs(got.get(g, 0) - ref.get(g, 0)).max() <= 1e-12


@pytest.mark.parametrize("system", SYSTEMS + [induce_function_system(partial_shift(5))], ids=lambda s: s.name)
def test_theta_product_laws(system):
    rng = np.random.default_rng(3)
    G = system.group
    W = system.default_window()
    for _ in range(30):
        x, y, z = (system.random_element(rng, W, 3) for _ in range(3))
        assert theta_conv(theta_conv(x, y), z).allclose(theta_conv(x, theta_conv(y, z)), 1e-12)
        assert theta_adjoint(theta_adjoint(x)).allclose(x, 1e-14)
        assert theta_adjoint(theta_conv(x, y)).allclose(theta_conv(theta_adjoint(y), theta_adjoint(x)), 1e-12)
        assert l1_theta_norm(theta_conv(x, y)) <= l1_theta_norm(x) * l1_theta_norm(y) + 1e-10
        # fiber-level product agrees with the explicit formula
        assert (x * y).allclose(theta_conv(x, y), 1e-12)
        assert x.adjoint().allclose(theta_adjoint(x), 1e-14)
    for g, h in itertools.product(W[:5], repeat=2):
        if system.ideal(g) and system.ideal(h):
            p = theta_conv(system.random_element(rng, [g]), system.random_element(rng, [h]))
            assert set(p.support) <= {G.mul(g, h)}


def test_singleton_adjoint_formula():
    s = block_shift_system(4)
    rng = np.random.default_rng(4)
    a = s.random_in_ideal(2, rng)
    adj = theta_adjoint(L1ThetaElement(s, {2: a}))
    assert adj.support == (-2,)
    assert np.allclose(adj[-2], s.theta(-2, a.conj().T))


def test_coefficient_outside_ideal_rejected():
    s = induce_function_system(partial_shift(3))
    with pytest.raises(ValidationError):
        L1ThetaElement(s, {1: s.unit()})


# orbit representation


def test_orbit_relations_hold_exhaustively():
    for act in ACTIONS:
        t = OrbitTable(act)
        assert t.relation_violations(list(act.orbit)) == []


def test_orbit_lookup_error_off_orbit():
    act = half_line(5)
    t = OrbitTable(act)
    with pytest.raises(OrbitLookupError):
        t.g(0, INF)


def test_degree_zero_is_multiplication_operator():
    act = partial_shift(5)
    s = induce_function_system(act)
    a = s.diag(np.arange(6) + 2.0)
    M = orbit_rep(L1ThetaElement(s, {0: a}), act, act.orbit)
    assert np.allclose(M, np.diag(np.arange(6) + 2.0))
    assert np.allclose(M, pi_rep(a, act, act.orbit))


def test_delta_one_is_shift_matrix():
    act = partial_shift(5)
    s = induce_function_system(act)
    M = orbit_rep(L1ThetaElement(s, {1: s.diag(s.projection(1))}), act, act.orbit)
    assert np.array_equal(M.real, np.eye(6, k=-1)) and not M.imag.any()


def test_orbit_rep_on_cyclic_rotation_is_regular_representation():
    act = cyclic_rotation(5)
    s = induce_function_system(act)
    M = orbit_rep(L1ThetaElement(s, {1: s.unit()}), act, act.orbit)
    P = np.roll(np.eye(5), 1, axis=0)
    assert np.allclose(M, P)


@pytest.mark.parametrize("act", [partial_shift(8), half_line(8), cyclic_rotation(6)], ids=lambda a: a.name)
def test_orbit_rep_multiplicative_on_interior(act):
    s = induce_function_system(act)
    rng = np.random.default_rng(5)
    Y = list(act.orbit)
    table = OrbitTable(act)
    for _ in range(40):
        x = s.random_element(rng, [-2, -1, 0, 1, 2] if not act.group.finite else s.default_window(), 3)
        y = s.random_element(rng, [-2, -1, 0, 1, 2] if not act.group.finite else s.default_window(), 3)
        lhs = orbit_rep(theta_conv(x, y), act, Y, table)
        rhs = orbit_rep(x, act, Y, table) @ orbit_rep(y, act, Y, table)
        rows = interior_rows(x, act, Y)
        assert np.abs(lhs[rows] - rhs[rows]).max(initial=0.0) <= 1e-12
        assert np.allclose(orbit_rep(theta_adjoint(x), act, Y, table), orbit_rep(x, act, Y, table).conj().T)
        assert np.linalg.norm(lhs, 2) <= l1_theta_norm(theta_conv(x, y)) + 1e-10


def test_covariance_pi_u():
    act = partial_shift(7)
    s = induce_function_system(act)
    Y = list(act.orbit)
    rng = np.random.default_rng(6)
    for h in (-2, -1, 1, 3):
        a = s.random_in_ideal(h, rng)
        lhs = orbit_rep(L1ThetaElement(s, {h: a}), act, Y)
        rhs = pi_rep(a, act, Y) @ u_rep(h, act, Y)
        assert np.allclose(lhs, rhs, atol=1e-14)


def test_orbit_rep_rejects_matrix_blocks():
    s = block_shift_system(3)
    with pytest.raises(StructuralError):
        orbit_rep(L1ThetaElement(s, {0: s.unit()}), partial_shift(3), range(4))
