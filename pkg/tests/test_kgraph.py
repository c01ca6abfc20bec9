import itertools

import numpy as np
import pytest

from gradealg.errors import ConfigurationError, ResourceError, StructuralError, ValidationError
from gradealg.models.kgraph import (CKElement, KGraph, bouquet, ck_degree, ck_mul, ck_random, flip_2graph,
                                    graded_ck, kgraph_from_spec, single_loop, torus_2graph,
                                    two_vertex_2graph)
from gradealg.suites import ck_relation_defects

GRAPHS = [single_loop(), bouquet(2), bouquet(3), torus_2graph(), flip_2graph(), two_vertex_2graph()]
IDS = ["loop", "bouquet2", "bouquet3", "torus", "flip", "two_vertex"]


@pytest.mark.parametrize("g", GRAPHS, ids=IDS)
def test_factorization_exhaustive(g):
    cap = (3, 3) if g.k == 2 else (6,)
    assert g.check_squares_complete() == []
    assert g.check_factorization(cap) == []
    assert g.check_admissible(cap) == []
    assert g.check_associativity() == []


@pytest.mark.parametrize("g", GRAPHS, ids=IDS)
def test_factor_then_compose_is_identity(g):
    cap = (2, 2) if g.k == 2 else (4,)
    for n in g.degrees_up_to(cap):
        for lam in g.morphisms(n):
            for m in itertools.product(*[range(x + 1) for x in n]):
                mu, nu = g.factor(lam, m)
                assert g.degree(mu) == m
                assert g.compose(mu, nu) == lam


def test_morphism_counts():
    assert len(bouquet(2).morphisms((3,))) == 8
    assert len(torus_2graph().morphisms((2, 3))) == 1
    assert len(flip_2graph().morphisms((1, 1))) == 4
    g = two_vertex_2graph()
    assert len(g.morphisms((1, 1))) == 2
    assert all(len(g.range_morphisms(v, (2, 1))) == 1 for v in g.vertices)


def test_missing_square_rejected():
    edges = {"a": (0, "v", "v"), "b": (1, "v", "v")}
    with pytest.raises((ValidationError, ConfigurationError)):
        KGraph(2, ("v",), edges, []).validate()


def test_bad_colour_rejected():
    with pytest.raises(ConfigurationError):
        KGraph(1, ("v",), {"e": (1, "v", "v")})


# minimal common extensions


def test_single_loop_mce():
    g = single_loop()
    e, ee = g.path("e"), g.path("e", "e")
    assert g.mce(e, ee) == (ee,)


def test_one_graph_mce_is_longer_extension():
    g = bouquet(2)
    paths = [p for n in range(4) for p in g.morphisms((n,))]
    for mu, nu in itertools.product(paths, repeat=2):
        short, long_ = sorted((mu, nu), key=lambda p: len(p.edges))
        extends = long_.edges[:len(short.edges)] == short.edges
        got = set(g.mce(mu, nu))
        assert got == ({long_} if extends else set())


@pytest.mark.parametrize("g", GRAPHS, ids=IDS)
def test_mce_matches_bruteforce(g):
    cap = (2, 2) if g.k == 2 else (3,)
    paths = [p for n in g.degrees_up_to(cap) for p in g.morphisms(n)]
    assert all(len(g.morphisms(n)) <= 50 for n in g.degrees_up_to(cap))
    for mu, nu in itertools.product(paths, repeat=2):
        assert set(g.mce(mu, nu)) == g.mce_bruteforce(mu, nu)
        for lam, a, b in g.mce_pairs(mu, nu):
            assert g.compose(mu, a) == lam == g.compose(nu, b)
            assert g.degree(lam) == tuple(max(x, y) for x, y in zip(g.degree(mu), g.degree(nu)))


def test_flip_graph_mce_of_edges_of_different_colour():
    g = flip_2graph()
    r0, b0, b1 = g.path("r0"), g.path("b0"), g.path("b1")
    # r0 b_j = b0 r_j, so every extension of r0 starts with b0
    assert g.mce(r0, b1) == ()
    ext = g.mce(r0, b0)
    assert len(ext) == 2 and all(g.degree(x) == (1, 1) for x in ext)


# aperiodicity


def test_single_loop_periodic():
    rep = single_loop().is_aperiodic(3)
    assert not rep and rep.obstruction is not None


def test_bouquet_aperiodic():
    rep = bouquet(2).is_aperiodic(3)
    assert rep and rep.pairs_checked > 0
    for mu, nu, lam in rep.witnesses:
        g = bouquet(2)
        assert g.mce(g.compose(mu, lam), g.compose(nu, lam)) == ()


def test_torus_periodic():
    assert not torus_2graph().is_aperiodic(2)


# Cuntz-Krieger calculus


@pytest.mark.parametrize("g", GRAPHS, ids=IDS)
def test_ck_relations(g):
    cap = (1, 1) if g.k == 2 else (3,)
    assert ck_relation_defects(g, cap) == {"a": 0, "b": 0, "c": 0, "d": 0}


def test_ck_rewrite_identity_single_loop():
    g = single_loop()
    e = CKElement.S(g, g.path("e"))
    ee = CKElement.S(g, g.path("e", "e"))
    # S_e^* S_ee = S_e
    assert (e.adjoint() * ee).equals(e)
    # S_ee^* S_e = S_e^*
    assert (ee.adjoint() * e).equals(e.adjoint())


def test_ck_orthogonal_ranges_in_bouquet():
    g = bouquet(2)
    a, b = CKElement.S(g, g.path("a")), CKElement.S(g, g.path("b"))
    assert (a.adjoint() * b).is_zero()
    assert (a * a.adjoint() + b * b.adjoint()).equals(CKElement.unit(g))


def test_ck_product_associative_and_adjoint():
    rng = np.random.default_rng(0)
    for g in (bouquet(2), flip_2graph(), two_vertex_2graph()):
        for _ in range(10):
            x, y, z = (ck_random(g, rng) for _ in range(3))
            assert ((x * y) * z).equals(x * (y * z))
            assert (x * y).adjoint().equals(y.adjoint() * x.adjoint())


def test_ck_unequal_sources_rejected():
    g = two_vertex_2graph()
    r1 = g.path("r1")
    with pytest.raises(StructuralError):
        CKElement(g, {(r1, g.vertex(r1.r)): 1.0})


def test_ck_degrees_and_grading():
    g = flip_2graph()
    lam, mu = g.path("r0", "b1"), g.path("b0")
    assert ck_degree(g, lam, mu) == (1, 0)
    assert ck_degree(g, lam, mu, functor=[[1, 1]]) == (1,)
    x = CKElement.S(g, lam) * CKElement.S(g, mu).adjoint() + CKElement.S(g, mu)
    parts = graded_ck(x)
    assert set(parts.support) == {(1, 0), (0, 1)}
    prod = parts * parts
    assert all(all(d == deg for d in blk.degrees()) for deg, blk in prod.items())
    assert ck_mul(x, x).equals(sum((blk for _, blk in prod.items()), CKElement(g, {})))


def test_spec_builders():
    assert kgraph_from_spec({"kind": "bouquet", "n": 3}) == bouquet(3)
    g = kgraph_from_spec({"k": 1, "vertices": ["u", "w"], "edges": {"e": [0, "u", "w"], "f": [0, "w", "u"]}})
    assert len(g.morphisms((2,))) == 2
    with pytest.raises(ConfigurationError):
        kgraph_from_spec({"k": 1})


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv("GRADEALG_CAP", "10")
    with pytest.raises(ResourceError) as info:
        bouquet(3).morphisms((3,))
    assert info.value.partial
