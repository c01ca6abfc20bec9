import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradealg.errors import ConfigurationError, ResourceError, ValidationError
from gradealg.group import (Cyclic, FiniteGroup, GeneratingSet, Heisenberg, Integers, Lattice,
                            QuotientGroup, Weight, derived_z_weight, group_from_spec, shell_constant,
                            ugrs_profile, validate_weight, weight_from_spec, word_ball, word_length)

ints = st.integers(-50, 50)


def bfs_distance(mul, gens, e, target, limit):
    """Plain breadth-first search, independent of the library's shell cache."""
    seen = {e}
    frontier = {e}
    for n in range(limit + 1):
        if target in frontier:
            return n
        frontier = {mul(x, s) for x in frontier for s in gens} - seen
        seen |= frontier
    return None


GROUPS = [Integers(), Lattice(2), Lattice(3), Cyclic(7), Heisenberg(), FiniteGroup.symmetric(3)]


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.kind)
def test_group_axioms_on_samples(G):
    rng = np.random.default_rng(1)
    sample = [G.random_element(rng) for _ in range(12)] + [G.identity()]
    e = G.identity()
    for g in sample:
        assert G.mul(g, e) == g == G.mul(e, g)
        assert G.mul(g, G.inv(g)) == e == G.mul(G.inv(g), g)
    for a, b, c in itertools.product(sample[:6], repeat=3):
        assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


@given(ints, ints, ints, ints, ints, ints)
def test_heisenberg_associative(a, b, c, d, e, f):
    H = Heisenberg()
    x, y, z = (a, b, c), (d, e, f), (b, a, f)
    assert H.mul(H.mul(x, y), z) == H.mul(x, H.mul(y, z))
    assert H.mul(x, H.inv(x)) == (0, 0, 0)


def test_word_length_integers():
    V = GeneratingSet(Integers(), [-1, 0, 1])
    assert word_length(Integers(), V, 5, radius_cap=16) == 5
    assert word_length(Integers(), V, 0, radius_cap=1) == 0


def test_word_length_identity_in_every_group():
    for G in GROUPS:
        assert word_length(G, GeneratingSet.standard(G), G.identity(), 4) == 0


def test_heisenberg_central_element_has_length_four():
    H = Heisenberg()
    V = GeneratingSet.standard(H)
    # independent oracle: naive BFS over the Cayley graph
    gens = list(V.elements)
    assert bfs_distance(H.mul, gens, H.identity(), (0, 0, 1), 8) == 4
    assert word_length(H, V, (0, 0, 1), radius_cap=16) == 4


def test_word_length_matches_bfs_oracle_on_heisenberg_ball():
    H = Heisenberg()
    V = GeneratingSet.standard(H)
    ball = word_ball(V, 3)
    for g, n in list(ball.items())[::7]:
        assert bfs_distance(H.mul, list(V.elements), H.identity(), g, 6) == n


def test_word_length_beyond_cap():
    V = GeneratingSet.standard(Integers())
    assert word_length(Integers(), V, 100, radius_cap=8) is None


def test_generating_set_requires_identity():
    with pytest.raises(ConfigurationError):
        GeneratingSet(Integers(), [1, -1])


def test_generating_set_generates_and_symmetry():
    V = GeneratingSet.standard(Lattice(2))
    assert V.symmetric
    assert V.generates(2)
    W = GeneratingSet(Integers(), [0, 1])
    assert not W.symmetric


def test_finite_table_validation():
    with pytest.raises(ValidationError):
        FiniteGroup(((0, 1), (0, 1)))
    S3 = FiniteGroup.symmetric(3)
    assert S3.order() == 6 and not S3.abelian


def test_quotient_reduction():
    Q = QuotientGroup(Lattice(2), ((2, 0), (1, 3)))
    assert len(Q.elements()) == 6
    assert Q.reduce((5, 7)) == Q.reduce((5 - 2 * 2, 7))
    assert Q.contains((3, 3)) and not Q.contains((1, 0))


def test_quotient_from_non_subgroup_rejected():
    with pytest.raises(ValidationError):
        QuotientGroup(Cyclic(6), elements_given=(0, 2))


def test_cyclic_quotient_by_subgroup():
    Q = QuotientGroup(Cyclic(6), elements_given=(0, 2, 4))
    assert sorted(Q.elements(), key=Q.sort_key) == sorted({Q.reduce(g) for g in range(6)}, key=Q.sort_key)
    assert len(Q.elements()) == 2


# weights


def test_constant_weight_has_no_violations():
    G = Integers()
    assert validate_weight(G, GeneratingSet.standard(G), Weight.constant(), 6).ok


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.5])
def test_polynomial_weight_is_a_weight(s):
    G = Integers()
    rep = validate_weight(G, GeneratingSet.standard(G), Weight.polynomial(G, s), 10)
    assert rep.ok
    # independent enumeration of (1+|m+n|) <= (1+|m|)(1+|n|)
    for m, n in itertools.product(range(-10, 11), repeat=2):
        assert (1 + abs(m + n)) ** s <= (1 + abs(m)) ** s * (1 + abs(n)) ** s * (1 + 1e-12)


def test_reciprocal_weight_violates_lower_bound():
    G = Integers()
    nu = Weight("reciprocal", lambda n: 1.0 / (1 + abs(n)))
    kinds = {v.kind for v in validate_weight(G, GeneratingSet.standard(G), nu, 3).violations}
    assert "nu < 1" in kinds


def test_asymmetric_and_supermultiplicative_weights_flagged():
    G = Integers()
    V = GeneratingSet.standard(G)
    asym = Weight("asym", lambda n: 2.0 if n > 0 else 1.0)
    assert "symmetry" in {v.kind for v in validate_weight(G, V, asym, 2).violations}
    sq = Weight("square", lambda n: float(np.exp(n * n)))
    assert "submultiplicativity" in {v.kind for v in validate_weight(G, V, sq, 2).violations}


def test_ugrs_profile_polynomial_tends_to_one():
    G = Integers()
    prof = ugrs_profile(G, GeneratingSet.standard(G), Weight.polynomial(G, 2), 400)
    assert prof.values[-1] == pytest.approx(401 ** (2 / 400), rel=1e-12)
    assert abs(prof.values[-1] - 1) < 0.05
    assert prof.appears_ugrs()


def test_ugrs_profile_exponential_flags_failure():
    G = Integers()
    prof = ugrs_profile(G, GeneratingSet.standard(G), Weight.exponential(G, 2.0), 100)
    assert abs(prof.limit_estimate() - 2.0) <= 0.01
    assert not prof.appears_ugrs()


def test_ugrs_profile_resource_cap(monkeypatch):
    monkeypatch.setenv("GRADEALG_CAP", "50")
    from gradealg import group as gmod

    gmod._shells.cache_clear()
    G = Lattice(3)
    with pytest.raises(ResourceError) as info:
        ugrs_profile(G, GeneratingSet.standard(G), Weight.polynomial(G, 1), 30)
    assert info.value.partial is not None
    gmod._shells.cache_clear()


def test_ugrs_on_finite_group_saturates():
    G = Cyclic(5)
    prof = ugrs_profile(G, GeneratingSet.standard(G), Weight.exponential(G, 2.0), 20)
    assert len(prof.values) == 20
    assert prof.values[-1] < prof.values[1]


def test_shell_constant_for_lattice_polynomial_weight():
    G = Lattice(2)
    rep = shell_constant(G, GeneratingSet.standard(G), Weight.polynomial(G, 1), 6)
    assert rep.constant == pytest.approx(1.0)
    # a weight that varies inside shells
    nu = Weight("tilt", lambda g: 1.0 + abs(g[0]))
    assert shell_constant(G, GeneratingSet.standard(G), nu, 4).constant == pytest.approx(5.0)


def test_derived_z_weight_is_monotone():
    G = Heisenberg()
    v = derived_z_weight(GeneratingSet.standard(G), Weight.polynomial(G, 1), 5)
    assert np.all(np.diff(v) >= 0) and v[0] == 1.0


def test_specs():
    assert group_from_spec("Z") == Integers()
    assert group_from_spec({"kind": "Zq", "q": 4}) == Cyclic(4)
    with pytest.raises(ConfigurationError):
        group_from_spec({"kind": "free"})
    nu = weight_from_spec({"kind": "table", "values": [[0, 1.0], [1, 2.0]], "default": 3.0}, Integers())
    assert nu(1) == 2.0 and nu(9) == 3.0


@settings(max_examples=50)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=2), st.lists(st.integers(-6, 6), min_size=2, max_size=2))
def test_lattice_length_is_l1(a, b):
    G = Lattice(2)
    V = GeneratingSet.standard(G)
    g = G.mul(tuple(a), tuple(b))
    assert word_length(G, V, g, 32) == abs(g[0]) + abs(g[1])
