import numpy as np
import pytest

from gradealg.dual_action import spectral_project
from gradealg.errors import ConfigurationError, DomainError, InversionError, RepresentationError, ResourceError
from gradealg.graded import GradedElement, MatrixFibers, ScalarFibers
from gradealg.group import Integers, Weight
from gradealg.models import BunceDeddensModel, CARModel, GroupAlgebraModel, WienerHopfModel
from gradealg.models.weights import PeriodicSequence
from gradealg.numerics import (boundary_rank, check_symmetric_sample, compress_matrix, decay_profile,
                               fredholm_probe, invert_graded, neumann_inverse, quotient_components,
                               spectral_radius_profile, window_stability)

Z = Integers()
SZ = ScalarFibers(Z)


def scalar(d):
    return GradedElement(SZ, d)


def test_decay_profile_shells():
    prof = decay_profile(scalar({0: 1.0, 2: -0.5, -2: 0.25j, 3: 1.0}), weight=Weight.polynomial(Z, 1))
    assert prof.shell_sums.tolist() == [1.0, 0.0, 0.75, 1.0]
    assert prof.shell_sups.tolist() == [1.0, 0.0, 0.5, 1.0]
    assert prof.weight_values[2] == 3.0
    assert prof.total == pytest.approx(2.75)
    lines = prof.to_csv().splitlines()
    assert lines[0] == "shell_index,shell_sum,shell_sup,weight_value" and len(lines) == 5


def test_symmetric_sample_unit_is_one():
    m = GroupAlgebraModel(Z, window=16)
    assert check_symmetric_sample(m.unit(), m) == pytest.approx(1.0)


def test_symmetric_sample_nonnegative_on_random_elements():
    rng = np.random.default_rng(0)
    for m in (GroupAlgebraModel(Z, window=32), CARModel(3), BunceDeddensModel([2, 4], window=48)):
        for _ in range(20):
            assert check_symmetric_sample(m.random_element(rng), m) >= -1e-9


class _BrokenAdjoint:
    """Representation whose matrices are deliberately non-Hermitian."""

    def __init__(self, inner):
        self.inner = inner

    def matrix(self, phi):
        A = self.inner.matrix(phi)
        return A + np.triu(np.ones_like(A), 1)


def test_symmetric_sample_flags_non_hermitian_representation():
    m = GroupAlgebraModel(Z, window=8)
    with pytest.raises(RepresentationError):
        check_symmetric_sample(m.unit(), _BrokenAdjoint(m))


# inversion


def test_invert_unit():
    m = GroupAlgebraModel(Z, window=32)
    res = invert_graded(m.unit(), m)
    assert res.psi.allclose(m.unit(), 1e-14)
    assert res.residual <= 1e-14


def test_invert_singular_raises():
    m = GroupAlgebraModel(Z, window=16)
    with pytest.raises(InversionError):
        invert_graded(scalar({0: 1.0, 1: -1.0}).scale(0), m)
    with pytest.raises(InversionError):
        invert_graded(scalar({0: 1.0, 1: 1.0, -1: 1.0}), m.with_window(2))


def test_invert_geometric_series_small_window():
    m = GroupAlgebraModel(Z, window=256)
    res = invert_graded(scalar({0: 1.0, 1: -0.5}), m)
    for n in range(21):
        assert res.psi[n] == pytest.approx(2.0 ** -n, rel=1e-6)
    assert res.psi.l1_norm() == pytest.approx(2.0, abs=1e-6)
    assert res.residual <= 1e-8 and res.recomposition_error <= 1e-8


def test_invert_matches_neumann_oracle():
    m = GroupAlgebraModel(Z, window=128)
    phi = scalar({0: 1.0, 1: 0.3, -1: -0.2j, 2: 0.1})
    res = invert_graded(phi, m)
    ref = neumann_inverse(phi, 1.0)
    for g, x in ref.items():
        if abs(g) <= 20:
            assert abs(res.psi.get(g, 0) - x) <= 1e-6 * abs(x) + 1e-12


def test_neumann_domain():
    with pytest.raises(DomainError):
        neumann_inverse(scalar({0: 1.0, 1: 1.0}), 1.0)


def test_window_stability_bunce_deddens():
    m = BunceDeddensModel([2, 4], window=64)
    phi = m.unit().scale(2) - m.S_a([1.0, 0.5])
    st = window_stability(phi, m, [64, 128])
    assert st.max_difference <= 1e-6
    with pytest.raises(ConfigurationError):
        window_stability(phi, m, [64])


# spectral radius


def test_radius_of_shift_is_one():
    prof = spectral_radius_profile(scalar({1: 1.0}), "l1", 30)
    assert np.allclose(prof.values, 1.0)


def test_radius_of_symmetric_walk():
    m = GroupAlgebraModel(Z, window=128)
    phi = scalar({-1: 0.5, 1: 0.5})
    l1 = spectral_radius_profile(phi, "l1", 40)
    op = spectral_radius_profile(phi, "operator", 40, rep=m)
    assert np.allclose(l1.values, 1.0)
    assert np.all(op.values <= l1.values + 1e-10)


def test_weighted_radius_polynomial_weight():
    prof = spectral_radius_profile(scalar({1: 1.0}), "l1nu", 400, weight=Weight.polynomial(Z, 2))
    assert abs(prof.last() - 1.0) < 0.05
    assert prof.last() == pytest.approx(401 ** (2 / 400))


def test_radius_configuration_and_cap():
    phi = scalar({-1: 0.5, 0: 0.1, 1: 0.5})
    with pytest.raises(ConfigurationError):
        spectral_radius_profile(phi, "l2")
    with pytest.raises(ConfigurationError):
        spectral_radius_profile(phi, "l1nu")
    with pytest.raises(ResourceError) as info:
        spectral_radius_profile(phi, "l1", 50, cap=30)
    assert len(info.value.partial) > 0


# Fredholm probes


def test_fredholm_probe_needs_three_increasing_windows():
    fam = lambda w: np.eye(w)
    with pytest.raises(ConfigurationError):
        fredholm_probe(fam, [4, 8])
    with pytest.raises(ConfigurationError):
        fredholm_probe(fam, [4, 8, 8])


def test_toeplitz_two_minus_shift_bounded_below():
    m = BunceDeddensModel([1, 2], window=16)
    phi = m.unit().scale(2) - m.S()
    rep = fredholm_probe(lambda w: m.with_window(w).matrix(phi), [16, 32, 64])
    assert rep.bounded_below(1 - 1e-10)
    assert [p.near_kernel for p in rep.probes] == [0, 0, 0]


def test_boundary_rank_of_window_isometry():
    m = WienerHopfModel(1, window=10)
    for w in (5, 10, 20):
        A = m.with_window(w).matrix(m.W((1,)))
        assert boundary_rank(A) == 1


# ideal compression


def test_quotient_tail_sup():
    m = BunceDeddensModel([1, 2], window=64)
    N = 40
    w = PeriodicSequence.finite(1.0 / (1.0 + np.arange(N)))
    phi = GradedElement(m.fibers, {0: w})
    for W in (0, 5, 17, 39):
        q = quotient_components(phi, W)
        assert q.l1_norm() == pytest.approx(1 / (1 + W))
    assert quotient_components(phi, N).support == ()


def test_compression_commutes_with_projections():
    rng = np.random.default_rng(1)
    m = BunceDeddensModel([2, 4], window=64)
    c, G = m.charges(), m.group
    for _ in range(5):
        phi = m.random_element(rng)
        A = m.matrix(phi)
        for W in (3, 10):
            K = compress_matrix(A, W)
            q = quotient_components(phi, W)
            for g in range(-3, 4):
                lhs = spectral_project(K, g, 9, c, G)
                rhs = compress_matrix(spectral_project(A, g, 9, c, G), W)
                assert np.array_equal(lhs, rhs)
                blk = q.get(g)
                via_fibers = m.pi(g, blk) if blk is not None else np.zeros_like(A)
                assert np.allclose(via_fibers, rhs, atol=1e-14)


def test_matrix_compression_by_index_set():
    F = MatrixFibers(Z, 4)
    phi = GradedElement(F, {0: np.ones((4, 4), dtype=complex)})
    q = quotient_components(phi, [0, 2])
    assert np.array_equal(q[0].real, np.array([[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 0, 0], [0, 1, 0, 1]]))
