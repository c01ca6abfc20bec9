import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradealg.dual_action import (AliasingWarning, CharacterGrid, alpha_element, alpha_matrix, charge_fibers,
                                  coarsen, decompose, default_resolution, diagonal_component, flatten,
                                  spectral_project)
from gradealg.errors import StructuralError, UnsupportedError
from gradealg.graded import GradedElement, MatrixFibers, ScalarFibers
from gradealg.group import Cyclic, FiniteGroup, Integers, Lattice
from gradealg.models import BunceDeddensModel

Z = Integers()


def banded(n, width, rng):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    i, j = np.indices((n, n))
    return np.where(np.abs(i - j) <= width, A, 0)


def test_bunce_deddens_generator_has_degree_one():
    m = BunceDeddensModel([2, 4], window=64)
    A = m.matrix(m.S_a([1.0, -2.0]))
    P1 = spectral_project(A, 1, charges=m.charges(), group=m.group)
    P0 = spectral_project(A, 0, charges=m.charges(), group=m.group)
    assert np.abs(P1 - A).max() <= 1e-12
    assert np.abs(P0).max() <= 1e-12


def test_pure_degree_block_projects_to_itself():
    rng = np.random.default_rng(0)
    c = np.arange(10)
    A = diagonal_component(rng.standard_normal((10, 10)), 3, c)
    assert np.allclose(spectral_project(A, 3, charges=c, group=Z), A, atol=1e-12)
    for h in (-3, 0, 2, 4):
        assert np.abs(spectral_project(A, h, M=9, charges=c, group=Z)).max() <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 2 ** 31))
def test_sum_of_two_degrees_separated(g, h, seed):
    rng = np.random.default_rng(seed)
    c = np.arange(12)
    A = diagonal_component(rng.standard_normal((12, 12)), g, c)
    B = diagonal_component(rng.standard_normal((12, 12)), h, c)
    M = default_resolution(max(abs(g), abs(h)))
    T = A + B
    if g != h:
        assert np.abs(spectral_project(T, g, M, c, Z) - A).max() <= 1e-12
        assert np.abs(spectral_project(T, h, M, c, Z) - B).max() <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(-3, 3))
def test_projection_laws(seed, g):
    rng = np.random.default_rng(seed)
    c = np.arange(9)
    T = banded(9, 3, rng)
    P = spectral_project(T, g, 7, c, Z)
    assert np.abs(spectral_project(P, g, 7, c, Z) - P).max() <= 1e-12
    assert np.linalg.norm(P, 2) <= np.linalg.norm(T, 2) + 1e-10
    total = sum(spectral_project(T, k, 7, c, Z) for k in range(-3, 4))
    assert np.abs(total - T).max() <= 1e-12


def test_projection_agrees_with_diagonal_oracle_on_lattice():
    rng = np.random.default_rng(1)
    L = Lattice(2)
    c = np.array([(a, b) for a in range(4) for b in range(3)])
    T = rng.standard_normal((12, 12))
    for g in [(0, 0), (1, -1), (3, 2), (-2, 0)]:
        P = spectral_project(T, g, 7, c, L)
        assert np.abs(P - diagonal_component(T, g, c)).max() <= 1e-12


def test_cyclic_grading_exact_sum():
    rng = np.random.default_rng(2)
    G = Cyclic(3)
    c = np.arange(7) % 3
    T = rng.standard_normal((7, 7))
    parts = [spectral_project(T, g, None, c, G) for g in range(3)]
    assert np.abs(sum(parts) - T).max() <= 1e-12
    # on Z/3 the charge difference is taken mod 3
    diff = (c[:, None] - c[None, :]) % 3
    assert np.allclose(parts[1], np.where(diff == 1, T, 0))


def test_aliasing_warning_and_silence():
    rng = np.random.default_rng(3)
    c = np.arange(8)
    T = banded(8, 4, rng)
    with pytest.warns(AliasingWarning):
        spectral_project(T, 0, 5, c, Z)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        spectral_project(T, 0, 9, c, Z)


def test_alpha_matrix_scales_by_character():
    rng = np.random.default_rng(4)
    c = np.arange(6)
    grid = CharacterGrid(Z, 12)
    A = diagonal_component(rng.standard_normal((6, 6)), 2, c)
    assert np.allclose(alpha_matrix(A, (5,), c, grid), grid.value((5,), 2) * A)
    phi = GradedElement(ScalarFibers(Z), {2: 1.0, -1: 2.0})
    out = alpha_element(phi, (1,), grid)
    assert out[2] == pytest.approx(np.exp(2j * np.pi * 2 / 12))


def test_graded_element_projection():
    phi = GradedElement(ScalarFibers(Z), {-1: 1.0, 0: 2.0, 2: 3.0})
    assert dict(spectral_project(phi, 2).items()) == pytest.approx({2: 3.0})


def test_nonabelian_group_unsupported():
    with pytest.raises(UnsupportedError):
        CharacterGrid(FiniteGroup.symmetric(3), 3)


def test_matrix_input_needs_charges():
    with pytest.raises(StructuralError):
        spectral_project(np.eye(3), 0)


# decompose


def test_decompose_pure_degree():
    c = np.arange(5)
    A = diagonal_component(np.ones((5, 5)), 1, c)
    dec = decompose(A, range(-2, 3), c, Z)
    assert dec.element.support == (1,) and dec.residual == 0.0


def test_decompose_banded_matrix():
    rng = np.random.default_rng(5)
    c = np.arange(16)
    T = banded(16, 3, rng)
    dec = decompose(T, range(-3, 4), c, Z)
    assert len(dec.element.support) == 7
    assert dec.residual < 1e-12
    for g in dec.element.support:
        assert np.abs(dec.element[g] - diagonal_component(T, g, c)).max() <= 1e-12


def test_decompose_missing_degree_leaves_that_component():
    rng = np.random.default_rng(6)
    c = np.arange(10)
    T = banded(10, 2, rng)
    dec = decompose(T, [-2, -1, 0, 1], c, Z, M=5)
    missing = diagonal_component(T, 2, c)
    assert dec.residual == pytest.approx(np.linalg.norm(missing, 2), rel=1e-12)


# coarsening


def test_coarsen_trivial_subgroup_keeps_element():
    phi = GradedElement(ScalarFibers(Z), {0: 1.0, 1: 2.0, 5: 3.0})
    psi = coarsen(phi, generators=[])
    assert len(psi.support) == 3
    assert flatten(psi).allclose(phi, 0)


def test_coarsen_whole_group_collects_everything():
    F = MatrixFibers(Z, 3)
    rng = np.random.default_rng(7)
    phi = GradedElement.random(F, rng, range(-2, 3))
    psi = coarsen(phi, generators=[1])
    assert len(psi.support) == 1
    (block,) = [b for _, b in psi.items()]
    assert np.allclose(sum(block[g] for g in block.support), sum(phi[g] for g in phi.support))


def test_coarsen_even_odd():
    phi = GradedElement(ScalarFibers(Z), {0: 1.0, 1: 1.0, 2: 1.0})
    psi = coarsen(phi, generators=[2])
    Q = psi.group
    even, odd = psi[Q.reduce(0)], psi[Q.reduce(1)]
    assert even.support == (0, 2) and odd.support == (1,)


def test_coarsen_is_multiplicative():
    rng = np.random.default_rng(8)
    c = np.arange(8)
    F = charge_fibers(Z, c)
    for _ in range(10):
        x, y = GradedElement.random(F, rng, range(-3, 4)), GradedElement.random(F, rng, range(-3, 4))
        lhs = coarsen(x * y, generators=[3])
        rhs = coarsen(x, generators=[3]) * coarsen(y, generators=[3])
        assert flatten(lhs).allclose(flatten(rhs), 1e-12)
        for q, blk in rhs.items():
            assert all(lhs.group.reduce(g) == q for g in blk.support)
        # coset norms are operator norms of the coset sums
        for q, blk in lhs.items():
            assert lhs.fibers.norm(blk, q) <= blk.l1_norm() + 1e-12


def test_flatten_rejects_plain_elements():
    with pytest.raises(StructuralError):
        flatten(GradedElement.unit(ScalarFibers(Z)))
