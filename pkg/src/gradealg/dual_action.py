"""Dual-group actions of abelian gradings: spectral projections, decomposition, coarsening.

For ``G = Z^k`` the Haar integral over the torus is replaced by the average
over ``M``-th roots of unity in each factor; for ``Z/q`` the character sum is
exact.  On matrices the action is conjugation by ``diag(chi(c_i))`` where
``c_i`` is the charge of the ``i``-th basis vector, so entry ``(i, j)`` is
multiplied by ``chi(c_i - c_j)``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import StructuralError, UnsupportedError, ValidationError
from .graded import FiberSystem, GradedElement, MatrixFibers
from .group import Cyclic, GroupDescriptor, Integers, Lattice, QuotientGroup


class AliasingWarning(UserWarning):
    """Quadrature resolution too small for the spread of active degrees."""


def _rank(group: GroupDescriptor) -> int:
    if isinstance(group, Integers):
        return 1
    if isinstance(group, Lattice):
        return group.k
    if isinstance(group, Cyclic):
        return 1
    if not group.abelian:
        raise UnsupportedError("dual actions need an abelian group; non-abelian coactions are not implemented")
    raise UnsupportedError(f"no character table for {group.kind}")


def _as_vec(g, k):
    return np.atleast_1d(np.asarray(g, dtype=float)).reshape(k)


@dataclass(frozen=True)
class CharacterGrid:
    """Finite set of characters used for quadrature.

    Characters of ``Z^k`` are ``chi_j(g) = exp(2 pi i <j, g> / M)`` for
    ``j in {0..M-1}^k``; characters of ``Z/q`` use ``M = q``.
    """

    group: GroupDescriptor
    M: int

    def __post_init__(self):
        _rank(self.group)
        if isinstance(self.group, Cyclic):
            object.__setattr__(self, "M", self.group.q)
        if self.M < 1:
            raise ValidationError("quadrature resolution must be >= 1")

    @property
    def rank(self) -> int:
        return _rank(self.group)

    def indices(self):
        return itertools.product(range(self.M), repeat=self.rank)

    def __len__(self):
        return self.M ** self.rank

    def value(self, j, g) -> complex:
        k = self.rank
        return complex(np.exp(2j * np.pi * (np.asarray(j, dtype=float) @ _as_vec(g, k)) / self.M))

    def values(self, j, charges: np.ndarray) -> np.ndarray:
        c = np.asarray(charges, dtype=float).reshape(len(charges), -1)
        return np.exp(2j * np.pi * (c @ np.asarray(j, dtype=float)) / self.M)


def default_resolution(max_degree: int) -> int:
    """``2 * max_degree + 1`` roots of unity per factor."""
    return 2 * int(max_degree) + 1


# the action


def alpha_matrix(T: np.ndarray, chi, charges: np.ndarray, grid: CharacterGrid) -> np.ndarray:
    """``U_chi T U_chi^*`` with ``U_chi = diag(chi(c_i))``."""
    u = grid.values(chi, charges)
    return (u[:, None] * T) * u.conj()[None, :]


def alpha_element(phi: GradedElement, chi, grid: CharacterGrid) -> GradedElement:
    """``alpha_chi`` on a graded element: multiply each block by ``chi(g)``."""
    f = phi.fibers
    return GradedElement(f, {g: f.scale(grid.value(chi, g), x) for g, x in phi.items()}, check=False)


def _charge_diffs(charges: np.ndarray):
    c = np.asarray(charges).reshape(len(charges), -1)
    diff = c[:, None, :] - c[None, :, :]
    flat = diff.reshape(-1, c.shape[1])
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    return uniq, inverse.reshape(len(c), len(c))


def _spread(degrees: np.ndarray) -> np.ndarray:
    if len(degrees) == 0:
        return np.zeros(1, dtype=int)
    d = np.asarray(degrees).reshape(len(degrees), -1)
    return d.max(axis=0) - d.min(axis=0)


def aliasing_risk(active_degrees, M: int) -> bool:
    """True when some factor's degree spread reaches ``M`` (components may alias)."""
    return bool(np.any(_spread(np.asarray(active_degrees)) >= M))


def _warn_if_aliasing(active, M, grid):
    if not isinstance(grid.group, Cyclic) and aliasing_risk(active, M):
        warnings.warn(f"resolution M={M} does not exceed the degree spread "
                      f"{_spread(np.asarray(active)).tolist()}; components may alias",
                      AliasingWarning, stacklevel=3)


def spectral_project(T, g, M: int | None = None, charges: np.ndarray | None = None,
                     group: GroupDescriptor | None = None):
    """Degree-``g`` spectral component ``mean_chi conj(chi(g)) alpha_chi(T)``.

    ``T`` is either a :class:`GradedElement` (the action relabels degrees) or
    a matrix with per-basis ``charges`` in ``group``.  The character average is
    evaluated once per charge-difference class and broadcast to the entries.
    """
    if isinstance(T, GradedElement):
        group = T.group
        _rank(group)
        if M is None:
            M = default_resolution(max((int(np.abs(_as_vec(h, _rank(group))).max()) for h in T.support), default=0))
        grid = CharacterGrid(group, M)
        _warn_if_aliasing(np.array([_as_vec(h, grid.rank) for h in T.support]).reshape(-1, grid.rank), grid.M, grid)
        f = T.fibers
        out = {}
        for h, x in T.items():
            w = sum(grid.value(chi, g).conjugate() * grid.value(chi, h) for chi in grid.indices()) / len(grid)
            if abs(w) > 1e-15:
                out[h] = f.scale(w, x)
        # aliased degrees (h = g mod M, h != g) survive at their own degree
        return GradedElement(f, out, check=False)
    if charges is None or group is None:
        raise StructuralError("matrix inputs need charges and a group")
    _rank(group)
    T = np.asarray(T)
    uniq, inv = _charge_diffs(charges)
    active = uniq[np.unique(inv[np.abs(T) > 0])] if np.any(T) else uniq[:0]
    if M is None:
        M = default_resolution(int(np.abs(active).max(initial=0)))
    grid = CharacterGrid(group, M)
    _warn_if_aliasing(active, grid.M, grid)
    gv = _as_vec(g, grid.rank)
    weights = np.zeros(len(uniq), dtype=complex)
    for chi in grid.indices():
        phase = np.exp(2j * np.pi * (uniq @ np.asarray(chi, dtype=float) - gv @ np.asarray(chi, dtype=float)) / grid.M)
        weights += phase
    weights /= len(grid)
    weights[np.abs(weights) < 1e-15] = 0
    return T * weights[inv]


def diagonal_component(T: np.ndarray, g, charges: np.ndarray) -> np.ndarray:
    """Independent route: keep exactly the entries with ``c_i - c_j = g``."""
    c = np.asarray(charges).reshape(len(charges), -1)
    gv = np.atleast_1d(np.asarray(g)).reshape(-1)
    mask = np.all(c[:, None, :] - c[None, :, :] == gv, axis=2)
    return np.where(mask, T, 0)


def charge_fibers(group: GroupDescriptor, charges: np.ndarray, name: str = "charges") -> MatrixFibers:
    """Matrix fibers whose degree-``g`` part is the set of entries with charge difference ``g``."""
    c = np.asarray(charges).reshape(len(charges), -1)
    diff = c[:, None, :] - c[None, :, :]

    def mask(g):
        return np.all(diff == np.atleast_1d(np.asarray(g)).reshape(-1), axis=2)

    return MatrixFibers(group, len(c), mask, name)


@dataclass(frozen=True)
class Decomposition:
    element: GradedElement
    residual: float
    aliasing: bool


def decompose(T: np.ndarray, degree_window, charges: np.ndarray, group: GroupDescriptor,
              M: int | None = None, fibers: FiberSystem | None = None) -> Decomposition:
    """Split ``T`` into spectral components over ``degree_window``.

    ``residual`` is the operator norm of ``T`` minus the sum of the recovered
    components, i.e. the part of ``T`` living outside the window.
    """
    degrees = [group.normalize(g) for g in degree_window]
    if M is None:
        span = max((int(np.abs(np.atleast_1d(g)).max()) for g in degrees), default=0)
        M = default_resolution(span)
    fibers = fibers or charge_fibers(group, charges)
    uniq, inv = _charge_diffs(charges)
    active = uniq[np.unique(inv[np.abs(T) > 0])] if np.any(T) else uniq[:0]
    alias = aliasing_risk(active, M)
    blocks = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasingWarning)
        for g in degrees:
            blocks[g] = spectral_project(T, g, M, charges, group)
    element = GradedElement(fibers, blocks, check=False)
    rest = np.asarray(T, dtype=complex).copy()
    for g in element.support:
        rest -= element[g]
    residual = float(np.linalg.norm(rest, 2)) if rest.size else 0.0
    return Decomposition(element, residual, alias)


# coarsening


class NestedFibers(FiberSystem):
    """Fibers of the ``G/N`` grading: a coset block is a graded element supported in the coset.

    The norm of a block is the operator norm of the sum of its components,
    computed in ``rep`` when given, otherwise directly for matrix fibers.
    """

    def __init__(self, parent: FiberSystem, quotient: QuotientGroup, rep=None):
        self.parent = parent
        self.group = quotient
        self.rep = rep

    def __repr__(self):
        return f"NestedFibers({self.parent!r} / N)"

    def __eq__(self, other):
        return (isinstance(other, NestedFibers) and other.group == self.group
                and (other.parent is self.parent or other.parent == self.parent) and other.rep is self.rep)

    def __hash__(self):
        return hash(self.group)

    def mul(self, x, g, y, h):
        return x * y

    def adjoint(self, x, g):
        return x.adjoint()

    def norm(self, x, g):
        if not len(x):
            return 0.0
        if self.rep is not None:
            return float(np.linalg.norm(self.rep.matrix(x), 2))
        if isinstance(self.parent, MatrixFibers):
            total = sum(x.blocks[h] for h in x.support)
            return float(np.linalg.norm(total, 2))
        raise UnsupportedError("coset norms need a representation for these fibers")

    def unit(self):
        return GradedElement.unit(self.parent)

    def check(self, x, g):
        if not isinstance(x, GradedElement) or x.fibers is not self.parent and x.fibers != self.parent:
            raise StructuralError("coset blocks must be graded elements of the parent fibers")
        for h in x.support:
            if self.group.reduce(h) != g:
                raise StructuralError(f"degree {h!r} is not in the coset {g!r}")

    def is_zero(self, x, g):
        return len(x) == 0

    def add(self, x, y):
        return x + y

    def scale(self, c, x):
        return x.scale(c)

    def random_block(self, g, rng):
        return GradedElement.random(self.parent, rng, [g])

    def block_to_json(self, x):
        return x.to_json()


def coarsen(phi: GradedElement, generators=None, elements=None, rep=None,
            quotient: QuotientGroup | None = None) -> GradedElement:
    """Regrade ``phi`` over ``G/N``; the block at a coset collects the components in it.

    ``N`` is given by ``generators`` or by an explicit element list
    ``elements`` (checked to be a subgroup), or as a ready ``quotient``.
    """
    group = phi.group
    if quotient is None:
        if not group.abelian:
            raise UnsupportedError("coarsening is implemented for abelian groups")
        if elements is not None:
            quotient = QuotientGroup(group, elements_given=tuple(elements))
        else:
            quotient = QuotientGroup(group, tuple(generators or ()))
    fibers = NestedFibers(phi.fibers, quotient, rep)
    buckets: dict = {}
    for g, x in phi.items():
        buckets.setdefault(quotient.reduce(g), {})[g] = x
    return GradedElement(fibers, {c: GradedElement(phi.fibers, b, check=False) for c, b in buckets.items()},
                         check=False)


def flatten(psi: GradedElement) -> GradedElement:
    """Inverse of :func:`coarsen`: merge the coset blocks back into one ``G``-graded element."""
    if not isinstance(psi.fibers, NestedFibers):
        raise StructuralError("not a coarsened element")
    out = GradedElement.zero(psi.fibers.parent)
    for _, block in psi.items():
        out = out + block
    return out
