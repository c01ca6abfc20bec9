"""CAR operators on the fermionic Fock space of ``C^d`` (Jordan-Wigner).

Basis vectors are occupation patterns ``n in {0,1}^d`` with index
``sum_j n_j 2^j``.  ``a_j`` removes a particle from mode ``j`` with sign
``(-1)^{n_0 + ... + n_{j-1}}`` and ``a(r) = sum_j r_j a_j`` is linear in
``r``.  Mode ``j`` carries a group element ``g_j``; basis vector ``n`` carries
charge ``-sum_j n_j g_j`` so that ``a(e_j)`` has degree ``g_j``.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, ResourceError
from ..graded import GradedElement, MatrixFibers
from ..group import GroupDescriptor, Integers, Lattice
from .base import ModelRep

MAX_MODES = 12


def annihilators(d: int) -> list[np.ndarray]:
    """Dense Jordan-Wigner annihilation matrices ``a_0..a_{d-1}``."""
    dim = 2 ** d
    idx = np.arange(dim)
    occ = (idx[:, None] >> np.arange(d)) & 1
    out = []
    for j in range(d):
        a = np.zeros((dim, dim), dtype=complex)
        cols = idx[occ[:, j] == 1]
        sign = (-1.0) ** occ[cols, :j].sum(axis=1)
        a[cols ^ (1 << j), cols] = sign
        out.append(a)
    return out


class CARModel(ModelRep):
    name = "car"
    exact = True

    def __init__(self, d: int, degrees=None, group: GroupDescriptor | None = None):
        d = int(d)
        if d < 1:
            raise ConfigurationError("d must be >= 1")
        if d > MAX_MODES:
            raise ResourceError(f"d={d} exceeds the Fock-space cap of {MAX_MODES} modes")
        self.d = d
        group = group or Integers()
        if not isinstance(group, (Integers, Lattice)):
            raise ConfigurationError("CAR degrees must live in Z or Z^k")
        degrees = [1] * d if degrees is None else list(degrees)
        if len(degrees) != d:
            raise ConfigurationError("need one degree per mode")
        self.degrees = [group.normalize(g) for g in degrees]
        k = 1 if isinstance(group, Integers) else group.k
        gvec = np.array([np.atleast_1d(g) for g in self.degrees], dtype=int).reshape(d, k)
        idx = np.arange(2 ** d)
        occ = (idx[:, None] >> np.arange(d)) & 1
        charges = -occ @ gvec
        self._charges = charges[:, 0] if isinstance(group, Integers) else charges
        diff = charges[:, None, :] - charges[None, :, :]

        def mask(g):
            return np.all(diff == np.atleast_1d(g), axis=2)

        self.fibers = MatrixFibers(group, 2 ** d, mask, f"car{d}")
        self._a = annihilators(d)

    @property
    def dim(self):
        return 2 ** self.d

    def pi(self, g, block):
        return np.asarray(block, dtype=complex)

    def extract(self, A, g):
        return np.where(self.fibers.mask(g), A, 0)

    def charges(self):
        return self._charges

    def sample_degrees(self, radius):
        """Degrees of monomials in at most ``radius`` creation/annihilation operators."""
        G = self.group
        degs = {G.identity()}
        frontier = {G.identity()}
        steps = self.degrees + [G.inv(g) for g in self.degrees]
        for _ in range(radius):
            frontier = {G.mul(h, s) for h in frontier for s in steps}
            degs |= frontier
        return sorted(degs, key=G.sort_key)

    # operators

    def a_matrix(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=complex).ravel()
        if r.size != self.d:
            raise ConfigurationError(f"vector must have {self.d} components")
        return sum(c * a for c, a in zip(r, self._a))

    def a_star_matrix(self, r) -> np.ndarray:
        return self.a_matrix(r).conj().T

    def a(self, j: int) -> GradedElement:
        """``a(e_j)`` as a pure element of degree ``g_j``."""
        return GradedElement(self.fibers, {self.degrees[j]: self._a[j]})

    def a_star(self, j: int) -> GradedElement:
        return self.a(j).adjoint()

    def a_of(self, r) -> GradedElement:
        """``a(r)`` split into its homogeneous components."""
        out = GradedElement.zero(self.fibers)
        for j, c in enumerate(np.asarray(r, dtype=complex).ravel()):
            if c != 0:
                out = out + self.a(j).scale(c)
        return out

    def number(self, j: int) -> GradedElement:
        return self.a_star(j) * self.a(j)

    def generators(self):
        return {f"a{j}": self.a(j) for j in range(self.d)}

    def describe(self):
        d = super().describe()
        d.update(d=self.d, degrees=[list(g) if isinstance(g, tuple) else g for g in self.degrees])
        return d
