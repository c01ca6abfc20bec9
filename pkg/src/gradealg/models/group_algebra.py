"""(Twisted) group algebras in the left regular representation.

On ``l2(G)`` the degree-``g`` fiber is spanned by ``lambda_omega(g)``, which
sends ``delta_x`` to ``omega(g, x) delta_{gx}``.  For ``Z`` and ``Z^k`` the
representation is compressed to a centered box of side ``window``; for
finite groups it is exact.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..graded import Cocycle, GradedElement, ScalarFibers
from ..group import GroupDescriptor, Integers, Lattice
from .base import ModelRep, box_index, box_points


class GroupAlgebraModel(ModelRep):

    def __init__(self, group: GroupDescriptor, window: int = 64, cocycle: Cocycle | None = None):
        self.fibers = ScalarFibers(group, cocycle)
        self.cocycle = cocycle
        self.window = int(window)
        self.exact = group.finite
        self.name = "group_algebra" if cocycle is None else "twisted_group_algebra"
        if group.finite:
            self.points = list(group.elements())
        elif isinstance(group, (Integers, Lattice)):
            if self.window < 2:
                raise ConfigurationError("window must be >= 2")
            k = 1 if isinstance(group, Integers) else group.k
            self._k = k
            self._lo = -(self.window // 2)
            self._hi = self._lo + self.window
            pts = box_points(self._lo, self._hi, k)
            self._pts = pts
            self.points = [int(p[0]) for p in pts] if isinstance(group, Integers) else [tuple(map(int, p)) for p in pts]
        else:
            raise ConfigurationError(f"no regular-representation window for {group.kind}")
        self.index = {x: i for i, x in enumerate(self.points)}

    @property
    def dim(self):
        return len(self.points)

    def _targets(self, g):
        G = self.group
        if G.finite:
            cols = np.arange(self.dim)
            rows = np.array([self.index[G.mul(g, x)] for x in self.points])
            return rows, cols
        vec = np.atleast_1d(np.asarray(g))
        rows, ok = box_index(self._pts + vec, self._lo, self._hi)
        cols = np.nonzero(ok)[0]
        return rows[ok], cols

    def pi(self, g, block):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        self.accumulate(out, g, block)
        return out

    def accumulate(self, out, g, block):
        rows, cols = self._targets(g)
        if self.cocycle is None:
            out[rows, cols] += block
        else:
            out[rows, cols] += [block * self.cocycle(g, self.points[c]) for c in cols]

    def extract(self, A, g):
        e = self.group.identity()
        g = self.group.normalize(g)
        return complex(A[self.index[g], self.index[e]])

    def charges(self):
        if self.group.finite:
            return np.array(self.points)
        return self._pts if self._k > 1 else self._pts[:, 0]

    def window_degrees(self):
        return list(self.points)

    def interior(self, margin):
        if self.exact:
            return np.arange(self.dim)
        ok = np.all((self._pts >= self._lo + margin) & (self._pts < self._hi - margin), axis=1)
        return np.nonzero(ok)[0]

    def with_window(self, window):
        if self.exact:
            return self
        return GroupAlgebraModel(self.group, window, self.cocycle)

    def delta(self, g, c=1.0) -> GradedElement:
        return GradedElement(self.fibers, {g: complex(c)})

    def generators(self):
        return {f"u{i}": self.delta(g) for i, g in enumerate(self.group.standard_generators())}

    def describe(self):
        d = super().describe()
        d.update(group=self.group.kind, window=self.window if not self.exact else None,
                 cocycle=None if self.cocycle is None else self.cocycle.name)
        return d
