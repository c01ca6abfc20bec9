"""Wiener-Hopf isometries ``W_p delta_q = delta_{p+q}`` on ``l2(N^k)``.

The pair ``(Z^k, N^k)`` is quasi-lattice ordered with least upper bound the
componentwise maximum.  Products of ``W_p`` and adjoints are weighted shifts
whose weights are combinations of orthant indicators, so the fibers are
:class:`ShiftFibers` over :class:`OrthantSum`.  The window is the box
``[0, W)^k``.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import ConfigurationError, StructuralError
from ..graded import GradedElement
from ..group import Lattice
from .base import ModelRep, box_index, box_points
from .weights import OrthantSum, ShiftFibers


def lub(p, q) -> tuple:
    """Least upper bound in ``N^k``: componentwise max."""
    return tuple(max(a, b) for a, b in zip(p, q))


class WienerHopfModel(ModelRep):
    name = "wiener_hopf"

    def __init__(self, k: int = 1, window: int = 16, fibers: ShiftFibers | None = None):
        self.k = int(k)
        if self.k < 1:
            raise ConfigurationError("k must be >= 1")
        self.window = int(window)
        if self.window < 2:
            raise ConfigurationError("window must be >= 2")
        self.fibers = fibers or ShiftFibers(Lattice(self.k), OrthantSum, f"wiener_hopf{self.k}")
        self._pts = box_points(0, self.window, self.k)

    @property
    def dim(self):
        return self.window ** self.k

    def _p(self, p):
        p = tuple(int(x) for x in (p if isinstance(p, (tuple, list)) else (p,)))
        if len(p) != self.k or min(p) < 0:
            raise ConfigurationError(f"{p!r} is not in N^{self.k}")
        return p

    def W(self, p) -> GradedElement:
        """The isometry ``W_p`` (degree ``p``)."""
        p = self._p(p)
        return GradedElement(self.fibers, {p: OrthantSum.indicator((0,) * self.k)})

    def W_star(self, p) -> GradedElement:
        return self.W(p).adjoint()

    def generators(self):
        return {f"W{i}": self.W(tuple(int(i == j) for j in range(self.k))) for i in range(self.k)}

    def pi(self, g, block):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        self.accumulate(out, g, block)
        return out

    def accumulate(self, out, g, block):
        g = np.atleast_1d(np.asarray(g))
        rows, ok = box_index(self._pts + g, 0, self.window)
        cols = np.nonzero(ok)[0]
        out[rows[ok], cols] += block(self._pts[cols])

    def apply(self, phi: GradedElement, vec: dict) -> dict:
        """Exact action on a finitely supported vector ``{point: coefficient}``."""
        out: dict = {}
        for g, w in phi.items():
            for r, c in vec.items():
                r = self._p(r) if not isinstance(r, tuple) else r
                s = tuple(a + b for a, b in zip(r, g))
                if min(s) < 0:
                    continue
                v = complex(w(np.array([r]))[0]) * c
                if v != 0:
                    out[s] = out.get(s, 0) + v
        return {s: v for s, v in sorted(out.items()) if v != 0}

    def extract(self, A, g, margin: int = 0):
        """Recover the orthant expansion of the degree-``g`` diagonal by Moebius inversion.

        Corners ``c`` are kept when ``c`` and ``c + g`` lie at least ``margin``
        inside the upper window boundary.
        """
        g = tuple(int(x) for x in np.atleast_1d(g))
        W = self.window
        hi = W - margin

        def v(r):
            if min(r) < 0:
                return 0.0
            s = tuple(a + b for a, b in zip(r, g))
            if min(s) < 0 or max(s) >= W or max(r) >= W:
                return 0.0
            return A[np.ravel_multi_index(s, (W,) * self.k), np.ravel_multi_index(r, (W,) * self.k)]

        terms = {}
        for c in itertools.product(range(hi), repeat=self.k):
            if max(a + b for a, b in zip(c, g)) >= hi or min(a + b for a, b in zip(c, g)) < 0:
                continue
            total = 0.0
            for eps in itertools.product((0, 1), repeat=self.k):
                r = tuple(a - b for a, b in zip(c, eps))
                total += (-1) ** sum(eps) * v(r)
            if abs(total) > 1e-15:
                terms[c] = total
        return self.fibers.canonical(OrthantSum(self.k, terms), g)

    def interior(self, margin):
        ok = np.all(self._pts < self.window - margin, axis=1)
        return np.nonzero(ok)[0]

    def charges(self):
        return self._pts

    def with_window(self, window):
        return WienerHopfModel(self.k, window, self.fibers)

    def sample_degrees(self, radius):
        return [tuple(p) for p in itertools.product(range(-radius, radius + 1), repeat=self.k)
                if sum(abs(x) for x in p) <= radius]

    def describe(self):
        d = super().describe()
        d.update(k=self.k, window=self.window)
        return d
