"""Toeplitz-Bunce-Deddens algebras as weighted shifts on ``l2(N)``.

The generators are ``S_a = S M_a`` with ``a`` periodic of period ``q_i``.
Every element of the algebra generated by them decomposes into weighted
shifts ``delta_r -> w(r) delta_{r+k}`` with eventually periodic ``w``;
these are the fibers.  The gauge ``U_z delta_n = z^n delta_n`` gives ``S_a``
degree 1.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..graded import GradedElement
from ..group import Integers
from .base import ModelRep
from .weights import PeriodicSequence, ShiftFibers


def check_divisibility_chain(values, what: str = "q_list") -> list[int]:
    values = [int(v) for v in values]
    if not values or values[0] < 1:
        raise ConfigurationError(f"{what} must start with a positive integer")
    for a, b in zip(values, values[1:]):
        if b % a != 0 or b // a < 2:
            raise ConfigurationError(f"{what}: {b} is not a multiple >= 2 of {a}")
    return values


class BunceDeddensModel(ModelRep):
    name = "bunce_deddens"

    def __init__(self, q_list, stage: int = 0, window: int = 64, fibers: ShiftFibers | None = None):
        self.q_list = check_divisibility_chain(q_list)
        if not 0 <= stage < len(self.q_list):
            raise ConfigurationError(f"stage {stage} outside the q_list")
        self.stage = stage
        self.q = self.q_list[stage]
        self.window = int(window)
        if self.window < 2 * self.q + 2:
            raise ConfigurationError("window must exceed twice the period")
        self.fibers = fibers or ShiftFibers(Integers(), PeriodicSequence, "bunce_deddens")

    @property
    def dim(self):
        return self.window

    def _periodic(self, a) -> PeriodicSequence:
        a = np.asarray(a, dtype=complex).ravel()
        if a.size == 0 or self.q % a.size != 0:
            raise ConfigurationError(f"value vector of length {a.size} is not {self.q}-periodic")
        return PeriodicSequence.periodic(np.tile(a, self.q // a.size))

    # generators

    def S(self) -> GradedElement:
        return GradedElement(self.fibers, {1: PeriodicSequence.constant(1.0)})

    def M(self, a) -> GradedElement:
        return GradedElement(self.fibers, {0: self._periodic(a)})

    def S_a(self, a) -> GradedElement:
        return self.S() * self.M(a)

    @staticmethod
    def tilde(a) -> np.ndarray:
        """``tilde a_n = a_{n-1}`` with ``tilde a_0 = a_{q-1}`` (periodic)."""
        return np.roll(np.asarray(a, dtype=complex), 1)

    def generators(self):
        return {"S": self.S()}

    # representation

    def pi(self, g, block):
        out = np.zeros((self.window, self.window), dtype=complex)
        self.accumulate(out, g, block)
        return out

    def accumulate(self, out, g, block):
        W = self.window
        g = int(g)
        r = np.arange(max(0, -g), min(W, W - g))
        out[r + g, r] += block(r)

    def apply(self, phi: GradedElement, vec: dict) -> dict:
        """Exact action on a finitely supported vector ``{n: coefficient}``."""
        out: dict = {}
        for g, w in phi.items():
            for n, c in vec.items():
                m = n + g
                if m < 0:
                    continue
                v = complex(w(n)) * c
                if v != 0:
                    out[m] = out.get(m, 0) + v
        return {m: v for m, v in sorted(out.items()) if v != 0}

    def extract(self, A, g, prefix: int | None = None):
        """Read the degree-``g`` weighted shift from the diagonal ``A[r+g, r]``.

        Values below ``prefix`` become the prefix; one period starting at
        ``prefix`` fixes the periodic tail.
        """
        W = self.window
        g = int(g)
        P = self.window // 2 if prefix is None else int(prefix)
        if P + self.q + abs(g) > W:
            raise ConfigurationError("window too small to read prefix and one period")
        n = np.arange(P + self.q)
        vals = np.zeros(n.size, dtype=complex)
        ok = (n + g >= 0) & (n + g < W)
        vals[ok] = A[n[ok] + g, n[ok]]
        period = np.empty(self.q, dtype=complex)
        tail = n[P:]
        period[tail % self.q] = vals[P:]
        return self.fibers.canonical(PeriodicSequence(vals[:P], period), g)

    def charges(self):
        return np.arange(self.window)

    def window_degrees(self):
        r = self.window - self.window // 2 - self.q
        return list(range(-r, r + 1))

    def interior(self, margin):
        return np.arange(0, max(self.window - margin, 0))

    def with_window(self, window):
        return BunceDeddensModel(self.q_list, self.stage, window, self.fibers)

    def random_element(self, rng, radius=2, n_terms=3):
        degrees = list(range(-radius, radius + 1))
        if n_terms is not None and n_terms < len(degrees):
            degrees = sorted(rng.choice(degrees, size=n_terms, replace=False).tolist())
        blocks = {g: self.fibers.random_block(g, rng, q=self.q) for g in degrees}
        return GradedElement(self.fibers, blocks)

    def random_periodic(self, rng) -> np.ndarray:
        return rng.standard_normal(self.q) + 1j * rng.standard_normal(self.q)

    def describe(self):
        d = super().describe()
        d.update(q_list=self.q_list, stage=self.stage, q=self.q, window=self.window)
        return d
