"""Orbit representation of the partial crossed product of a finite partial action."""

from __future__ import annotations

import numpy as np

from ..graded import GradedElement
from ..partial_action import (L1ThetaElement, OrbitTable, TopPartialAction, induce_function_system,
                              orbit_rep)
from .base import ModelRep


class OrbitModel(ModelRep):
    """``Pi`` on ``l2(Y)`` for the orbit ``Y`` of an action with trivial isotropy.

    The point set is finite, so ``Pi`` is an honest representation and the
    model is exact.
    """

    name = "orbit"
    exact = True

    def __init__(self, act: TopPartialAction):
        self.act = act
        self.system = induce_function_system(act)
        self.fibers = self.system.fibers
        self.Y = list(act.orbit if act.orbit is not None else act.points)
        self.table = OrbitTable(act)
        self.name = f"orbit[{act.name}]"

    @property
    def dim(self):
        return len(self.Y)

    def pi(self, g, block):
        return orbit_rep(L1ThetaElement(self.system, {g: block}), self.act, self.Y, self.table)

    def matrix(self, phi):
        return orbit_rep(phi, self.act, self.Y, self.table)

    def extract(self, A, g):
        """``a(y) = A[y, Theta_{g^-1}(y)]``; points off the orbit get 0."""
        back = self.act.theta(self.group.inv(self.group.normalize(g)))
        pos = {y: i for i, y in enumerate(self.Y)}
        vals = np.zeros(len(self.act.points), dtype=complex)
        for y, i in pos.items():
            z = back.get(y)
            if z is not None and z in pos:
                vals[self.act.index[y]] = A[i, pos[z]]
        return np.diag(vals)

    def window_degrees(self):
        return [g for g in self.act.default_window() if self.system.ideal(g)]

    def sample_degrees(self, radius):
        return [g for g in super().sample_degrees(radius) if self.system.ideal(g)]

    def random_element(self, rng, radius=2, n_terms=3) -> GradedElement:
        return self.system.random_element(rng, self.sample_degrees(radius), n_terms)

    def generators(self):
        out = {}
        for i, s in enumerate(self.group.standard_generators()):
            out[f"u{i}"] = L1ThetaElement(self.system, {s: np.diag(self.system.projection(s)).astype(complex)})
        return out

    def describe(self):
        d = super().describe()
        d.update(action=self.act.name, orbit_size=len(self.Y))
        return d
