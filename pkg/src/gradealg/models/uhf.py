"""UHF matrix stages with the diagonal circle grading.

At stage ``m`` the algebra is ``M_p`` (``p = p_list[m]``); the degree-``k``
subspace consists of matrices supported on the diagonal ``i - j = k``, which
is the ``z^k`` eigenspace of conjugation by ``diag(z^i)``.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from ..graded import GradedElement, MatrixFibers
from ..group import Integers
from .base import ModelRep
from .bunce_deddens import check_divisibility_chain


def diagonal_mask(p: int, k: int) -> np.ndarray:
    i = np.arange(p)
    return (i[:, None] - i[None, :]) == k


class UHFModel(ModelRep):
    name = "uhf"
    exact = True

    def __init__(self, p_list, stage: int = 0):
        self.p_list = check_divisibility_chain(p_list, "p_list")
        if not 0 <= stage < len(self.p_list):
            raise ConfigurationError(f"stage {stage} outside the p_list")
        self.stage = stage
        self.p = self.p_list[stage]
        p = self.p
        self.fibers = MatrixFibers(Integers(), p, lambda k: diagonal_mask(p, int(k)), f"uhf{p}")

    @property
    def dim(self):
        return self.p

    def pi(self, g, block):
        return np.asarray(block, dtype=complex)

    def extract(self, A, g):
        return np.where(diagonal_mask(self.p, int(g)), A, 0)

    def charges(self):
        return np.arange(self.p)

    def fiber_dimension(self, k: int) -> int:
        return int(diagonal_mask(self.p, k).sum())

    def sample_degrees(self, radius):
        return [k for k in range(-radius, radius + 1) if abs(k) < self.p]

    def next_stage(self) -> "UHFModel":
        if self.stage + 1 >= len(self.p_list):
            raise ConfigurationError("no further stage in the p_list")
        return UHFModel(self.p_list, self.stage + 1)

    def connecting(self, A: np.ndarray) -> np.ndarray:
        """Unital embedding ``A -> I_r (x) A``: entry ``(i, j)`` goes to ``(a*p + i, a*p + j)``.

        The offset ``i - j`` is unchanged, so the map intertwines the gauge
        actions of the two stages.
        """
        r = self.next_stage().p // self.p
        return np.kron(np.eye(r), A)

    def connecting_element(self, phi: GradedElement) -> GradedElement:
        nxt = self.next_stage()
        return GradedElement(nxt.fibers, {g: self.connecting(x) for g, x in phi.items()})

    def matrix_unit(self, i: int, j: int) -> GradedElement:
        E = np.zeros((self.p, self.p), dtype=complex)
        E[i, j] = 1.0
        return GradedElement(self.fibers, {i - j: E})

    def generators(self):
        return {"E_up": self.matrix_unit(1, 0) if self.p > 1 else self.unit()}

    def describe(self):
        d = super().describe()
        d.update(p_list=self.p_list, stage=self.stage)
        return d
