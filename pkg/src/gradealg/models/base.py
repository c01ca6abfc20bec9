"""Common interface of the concrete representations."""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..errors import UnsupportedError
from ..graded import FiberSystem, GradedElement
from ..group import GeneratingSet, Lattice, word_ball


class ModelRep(ABC):
    """A represented graded algebra with a finite matrix window.

    ``pi(g, block)`` is the window compression of the operator of a degree-``g``
    block and ``matrix`` sums these over a graded element.  ``extract`` reads
    the degree-``g`` block back from a window matrix.  ``exact`` models are
    finite-dimensional: their matrices are the operators themselves.
    """

    name: str = "model"
    fibers: FiberSystem
    exact: bool = False

    @property
    def group(self):
        return self.fibers.group

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def pi(self, g, block) -> np.ndarray:
        ...

    @abstractmethod
    def extract(self, A: np.ndarray, g):
        ...

    def matrix(self, phi: GradedElement) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for g, x in phi.items():
            self.accumulate(out, g, x)
        return out

    def accumulate(self, out: np.ndarray, g, block) -> None:
        """Add the window operator of a degree-``g`` block to ``out`` in place."""
        out += self.pi(g, block)

    def charges(self) -> np.ndarray:
        """Group element carried by each basis vector (for the dual action)."""
        raise UnsupportedError(f"{self.name} has no diagonal gauge implementation")

    def window_degrees(self) -> list:
        """Degrees that can occur in a window matrix: differences of basis charges."""
        c = np.asarray(self.charges())
        c = c.reshape(len(c), -1)
        diffs = np.unique((c[:, None, :] - c[None, :, :]).reshape(-1, c.shape[1]), axis=0)
        if c.shape[1] == 1 and not isinstance(self.group, Lattice):
            return [self.group.normalize(int(d[0])) for d in diffs]
        return [tuple(int(x) for x in d) for d in diffs]

    def interior(self, margin: int) -> np.ndarray:
        """Basis indices whose rows are unaffected by truncation for degrees of length <= margin."""
        return np.arange(self.dim)

    def with_window(self, window: int) -> "ModelRep":
        if self.exact:
            return self
        raise UnsupportedError(f"{self.name} does not support resizing")

    def sample_degrees(self, radius: int) -> list:
        V = GeneratingSet.standard(self.group)
        return sorted(word_ball(V, radius), key=self.group.sort_key)

    def random_element(self, rng: np.random.Generator, radius: int = 2,
                       n_terms: int | None = 3) -> GradedElement:
        return GradedElement.random(self.fibers, rng, self.sample_degrees(radius), n_terms)

    def generators(self) -> dict:
        return {}

    def unit(self) -> GradedElement:
        return GradedElement.unit(self.fibers)

    def describe(self) -> dict:
        return {"model": self.name, "dim": self.dim, "exact": self.exact}


def box_points(lo: int, hi: int, k: int) -> np.ndarray:
    """Integer points of ``[lo, hi)^k`` in row-major order, shape ``(n, k)``."""
    axes = [np.arange(lo, hi)] * k
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([a.ravel() for a in grid], axis=1)


def box_index(points: np.ndarray, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major indices of ``points`` inside ``[lo, hi)^k`` and the validity mask."""
    points = np.asarray(points)
    side = hi - lo
    ok = np.all((points >= lo) & (points < hi), axis=1)
    shifted = np.where(ok[:, None], points - lo, 0)
    idx = np.ravel_multi_index(tuple(shifted.T), (side,) * points.shape[1])
    return idx, ok
