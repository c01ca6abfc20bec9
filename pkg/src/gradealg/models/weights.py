"""Weight sequences for weighted-shift fibers.

A degree-``g`` block of a shift-type model is the operator
``delta_r -> w(r) delta_{r+g}`` on ``l2(N^k)``.  Two weight families are
used: eventually periodic sequences on ``N`` (Toeplitz/Bunce-Deddens) and
finite combinations of orthant indicators ``1_{r >= c}`` on ``N^k``
(Wiener-Hopf).  Both are closed under pointwise product, shifts and
conjugation, which is all the fiber product and adjoint need.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import StructuralError
from ..graded import FiberSystem
from ..group import GroupDescriptor, Integers, Lattice


class PeriodicSequence:
    """Sequence on ``N``: ``prefix[n]`` for ``n < len(prefix)``, else ``period[n % q]``.

    The period is indexed by the absolute position, so a purely periodic
    sequence has an empty prefix.
    """

    __slots__ = ("prefix", "period")

    def __init__(self, prefix, period):
        prefix = np.asarray(prefix, dtype=complex).ravel()
        period = np.asarray(period, dtype=complex).ravel()
        if period.size == 0:
            raise StructuralError("period must be non-empty")
        self.prefix, self.period = _canonical(prefix, period)

    @classmethod
    def periodic(cls, values) -> "PeriodicSequence":
        return cls([], values)

    @classmethod
    def constant(cls, c) -> "PeriodicSequence":
        return cls([], [c])

    @classmethod
    def finite(cls, values) -> "PeriodicSequence":
        """Finitely supported sequence (a compact-type weight)."""
        return cls(values, [0.0])

    @property
    def q(self) -> int:
        return self.period.size

    def __call__(self, n):
        n = np.asarray(n)
        out = self.period[n % self.q]
        if self.prefix.size:
            inside = n < self.prefix.size
            out = np.where(inside, self.prefix[np.clip(n, 0, self.prefix.size - 1)], out)
        return np.where(n >= 0, out, 0)

    def values(self, length: int) -> np.ndarray:
        return self(np.arange(length))

    def _combine(self, other: "PeriodicSequence", op) -> "PeriodicSequence":
        P = max(self.prefix.size, other.prefix.size)
        L = math.lcm(self.q, other.q)
        idx = np.arange(P)
        # sample the tail past both prefixes, at an offset divisible by L
        per = -(-P // L) * L + np.arange(L)
        return PeriodicSequence(op(self(idx), other(idx)), op(self(per), other(per)))

    def __mul__(self, other):
        if isinstance(other, PeriodicSequence):
            return self._combine(other, np.multiply)
        return PeriodicSequence(self.prefix * other, self.period * other)

    __rmul__ = __mul__

    def __add__(self, other: "PeriodicSequence"):
        return self._combine(other, np.add)

    def __neg__(self):
        return PeriodicSequence(-self.prefix, -self.period)

    def __sub__(self, other):
        return self + (-other)

    def conj(self) -> "PeriodicSequence":
        return PeriodicSequence(self.prefix.conj(), self.period.conj())

    def shift(self, h: int) -> "PeriodicSequence":
        """``n -> a(n + h)``, with ``a(m) = 0`` for ``m < 0``."""
        h = int(h)
        P = self.prefix.size
        head = self(np.arange(h, max(P, h)))
        return PeriodicSequence(head, np.roll(self.period, -h))

    def mask_below(self, m: int) -> "PeriodicSequence":
        """Zero the values at ``n < m``."""
        if m <= 0:
            return self
        head = self(np.arange(max(m, self.prefix.size)))
        head[:m] = 0
        return PeriodicSequence(head, self.period)

    def sup(self) -> float:
        v = np.abs(self.period).max()
        if self.prefix.size:
            v = max(v, np.abs(self.prefix).max())
        return float(v)

    def is_periodic(self) -> bool:
        return self.prefix.size == 0

    def __eq__(self, other):
        return (isinstance(other, PeriodicSequence) and np.array_equal(self.prefix, other.prefix)
                and np.array_equal(self.period, other.period))

    def __repr__(self):
        return f"PeriodicSequence(prefix={self.prefix.tolist()}, period={self.period.tolist()})"

    def to_json(self):
        return {"prefix": [[z.real, z.imag] for z in self.prefix.tolist()],
                "period": [[z.real, z.imag] for z in self.period.tolist()]}

    @classmethod
    def from_json(cls, obj):
        return cls([complex(*z) for z in obj["prefix"]], [complex(*z) for z in obj["period"]])


def _canonical(prefix: np.ndarray, period: np.ndarray):
    q = period.size
    for d in range(1, q):
        if q % d == 0 and np.array_equal(period, np.tile(period[:d], q // d)):
            period = period[:d].copy()
            q = d
            break
    n = prefix.size
    while n > 0 and prefix[n - 1] == period[(n - 1) % q]:
        n -= 1
    return prefix[:n].copy(), period


class OrthantSum:
    """``w(r) = sum_c coeff_c 1_{r >= c}`` on ``N^k`` with finitely many corners ``c``."""

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms=None):
        self.k = int(k)
        clean: dict = {}
        for c, a in (terms or {}).items():
            c = tuple(max(int(x), 0) for x in (c if isinstance(c, tuple) else (c,)))
            if len(c) != self.k:
                raise StructuralError(f"corner {c!r} has wrong rank")
            clean[c] = clean.get(c, 0) + complex(a)
        self.terms = {c: a for c, a in sorted(clean.items()) if abs(a) > 1e-15}

    @classmethod
    def indicator(cls, corner) -> "OrthantSum":
        corner = tuple(corner)
        return cls(len(corner), {corner: 1.0})

    def __call__(self, r):
        r = np.atleast_2d(np.asarray(r))
        out = np.zeros(r.shape[0], dtype=complex)
        for c, a in self.terms.items():
            out += a * np.all(r >= np.asarray(c), axis=1)
        return out

    def __mul__(self, other):
        if isinstance(other, OrthantSum):
            terms: dict = {}
            for c1, a1 in self.terms.items():
                for c2, a2 in other.terms.items():
                    c = tuple(max(x, y) for x, y in zip(c1, c2))
                    terms[c] = terms.get(c, 0) + a1 * a2
            return OrthantSum(self.k, terms)
        return OrthantSum(self.k, {c: a * other for c, a in self.terms.items()})

    __rmul__ = __mul__

    def __add__(self, other: "OrthantSum"):
        terms = dict(self.terms)
        for c, a in other.terms.items():
            terms[c] = terms.get(c, 0) + a
        return OrthantSum(self.k, terms)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def conj(self) -> "OrthantSum":
        return OrthantSum(self.k, {c: a.conjugate() for c, a in self.terms.items()})

    def shift(self, h) -> "OrthantSum":
        """``r -> w(r + h)`` on ``N^k``."""
        h = _vec(h, self.k)
        return OrthantSum(self.k, {tuple(x - y for x, y in zip(c, h)): a for c, a in self.terms.items()})

    def mask_below(self, m) -> "OrthantSum":
        """Restrict to ``r >= m`` componentwise."""
        m = _vec(m, self.k)
        return self * OrthantSum.indicator(tuple(max(x, 0) for x in m))

    def grid(self) -> np.ndarray:
        """Points where every constant piece of ``w`` is attained."""
        axes = [sorted({0} | {c[i] for c in self.terms}) for i in range(self.k)]
        return np.array(list(itertools.product(*axes)), dtype=int).reshape(-1, self.k)

    def sup(self) -> float:
        if not self.terms:
            return 0.0
        return float(np.abs(self(self.grid())).max())

    def __eq__(self, other):
        return isinstance(other, OrthantSum) and self.k == other.k and self.terms == other.terms

    def __repr__(self):
        return f"OrthantSum({self.terms})"

    def to_json(self):
        return {"k": self.k, "terms": [[list(c), [a.real, a.imag]] for c, a in self.terms.items()]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["k"], {tuple(c): complex(*a) for c, a in obj["terms"]})


def _vec(h, k):
    if isinstance(h, (int, np.integer)):
        return (int(h),)
    return tuple(int(x) for x in h)


class ShiftFibers(FiberSystem):
    """Weighted shifts ``delta_r -> w(r) delta_{r+g}`` on ``l2(N^k)``.

    Blocks are weight objects (:class:`PeriodicSequence` for ``k = 1``,
    :class:`OrthantSum` for any ``k``) kept in canonical form: ``w(r) = 0``
    whenever ``r + g`` leaves ``N^k``.  The norm of such an operator is
    ``sup |w|``.
    """

    def __init__(self, group: GroupDescriptor, weight_type: type, name: str = "shift"):
        if not isinstance(group, (Integers, Lattice)):
            raise StructuralError("shift fibers need Z or Z^k")
        self.group = group
        self.k = 1 if isinstance(group, Integers) else group.k
        if weight_type is PeriodicSequence and self.k != 1:
            raise StructuralError("periodic weights are one-dimensional")
        self.weight_type = weight_type
        self.name = name

    def __repr__(self):
        return f"ShiftFibers({self.name}, k={self.k}, {self.weight_type.__name__})"

    def _floor(self, g):
        """Smallest admissible source: ``(-g)_+``."""
        if self.k == 1 and not isinstance(g, tuple):
            return max(-int(g), 0)
        return tuple(max(-x, 0) for x in g)

    def canonical(self, w, g):
        return w.mask_below(self._floor(g))

    def mul(self, x, g, y, h):
        return self.canonical(y * x.shift(h), self.group.mul(g, h))

    def adjoint(self, x, g):
        ginv = self.group.inv(g)
        return self.canonical(x.conj().shift(ginv), ginv)

    def norm(self, x, g):
        return x.sup()

    def unit(self):
        if self.weight_type is PeriodicSequence:
            return PeriodicSequence.constant(1.0)
        return OrthantSum.indicator((0,) * self.k)

    def check(self, x, g):
        if not isinstance(x, self.weight_type):
            raise StructuralError(f"expected {self.weight_type.__name__} at degree {g!r}")
        if isinstance(x, OrthantSum) and x.k != self.k:
            raise StructuralError("orthant weight has wrong rank")
        c = self.canonical(x, g)
        if not _weights_equal(c, x):
            raise StructuralError(f"weight does not vanish where the degree-{g!r} shift leaves N^k")

    def add(self, x, y):
        return x + y

    def scale(self, c, x):
        return x * c

    def random_block(self, g, rng, q: int = 3):
        if self.weight_type is PeriodicSequence:
            per = rng.standard_normal(q) + 1j * rng.standard_normal(q)
            pre = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            return self.canonical(PeriodicSequence(pre, per), g)
        corners = {}
        for _ in range(2):
            c = tuple(int(v) for v in rng.integers(0, 3, size=self.k))
            corners[c] = complex(rng.standard_normal(), rng.standard_normal())
        return self.canonical(OrthantSum(self.k, corners), g)

    def block_to_json(self, x):
        return x.to_json()

    def block_from_json(self, obj, g):
        return self.weight_type.from_json(obj)


def _weights_equal(a, b) -> bool:
    if isinstance(a, PeriodicSequence):
        return (a.prefix.size == b.prefix.size and a.q == b.q
                and np.allclose(a.prefix, b.prefix, atol=1e-14) and np.allclose(a.period, b.period, atol=1e-14))
    return a.terms.keys() == b.terms.keys() and all(
        abs(a.terms[c] - b.terms[c]) <= 1e-14 for c in a.terms)
