"""Discrete groups, generating sets, word metrics and weights.

Elements are plain hashable Python values: ``int`` for the integers and for
finite cyclic or table-defined groups, tuples of ints for lattices and the
discrete Heisenberg group.  Infinite groups are explored lazily through balls
``V^n`` of a generating set ``V``; every quantity that is a supremum over an
infinite set is computed on a finite ball whose radius is reported.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, ResourceError, ValidationError

Element = Hashable

DEFAULT_CAP = 1_000_000


def resource_cap() -> int:
    """Return the global enumeration cap (``GRADEALG_CAP`` env var)."""
    raw = os.environ.get("GRADEALG_CAP")
    if raw is None or raw == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"GRADEALG_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ConfigurationError("GRADEALG_CAP must be positive")
    return cap


class GroupDescriptor:
    """Common interface of the built-in discrete groups.

    Every built-in kind is amenable and rigidly symmetric (abelian, finite or
    nilpotent); ``rigidly_symmetric`` records this as metadata only.
    """

    kind: str = "abstract"
    abelian: bool = False
    finite: bool = False
    rigidly_symmetric: bool = True

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def normalize(self, g: Any) -> Element:
        return g

    def standard_generators(self) -> tuple:
        raise NotImplementedError

    def length(self, g: Element) -> int:
        """Word length w.r.t. the standard symmetric generating set."""
        return word_length(self, GeneratingSet.standard(self), g, radius_cap=10_000)

    def random_element(self, rng: np.random.Generator, radius: int = 3) -> Element:
        raise NotImplementedError

    def elements(self) -> tuple:
        raise ValidationError(f"{self.kind} is infinite; use word_ball instead")

    def order(self) -> int | None:
        return len(self.elements()) if self.finite else None

    def sort_key(self, g: Element):
        return g

    # derived operations

    def div(self, g: Element, h: Element) -> Element:
        """Return ``g h^{-1}``."""
        return self.mul(g, self.inv(h))

    def power(self, g: Element, n: int) -> Element:
        out = self.identity()
        base = g if n >= 0 else self.inv(g)
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out

    def product(self, items: Iterable[Element]) -> Element:
        out = self.identity()
        for g in items:
            out = self.mul(out, g)
        return out

    def is_identity(self, g: Element) -> bool:
        return g == self.identity()


@dataclass(frozen=True)
class Integers(GroupDescriptor):
    kind = "Z"
    abelian = True

    def identity(self):
        return 0

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def normalize(self, g):
        if isinstance(g, (tuple, list)):
            if len(g) != 1:
                raise ConfigurationError(f"not an integer: {g!r}")
            g = g[0]
        if isinstance(g, (float, np.floating)) and not float(g).is_integer():
            raise ConfigurationError(f"not an integer: {g!r}")
        return int(g)

    def standard_generators(self):
        return (1,)

    def length(self, g):
        return abs(g)

    def random_element(self, rng, radius=3):
        return int(rng.integers(-radius, radius + 1))

    @property
    def rank(self) -> int:
        return 1


@dataclass(frozen=True)
class Lattice(GroupDescriptor):
    """The free abelian group ``Z^k`` with tuple elements."""

    k: int = 2
    kind = "Zk"
    abelian = True

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError("lattice rank must be >= 1")

    def identity(self):
        return (0,) * self.k

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def normalize(self, g):
        if isinstance(g, (int, np.integer)) and self.k == 1:
            g = (g,)
        g = tuple(int(a) for a in g)
        if len(g) != self.k:
            raise ConfigurationError(f"expected {self.k} coordinates, got {g!r}")
        return g

    def standard_generators(self):
        return tuple(tuple(int(i == j) for j in range(self.k)) for i in range(self.k))

    def length(self, g):
        return sum(abs(a) for a in g)

    def random_element(self, rng, radius=3):
        return tuple(int(x) for x in rng.integers(-radius, radius + 1, size=self.k))

    @property
    def rank(self) -> int:
        return self.k


@dataclass(frozen=True)
class Cyclic(GroupDescriptor):
    """Finite cyclic group ``Z/q`` with residues ``0..q-1``."""

    q: int = 2
    kind = "Zq"
    abelian = True
    finite = True

    def __post_init__(self):
        if self.q < 1:
            raise ConfigurationError("cyclic order must be >= 1")

    def identity(self):
        return 0

    def mul(self, g, h):
        return (g + h) % self.q

    def inv(self, g):
        return (-g) % self.q

    def normalize(self, g):
        return int(g) % self.q

    def standard_generators(self):
        return (1 % self.q,)

    def length(self, g):
        return min(g, self.q - g)

    def elements(self):
        return tuple(range(self.q))

    def random_element(self, rng, radius=3):
        return int(rng.integers(self.q))


@dataclass(frozen=True)
class FiniteGroup(GroupDescriptor):
    """Finite group given by a multiplication table on ``0..n-1``.

    ``table[i][j]`` is the index of the product ``i*j``.  The table is checked
    for closure, associativity (exhaustively), identity and inverses.
    """

    table: tuple
    kind = "finite"
    finite = True

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise ValidationError("multiplication table must be square and non-empty")
        if any(not 0 <= x < n for row in table for x in row):
            raise ValidationError("table entries out of range")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValidationError(f"table not associative at {(a, b, c)}")
        ids = [e for e in range(n) if all(table[e][x] == x == table[x][e] for x in range(n))]
        if not ids:
            raise ValidationError("table has no identity")
        e = ids[0]
        inverses = []
        for a in range(n):
            cands = [b for b in range(n) if table[a][b] == e]
            if not cands or table[cands[0]][a] != e:
                raise ValidationError(f"element {a} has no inverse")
            inverses.append(cands[0])
        object.__setattr__(self, "_e", e)
        object.__setattr__(self, "_inverses", tuple(inverses))
        abelian = all(table[a][b] == table[b][a] for a in range(n) for b in range(n))
        object.__setattr__(self, "abelian", abelian)

    def identity(self):
        return self._e

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self._inverses[g]

    def normalize(self, g):
        g = int(g)
        if not 0 <= g < len(self.table):
            raise ConfigurationError(f"element {g} out of range")
        return g

    def standard_generators(self):
        return tuple(g for g in range(len(self.table)) if g != self._e)

    def elements(self):
        return tuple(range(len(self.table)))

    def random_element(self, rng, radius=3):
        return int(rng.integers(len(self.table)))

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """Multiplication table of the symmetric group ``S_n`` (composition p∘q)."""
        perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
        return cls(tuple(map(tuple, table)))


@dataclass(frozen=True)
class Heisenberg(GroupDescriptor):
    """Discrete Heisenberg group on integer triples.

    ``(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')``.
    """

    kind = "H3"

    def identity(self):
        return (0, 0, 0)

    def mul(self, g, h):
        a, b, c = g
        x, y, z = h
        return (a + x, b + y, c + z + a * y)

    def inv(self, g):
        a, b, c = g
        return (-a, -b, -c + a * b)

    def normalize(self, g):
        g = tuple(int(a) for a in g)
        if len(g) != 3:
            raise ConfigurationError(f"Heisenberg elements are triples, got {g!r}")
        return g

    def standard_generators(self):
        return ((1, 0, 0), (0, 1, 0))

    def random_element(self, rng, radius=3):
        return tuple(int(x) for x in rng.integers(-radius, radius + 1, size=3))


@dataclass(frozen=True)
class QuotientGroup(GroupDescriptor):
    """Quotient ``G/N`` of an abelian built-in group by a subgroup.

    ``N`` is the subgroup generated by ``generators``.  Elements are canonical
    coset representatives in the encoding of the parent group.  When
    ``elements`` is given instead, it must already be a subgroup (closed under
    products and inverses); otherwise :class:`ValidationError` is raised.
    """

    parent: GroupDescriptor
    generators: tuple = ()
    elements_given: tuple | None = None
    abelian = True

    def __post_init__(self):
        parent = self.parent
        if not parent.abelian:
            raise ValidationError("quotients are only supported for abelian groups")
        if self.elements_given is not None:
            elems = tuple(parent.normalize(g) for g in self.elements_given)
            es = set(elems)
            if parent.identity() not in es:
                raise ValidationError("subgroup must contain the identity")
            for g in elems:
                if parent.inv(g) not in es:
                    raise ValidationError(f"not a subgroup: inverse of {g!r} missing")
                for h in elems:
                    if parent.mul(g, h) not in es:
                        raise ValidationError(f"not a subgroup: {g!r}*{h!r} missing")
            gens = elems
        else:
            gens = tuple(parent.normalize(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "kind", f"{parent.kind}/N")
        if isinstance(parent, Cyclic):
            d = parent.q
            for g in gens:
                d = math.gcd(d, g)
            object.__setattr__(self, "_modulus", d)
            object.__setattr__(self, "finite", True)
        elif isinstance(parent, (Integers, Lattice)):
            k = 1 if isinstance(parent, Integers) else parent.k
            vecs = [(g,) if isinstance(parent, Integers) else tuple(g) for g in gens]
            pivots = _echelon(vecs, k)
            object.__setattr__(self, "_pivots", tuple(pivots))
            object.__setattr__(self, "finite", len(pivots) == k)
        else:
            raise ValidationError(f"quotients of {parent.kind} are not supported")

    def reduce(self, g):
        parent = self.parent
        g = parent.normalize(g)
        if isinstance(parent, Cyclic):
            return g % self._modulus
        vec = [g] if isinstance(parent, Integers) else list(g)
        for col, row in self._pivots:
            q = vec[col] // row[col]
            if q:
                vec = [a - q * b for a, b in zip(vec, row)]
        return vec[0] if isinstance(parent, Integers) else tuple(vec)

    def identity(self):
        return self.parent.identity()

    def mul(self, g, h):
        return self.reduce(self.parent.mul(g, h))

    def inv(self, g):
        return self.reduce(self.parent.inv(g))

    def normalize(self, g):
        return self.reduce(g)

    def standard_generators(self):
        gens = []
        for g in self.parent.standard_generators():
            r = self.reduce(g)
            if r != self.identity() and r not in gens:
                gens.append(r)
        return tuple(gens)

    def length(self, g):
        return self.parent.length(self.reduce(g))

    def contains(self, g) -> bool:
        """Membership of a parent element in ``N``."""
        return self.reduce(g) == self.identity()

    def elements(self):
        if not self.finite:
            raise ValidationError("quotient is infinite")
        if isinstance(self.parent, Cyclic):
            return tuple(range(self._modulus))
        ranges = []
        k = 1 if isinstance(self.parent, Integers) else self.parent.k
        bounds = {col: row[col] for col, row in self._pivots}
        for c in range(k):
            ranges.append(range(bounds[c]))
        out = tuple(itertools.product(*ranges))
        if isinstance(self.parent, Integers):
            return tuple(x[0] for x in out)
        return out

    def random_element(self, rng, radius=3):
        return self.reduce(self.parent.random_element(rng, radius))

    def sort_key(self, g):
        return self.parent.sort_key(g)


def _echelon(vectors: Sequence[Sequence[int]], k: int) -> list[tuple[int, tuple]]:
    """Integer row echelon form: list of ``(pivot column, row)``."""
    rows = [list(v) for v in vectors if any(v)]
    pivots = []
    r = 0
    for col in range(k):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[p] = rows[p], rows[r]
            clean = True
            for i in range(r + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[r][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if r < len(rows) and rows[r][col] != 0:
            if rows[r][col] < 0:
                rows[r] = [-a for a in rows[r]]
            pivots.append((col, tuple(rows[r])))
            r += 1
    return pivots


# generating sets and word metric


@dataclass(frozen=True)
class GeneratingSet:
    """Finite subset ``V`` of the group containing the identity."""

    group: GroupDescriptor
    elements: tuple

    def __post_init__(self):
        seen = []
        for g in self.elements:
            g = self.group.normalize(g)
            if g not in seen:
                seen.append(g)
        if self.group.identity() not in seen:
            raise ConfigurationError("generating set must contain the identity")
        object.__setattr__(self, "elements", tuple(seen))

    @classmethod
    def standard(cls, group: GroupDescriptor) -> "GeneratingSet":
        gens = group.standard_generators()
        return cls(group, (group.identity(),) + gens + tuple(group.inv(g) for g in gens))

    @property
    def symmetric(self) -> bool:
        s = set(self.elements)
        return all(self.group.inv(g) in s for g in self.elements)

    def generates(self, radius: int = 8) -> bool:
        """Check that the ball of ``radius`` contains the standard generators.

        For finite groups the ball must exhaust the group.
        """
        ball = word_ball(self, radius)
        if self.group.finite:
            return len(ball) == len(self.group.elements())
        return all(g in ball and self.group.inv(g) in ball
                   for g in self.group.standard_generators())


@lru_cache(maxsize=256)
def _shells(V: GeneratingSet, radius: int) -> tuple[tuple, ...]:
    group = V.group
    cap = resource_cap()
    e = group.identity()
    shells = [(e,)]
    seen = {e}
    frontier = [e]
    for _ in range(radius):
        new = []
        for g in frontier:
            for v in V.elements:
                x = group.mul(g, v)
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        if len(seen) > cap:
            raise ResourceError(f"ball exceeds cap {cap} elements", partial=tuple(shells))
        new.sort(key=group.sort_key)
        shells.append(tuple(new))
        frontier = new
        if not new:
            break
    return tuple(shells)


def word_shells(V: GeneratingSet, radius: int) -> tuple[tuple, ...]:
    """Shells ``V^n \\ V^{n-1}`` for ``n = 0..radius`` (shell 0 is ``{e}``).

    Enumeration stops early (shorter tuple) when the group is exhausted.
    """
    return _shells(V, radius)


def word_ball(V: GeneratingSet, radius: int) -> dict:
    """Map every element of ``V^radius`` to its word length."""
    return {g: n for n, shell in enumerate(word_shells(V, radius)) for g in shell}


def word_length(group: GroupDescriptor, V: GeneratingSet, g, radius_cap: int = 64) -> int | None:
    """Minimal ``n`` with ``g`` in ``V^n`` by breadth-first search.

    Returns ``None`` when ``g`` is not reached within ``radius_cap``.
    """
    if radius_cap < 1:
        raise ConfigurationError("radius_cap must be >= 1")
    if V.group != group:
        raise ConfigurationError("generating set belongs to another group")
    g = group.normalize(g)
    if g == group.identity():
        return 0
    r = 1
    while True:
        r = min(r, radius_cap)
        shells = word_shells(V, r)
        for n, shell in enumerate(shells):
            if g in shell:
                return n
        if r == radius_cap or len(shells) <= r:
            return None
        r *= 2


# weights


@dataclass(frozen=True)
class Weight:
    """Function ``nu`` from the group to reals, intended ``>= 1``.

    Build with the classmethods; the axioms are checked by
    :func:`validate_weight`, not at construction.
    """

    name: str
    fn: Callable[[Element], float] = field(compare=False)
    params: tuple = ()

    def __call__(self, g) -> float:
        return float(self.fn(g))

    @classmethod
    def constant(cls, value: float = 1.0) -> "Weight":
        return cls("constant", lambda g: value, (value,))

    @classmethod
    def polynomial(cls, group: GroupDescriptor, s: float,
                   length: Callable | None = None) -> "Weight":
        """``(1 + |g|)^s`` with ``|g|`` the standard word length."""
        size = length or group.length
        return cls("polynomial", lambda g: (1.0 + size(g)) ** s, (s,))

    @classmethod
    def exponential(cls, group: GroupDescriptor, base: float,
                    length: Callable | None = None) -> "Weight":
        """``base^{|g|}``."""
        size = length or group.length
        return cls("exponential", lambda g: float(base) ** size(g), (base,))

    @classmethod
    def table(cls, values: Mapping, default: float | None = None) -> "Weight":
        values = dict(values)

        def fn(g):
            if g in values:
                return values[g]
            if default is None:
                raise KeyError(f"weight table has no entry for {g!r}")
            return default

        return cls("table", fn, tuple(sorted(values.items(), key=repr)))

    def __mul__(self, other: "Weight") -> "Weight":
        return Weight(f"{self.name}*{other.name}", lambda g: self(g) * other(g),
                      (self.params, other.params))


@dataclass(frozen=True)
class WeightViolation:
    kind: str  # "nu < 1", "submultiplicativity", "symmetry"
    witness: tuple
    detail: str


@dataclass(frozen=True)
class WeightReport:
    radius: int
    pairs_checked: int
    violations: tuple[WeightViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_weight(group: GroupDescriptor, V: GeneratingSet, nu: Weight, radius: int,
                    rtol: float = 1e-12) -> WeightReport:
    """Check ``nu >= 1``, ``nu(gh) <= nu(g)nu(h)`` and ``nu(g^-1) = nu(g)`` on ``V^radius``."""
    ball = list(word_ball(V, radius))
    cap = resource_cap()
    if len(ball) ** 2 > cap:
        raise ResourceError(f"{len(ball)}^2 pairs exceed cap {cap}")
    values = {g: nu(g) for g in ball}
    violations = []
    for g in ball:
        v = values[g]
        if v < 1.0 - rtol:
            violations.append(WeightViolation("nu < 1", (g,), f"nu={v!r}"))
        vi = nu(group.inv(g))
        if abs(vi - v) > rtol * max(1.0, abs(v)):
            violations.append(WeightViolation("symmetry", (g,), f"nu(g)={v!r}, nu(g^-1)={vi!r}"))
    for g in ball:
        for h in ball:
            gh = group.mul(g, h)
            lhs = values[gh] if gh in values else nu(gh)
            rhs = values[g] * values[h]
            if lhs > rhs * (1.0 + rtol):
                violations.append(WeightViolation(
                    "submultiplicativity", (g, h), f"nu(gh)={lhs!r} > {rhs!r}"))
    return WeightReport(radius, len(ball) ** 2, tuple(violations))


@dataclass(frozen=True)
class UGRSProfile:
    """``s_n = sup_{g in V^n} nu(g)^{1/n}`` for ``n = 1..len(values)``."""

    values: tuple[float, ...]
    log_sup: tuple[float, ...]
    radius: int

    def limit_estimate(self) -> float:
        """Asymptotic growth rate ``exp(slope)`` of ``log sup nu`` over the second half.

        Equals 1 in the limit for weights satisfying the uGRS condition and
        ``a`` for exponential weights ``a^{|g|}``.
        """
        n = len(self.log_sup)
        if n == 0:
            return float("nan")
        if n == 1:
            return self.values[0]
        m = n // 2
        slope = (self.log_sup[n - 1] - self.log_sup[m - 1]) / (n - m)
        return math.exp(slope)

    def appears_ugrs(self, tol: float = 0.05) -> bool:
        return self.limit_estimate() <= 1.0 + tol


def ugrs_profile(group: GroupDescriptor, V: GeneratingSet, nu: Weight, n_max: int) -> UGRSProfile:
    """Finite-horizon uGRS profile.

    The supremum over products of ``n`` elements of ``V`` equals the
    supremum over the ball ``V^n`` because ``V`` contains the identity.
    """
    if n_max < 1:
        raise ConfigurationError("n_max must be >= 1")
    values: list[float] = []
    logs: list[float] = []
    try:
        shells = word_shells(V, n_max)
    except ResourceError as exc:
        shells = exc.partial
        partial = _running_profile(shells, nu, values, logs)
        raise ResourceError(str(exc), partial=UGRSProfile(*partial, radius=len(shells) - 1)) from exc
    _running_profile(shells, nu, values, logs)
    while len(values) < n_max:
        # group exhausted: the ball is constant from here on
        n = len(values) + 1
        logs.append(logs[-1])
        values.append(math.exp(logs[-1] / n))
    return UGRSProfile(tuple(values), tuple(logs), n_max)


def _running_profile(shells, nu, values, logs):
    best = max(nu(g) for g in shells[0])
    for n in range(1, len(shells)):
        if shells[n]:
            best = max(best, max(nu(g) for g in shells[n]))
        logs.append(math.log(best))
        values.append(best ** (1.0 / n))
    return tuple(values), tuple(logs)


@dataclass(frozen=True)
class ShellReport:
    constant: float
    ratios: tuple[float, ...]
    last_n: int
    exhausted: bool


def shell_constant(group: GroupDescriptor, V: GeneratingSet, nu: Weight, n_max: int) -> ShellReport:
    """Smallest ``C`` with ``sup nu <= C inf nu`` on every shell ``n <= n_max``."""
    shells = word_shells(V, n_max)
    ratios = []
    for n in range(1, n_max + 1):
        if n >= len(shells) or not shells[n]:
            c = max(ratios, default=1.0)
            return ShellReport(c, tuple(ratios), n - 1, True)
        vals = [nu(g) for g in shells[n]]
        ratios.append(max(vals) / min(vals))
    return ShellReport(max(ratios, default=1.0), tuple(ratios), n_max, False)


def derived_z_weight(V: GeneratingSet, nu: Weight, n_max: int) -> np.ndarray:
    """``v(n) = sup_{g in V^|n|} nu(g)`` for ``n = 0..n_max`` (a weight on Z)."""
    shells = word_shells(V, n_max)
    out = np.empty(n_max + 1)
    best = 0.0
    for n in range(n_max + 1):
        if n < len(shells) and shells[n]:
            best = max(best, max(nu(g) for g in shells[n]))
        out[n] = best
    return out


# config parsing

_GROUP_KINDS = {"Z", "Zk", "Zq", "finite", "H3", "symmetric"}


def group_from_spec(spec: Mapping | str) -> GroupDescriptor:
    """Build a group from ``{"kind": ..., params}`` (or a bare kind string)."""
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    if kind == "Z":
        return Integers()
    if kind == "Zk":
        return Lattice(int(spec.get("k", 2)))
    if kind == "Zq":
        if "q" not in spec:
            raise ConfigurationError("Zq needs parameter q")
        return Cyclic(int(spec["q"]))
    if kind == "finite":
        if "table" not in spec:
            raise ConfigurationError("finite group needs a multiplication table")
        return FiniteGroup(tuple(map(tuple, spec["table"])))
    if kind == "symmetric":
        return FiniteGroup.symmetric(int(spec.get("n", 3)))
    if kind == "H3":
        return Heisenberg()
    raise ConfigurationError(f"unknown group kind {kind!r}; expected one of {sorted(_GROUP_KINDS)}")


def weight_from_spec(spec: Mapping | None, group: GroupDescriptor) -> Weight:
    """Weight from the fixed menu: constant, polynomial, exponential, table."""
    if spec is None:
        return Weight.constant()
    kind = spec.get("kind", "constant")
    if kind == "constant":
        return Weight.constant(float(spec.get("value", 1.0)))
    if kind == "polynomial":
        return Weight.polynomial(group, float(spec.get("s", 1.0)))
    if kind == "exponential":
        return Weight.exponential(group, float(spec.get("base", 2.0)))
    if kind == "table":
        entries = spec.get("values", [])
        values = {group.normalize(g): float(v) for g, v in entries}
        default = spec.get("default")
        return Weight.table(values, None if default is None else float(default))
    raise ConfigurationError(f"unknown weight kind {kind!r}")
