"""Finite k-graphs given by coloured edges and commuting squares.

A morphism is stored in normal form: a composable edge sequence whose colours
are non-decreasing.  Composition concatenates and then sorts colours by
applying square moves ``ef -> f'e'``; factorisation rewrites a path to a
prescribed colour word the same way.  Everything here is symbolic: the
Cuntz-Krieger calculus manipulates finite combinations of ``S_lam S_mu^*``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from ..errors import ConfigurationError, ResourceError, StructuralError, UnsupportedError, ValidationError
from ..graded import FiberSystem, GradedElement
from ..group import Lattice, resource_cap


class Path(NamedTuple):
    r: str
    s: str
    edges: tuple

    def __repr__(self):
        return "".join(self.edges) if self.edges else f"<{self.r}>"


@dataclass(frozen=True)
class KGraph:
    """``k``-graph with vertex set, coloured edges ``name -> (colour, range, source)`` and squares.

    ``squares`` lists quadruples ``(e, f, f2, e2)`` meaning ``e f = f2 e2`` where
    ``e, e2`` share one colour and ``f, f2`` another.
    """

    k: int
    vertices: tuple
    edges: Mapping = field(hash=False)
    squares: tuple = ()
    cap: tuple = (3, 3)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "squares", tuple(tuple(s) for s in self.squares))
        edges = {str(n): (int(c), str(r), str(s)) for n, (c, r, s) in dict(self.edges).items()}
        object.__setattr__(self, "edges", edges)
        cap = tuple(int(c) for c in (self.cap if len(self.cap) == self.k else (self.cap[0],) * self.k))
        object.__setattr__(self, "cap", cap)
        vs = set(self.vertices)
        for n, (c, r, s) in edges.items():
            if not 0 <= c < self.k:
                raise ConfigurationError(f"edge {n} has colour {c} outside 0..{self.k - 1}")
            if r not in vs or s not in vs:
                raise ConfigurationError(f"edge {n} has unknown endpoint")
        swap: dict = {}
        for sq in self.squares:
            if len(sq) != 4:
                raise ConfigurationError(f"square {sq!r} must list four edges")
            e, f, f2, e2 = sq
            for x in sq:
                if x not in edges:
                    raise ConfigurationError(f"square {sq!r} uses unknown edge {x}")
            ce, cf = edges[e][0], edges[f][0]
            if ce == cf or edges[e2][0] != ce or edges[f2][0] != cf:
                raise ConfigurationError(f"square {sq!r} has inconsistent colours")
            if edges[e][2] != edges[f][1] or edges[f2][2] != edges[e2][1]:
                raise ConfigurationError(f"square {sq!r} has a non-composable side")
            if edges[e][1] != edges[f2][1] or edges[f][2] != edges[e2][2]:
                raise ConfigurationError(f"square {sq!r} sides have different endpoints")
            for a, b in (((e, f), (f2, e2)), ((f2, e2), (e, f))):
                if a in swap and swap[a] != b:
                    raise ValidationError(f"path {a!r} appears in two squares")
                swap[a] = b
        object.__setattr__(self, "_swap", swap)

    def __hash__(self):
        return hash((self.k, self.vertices, tuple(sorted(self.edges.items())), self.squares))

    # basic data

    def colour(self, e: str) -> int:
        return self.edges[e][0]

    def vertex(self, v: str) -> Path:
        return Path(v, v, ())

    def edge(self, e: str) -> Path:
        c, r, s = self.edges[e]
        return Path(r, s, (e,))

    def degree(self, lam: Path) -> tuple:
        d = [0] * self.k
        for e in lam.edges:
            d[self.edges[e][0]] += 1
        return tuple(d)

    def path(self, *names: str) -> Path:
        """Compose edges (given left to right) into a normal-form morphism."""
        if not names:
            raise ConfigurationError("use vertex() for empty paths")
        out = self.edge(names[0])
        for n in names[1:]:
            out = self.compose(out, self.edge(n))
        return out

    # square moves

    def _swap_pair(self, e, f):
        try:
            return self._swap[(e, f)]
        except KeyError:
            raise ValidationError(f"no commuting square for {e}{f}: factorization data incomplete") from None

    def _bubble(self, edges: list, target: list) -> list:
        """Rewrite an edge list to the colour word ``target`` by square moves."""
        edges = list(edges)
        for p, want in enumerate(target):
            q = p
            while self.edges[edges[q]][0] != want:
                q += 1
                if q >= len(edges):
                    raise StructuralError("colour multiset mismatch")
            while q > p:
                a, b = self._swap_pair(edges[q - 1], edges[q])
                edges[q - 1], edges[q] = a, b
                q -= 1
        return edges

    def _normal(self, edges: list) -> tuple:
        cols = sorted(self.edges[e][0] for e in edges)
        return tuple(self._bubble(edges, cols))

    def compose(self, lam: Path, mu: Path) -> Path:
        if lam.s != mu.r:
            raise StructuralError(f"cannot compose {lam!r} and {mu!r}: s != r")
        return Path(lam.r, mu.s, self._normal(list(lam.edges) + list(mu.edges)))

    def factor(self, lam: Path, m) -> tuple[Path, Path]:
        """Unique ``(mu, nu)`` with ``d(mu) = m`` and ``lam = mu nu``."""
        m = tuple(m)
        d = self.degree(lam)
        if any(a > b for a, b in zip(m, d)):
            raise StructuralError(f"degree {m} does not fit under {d}")
        n = tuple(b - a for a, b in zip(m, d))
        target = [c for c in range(self.k) for _ in range(m[c])] + [c for c in range(self.k) for _ in range(n[c])]
        edges = self._bubble(list(lam.edges), target)
        cut = sum(m)
        mid = self.edges[edges[cut - 1]][2] if cut > 0 else lam.r
        return Path(lam.r, mid, tuple(edges[:cut])), Path(mid, lam.s, tuple(edges[cut:]))

    # enumeration

    def morphisms(self, n) -> tuple[Path, ...]:
        """All morphisms of degree ``n`` (normal forms, deterministic order)."""
        return self._morphisms(tuple(int(x) for x in n))

    def _morphisms(self, n: tuple) -> tuple[Path, ...]:
        if len(n) != self.k or min(n) < 0:
            raise ConfigurationError(f"degree {n!r} is not in N^{self.k}")
        cache = self.__dict__.setdefault("_mcache", {})
        if n in cache:
            return cache[n]
        cap = resource_cap()
        paths = [Path(v, v, ()) for v in self.vertices]
        by_range: dict = {}
        for name, (c, r, s) in sorted(self.edges.items()):
            by_range.setdefault((c, r), []).append(name)
        for c in range(self.k):
            for _ in range(n[c]):
                nxt = []
                for p in paths:
                    for name in by_range.get((c, p.s), ()):
                        nxt.append(Path(p.r, self.edges[name][2], p.edges + (name,)))
                if len(nxt) > cap:
                    raise ResourceError(f"more than {cap} morphisms of degree {n}", partial=tuple(paths))
                paths = nxt
        out = tuple(paths)
        cache[n] = out
        return out

    def degrees_up_to(self, cap=None):
        cap = self.cap if cap is None else tuple(cap)
        return list(itertools.product(*(range(c + 1) for c in cap)))

    def range_morphisms(self, v: str, n) -> tuple[Path, ...]:
        """``Lambda^n(v)``: degree-``n`` morphisms with range ``v``."""
        return tuple(p for p in self.morphisms(n) if p.r == v)

    def source_morphisms(self, v: str, n) -> tuple[Path, ...]:
        return tuple(p for p in self.morphisms(n) if p.s == v)

    # structural checks

    def check_squares_complete(self) -> list:
        """Bi-coloured composable pairs without a square (must be empty)."""
        missing = []
        for e, (ce, re, se) in sorted(self.edges.items()):
            for f, (cf, rf, sf) in sorted(self.edges.items()):
                if ce != cf and se == rf and (e, f) not in self._swap:
                    missing.append((e, f))
        return missing

    def check_associativity(self) -> list:
        """Tri-coloured paths whose colour sorting depends on the order of square moves."""
        bad = []
        if self.k < 3:
            return bad
        for word in itertools.product(sorted(self.edges), repeat=3):
            if len({self.colour(x) for x in word}) < 3:
                continue
            if any(self.edges[a][2] != self.edges[b][1] for a, b in zip(word, word[1:])):
                continue
            results = self._all_sorts(word)
            if len(results) > 1:
                bad.append((word, sorted(results)))
        return bad

    def _all_sorts(self, word) -> set:
        """Every colour-sorted word reachable by swapping adjacent inversions."""
        out, seen, stack = set(), set(), [tuple(word)]
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            inv = [i for i in range(len(w) - 1) if self.colour(w[i]) > self.colour(w[i + 1])]
            if not inv:
                out.add(w)
            for i in inv:
                a, b = self._swap_pair(w[i], w[i + 1])
                stack.append(w[:i] + (a, b) + w[i + 2:])
        return out

    def check_factorization(self, cap=None) -> list:
        """Exhaustive unique-factorization check for every degree up to ``cap``.

        For each degree ``d`` and split ``d = m + n`` the composition map on
        composable pairs ``Lambda^m x Lambda^n`` must be a bijection onto
        ``Lambda^d`` and agree with :meth:`factor`.  Returns violations.
        """
        bad = []
        for d in self.degrees_up_to(cap):
            target = set(self.morphisms(d))
            for m in itertools.product(*(range(x + 1) for x in d)):
                n = tuple(a - b for a, b in zip(d, m))
                hits: dict = {}
                for mu in self.morphisms(m):
                    for nu in self.morphisms(n):
                        if mu.s == nu.r:
                            hits.setdefault(self.compose(mu, nu), []).append((mu, nu))
                for lam in target:
                    pairs = hits.get(lam, [])
                    if len(pairs) != 1:
                        bad.append(("count", lam, m, len(pairs)))
                    elif self.factor(lam, m) != pairs[0]:
                        bad.append(("factor", lam, m))
                extra = set(hits) - target
                if extra:
                    bad.append(("outside", d, m, len(extra)))
        return bad

    def check_admissible(self, cap=None) -> list:
        """Vertices and degrees with empty ``Lambda^n(v)`` (sources) up to ``cap``."""
        return [(v, n) for n in self.degrees_up_to(cap) for v in self.vertices
                if not self.range_morphisms(v, n)]

    def validate(self, cap=None) -> None:
        problems = []
        if self.check_squares_complete():
            problems.append(f"missing squares {self.check_squares_complete()[:3]}")
        if self.check_associativity():
            problems.append("square moves are not associative")
        fac = self.check_factorization(cap)
        if fac:
            problems.append(f"factorization fails ({len(fac)} cases, first {fac[0]!r})")
        if self.check_admissible(cap):
            problems.append(f"sources present {self.check_admissible(cap)[:3]}")
        if problems:
            raise ValidationError("; ".join(problems))

    # minimal common extensions

    def mce(self, mu: Path, nu: Path) -> tuple[Path, ...]:
        """Minimal common extensions via factorization of the extensions of ``mu``."""
        return tuple(lam for lam, _, _ in self.mce_pairs(mu, nu))

    def mce_pairs(self, mu: Path, nu: Path) -> list[tuple[Path, Path, Path]]:
        """Triples ``(lam, alpha, beta)`` with ``lam = mu alpha = nu beta`` of degree ``d(mu) v d(nu)``."""
        if mu.r != nu.r:
            return []
        dm, dn = self.degree(mu), self.degree(nu)
        top = tuple(max(a, b) for a, b in zip(dm, dn))
        ext = tuple(a - b for a, b in zip(top, dm))
        out = []
        for alpha in self.morphisms(ext):
            if alpha.r != mu.s:
                continue
            lam = self.compose(mu, alpha)
            head, beta = self.factor(lam, dn)
            if head == nu:
                out.append((lam, alpha, beta))
        return out

    def mce_bruteforce(self, mu: Path, nu: Path) -> set:
        """Oracle: pair every extension of ``mu`` with every extension of ``nu``."""
        dm, dn = self.degree(mu), self.degree(nu)
        top = tuple(max(a, b) for a, b in zip(dm, dn))
        out = set()
        for alpha in self.morphisms(tuple(a - b for a, b in zip(top, dm))):
            if alpha.r != mu.s:
                continue
            left = self.compose(mu, alpha)
            for beta in self.morphisms(tuple(a - b for a, b in zip(top, dn))):
                if beta.r == nu.s and self.compose(nu, beta) == left:
                    out.add(left)
        return out

    def is_aperiodic(self, depth: int) -> "AperiodicityReport":
        """Bounded search for separating extensions.

        Every pair ``mu != nu`` with a common source and degrees at most
        ``depth`` in each colour needs some ``lam`` (degree at most ``depth``)
        with ``r(lam) = s(mu)`` and ``MCE(mu lam, nu lam)`` empty.
        """
        degs = list(itertools.product(range(depth + 1), repeat=self.k))
        paths = [p for n in degs for p in self.morphisms(n)]
        checked = 0
        witnesses = []
        for mu, nu in itertools.combinations(paths, 2):
            if mu.s != nu.s:
                continue
            checked += 1
            sep = None
            for lam in paths:
                if lam.r != mu.s:
                    continue
                if not self.mce_pairs(self.compose(mu, lam), self.compose(nu, lam)):
                    sep = lam
                    break
            if sep is None:
                return AperiodicityReport(False, depth, checked, (mu, nu), tuple(witnesses))
            if len(witnesses) < 20:
                witnesses.append((mu, nu, sep))
        return AperiodicityReport(True, depth, checked, None, tuple(witnesses))


@dataclass(frozen=True)
class AperiodicityReport:
    aperiodic: bool
    depth: int
    pairs_checked: int
    obstruction: tuple | None
    witnesses: tuple

    def __bool__(self):
        return self.aperiodic


# Cuntz-Krieger calculus


class CKElement:
    """Finite combination ``sum c (lam, mu) S_lam S_mu^*`` with ``s(lam) = s(mu)``."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph: KGraph, terms: Mapping | None = None):
        clean: dict = {}
        for (lam, mu), c in (terms or {}).items():
            if lam.s != mu.s:
                raise StructuralError(f"S_{lam!r} S_{mu!r}^* needs equal sources")
            clean[(lam, mu)] = clean.get((lam, mu), 0) + c
        self.graph = graph
        self.terms = {key: c for key, c in sorted(clean.items(), key=lambda kv: _key(kv[0])) if abs(c) > 1e-14}

    @classmethod
    def vertex(cls, graph: KGraph, v: str) -> "CKElement":
        p = graph.vertex(v)
        return cls(graph, {(p, p): 1})

    @classmethod
    def S(cls, graph: KGraph, lam: Path) -> "CKElement":
        p = graph.vertex(lam.s)
        return cls(graph, {(lam, p): 1})

    @classmethod
    def unit(cls, graph: KGraph) -> "CKElement":
        return cls(graph, {(graph.vertex(v), graph.vertex(v)): 1 for v in graph.vertices})

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return CKElement(self.graph, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return CKElement(self.graph, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CKElement):
            return ck_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def adjoint(self) -> "CKElement":
        return CKElement(self.graph, {(mu, lam): np.conj(c) for (lam, mu), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def lift(self, level) -> "CKElement":
        """Rewrite every term with ``d(mu) <= level`` to ``d(mu) = level`` using relation (d)."""
        g = self.graph
        level = tuple(level)
        out: dict = {}
        for (lam, mu), c in self.terms.items():
            dm = g.degree(mu)
            if any(a > b for a, b in zip(dm, level)):
                raise StructuralError("lift level below a term degree")
            ext = tuple(b - a for a, b in zip(dm, level))
            for nu in g.range_morphisms(mu.s, ext):
                key = (g.compose(lam, nu), g.compose(mu, nu))
                out[key] = out.get(key, 0) + c
        return CKElement(g, out)

    def level(self) -> tuple:
        g = self.graph
        lvl = [0] * g.k
        for (_, mu) in self.terms:
            lvl = [max(a, b) for a, b in zip(lvl, g.degree(mu))]
        return tuple(lvl)

    def equals(self, other: "CKElement", tol: float = 1e-12) -> bool:
        """Equality in the Cuntz-Krieger algebra (terms lifted to a common level)."""
        lvl = tuple(max(a, b) for a, b in zip(self.level(), other.level()))
        diff = self.lift(lvl) - other.lift(lvl)
        return all(abs(c) <= tol for c in diff.terms.values())

    def degrees(self, functor=None) -> set:
        return {ck_degree(self.graph, lam, mu, functor) for lam, mu in self.terms}

    def __repr__(self):
        return " + ".join(f"{c}*S[{l!r}]S*[{m!r}]" for (l, m), c in self.terms.items()) or "0"


def _key(pair):
    lam, mu = pair
    return (lam.r, lam.s, lam.edges, mu.r, mu.s, mu.edges)


def ck_mul(x: CKElement, y: CKElement) -> CKElement:
    """Product using ``S_mu^* S_nu = sum_{mu a = nu b in MCE} S_a S_b^*``."""
    if x.graph != y.graph:
        raise StructuralError("elements of different k-graphs")
    g = x.graph
    out: dict = {}
    for (a, b), c1 in x.terms.items():
        for (cc, d), c2 in y.terms.items():
            for _, eta, zeta in g.mce_pairs(b, cc):
                key = (g.compose(a, eta), g.compose(d, zeta))
                out[key] = out.get(key, 0) + c1 * c2
    return CKElement(g, out)


def ck_degree(graph: KGraph, lam: Path, mu: Path, functor=None):
    """Degree ``F(d(lam)) - F(d(mu))`` of ``S_lam S_mu^*`` (``F`` an integer matrix)."""
    d = np.array(graph.degree(lam)) - np.array(graph.degree(mu))
    if functor is not None:
        d = np.asarray(functor, dtype=int) @ d
    return tuple(int(v) for v in d)


class CKFibers(FiberSystem):
    """Degree-``g`` parts of the Cuntz-Krieger algebra under a functor grading.

    Norms are not available: there is no faithful finite representation.
    """

    def __init__(self, graph: KGraph, functor=None):
        self.graph = graph
        self.functor = None if functor is None else np.asarray(functor, dtype=int)
        rank = graph.k if functor is None else self.functor.shape[0]
        self.group = Lattice(rank)

    def __repr__(self):
        return f"CKFibers(k={self.graph.k})"

    def mul(self, x, g, y, h):
        return ck_mul(x, y)

    def adjoint(self, x, g):
        return x.adjoint()

    def norm(self, x, g):
        raise UnsupportedError("k-graph algebras are symbolic; norms are not computed")

    def is_zero(self, x, g):
        return x.is_zero() or x.equals(CKElement(self.graph))

    def unit(self):
        return CKElement.unit(self.graph)

    def check(self, x, g):
        if not isinstance(x, CKElement):
            raise StructuralError("expected a CKElement")
        bad = [d for d in x.degrees(self.functor) if d != tuple(g)]
        if bad:
            raise StructuralError(f"terms of degree {bad[0]} in the degree-{g} fiber")

    def add(self, x, y):
        return x + y

    def scale(self, c, x):
        return x.scale(c)

    def random_block(self, g, rng):
        raise UnsupportedError("random k-graph blocks are built from paths, see ck_random")

    def block_to_json(self, x):
        return [[list(l.edges), l.r, list(m.edges), m.r, [complex(c).real, complex(c).imag]]
                for (l, m), c in x.terms.items()]


def graded_ck(x: CKElement, functor=None) -> GradedElement:
    """Split a CK combination into its homogeneous components."""
    fibers = CKFibers(x.graph, functor)
    parts: dict = {}
    for (lam, mu), c in x.terms.items():
        d = ck_degree(x.graph, lam, mu, fibers.functor)
        parts.setdefault(d, {})[(lam, mu)] = c
    return GradedElement(fibers, {d: CKElement(x.graph, t) for d, t in parts.items()}, check=False)


def ck_random(graph: KGraph, rng: np.random.Generator, n_terms: int = 3, max_degree: int = 1) -> CKElement:
    degs = list(itertools.product(range(max_degree + 1), repeat=graph.k))
    paths = [p for n in degs for p in graph.morphisms(n)]
    terms = {}
    for _ in range(n_terms):
        lam = paths[rng.integers(len(paths))]
        same = [p for p in paths if p.s == lam.s]
        mu = same[rng.integers(len(same))]
        terms[(lam, mu)] = complex(round(float(rng.standard_normal()), 3), round(float(rng.standard_normal()), 3))
    return CKElement(graph, terms)


# built-in graphs


def single_loop() -> KGraph:
    return KGraph(1, ("v",), {"e": (0, "v", "v")}, cap=(6,))


def bouquet(n: int = 2) -> KGraph:
    names = "abcdefgh"[:n]
    return KGraph(1, ("v",), {x: (0, "v", "v") for x in names}, cap=(6,))


def torus_2graph() -> KGraph:
    """One red loop ``a`` and one blue loop ``b`` with ``ab = ba`` (the periodic grid N^2)."""
    return KGraph(2, ("v",), {"a": (0, "v", "v"), "b": (1, "v", "v")}, [("a", "b", "b", "a")])


def flip_2graph() -> KGraph:
    """Two red and two blue loops at one vertex with squares ``r_i b_j = b_i r_j``."""
    edges = {"r0": (0, "v", "v"), "r1": (0, "v", "v"), "b0": (1, "v", "v"), "b1": (1, "v", "v")}
    squares = [(f"r{i}", f"b{j}", f"b{i}", f"r{j}") for i in range(2) for j in range(2)]
    return KGraph(2, ("v",), edges, squares)


def two_vertex_2graph() -> KGraph:
    """Product of two 2-cycles: vertices u, w; red and blue edges swap the vertices."""
    edges = {"r1": (0, "u", "w"), "r2": (0, "w", "u"), "b1": (1, "u", "w"), "b2": (1, "w", "u")}
    squares = [("r1", "b2", "b1", "r2"), ("r2", "b1", "b2", "r1")]
    return KGraph(2, ("u", "w"), edges, squares)


def kgraph_from_spec(spec: Mapping) -> KGraph:
    kind = spec.get("kind", "custom")
    builtin = {"single_loop": single_loop, "torus": torus_2graph, "flip": flip_2graph,
               "two_vertex": two_vertex_2graph}
    if kind in builtin:
        return builtin[kind]()
    if kind == "bouquet":
        return bouquet(int(spec.get("n", 2)))
    try:
        k = int(spec["k"])
        edges = {n: tuple(v) for n, v in spec["edges"].items()}
        return KGraph(k, tuple(spec["vertices"]), edges, tuple(map(tuple, spec.get("squares", []))),
                      tuple(spec.get("cap", (3,) * k)))
    except KeyError as exc:
        raise ConfigurationError(f"k-graph config missing {exc}") from exc
