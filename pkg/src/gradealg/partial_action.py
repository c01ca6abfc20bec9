"""Partial actions, the l1 partial crossed product and the orbit representation.

A :class:`PartialSystem` acts on a finite-dimensional algebra
``A = M_{n_1} + ... + M_{n_r}`` stored as block-diagonal matrices.  The ideal
``A_g`` is the sum of a set of blocks (a central projection) and
``theta_g: A_{g^-1} -> A_g`` moves block ``b`` to block ``sigma_g(b)``,
conjugating by a unitary.  Function algebras ``C(X)`` on a finite set are the
case of ``1 x 1`` blocks; :func:`induce_function_system` builds them from a
:class:`TopPartialAction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, OrbitLookupError, StructuralError, ValidationError
from .graded import FiberSystem, GradedElement
from .group import Cyclic, GeneratingSet, GroupDescriptor, Integers, word_shells


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""


@dataclass(frozen=True)
class PartialActionReport:
    window: tuple
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_axiom(self) -> dict:
        out: dict = {}
        for v in self.violations:
            out.setdefault(v.axiom, []).append(v)
        return out


# topological partial actions


class TopPartialAction:
    """Partial action of ``G`` on a finite point set by partial bijections.

    ``theta(g)`` returns ``Theta_g`` as a dict ``x -> Theta_g(x)`` on its domain
    ``X_{g^-1}``.  ``orbit`` lists the distinguished orbit ``Y`` and
    ``boundary`` tags points added to compactify a window.
    """

    def __init__(self, group: GroupDescriptor, points: Sequence[Hashable],
                 theta: Callable[[object], Mapping], orbit: Sequence | None = None,
                 boundary: Sequence = (), name: str = "partial_action"):
        self.group = group
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise ConfigurationError("points must be distinct")
        self.index = {x: i for i, x in enumerate(self.points)}
        self._theta = lru_cache(maxsize=None)(lambda g: dict(theta(g)))
        self.orbit = tuple(orbit) if orbit is not None else None
        self.boundary = tuple(boundary)
        self.name = name

    def theta(self, g) -> dict:
        return self._theta(self.group.normalize(g))

    def apply(self, g, x):
        return self.theta(g)[x]

    def open_set(self, g) -> frozenset:
        """``X_g``: the domain of ``Theta_{g^-1}``."""
        return frozenset(self.theta(self.group.inv(self.group.normalize(g))))

    def default_window(self) -> list:
        if self.group.finite:
            return list(self.group.elements())
        R = len(self.points) + 1
        V = GeneratingSet.standard(self.group)
        return [g for shell in word_shells(V, R) for g in shell]

    # constructors

    @classmethod
    def from_global(cls, group, points, act: Callable, **kw) -> "TopPartialAction":
        pts = tuple(points)
        return cls(group, pts, lambda g: {x: act(g, x) for x in pts}, **kw)

    @classmethod
    def restriction(cls, group, points, act: Callable, **kw) -> "TopPartialAction":
        """Restrict a global action to the subset ``points``: ``X_g = U cap Theta_g(U)``."""
        pts = tuple(points)
        inside = set(pts)

        def theta(g):
            out = {}
            for x in pts:
                y = act(g, x)
                if y in inside:
                    out[x] = y
            return out

        return cls(group, pts, theta, **kw)

    @classmethod
    def from_generator(cls, points, step: Mapping, **kw) -> "TopPartialAction":
        """``Z``-action generated by one partial bijection: ``Theta_n = Theta_1^n``."""
        pts = tuple(points)
        step = dict(step)
        if len(set(step.values())) != len(step):
            raise ConfigurationError("generator is not injective")
        back = {v: k for k, v in step.items()}

        def theta(n):
            n = int(n)
            m = step if n >= 0 else back
            out = {}
            for x in pts:
                y = x
                for _ in range(abs(n)):
                    if y not in m:
                        break
                    y = m[y]
                else:
                    out[x] = y
            return out

        return cls(Integers(), pts, theta, **kw)


def partial_shift(N: int) -> TopPartialAction:
    """``Z`` acting on ``{0..N}`` by ``x -> x + 1`` on ``{0..N-1}``."""
    pts = list(range(N + 1))
    return TopPartialAction.from_generator(pts, {x: x + 1 for x in range(N)}, orbit=pts,
                                           name=f"partial_shift({N})")


def cyclic_rotation(N: int) -> TopPartialAction:
    """``Z/N`` acting on itself by rotation (a global, free action)."""
    G = Cyclic(N)
    pts = list(range(N))
    return TopPartialAction.from_global(G, pts, lambda g, x: (x + g) % N, orbit=pts,
                                        name=f"cyclic_rotation({N})")


INF = "inf"


def half_line(N: int) -> TopPartialAction:
    """Translation on ``N cup {inf}`` restricted to the window ``{0..N-1} cup {inf}``.

    ``inf`` is a tagged boundary point fixed by every translation; the orbit
    ``Y = {0..N-1}`` has trivial isotropy.
    """
    pts = list(range(N)) + [INF]

    def act(n, x):
        return INF if x == INF else x + n

    return TopPartialAction.restriction(Integers(), pts, act, orbit=list(range(N)), boundary=[INF],
                                        name=f"half_line({N})")


def action_from_config(spec: Mapping) -> TopPartialAction:
    """Point list, generator pair list and orbit marker (``Z`` actions)."""
    kind = spec.get("kind", "custom")
    if kind == "partial_shift":
        return partial_shift(int(spec.get("N", 8)))
    if kind == "cyclic_rotation":
        return cyclic_rotation(int(spec.get("N", 8)))
    if kind == "half_line":
        return half_line(int(spec.get("N", 8)))
    try:
        pts = [p if not isinstance(p, list) else tuple(p) for p in spec["points"]]
        step = {a: b for a, b in spec["generator"]}
    except KeyError as exc:
        raise ConfigurationError(f"partial action config missing {exc}") from exc
    return TopPartialAction.from_generator(pts, step, orbit=spec.get("orbit"),
                                           boundary=spec.get("boundary", ()))


# partial systems on block algebras


class PartialSystem:
    """Partial action on a block-diagonal algebra.

    ``sigma(g)`` maps the blocks of ``A_{g^-1}`` to those of ``A_g``;
    ``unitary(g, b)`` (optional) conjugates block ``b`` on the way.
    """

    def __init__(self, group: GroupDescriptor, block_sizes: Sequence[int],
                 sigma: Callable[[object], Mapping], unitary: Callable | None = None,
                 name: str = "partial_system", labels: Sequence | None = None):
        self.group = group
        self.block_sizes = tuple(int(s) for s in block_sizes)
        self.offsets = tuple(np.concatenate([[0], np.cumsum(self.block_sizes)]).astype(int).tolist())
        self.dim = self.offsets[-1]
        self._sigma = lru_cache(maxsize=None)(lambda g: dict(sigma(g)))
        self._unitary = unitary
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(range(len(self.block_sizes)))
        self.fibers = ThetaFibers(self)
        block_id = np.zeros(self.dim, dtype=int)
        for b in range(len(self.block_sizes)):
            block_id[self.offsets[b]:self.offsets[b + 1]] = b
        self._block_id = block_id

    @property
    def commutative(self) -> bool:
        return all(s == 1 for s in self.block_sizes)

    def sigma(self, g) -> dict:
        return self._sigma(self.group.normalize(g))

    def unitary(self, g, b) -> np.ndarray:
        if self._unitary is None:
            return np.eye(self.block_sizes[b], dtype=complex)
        return np.asarray(self._unitary(self.group.normalize(g), b), dtype=complex)

    def ideal(self, g) -> frozenset:
        """Blocks spanning ``A_g`` (domain of ``sigma_{g^-1}``)."""
        return frozenset(self.sigma(self.group.inv(self.group.normalize(g))))

    def projection(self, g) -> np.ndarray:
        """Diagonal of the central support projection of ``A_g``."""
        blocks = self.ideal(g)
        return np.isin(self._block_id, list(blocks)).astype(float)

    def block(self, a: np.ndarray, b: int) -> np.ndarray:
        s, t = self.offsets[b], self.offsets[b + 1]
        return a[s:t, s:t]

    def in_algebra(self, a, tol: float = 1e-12) -> bool:
        if a.shape != (self.dim, self.dim):
            return False
        off = self._block_id[:, None] != self._block_id[None, :]
        return bool(np.abs(a[off]).max(initial=0.0) <= tol * max(1.0, np.abs(a).max(initial=0.0)))

    def contains(self, a: np.ndarray, g, tol: float = 1e-12) -> bool:
        """``a in A_g``: block-diagonal with ``a = P_g a``."""
        if not self.in_algebra(a, tol):
            return False
        p = self.projection(g)
        return bool(np.abs(a - p[:, None] * a).max(initial=0.0) <= tol * max(1.0, np.abs(a).max(initial=0.0)))

    def theta(self, g, a: np.ndarray, check: bool = True) -> np.ndarray:
        """``theta_g(a)`` for ``a in A_{g^-1}``."""
        g = self.group.normalize(g)
        if check and not self.contains(a, self.group.inv(g)):
            raise ValidationError(f"theta_{g!r} applied outside A_(g^-1)")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for b, c in self.sigma(g).items():
            u = self.unitary(g, b)
            s, t = self.offsets[c], self.offsets[c + 1]
            out[s:t, s:t] = u @ self.block(a, b) @ u.conj().T
        return out

    def unit(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def diag(self, values) -> np.ndarray:
        """Element of a commutative system from its point values."""
        return np.diag(np.asarray(values, dtype=complex))

    def random_in_ideal(self, g, rng: np.random.Generator) -> np.ndarray:
        a = np.zeros((self.dim, self.dim), dtype=complex)
        for b in self.ideal(g):
            s, t = self.offsets[b], self.offsets[b + 1]
            n = t - s
            a[s:t, s:t] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return a

    def default_window(self) -> list:
        if self.group.finite:
            return list(self.group.elements())
        R = len(self.block_sizes) + 1
        V = GeneratingSet.standard(self.group)
        return [g for shell in word_shells(V, R) for g in shell]

    def random_element(self, rng, degrees: Iterable, n_terms: int | None = None) -> GradedElement:
        degrees = [d for d in degrees if self.ideal(d)]
        if n_terms is not None and n_terms < len(degrees):
            idx = sorted(rng.choice(len(degrees), size=n_terms, replace=False))
            degrees = [degrees[i] for i in idx]
        return L1ThetaElement(self, {g: self.random_in_ideal(g, rng) for g in degrees})


def induce_function_system(act: TopPartialAction, window=None) -> PartialSystem:
    """``A_g = C(X_g)`` and ``theta_g(a) = a o Theta_{g^-1}`` on the point set.

    The action is validated first; violations raise :class:`ValidationError`.
    """
    report = validate_partial_action(act, window)
    if not report.ok:
        v = report.violations[0]
        raise ValidationError(f"invalid partial action: {v.axiom} at {v.witness!r} ({len(report.violations)} violations)")
    idx = act.index

    def sigma(g):
        return {idx[x]: idx[y] for x, y in act.theta(g).items()}

    return PartialSystem(act.group, [1] * len(act.points), sigma, name=f"C({act.name})", labels=act.points)


def block_shift_system(N: int, size: int = 2, U=None) -> PartialSystem:
    """``Z`` acting on ``M_size^{N+1}`` by moving block ``b`` to ``b + n`` and conjugating by ``U^n``."""
    if U is None:
        t = 0.7
        U = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], dtype=complex)
        if size != 2:
            U = np.eye(size, dtype=complex)
    U = np.asarray(U, dtype=complex)

    def sigma(n):
        n = int(n)
        return {b: b + n for b in range(N + 1) if 0 <= b + n <= N}

    def unitary(n, b):
        n = int(n)
        base = U if n >= 0 else U.conj().T
        return np.linalg.matrix_power(base, abs(n))

    return PartialSystem(Integers(), [size] * (N + 1), sigma, unitary, name=f"block_shift({N},{size})")


def global_block_rotation(N: int, size: int = 2) -> PartialSystem:
    """``Z/N`` permuting ``N`` matrix blocks cyclically (all ideals equal to ``A``)."""
    G = Cyclic(N)
    return PartialSystem(G, [size] * N, lambda g: {b: (b + g) % N for b in range(N)},
                         name=f"block_rotation({N},{size})")


# validation


def _check_maps(group, units, domain, sigma, window, compose_extra=None) -> list:
    """Shared axiom checks on the unit level (points or blocks)."""
    out = []
    e = group.identity()
    window = [group.normalize(g) for g in window]
    all_units = set(units)
    if set(domain(e)) != all_units:
        out.append(Violation("A_e = A", (e,), "identity ideal is not everything"))
    if any(sigma(e).get(x) != x for x in all_units):
        out.append(Violation("theta_e = id", (e,), "identity does not act trivially"))
    for g in window:
        sg = sigma(g)
        if not set(sg) <= all_units or not set(sg.values()) <= all_units:
            out.append(Violation("well-defined", (g,), "maps outside the space"))
            continue
        if len(set(sg.values())) != len(sg):
            out.append(Violation("inverse", (g,), "theta_g not injective"))
        ginv = group.inv(g)
        back = sigma(ginv)
        for x, y in sg.items():
            if back.get(y) != x:
                out.append(Violation("inverse", (g, x), f"theta_(g^-1)(theta_g({x!r})) != {x!r}"))
        if set(back) != set(sg.values()):
            out.append(Violation("inverse", (g,), "domain of theta_(g^-1) differs from range of theta_g"))
    for g, h in itertools.product(window, repeat=2):
        sg = sigma(g)
        gh = group.mul(g, h)
        dom_gh = domain(gh)
        # (ii): theta_g(A_{g^-1} cap A_h) inside A_{gh}
        for x in set(domain(group.inv(g))) & set(domain(h)):
            y = sg.get(x)
            if y is None or y not in dom_gh:
                out.append(Violation("ideal compatibility", (g, h, x),
                                     f"theta_g({x!r}) = {y!r} not in A_gh"))
        # (iii): theta_g theta_h = theta_gh on A_{h^-1} cap A_{(gh)^-1}
        sh, sgh = sigma(h), sigma(gh)
        for x in set(domain(group.inv(h))) & set(domain(group.inv(gh))):
            mid = sh.get(x)
            if mid is None or mid not in sg:
                out.append(Violation("composition", (g, h, x), "theta_g not defined on theta_h(x)"))
                continue
            if sg[mid] != sgh.get(x):
                out.append(Violation("composition", (g, h, x),
                                     f"theta_g theta_h -> {sg[mid]!r}, theta_gh -> {sgh.get(x)!r}"))
            elif compose_extra is not None:
                msg = compose_extra(g, h, x, mid)
                if msg:
                    out.append(Violation("composition", (g, h, x), msg))
    return out


def validate_partial_action(system, window=None) -> PartialActionReport:
    """Check the partial-action axioms exhaustively on a finite window of group elements.

    Works for :class:`TopPartialAction` (points) and :class:`PartialSystem`
    (blocks, including the conjugating unitaries).  For a topological action
    with a distinguished orbit, trivial isotropy on the window is checked too.
    """
    group = system.group
    window = list(system.default_window() if window is None else window)
    if isinstance(system, TopPartialAction):
        out = _check_maps(group, system.points, system.open_set, system.theta, window)
        if system.orbit is not None:
            e = group.identity()
            for y in system.orbit:
                for g in window:
                    if g != e and system.theta(g).get(y) == y:
                        out.append(Violation("trivial isotropy", (g, y), "orbit point fixed"))
        return PartialActionReport(tuple(window), tuple(out))
    if isinstance(system, PartialSystem):
        blocks = range(len(system.block_sizes))

        def extra(g, h, b, mid):
            if system.block_sizes[b] != system.block_sizes[mid]:
                return "block sizes differ"
            u = system.unitary(group.mul(g, h), b).conj().T @ system.unitary(g, mid) @ system.unitary(h, b)
            if not np.allclose(u, u[0, 0] * np.eye(len(u)), atol=1e-12) or abs(abs(u[0, 0]) - 1) > 1e-12:
                return "unitaries do not compose"
            return ""

        out = _check_maps(group, blocks, system.ideal, system.sigma, window, extra)
        for g in window:
            for b, c in system.sigma(g).items():
                if system.block_sizes[b] != system.block_sizes[c]:
                    out.append(Violation("well-defined", (g, b), "block sizes differ"))
        return PartialActionReport(tuple(window), tuple(out))
    raise ConfigurationError("expected a TopPartialAction or PartialSystem")


# the l1 partial crossed product


class ThetaFibers(FiberSystem):
    """Fiber ``A_g`` with product ``a * b = theta_g(theta_{g^-1}(a) b)``."""

    def __init__(self, system: PartialSystem):
        self.system = system
        self.group = system.group

    def __repr__(self):
        return f"ThetaFibers({self.system.name})"

    def mul(self, x, g, y, h):
        s = self.system
        return s.theta(g, s.theta(self.group.inv(g), x, check=False) @ y, check=False)

    def adjoint(self, x, g):
        return self.system.theta(self.group.inv(g), x, check=False).conj().T

    def norm(self, x, g):
        if not np.any(x):
            return 0.0
        return float(np.linalg.norm(x, 2))

    def unit(self):
        return self.system.unit()

    def check(self, x, g):
        if not isinstance(x, np.ndarray) or x.shape != (self.system.dim, self.system.dim):
            raise StructuralError(f"expected a {self.system.dim}x{self.system.dim} array")
        if not self.system.contains(x, g):
            raise ValidationError(f"coefficient at degree {g!r} is not in the ideal A_g")

    def random_block(self, g, rng):
        return self.system.random_in_ideal(g, rng)


def L1ThetaElement(system: PartialSystem, blocks: Mapping) -> GradedElement:
    """Finitely supported ``Phi: G -> A`` with ``Phi(g) in A_g`` (checked, tolerance 1e-12)."""
    return GradedElement(system.fibers, {g: np.asarray(a, dtype=complex) for g, a in blocks.items()})


def theta_conv(phi: GradedElement, psi: GradedElement) -> GradedElement:
    """``(Phi *_theta Psi)(g) = sum_h theta_h[theta_{h^-1}(Phi(h)) Psi(h^-1 g)]``."""
    f = phi.fibers
    if not isinstance(f, ThetaFibers) or (psi.fibers is not f):
        raise StructuralError("theta_conv needs elements of one partial system")
    s, G = f.system, f.group
    out: dict = {}
    for g in sorted({G.mul(h, k) for h in phi.support for k in psi.support}, key=G.sort_key):
        total = np.zeros((s.dim, s.dim), dtype=complex)
        for h, a in phi.items():
            b = psi.get(G.mul(G.inv(h), g))
            if b is None:
                continue
            total += s.theta(h, s.theta(G.inv(h), a) @ b)
        if not s.contains(total, g, tol=1e-10):
            raise ValidationError(f"product component at {g!r} left the ideal A_g")
        out[g] = total
    return GradedElement(f, out, check=False)


def theta_adjoint(phi: GradedElement) -> GradedElement:
    """``Phi^*(g) = theta_g[Phi(g^-1)]^*``."""
    f = phi.fibers
    s, G = f.system, f.group
    out = {}
    for k, a in phi.items():
        g = G.inv(k)
        out[g] = s.theta(g, a).conj().T
    return GradedElement(f, out, check=False)


def global_convolution(phi: Mapping, psi: Mapping, alpha: Callable, group: GroupDescriptor) -> dict:
    """Ordinary crossed-product convolution ``sum_h Phi(h) alpha_h(Psi(h^-1 g))`` on plain dicts."""
    out: dict = {}
    for h in sorted(phi, key=group.sort_key):
        for k in sorted(psi, key=group.sort_key):
            g = group.mul(h, k)
            z = phi[h] @ alpha(h, psi[k])
            out[g] = out[g] + z if g in out else z
    return out


def l1_theta_norm(phi: GradedElement) -> float:
    return float(sum(phi.fibers.norm(a, g) for g, a in phi.items()))


# orbit representation


class OrbitTable:
    """Lookup ``g_{yz}`` (the unique ``g`` with ``Theta_g(y) = z``) on an orbit.

    Group labels ``c_y`` with ``Theta_{c_y}(y_0) = y`` are found by
    breadth-first search from a base point; then ``g_{yz} = c_z c_y^{-1}``,
    which is re-verified against the action.
    """

    def __init__(self, act: TopPartialAction, base=None, max_steps: int | None = None):
        self.act = act
        G = act.group
        orbit = act.orbit if act.orbit is not None else act.points
        base = orbit[0] if base is None else base
        gens = list(G.standard_generators())
        gens = gens + [G.inv(s) for s in gens]
        label = {base: G.identity()}
        frontier = [base]
        steps = 0
        limit = max_steps if max_steps is not None else len(act.points) + 1
        while frontier and steps < limit:
            steps += 1
            nxt = []
            for x in frontier:
                for s in gens:
                    y = act.theta(s).get(x)
                    if y is not None and y not in label:
                        label[y] = G.mul(s, label[x])
                        nxt.append(y)
            frontier = nxt
        self.base = base
        self.label = label

    def g(self, y, z):
        """``g_{yz}``; raises :class:`OrbitLookupError` when ``y, z`` are not on the orbit."""
        G = self.act.group
        if y not in self.label or z not in self.label:
            raise OrbitLookupError(f"{y!r} and {z!r} are not both on the orbit of {self.base!r}")
        g = G.mul(self.label[z], G.inv(self.label[y]))
        if self.act.theta(g).get(y) != z:
            raise OrbitLookupError(f"no group element moves {y!r} to {z!r}")
        return g

    def relation_violations(self, points: Sequence) -> list:
        """Triples where ``g_{yz}^{-1} = g_{zy}`` or ``g_{zy} = g_{xy} g_{zx}`` fails."""
        G = self.act.group
        bad = []
        for y, z in itertools.product(points, repeat=2):
            if G.inv(self.g(y, z)) != self.g(z, y):
                bad.append(("inverse", y, z))
        for x, y, z in itertools.product(points, repeat=3):
            if self.g(z, y) != G.mul(self.g(x, y), self.g(z, x)):
                bad.append(("cocycle", x, y, z))
        return bad


def _values(system: PartialSystem, a: np.ndarray) -> np.ndarray:
    return np.real_if_close(np.diag(a)) if system.commutative else None


def orbit_rep(phi: GradedElement, act: TopPartialAction, Y_window: Sequence,
              table: OrbitTable | None = None) -> np.ndarray:
    """Matrix of ``Pi(Phi)`` on ``l2(Y_window)``: entry ``(y, z) = Phi(g_{zy}, y)``."""
    system = phi.fibers.system
    if not system.commutative:
        raise StructuralError("the orbit representation acts on function systems")
    table = table or OrbitTable(act)
    n = len(Y_window)
    out = np.zeros((n, n), dtype=complex)
    idx = act.index
    vals = {g: np.diag(a) for g, a in phi.items()}
    for i, y in enumerate(Y_window):
        for j, z in enumerate(Y_window):
            g = table.g(z, y)
            v = vals.get(g)
            if v is not None:
                out[i, j] = v[idx[y]]
    return out


def pi_rep(a: np.ndarray, act: TopPartialAction, Y_window: Sequence) -> np.ndarray:
    """Multiplication operator ``[pi(a) xi](y) = a(y) xi(y)``."""
    d = np.diag(a)
    return np.diag([d[act.index[y]] for y in Y_window]).astype(complex)


def u_rep(h, act: TopPartialAction, Y_window: Sequence) -> np.ndarray:
    """Partial isometry ``[u_h xi](y) = xi(Theta_{h^-1}(y))`` for ``y in X_h``."""
    pos = {y: i for i, y in enumerate(Y_window)}
    back = act.theta(act.group.inv(act.group.normalize(h)))
    out = np.zeros((len(Y_window), len(Y_window)), dtype=complex)
    for y, i in pos.items():
        z = back.get(y)
        if z is not None and z in pos:
            out[i, pos[z]] = 1.0
    return out


def interior_rows(phi: GradedElement, act: TopPartialAction, Y_window: Sequence) -> list[int]:
    """Rows ``y`` whose full row of ``Pi(Phi)`` on the whole orbit lies inside the window."""
    inside = set(Y_window)
    G = act.group
    rows = []
    for i, y in enumerate(Y_window):
        ok = True
        for h in phi.support:
            z = act.theta(G.inv(h)).get(y)
            if z is not None and z not in inside:
                ok = False
                break
        if ok:
            rows.append(i)
    return rows
