"""Graded elements of l1-algebras, fiber systems, kernels and the embedding T.

A graded element is a finitely supported map ``g -> Phi_g`` where every block
lives in the fiber of degree ``g`` of a :class:`FiberSystem`.  Fibers are
stored after embedding into a concrete operator algebra (dense matrices,
weighted shifts, scalars of a twisted group algebra), so the fiber norm is
the operator norm of the represented block.
"""

from __future__ import annotations

import cmath
import itertools
import numbers
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Callable, Iterable, Mapping

import numpy as np

from .errors import DomainError, RepresentationError, StructuralError, ValidationError
from .group import GroupDescriptor, Weight

ZERO_TOL = 1e-14


class FiberSystem(ABC):
    """Degree-indexed family of Banach spaces with product, adjoint and norm."""

    group: GroupDescriptor

    @abstractmethod
    def mul(self, x, g, y, h):
        """Product of ``x`` in degree ``g`` and ``y`` in degree ``h`` (degree ``gh``)."""

    @abstractmethod
    def adjoint(self, x, g):
        """Adjoint of ``x`` in degree ``g`` (lands in degree ``g^-1``)."""

    @abstractmethod
    def norm(self, x, g) -> float:
        ...

    @abstractmethod
    def unit(self):
        """Unit block in degree ``e``."""

    @abstractmethod
    def check(self, x, g) -> None:
        """Raise :class:`StructuralError` unless ``x`` belongs to the fiber of degree ``g``."""

    @abstractmethod
    def random_block(self, g, rng: np.random.Generator):
        ...

    def add(self, x, y):
        return x + y

    def scale(self, c, x):
        return c * x

    def sub(self, x, y):
        return self.add(x, self.scale(-1.0, y))

    def is_zero(self, x, g) -> bool:
        return self.norm(x, g) <= ZERO_TOL

    def distance(self, x, y, g) -> float:
        return self.norm(self.sub(x, y), g)

    def block_to_json(self, x):
        return _complex_array_to_json(np.asarray(x))

    def block_from_json(self, obj, g):
        return _complex_array_from_json(obj)


def _complex_array_to_json(a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    return {"shape": list(a.shape), "real": a.real.ravel().tolist(), "imag": a.imag.ravel().tolist()}


def _complex_array_from_json(obj):
    real = np.asarray(obj["real"], dtype=float)
    imag = np.asarray(obj["imag"], dtype=float)
    return (real + 1j * imag).reshape(obj["shape"])


class MatrixFibers(FiberSystem):
    """Square complex matrices of size ``dim``; degree ``g`` fiber given by a support mask.

    ``mask(g)`` returns a boolean ``dim x dim`` array of allowed entries (or
    ``None`` for the full matrix algebra).  Norm is the largest singular value.
    """

    def __init__(self, group: GroupDescriptor, dim: int, mask: Callable | None = None,
                 name: str = "matrix"):
        self.group = group
        self.dim = int(dim)
        self._mask = mask
        self.name = name

    def __repr__(self):
        return f"MatrixFibers({self.name}, dim={self.dim})"

    def mask(self, g):
        return None if self._mask is None else self._mask(g)

    def mul(self, x, g, y, h):
        return x @ y

    def adjoint(self, x, g):
        return x.conj().T

    def norm(self, x, g):
        if not np.any(x):
            return 0.0
        return float(np.linalg.norm(x, 2))

    def unit(self):
        return np.eye(self.dim, dtype=complex)

    def check(self, x, g):
        if not isinstance(x, np.ndarray) or x.shape != (self.dim, self.dim):
            raise StructuralError(f"expected a {self.dim}x{self.dim} array at degree {g!r}")
        m = self.mask(g)
        if m is not None:
            outside = np.abs(x[~m]).max(initial=0.0)
            if outside > 1e-12 * max(1.0, np.abs(x).max(initial=0.0)):
                raise StructuralError(f"block has entries outside the degree-{g!r} fiber")

    def project(self, x, g):
        """Zero out entries outside the degree-``g`` mask."""
        m = self.mask(g)
        return x.copy() if m is None else np.where(m, x, 0)

    def random_block(self, g, rng):
        x = rng.standard_normal((self.dim, self.dim)) + 1j * rng.standard_normal((self.dim, self.dim))
        return self.project(x / self.dim, g)


class ScalarFibers(FiberSystem):
    """One-dimensional fibers ``C delta_g`` of a (twisted) group algebra.

    With a cocycle ``omega`` the fiber product is ``x y omega(g, h)`` and the
    adjoint of ``x delta_g`` is ``conj(x omega(g^-1, g)) delta_{g^-1}``.
    """

    def __init__(self, group: GroupDescriptor, cocycle: "Cocycle | None" = None):
        self.group = group
        self.cocycle = cocycle

    def __repr__(self):
        return f"ScalarFibers({self.group.kind}, cocycle={self.cocycle and self.cocycle.name})"

    def __eq__(self, other):
        return (isinstance(other, ScalarFibers) and other.group == self.group
                and other.cocycle == self.cocycle)

    def __hash__(self):
        return hash((self.group, self.cocycle))

    def mul(self, x, g, y, h):
        if self.cocycle is None:
            return x * y
        return x * y * self.cocycle(g, h)

    def adjoint(self, x, g):
        c = x.conjugate()
        if self.cocycle is not None:
            c *= self.cocycle(self.group.inv(g), g).conjugate()
        return c

    def norm(self, x, g):
        return abs(x)

    def unit(self):
        return 1.0 + 0.0j

    def check(self, x, g):
        if not isinstance(x, numbers.Number) or isinstance(x, bool):
            raise StructuralError(f"scalar fiber expects a number at degree {g!r}, got {type(x).__name__}")

    def random_block(self, g, rng):
        return complex(rng.standard_normal(), rng.standard_normal())

    def block_to_json(self, x):
        return [float(np.real(x)), float(np.imag(x))]

    def block_from_json(self, obj, g):
        return complex(obj[0], obj[1])


# graded elements


class GradedElement:
    """Immutable finitely supported graded element."""

    __slots__ = ("fibers", "_blocks", "_support")

    def __init__(self, fibers: FiberSystem, blocks: Mapping | None = None, check: bool = True):
        group = fibers.group
        clean = {}
        for g, x in (blocks or {}).items():
            g = group.normalize(g)
            if check:
                fibers.check(x, g)
            if not fibers.is_zero(x, g):
                clean[g] = fibers.add(clean[g], x) if g in clean else x
        self.fibers = fibers
        self._blocks = MappingProxyType(clean)
        self._support = tuple(sorted(clean, key=group.sort_key))

    # constructors

    @classmethod
    def zero(cls, fibers: FiberSystem) -> "GradedElement":
        return cls(fibers, {})

    @classmethod
    def unit(cls, fibers: FiberSystem) -> "GradedElement":
        return cls(fibers, {fibers.group.identity(): fibers.unit()})

    @classmethod
    def delta(cls, fibers: FiberSystem, g, block=None) -> "GradedElement":
        """Single block at degree ``g`` (the unit block if omitted, only sensible at e)."""
        return cls(fibers, {g: fibers.unit() if block is None else block})

    @classmethod
    def random(cls, fibers: FiberSystem, rng: np.random.Generator, degrees: Iterable,
               n_terms: int | None = None) -> "GradedElement":
        degrees = list(degrees)
        if n_terms is not None and n_terms < len(degrees):
            idx = rng.choice(len(degrees), size=n_terms, replace=False)
            degrees = [degrees[i] for i in sorted(idx)]
        return cls(fibers, {g: fibers.random_block(g, rng) for g in degrees})

    # mapping protocol

    @property
    def group(self) -> GroupDescriptor:
        return self.fibers.group

    @property
    def blocks(self) -> Mapping:
        return self._blocks

    @property
    def support(self) -> tuple:
        """Degrees with nonzero blocks, in canonical (sorted) order."""
        return self._support

    def __getitem__(self, g):
        return self._blocks[self.group.normalize(g)]

    def get(self, g, default=None):
        return self._blocks.get(self.group.normalize(g), default)

    def __contains__(self, g):
        return self.group.normalize(g) in self._blocks

    def __len__(self):
        return len(self._blocks)

    def __iter__(self):
        return iter(self._support)

    def items(self):
        return ((g, self._blocks[g]) for g in self._support)

    def component(self, g) -> "GradedElement":
        """``P_g(Phi)`` as a graded element."""
        g = self.group.normalize(g)
        return GradedElement(self.fibers, {g: self._blocks[g]} if g in self._blocks else {}, check=False)

    def __repr__(self):
        return f"GradedElement(support={list(self._support)!r}, fibers={self.fibers!r})"

    # arithmetic

    def _same(self, other: "GradedElement"):
        if not isinstance(other, GradedElement):
            return NotImplemented
        if other.fibers is not self.fibers and other.fibers != self.fibers:
            raise StructuralError("operands live in different fiber systems")
        return True

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        f = self.fibers
        out = dict(self._blocks)
        for g, y in other.items():
            out[g] = f.add(out[g], y) if g in out else y
        return GradedElement(f, out, check=False)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return self + other.scale(-1.0)

    def scale(self, c) -> "GradedElement":
        f = self.fibers
        return GradedElement(f, {g: f.scale(c, x) for g, x in self.items()}, check=False)

    def __mul__(self, other):
        if isinstance(other, GradedElement):
            return graded_mul(self, other)
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        return NotImplemented

    def adjoint(self) -> "GradedElement":
        return graded_adjoint(self)

    @property
    def star(self) -> "GradedElement":
        return graded_adjoint(self)

    def l1_norm(self, weight: Weight | None = None) -> float:
        return l1_norm(self, weight)

    def distance(self, other: "GradedElement") -> float:
        """l1-distance ``||self - other||_1``."""
        return l1_norm(self - other)

    def allclose(self, other: "GradedElement", tol: float = 1e-12) -> bool:
        """Componentwise closeness relative to the larger l1-norm."""
        scale = max(1.0, l1_norm(self), l1_norm(other))
        return self.distance(other) <= tol * scale

    def max_length(self) -> int:
        return max((self.group.length(g) for g in self._support), default=0)

    # serialization

    def to_json(self) -> dict:
        return {
            "group": self.group.kind,
            "support": [_jsonable(g) for g in self._support],
            "blocks": [self.fibers.block_to_json(self._blocks[g]) for g in self._support],
        }

    @classmethod
    def from_json(cls, fibers: FiberSystem, doc: Mapping) -> "GradedElement":
        if len(doc["support"]) != len(doc["blocks"]):
            raise StructuralError("support and block lists differ in length")
        blocks = {}
        for g, b in zip(doc["support"], doc["blocks"]):
            g = fibers.group.normalize(g)
            blocks[g] = fibers.block_from_json(b, g)
        return cls(fibers, blocks)


def _jsonable(g):
    return list(g) if isinstance(g, tuple) else g


def graded_mul(phi: GradedElement, psi: GradedElement) -> GradedElement:
    """``P_g(Phi Psi) = sum_{hk=g} P_h(Phi) P_k(Psi)``, summed in lexicographic order of ``(h, k)``."""
    phi._same(psi)
    f = phi.fibers
    group = f.group
    out: dict = {}
    for h, x in phi.items():
        for k, y in psi.items():
            g = group.mul(h, k)
            z = f.mul(x, h, y, k)
            out[g] = f.add(out[g], z) if g in out else z
    return GradedElement(f, out, check=False)


def graded_adjoint(phi: GradedElement) -> GradedElement:
    """``P_g(Phi^*) = P_{g^-1}(Phi)^*``."""
    f = phi.fibers
    inv = f.group.inv
    return GradedElement(f, {inv(g): f.adjoint(x, g) for g, x in phi.items()}, check=False)


def l1_norm(phi: GradedElement, weight: Weight | None = None) -> float:
    """``sum_g nu(g) ||Phi_g||`` (``nu = 1`` when no weight is given)."""
    f = phi.fibers
    if weight is None:
        return float(sum(f.norm(x, g) for g, x in phi.items()))
    return float(sum(weight(g) * f.norm(x, g) for g, x in phi.items()))


# cocycles


@dataclass(frozen=True)
class Cocycle:
    """Normalized 2-cocycle ``omega: G x G -> T``."""

    group: GroupDescriptor
    name: str
    fn: Callable = field(compare=False)
    params: tuple = ()

    def __call__(self, g, h) -> complex:
        return complex(self.fn(g, h))

    @classmethod
    def trivial(cls, group: GroupDescriptor) -> "Cocycle":
        return cls(group, "trivial", lambda g, h: 1.0)

    @classmethod
    def bicharacter(cls, group: GroupDescriptor, theta) -> "Cocycle":
        """``omega(x, y) = exp(i pi x^T Theta y)`` on a lattice."""
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        k = theta.shape[0]

        def vec(g):
            return np.atleast_1d(np.asarray(g, dtype=float))

        if theta.shape != (k, k):
            raise ValidationError("theta must be square")
        return cls(group, "bicharacter", lambda g, h: cmath.exp(1j * np.pi * vec(g) @ theta @ vec(h)),
                   tuple(map(tuple, theta.tolist())))

    @classmethod
    def table(cls, group: GroupDescriptor, values: Mapping) -> "Cocycle":
        values = dict(values)
        return cls(group, "table", lambda g, h: values.get((g, h), 1.0),
                   tuple(sorted(values.items(), key=repr)))

    def violations(self, sample: Iterable, tol: float = 1e-12) -> list[tuple]:
        """Triples (or pairs with e) where the cocycle or normalization identity fails."""
        G = self.group
        e = G.identity()
        sample = list(dict.fromkeys(sample))
        bad = []
        for g in sample:
            if abs(self(g, e) - 1) > tol or abs(self(e, g) - 1) > tol:
                bad.append((g, e))
            if abs(abs(self(g, g)) - 1) > tol:
                bad.append((g, g))
        for g, h, k in itertools.product(sample, repeat=3):
            lhs = self(g, h) * self(G.mul(g, h), k)
            rhs = self(h, k) * self(g, G.mul(h, k))
            if abs(lhs - rhs) > tol:
                bad.append((g, h, k))
        return bad

    def validate(self, sample: Iterable, tol: float = 1e-12) -> None:
        bad = self.violations(sample, tol)
        if bad:
            raise ValidationError(f"cocycle identity fails at {bad[0]!r} ({len(bad)} violations)")


def twisted_mul(phi: GradedElement, psi: GradedElement, omega: Cocycle,
                sample_size: int = 12) -> GradedElement:
    """``(Phi Psi)_g = sum_{hk=g} omega(h, k) Phi_h Psi_k``.

    The cocycle is validated on triples drawn from the supports before use.
    """
    phi._same(psi)
    f = phi.fibers
    group = f.group
    sample = (list(phi.support[:sample_size]) + list(psi.support[:sample_size])
              + [group.identity()])
    omega.validate(sample)
    out: dict = {}
    for h, x in phi.items():
        for k, y in psi.items():
            g = group.mul(h, k)
            z = f.scale(omega(h, k), f.mul(x, h, y, k))
            out[g] = f.add(out[g], z) if g in out else z
    return GradedElement(f, out, check=False)


# the embedding T into l1(G; B)


def embed_T(phi: GradedElement, rep, rtol: float = 1e-10) -> dict:
    """``[T(Phi)](g) = pi_g(Phi_g)`` as a map from degrees to operator matrices.

    Each block's operator norm is compared with the fiber norm; a mismatch
    means the representation is not isometric on that fiber and raises
    :class:`RepresentationError`.
    """
    out = {}
    for g, x in phi.items():
        m = rep.pi(g, x)
        op = float(np.linalg.norm(m, 2)) if m.size else 0.0
        fn = phi.fibers.norm(x, g)
        if abs(op - fn) > rtol * max(1.0, fn):
            raise RepresentationError(
                f"pi_g not isometric at degree {g!r}: operator norm {op!r} vs fiber norm {fn!r}")
        out[g] = m
    return out


def b_norm(T: Mapping) -> float:
    """Norm of ``l1(G; B)``: sum of operator norms."""
    return float(sum(np.linalg.norm(m, 2) for m in T.values()))


def b_convolve(S: Mapping, T: Mapping, group: GroupDescriptor) -> dict:
    """Convolution in ``l1(G; B)``: ``(S*T)(g) = sum_{hk=g} S(h) T(k)``."""
    out: dict = {}
    for h in sorted(S, key=group.sort_key):
        for k in sorted(T, key=group.sort_key):
            g = group.mul(h, k)
            z = S[h] @ T[k]
            out[g] = out[g] + z if g in out else z
    return out


def b_star(T: Mapping, group: GroupDescriptor) -> dict:
    """Involution in ``l1(G; B)``: ``T^*(g) = T(g^-1)^*``."""
    return {group.inv(g): m.conj().T for g, m in T.items()}


# kernels


class Kernel:
    """Finitely supported two-index kernel ``(g, h) -> K(g, h)`` in fiber ``gh^-1``.

    ``window`` is the ordered list of group elements indexing rows and columns.
    """

    __slots__ = ("fibers", "window", "_entries", "_envelope")

    def __init__(self, fibers: FiberSystem, window: Iterable, entries: Mapping, check: bool = True):
        group = fibers.group
        self.fibers = fibers
        self.window = tuple(group.normalize(g) for g in window)
        if len(set(self.window)) != len(self.window):
            raise StructuralError("kernel window has repeated elements")
        inside = set(self.window)
        clean = {}
        for (g, h), x in entries.items():
            g, h = group.normalize(g), group.normalize(h)
            if g not in inside or h not in inside:
                raise StructuralError(f"kernel entry {(g, h)!r} outside the window")
            d = group.div(g, h)
            if check:
                fibers.check(x, d)
            if not fibers.is_zero(x, d):
                clean[(g, h)] = x
        self._entries = MappingProxyType(clean)
        self._envelope = None

    @property
    def group(self):
        return self.fibers.group

    @property
    def entries(self) -> Mapping:
        return self._entries

    def __getitem__(self, gh):
        return self._entries[gh]

    def get(self, g, h):
        return self._entries.get((g, h))

    def envelope(self) -> tuple[dict, float]:
        if self._envelope is None:
            self._envelope = _envelope(self)
        return dict(self._envelope[0]), self._envelope[1]

    def restrict(self, window: Iterable) -> "Kernel":
        w = tuple(window)
        keep = set(w)
        return Kernel(self.fibers, w, {k: v for k, v in self._entries.items()
                                       if k[0] in keep and k[1] in keep}, check=False)

    def allclose(self, other: "Kernel", tol: float = 1e-12) -> bool:
        if set(self.window) != set(other.window):
            return False
        f, G = self.fibers, self.group
        scale = max(1.0, self.envelope()[1], other.envelope()[1])
        for key in set(self._entries) | set(other._entries):
            d = G.div(*key)
            x = self._entries.get(key)
            y = other._entries.get(key)
            if x is None:
                err = f.norm(y, d)
            elif y is None:
                err = f.norm(x, d)
            else:
                err = f.distance(x, y, d)
            if err > tol * scale:
                return False
        return True

    def to_json(self) -> dict:
        keys = sorted(self._entries, key=lambda k: (self.group.sort_key(k[0]), self.group.sort_key(k[1])))
        return {
            "window": [_jsonable(g) for g in self.window],
            "entries": [[_jsonable(g), _jsonable(h), self.fibers.block_to_json(self._entries[(g, h)])]
                        for g, h in keys],
        }


def _envelope(K: Kernel):
    f, G = K.fibers, K.group
    kappa: dict = {}
    for (g, h), x in K.entries.items():
        d = G.div(g, h)
        v = f.norm(x, d)
        if v > kappa.get(d, 0.0):
            kappa[d] = v
    total = float(sum(kappa[d] for d in sorted(kappa, key=G.sort_key)))
    return kappa, total


def kernel_envelope(K: Kernel) -> tuple[dict, float]:
    """Minimal dominating function ``kappa*(x) = sup_{gh^-1=x} ||K(g,h)||`` and its sum."""
    return K.envelope()


def kernel_norm(K: Kernel) -> float:
    return K.envelope()[1]


def _check_windows(K: Kernel, L: Kernel):
    if K.fibers is not L.fibers and K.fibers != L.fibers:
        raise StructuralError("kernels live in different fiber systems")
    if K.window != L.window:
        raise StructuralError("kernel windows differ")


def kernel_mul(K: Kernel, L: Kernel) -> Kernel:
    """``(K . L)(g, h) = sum_k K(g, k) L(k, h)`` over the shared window."""
    _check_windows(K, L)
    f, G = K.fibers, K.group
    by_row: dict = {}
    for (k, h), y in L.entries.items():
        by_row.setdefault(k, []).append((h, y))
    order = {g: i for i, g in enumerate(K.window)}
    out: dict = {}
    for (g, k) in sorted(K.entries, key=lambda p: (order[p[0]], order[p[1]])):
        x = K.entries[(g, k)]
        dx = G.div(g, k)
        for h, y in by_row.get(k, ()):
            z = f.mul(x, dx, y, G.div(k, h))
            out[(g, h)] = f.add(out[(g, h)], z) if (g, h) in out else z
    return Kernel(f, K.window, out, check=False)


def kernel_adjoint(K: Kernel) -> Kernel:
    """``K^(g, h) = K(h, g)^*``."""
    f, G = K.fibers, K.group
    return Kernel(f, K.window, {(h, g): f.adjoint(x, G.div(g, h)) for (g, h), x in K.entries.items()},
                  check=False)


def identity_kernel(fibers: FiberSystem, window: Iterable) -> Kernel:
    return Kernel(fibers, window, {(g, g): fibers.unit() for g in window}, check=False)


def upsilon(phi: GradedElement, window: Iterable) -> Kernel:
    """Covariant kernel ``K(g, h) = Phi_{gh^-1}`` on the window."""
    f, G = phi.fibers, phi.group
    window = [G.normalize(g) for g in window]
    entries = {}
    for g in window:
        for h in window:
            x = phi.get(G.div(g, h))
            if x is not None:
                entries[(g, h)] = x
    return Kernel(f, window, entries, check=False)


def _classes(K: Kernel) -> dict:
    G = K.group
    classes: dict = {}
    for g in K.window:
        for h in K.window:
            classes.setdefault(G.div(g, h), []).append((g, h))
    return classes


def is_covariant(K: Kernel, tol: float = 1e-12) -> bool:
    """True when ``K(g, h)`` depends only on ``gh^-1`` across the window."""
    f = K.fibers
    for d, pairs in _classes(K).items():
        blocks = [K.entries.get(p) for p in pairs]
        ref = next((b for b in blocks if b is not None), None)
        if ref is None:
            continue
        scale = max(1.0, f.norm(ref, d))
        for b in blocks:
            err = f.norm(ref, d) if b is None else f.distance(b, ref, d)
            if err > tol * scale:
                return False
    return True


def upsilon_inv(K: Kernel) -> GradedElement:
    """``Phi_g = K(g, e)`` (any representative of the class ``gh^-1 = g`` off-window)."""
    if not is_covariant(K):
        raise DomainError("upsilon_inv needs a covariant kernel")
    G = K.group
    e = G.identity()
    inside = set(K.window)
    blocks = {}
    for d, pairs in _classes(K).items():
        key = (d, e) if d in inside and e in inside else pairs[0]
        x = K.entries.get(key)
        if x is not None:
            blocks[d] = x
    return GradedElement(K.fibers, blocks, check=False)


def inner_window(window: Iterable, support: Iterable, group: GroupDescriptor) -> list:
    """Elements ``g`` of the window with ``x^-1 g`` in the window for every ``x`` in ``support``."""
    window = list(window)
    inside = set(window)
    support = list(support)
    return [g for g in window if all(group.mul(group.inv(x), g) in inside for x in support)]
