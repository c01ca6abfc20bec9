"""Finite-window numerics: symmetry sampling, inversion with decay profiles,
spectral-radius sequences, Fredholm probes and ideal quotients.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConfigurationError, DomainError, InversionError, RepresentationError, ResourceError,
                     UnsupportedError)
from .graded import GradedElement, MatrixFibers
from .group import GeneratingSet, Weight, resource_cap, word_length

MAX_DENSE = 4096
COND_LIMIT = 1e13


# decay profiles


@dataclass(frozen=True)
class DecayProfile:
    """Shell sums ``b_n = sum_{|g| = n} ||Phi_g||`` and shell maxima."""

    shell_sums: np.ndarray
    shell_sups: np.ndarray
    weight_values: np.ndarray
    window: int | None = None
    norm: str = "fiber"

    def __len__(self):
        return len(self.shell_sums)

    @property
    def total(self) -> float:
        return float(self.shell_sums.sum())

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.shell_sums)

    def rows(self) -> list[dict]:
        return [{"shell_index": n, "shell_sum": float(s), "shell_sup": float(m), "weight_value": float(w)}
                for n, (s, m, w) in enumerate(zip(self.shell_sums, self.shell_sups, self.weight_values))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, ["shell_index", "shell_sum", "shell_sup", "weight_value"],
                                lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        return buf.getvalue()


def _lengths(phi: GradedElement, V: GeneratingSet | None) -> dict:
    G = phi.group
    if V is None:
        return {g: G.length(g) for g in phi.support}
    out = {}
    for g in phi.support:
        n = word_length(G, V, g, radius_cap=max(64, 2 * G.length(g) + 2))
        if n is None:
            raise ResourceError(f"word length of {g!r} beyond the radius cap")
        out[g] = n
    return out


def decay_profile(phi: GradedElement, V: GeneratingSet | None = None, weight: Weight | None = None,
                  window: int | None = None, n_shells: int | None = None) -> DecayProfile:
    """Split ``||phi||_1`` over word-length shells."""
    lengths = _lengths(phi, V)
    n = max(lengths.values(), default=0) + 1
    if n_shells is not None:
        n = max(n, n_shells)
    sums = np.zeros(n)
    sups = np.zeros(n)
    wvals = np.ones(n)
    seen_w = np.zeros(n, dtype=bool)
    for g, x in phi.items():
        m = lengths[g]
        v = phi.fibers.norm(x, g)
        sums[m] += v
        sups[m] = max(sups[m], v)
        if weight is not None:
            w = weight(g)
            wvals[m] = w if not seen_w[m] else max(wvals[m], w)
            seen_w[m] = True
    return DecayProfile(sums, sups, wvals, window, "fiber")


# symmetry


def check_symmetric_sample(phi: GradedElement, rep, tol: float = 1e-10) -> float:
    """Smallest eigenvalue of the window operator of ``phi^* phi``.

    Compressions of positive operators are positive, so a value below
    ``-tolerance`` signals a broken product, adjoint or representation.
    """
    A = rep.matrix(phi.adjoint() * phi)
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    asym = float(np.abs(A - A.conj().T).max(initial=0.0))
    if asym > tol * scale:
        raise RepresentationError(f"window matrix of phi* phi is not Hermitian (defect {asym:.3e})")
    return float(np.linalg.eigvalsh((A + A.conj().T) / 2)[0])


# inversion


@dataclass(frozen=True)
class InversionResult:
    psi: GradedElement
    profile: DecayProfile
    residual: float
    recomposition_error: float
    condition: float
    window: int | None


def _op_bound(A: np.ndarray) -> float:
    """``sqrt(||A||_1 ||A||_inf)``, an upper bound for the operator norm."""
    if A.size == 0:
        return 0.0
    return float(np.sqrt(np.abs(A).sum(axis=0).max() * np.abs(A).sum(axis=1).max()))


def invert_graded(phi: GradedElement, rep, window: int | None = None, extractor=None,
                  degrees=None, margin: int | None = None, V: GeneratingSet | None = None) -> InversionResult:
    """Invert ``phi`` on a window and regrade the inverse.

    ``extractor(B, g)`` reads the degree-``g`` component of a window matrix
    (default: the model's diagonal-index map).  The residual is
    ``||Pi(phi) Pi(psi) - I||`` restricted to interior rows, bounded by
    ``sqrt(||.||_1 ||.||_inf)``.  The condition number is taken in the
    1-norm.  The recomposition error compares ``Pi(psi)`` with the matrix
    inverse entrywise on the interior block.
    """
    if window is not None:
        rep = rep.with_window(window)
    if rep.dim > MAX_DENSE:
        raise ResourceError(f"window dimension {rep.dim} exceeds the dense cap {MAX_DENSE}")
    A = rep.matrix(phi)
    try:
        B = np.linalg.inv(A)
    except np.linalg.LinAlgError as exc:
        raise InversionError("window matrix is singular", condition=float("inf")) from exc
    cond = float(np.linalg.norm(A, 1) * np.linalg.norm(B, 1))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise InversionError(f"window matrix is numerically singular (condition {cond:.3e})", condition=cond)
    extractor = extractor or rep.extract
    degrees = rep.window_degrees() if degrees is None else degrees
    fibers = rep.fibers
    blocks = {}
    for g in degrees:
        x = extractor(B, g)
        if not fibers.is_zero(x, g):
            blocks[g] = x
    psi = GradedElement(fibers, blocks, check=False)
    m = phi.max_length() if margin is None else margin
    rows = rep.interior(m)
    R = rep.matrix(psi)
    n = A.shape[0]
    residual = _op_bound((A @ R - np.eye(n))[rows]) if len(rows) else 0.0
    inner = rep.interior(max(m, psi.max_length() // 4 if not rep.exact else 0))
    recomposition = float(np.abs((R - B)[np.ix_(inner, inner)]).max(initial=0.0))
    profile = decay_profile(psi, V, window=getattr(rep, "window", None))
    return InversionResult(psi, profile, residual, recomposition, cond, getattr(rep, "window", None))


def neumann_inverse(phi: GradedElement, lam: complex, tol: float = 1e-17, max_terms: int = 2000) -> GradedElement:
    """``phi^-1 = sum_k R^k / lam^(k+1)`` with ``R = lam 1 - phi``; needs ``||R||_1 < |lam|``.

    Computed entirely in the graded algebra, independently of any window.
    """
    unit = GradedElement.unit(phi.fibers)
    R = unit.scale(lam) - phi
    if R.l1_norm() >= abs(lam):
        raise DomainError("Neumann series needs ||lam 1 - phi||_1 < |lam|")
    term = unit.scale(1 / lam)
    total = term
    for _ in range(max_terms):
        term = (term * R).scale(1 / lam)
        total = total + term
        if term.l1_norm() <= tol * total.l1_norm():
            break
    return total


@dataclass(frozen=True)
class StabilityReport:
    windows: tuple
    max_shell: int
    max_difference: float
    results: tuple = field(repr=False)


def window_stability(phi: GradedElement, rep, windows, max_shell: int | None = None,
                     **kw) -> StabilityReport:
    """Compare shell partial sums of the windowed inverse across window sizes.

    Windows are inverted concurrently; results are merged in window order.
    """
    windows = sorted(int(w) for w in windows)
    if len(windows) < 2 or len(set(windows)) != len(windows):
        raise ConfigurationError("need at least two distinct window sizes")
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda w: invert_graded(phi, rep, window=w, **kw), windows))
    shells = windows[0] // 4 if max_shell is None else max_shell
    diff = 0.0
    base = results[0].profile.partial_sums()
    for r in results[1:]:
        other = r.profile.partial_sums()
        k = min(shells + 1, len(base), len(other))
        diff = max(diff, float(np.abs(base[:k] - other[:k]).max(initial=0.0)))
    return StabilityReport(tuple(windows), shells, diff, tuple(results))


# spectral radius


@dataclass(frozen=True)
class RadiusProfile:
    values: np.ndarray
    norm: str
    complete: bool = True

    def last(self) -> float:
        return float(self.values[-1])


def spectral_radius_profile(phi: GradedElement, norm: str = "l1", n_max: int = 50,
                            weight: Weight | None = None, rep=None,
                            cap: int | None = None) -> RadiusProfile:
    """``||phi^n||^{1/n}`` for ``n = 1..n_max`` in the chosen norm.

    ``norm`` is ``"l1"``, ``"l1nu"`` (needs ``weight``) or ``"operator"``
    (needs ``rep``; the window operator of ``phi^n``).  When the support of
    the powers outgrows ``cap`` a :class:`ResourceError` carries the partial
    sequence.
    """
    if norm not in ("l1", "l1nu", "operator"):
        raise ConfigurationError(f"unknown norm {norm!r}")
    if norm == "l1nu" and weight is None:
        raise ConfigurationError("the weighted norm needs a weight")
    if norm == "operator" and rep is None:
        raise ConfigurationError("the operator norm needs a representation")
    cap = resource_cap() if cap is None else cap
    vals = []
    power = phi
    for n in range(1, n_max + 1):
        if n > 1:
            if len(power) * max(len(phi), 1) > cap:
                raise ResourceError(f"support of phi^{n} exceeds the cap", partial=np.array(vals))
            power = power * phi
        if norm == "l1":
            v = power.l1_norm()
        elif norm == "l1nu":
            v = power.l1_norm(weight)
        else:
            v = float(np.linalg.norm(rep.matrix(power), 2))
        vals.append(v ** (1.0 / n))
    return RadiusProfile(np.array(vals), norm)


# Fredholm probes


@dataclass(frozen=True)
class WindowProbe:
    window: int
    sigma_min: float
    near_kernel: int
    near_cokernel: int
    spectrum: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class FredholmReport:
    probes: tuple
    tol: float

    @property
    def sigma_min(self) -> np.ndarray:
        return np.array([p.sigma_min for p in self.probes])

    def bounded_below(self, floor: float) -> bool:
        return bool(np.all(self.sigma_min >= floor))


def _probe(A: np.ndarray, w: int, tol: float) -> WindowProbe:
    s = np.linalg.svd(A, compute_uv=False)
    smin = float(s[-1]) if s.size else 0.0
    ker = int(np.sum(s < tol))
    coker = int(np.sum(np.linalg.svd(A.conj().T, compute_uv=False) < tol))
    return WindowProbe(w, smin, ker, coker, np.linalg.eigvals(A))


def fredholm_probe(family, windows, tol: float = 1e-8) -> FredholmReport:
    """Heuristic report over window sizes: smallest singular values, near-kernel
    dimensions and compression spectra.  ``family(w)`` returns the window matrix.
    """
    windows = [int(w) for w in windows]
    if len(windows) < 3:
        raise ConfigurationError("a Fredholm probe needs at least three windows")
    if any(b <= a for a, b in zip(windows, windows[1:])):
        raise ConfigurationError("window sizes must be strictly increasing")

    def run(w):
        A = np.asarray(family(w))
        if A.shape[0] > MAX_DENSE:
            raise ResourceError(f"window {w} exceeds the dense cap")
        return _probe(A, w, tol)

    with ThreadPoolExecutor() as pool:
        probes = list(pool.map(run, windows))
    return FredholmReport(tuple(probes), tol)


def boundary_rank(W: np.ndarray, tol: float = 1e-10) -> int:
    """Rank of ``I - W W^*`` (the defect of a window isometry)."""
    D = np.eye(W.shape[0]) - W @ W.conj().T
    return int(np.linalg.matrix_rank(D, tol=tol))


# ideal quotients


def _compress_block(fibers, x, g, ideal):
    from .models.weights import OrthantSum, PeriodicSequence, ShiftFibers

    if isinstance(fibers, ShiftFibers):
        W = int(ideal)
        if fibers.weight_type is PeriodicSequence or (fibers.weight_type is OrthantSum and x.k == 1):
            # keep r >= W with r + g >= W
            return fibers.canonical(x.mask_below(max(W, W - int(np.atleast_1d(g)[0]))), g)
        raise UnsupportedError("box complements are not orthants for k > 1")
    if isinstance(fibers, MatrixFibers):
        keep = np.ones(fibers.dim, dtype=bool)
        keep[np.asarray(list(ideal), dtype=int)] = False
        return np.where(keep[:, None] & keep[None, :], x, 0)
    raise UnsupportedError(f"no ideal compression for {fibers!r}")


def quotient_components(phi: GradedElement, ideal_window) -> GradedElement:
    """Compress every component to the complement of the ideal window.

    ``ideal_window`` is a cutoff ``W`` (basis vectors ``0..W-1``) for shift
    models and an index set for matrix models.  Compression preserves
    degrees, which is the finite stand-in for the quotient map.
    """
    f = phi.fibers
    out = {}
    for g, x in phi.items():
        y = _compress_block(f, x, g, ideal_window)
        if not f.is_zero(y, g):
            out[g] = y
    return GradedElement(f, out, check=False)


def compress_matrix(A: np.ndarray, ideal_window) -> np.ndarray:
    """``(1 - P) A (1 - P)`` for the coordinate projection ``P`` onto the ideal window."""
    n = A.shape[0]
    if isinstance(ideal_window, (int, np.integer)):
        idx = np.arange(min(int(ideal_window), n))
    else:
        idx = np.asarray(list(ideal_window), dtype=int)
    keep = np.ones(n, dtype=bool)
    keep[idx] = False
    return np.where(keep[:, None] & keep[None, :], A, 0)
