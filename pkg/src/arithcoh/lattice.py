"""Positive-definite forms, lattice point enumeration, Gaussian theta sums.

The central operation is ``theta_sum``: for a positive-definite Gram matrix
G and a shift c it evaluates

    sum over v in Z^n of exp(-pi * (v+c)^T G (v+c))

by enumerating every lattice point below an explicit radius and bounding the
discarded tail rigorously, so the returned value always carries a certified
error.  All arithmetic is IEEE-754 binary64; the terms are added in ascending
order of the quadratic form with exact compensated summation (math.fsum), so
repeated calls are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EnumerationBudgetExceeded,
    NotPositiveDefinite,
    ToleranceUnreachable,
)

DEFAULT_BUDGET = 10**8

_SYM_RTOL = 1e-12
_LATTICE_RTOL = 1e-10
# relative slack on the enumeration boundary; the tail bound is evaluated at
# R*(1 - 2*slack) so points lost to roundoff at the boundary stay covered
_BOUNDARY_SLACK = 1e-9


def _as_matrix(gram) -> np.ndarray:
    if isinstance(gram, GramMatrix):
        return gram.entries
    return np.asarray(gram, dtype=float)


def cholesky(gram) -> np.ndarray:
    """Lower-triangular L with L L^T = gram.

    Raises NotPositiveDefinite as soon as a pivot fails to be > 0, which is
    how invalid metrics and rank-deficient ideal bases surface.
    """
    g = _as_matrix(gram)
    n = g.shape[0]
    L = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s = g[i, j] - float(np.dot(L[i, :j], L[j, :j]))
            if i == j:
                if s <= 0.0:
                    raise NotPositiveDefinite(f"Cholesky pivot {i} is {s:.6e} <= 0")
                L[i, i] = math.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    return L


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric positive-definite matrix of inner products."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise NotPositiveDefinite("Gram matrix must be square with n >= 1")
        scale = float(np.max(np.abs(m)))
        if scale == 0.0 or float(np.max(np.abs(m - m.T))) > _SYM_RTOL * scale:
            raise NotPositiveDefinite("matrix is not symmetric to 1e-12 relative")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        cholesky(m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EmbeddedLattice:
    """A full-rank lattice given by basis row vectors in a metrized R^n.

    The coordinates already absorb the metric, so the plain dot product of
    two basis rows is their inner product and gram = basis @ basis.T.
    """

    basis: np.ndarray
    gram: GramMatrix
    covolume: float

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        g = self.gram.entries
        if b.shape != g.shape:
            raise NotPositiveDefinite("basis and Gram matrix shapes disagree")
        scale = float(np.max(np.abs(g)))
        if float(np.max(np.abs(b @ b.T - g))) > _LATTICE_RTOL * scale:
            raise NotPositiveDefinite("Gram matrix does not match basis inner products")
        vol = math.sqrt(float(np.linalg.det(g)))
        if abs(vol - self.covolume) > _LATTICE_RTOL * vol:
            raise NotPositiveDefinite("covolume does not equal sqrt(det(gram))")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.gram.n

    @classmethod
    def from_basis(cls, basis) -> "EmbeddedLattice":
        b = np.asarray(basis, dtype=float)
        g = b @ b.T
        g = 0.5 * (g + g.T)
        gram = GramMatrix(g)
        return cls(basis=b, gram=gram, covolume=math.sqrt(float(np.linalg.det(gram.entries))))


@dataclass(frozen=True)
class ThetaResult:
    """Value of a theta sum together with its certified tail bound."""

    value: float
    tail_bound: float
    points_enumerated: int
    radius: float


def _enumerate_with_norms(g: np.ndarray, center: np.ndarray, radius: float,
                          budget: int) -> tuple[np.ndarray, np.ndarray]:
    """All v in Z^n with Q(v + center) <= radius, with the Q values.

    Vectorized Fincke-Pohst: levels are processed from the last coordinate
    down, keeping arrays of partial assignments.  Points whose Q lands within
    roundoff of the boundary may be included; the caller's tail bound is
    evaluated at a slightly smaller radius so exclusions stay covered.
    """
    n = g.shape[0]
    U = cholesky(g).T  # Q(x) = ||U x||^2 with U upper triangular
    slack = _BOUNDARY_SLACK * max(radius, 1.0)
    V = np.zeros((1, 0), dtype=np.int64)
    T = np.zeros(1)
    for i in range(n - 1, -1, -1):
        ytail = V + center[i + 1:]
        s = ytail @ U[i, i + 1:]
        rem = radius + slack - T
        rad = np.sqrt(np.maximum(rem, 0.0))
        uii = U[i, i]
        lo = np.ceil((-rad - s) / uii - center[i] - _BOUNDARY_SLACK).astype(np.int64)
        hi = np.floor((rad - s) / uii - center[i] + _BOUNDARY_SLACK).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total > budget:
            raise EnumerationBudgetExceeded(
                f"enumeration needs more than {budget} points; the metric is too flat")
        idx = np.repeat(np.arange(counts.size), counts)
        starts = np.cumsum(counts) - counts
        vi = lo[idx] + (np.arange(total) - np.repeat(starts, counts))
        yi = vi + center[i]
        Tn = T[idx] + (uii * yi + s[idx]) ** 2
        keep = Tn <= radius + slack
        V = np.column_stack([vi[keep], V[idx[keep]]]) if V.shape[1] else vi[keep].reshape(-1, 1)
        T = Tn[keep]
    return V, T


def enumerate_below(gram, center, radius: float,
                    budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Integer vectors v with (v+center)^T gram (v+center) <= radius.

    Returns each vector exactly once, lexicographically sorted.
    """
    g = _as_matrix(gram)
    n = g.shape[0]
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float).reshape(n)
    V, _ = _enumerate_with_norms(g, c, float(radius), budget)
    order = np.lexsort(tuple(V[:, k] for k in range(n - 1, -1, -1)))
    return V[order]


def _certified_lambda_min(g: np.ndarray) -> float:
    """Conservative lower bound on the smallest eigenvalue of g.

    Fixed 50-iteration power method on the inverse estimates ||g^-1||_2 from
    below, so its reciprocal overestimates lambda_min; the 0.99 factor makes
    the result safe for the tail formula.
    """
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    v = 1.0 + 1e-3 * np.arange(n)
    v /= math.sqrt(float(v @ v))
    rho = 0.0
    for _ in range(50):
        w = ginv @ v
        rho = max(rho, float(v @ w))
        nw = math.sqrt(float(w @ w))
        if nw == 0.0:
            break
        v = w / nw
    if rho <= 0.0:
        raise NotPositiveDefinite("power method failed on the inverse Gram matrix")
    return 0.99 / rho


def _gauss_line_sum(lam: float) -> float:
    """sum over k in Z of exp(-pi * lam * k^2 / 2), truncated below 1e-33."""
    a = 0.5 * math.pi * lam
    kmax = int(math.sqrt(76.0 / a)) + 1
    if kmax > 50_000_000:
        raise ToleranceUnreachable(
            "certified smallest eigenvalue is too small to bound the tail")
    k = np.arange(1, kmax + 1, dtype=float)
    return 1.0 + 2.0 * float(np.sum(np.exp(-a * k * k)))


def _log_tail(radius: float, log_per_dim: float, n: int) -> float:
    return -0.5 * math.pi * radius + n * log_per_dim


def _ellipsoid_volume(n: int, radius: float, covolume: float) -> float:
    return math.pi ** (n / 2.0) * radius ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) / covolume


def theta_sum(gram, center, tol: float,
              budget: int = DEFAULT_BUDGET) -> ThetaResult:
    """Gaussian theta sum over Z^n + center with tail certified below tol.

    The tail over Q > R is bounded by exp(-pi R/2) * (S + 2)^n, where S is
    the one-dimensional Gaussian sum at the certified smallest eigenvalue;
    R grows until this drops below tol.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    g = _as_matrix(gram)
    n = g.shape[0]
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float).reshape(n)
    c = c - np.round(c)  # theta is Z^n-periodic in the shift
    lam = _certified_lambda_min(g)
    log_per_dim = math.log(_gauss_line_sum(lam) + 2.0)
    radius = max(1.0, (2.0 / math.pi) * (n * log_per_dim - math.log(tol)) + 0.5)
    tail = math.inf
    for _ in range(200):
        safe_radius = radius * (1.0 - 2.0 * _BOUNDARY_SLACK) - 1e-12
        tail = math.exp(_log_tail(safe_radius, log_per_dim, n))
        if tail <= tol:
            break
        radius *= 1.25
    else:
        raise ToleranceUnreachable(f"tail bound stalled at {tail:.3e} > tol {tol:.3e}")
    covolume = math.sqrt(float(np.linalg.det(g)))
    if _ellipsoid_volume(n, radius, covolume) > 2.0 * budget:
        raise EnumerationBudgetExceeded(
            f"estimated point count exceeds the budget of {budget}")
    V, Q = _enumerate_with_norms(g, c, radius, budget)
    order = np.lexsort(tuple(V[:, k] for k in range(n - 1, -1, -1)) + (Q,))
    terms = np.exp(-math.pi * Q[order])
    value = math.fsum(terms.tolist())
    return ThetaResult(value=value, tail_bound=tail,
                       points_enumerated=int(V.shape[0]), radius=radius)


def dual_lattice(lat: EmbeddedLattice) -> EmbeddedLattice:
    """Dual basis under the ambient pairing: <b_i, b*_j> = delta_ij.

    The dual Gram matrix is the inverse of the original and the covolumes
    multiply to 1.
    """
    dual_basis = np.linalg.inv(lat.basis).T
    return EmbeddedLattice.from_basis(dual_basis)


def lll_reduce_rows(basis, delta: float = 0.75) -> np.ndarray:
    """LLL-reduce the row basis (integer row operations only, same lattice).

    Skew bases of dense ideal lattices make the Gram matrix ill-conditioned,
    which hurts both the certified tail radius and the enumeration; reducing
    first keeps them proportionate.  The iteration cap is a safety valve: an
    unreduced basis is still a correct basis.
    """
    b = np.array(basis, dtype=float)
    n = b.shape[0]
    if n < 2:
        return b

    def gso(mat):
        star = mat.astype(float).copy()
        mu = np.zeros((n, n))
        norms = np.zeros(n)
        for i in range(n):
            for j in range(i):
                mu[i, j] = float(mat[i] @ star[j]) / norms[j]
                star[i] = star[i] - mu[i, j] * star[j]
            norms[i] = float(star[i] @ star[i])
        return mu, norms

    k = 1
    for _ in range(10000):
        if k >= n:
            break
        mu, norms = gso(b)
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                b[k] = b[k] - q * b[j]
                mu, norms = gso(b)
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[[k - 1, k]] = b[[k, k - 1]]
            k = max(k - 1, 1)
    return b
