"""Image signatures: Jacobi SVD, singular-value, histogram and PCA indexes.

The SVD and the PCA eigenvalues share one compiled cyclic Jacobi kernel that
rotates pairs of matrix columns (stored as rows for contiguous access).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConvergenceError
from .image import GrayImage, to_matrix

SVD_TOL = 1e-12
EIG_TOL = 1e-12
MAX_SWEEPS = 60
DEFAULT_K = 64
HIST_BINS = 256


class IndexMode(enum.IntEnum):
    """Index kind; the value is the wire byte used in ciphertexts and records."""

    SVD = 1
    HIST = 2
    PCA = 3

    @classmethod
    def parse(cls, name) -> IndexMode:
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown index mode {name!r}") from None


@dataclass(frozen=True, eq=False)
class IndexVector:
    """A fixed-length real signature tagged with the mode that produced it.

    Construction only demands finite components; :meth:`check` tests the
    stronger per-mode invariants (ordering, normalization).
    """

    mode: IndexMode
    components: np.ndarray

    def __post_init__(self):
        comps = np.array(self.components, dtype=np.float64).reshape(-1)
        if comps.size < 1:
            raise ValueError("index vector must have at least one component")
        if not np.all(np.isfinite(comps)):
            raise ValueError("index vector components must be finite")
        comps.setflags(write=False)
        object.__setattr__(self, "mode", IndexMode.parse(self.mode))
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return self.components.size

    def check(self) -> None:
        """Raise ValueError if the per-mode invariants do not hold."""
        c = self.components
        if np.any(c < 0):
            raise ValueError(f"{self.mode.name} index has negative components")
        if self.mode is IndexMode.HIST:
            if self.dim != HIST_BINS:
                raise ValueError(f"HIST index must have {HIST_BINS} bins, got {self.dim}")
            if abs(c.sum() - 1.0) > 1e-12:
                raise ValueError(f"HIST index sums to {c.sum()!r}, expected 1")
        elif np.any(np.diff(c) > 0):
            raise ValueError(f"{self.mode.name} index is not non-increasing")

    def __eq__(self, other):
        if not isinstance(other, IndexVector):
            return NotImplemented
        # bitwise comparison so that -0.0 != 0.0 and NaN patterns would matter
        return self.mode == other.mode and self.components.tobytes() == other.components.tobytes()

    def __hash__(self):
        return hash((int(self.mode), self.components.tobytes()))

    def __repr__(self):
        head = ", ".join(f"{v:.6g}" for v in self.components[:4])
        tail = ", ..." if self.dim > 4 else ""
        return f"IndexVector({self.mode.name}, dim={self.dim}, [{head}{tail}])"


@dataclass(frozen=True)
class SvdFactors:
    """``A = U @ diag(S) @ V.T`` with U (m, r), S (r,), V (n, r), r = min(m, n)."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.S) @ self.V.T


@njit(cache=True)
def _jacobi_kernel(W, Vt, rel_tol, abs_tol, floor, max_sweeps):
    """Cyclic one-sided Jacobi, in place, over the rows of ``W``.

    Row pair (p, q) is rotated unless ``|<w_p, w_q>|`` is at most ``abs_tol`` or
    at most ``rel_tol * |w_p| * |w_q|``, or either squared row norm is at most
    ``floor`` (a numerically zero row). The same rotations are applied to the
    rows of ``Vt`` (pass an (n, 0) array to skip accumulation). Returns the
    number of sweeps used, or -1 if ``max_sweeps`` ran out.
    """
    n, m = W.shape
    nv = Vt.shape[1]
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for i in range(m):
                    x = W[p, i]
                    y = W[q, i]
                    alpha += x * x
                    beta += y * y
                    gamma += x * y
                if alpha <= floor or beta <= floor:
                    continue
                if abs(gamma) <= abs_tol or abs(gamma) <= rel_tol * math.sqrt(alpha) * math.sqrt(beta):
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0.0 else -1.0) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                if s == 0.0:
                    # rotation underflowed to the identity; nothing left to do
                    continue
                rotated = True
                for i in range(m):
                    x = W[p, i]
                    y = W[q, i]
                    W[p, i] = c * x - s * y
                    W[q, i] = s * x + c * y
                for i in range(nv):
                    x = Vt[p, i]
                    y = Vt[q, i]
                    Vt[p, i] = c * x - s * y
                    Vt[q, i] = s * x + c * y
        if not rotated:
            return sweep + 1
    return -1


def _complete_orthonormal(U, missing):
    """Replace columns ``missing`` of U with unit vectors orthogonal to the rest."""
    m = U.shape[0]
    keep = np.setdiff1d(np.arange(U.shape[1]), missing)
    basis = [U[:, j] for j in keep]
    fill = iter(missing)
    target = next(fill, None)
    for e in range(m):
        if target is None:
            break
        v = np.zeros(m)
        v[e] = 1.0
        for _ in range(2):
            for b in basis:
                v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm > 0.5:
            v /= norm
            U[:, target] = v
            basis.append(v)
            target = next(fill, None)
    return U


def max_relative_coupling(W) -> float:
    """Largest ``|<w_i, w_j>| / (|w_i| |w_j|)`` over distinct rows of ``W``."""
    G = W @ W.T
    d = np.sqrt(np.diag(G))
    scale = np.outer(d, d)
    np.fill_diagonal(G, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(G) / scale, 0.0)
    return float(rel.max()) if rel.size else 0.0


def svd(A) -> SvdFactors:
    """Thin SVD by one-sided (Hestenes) Jacobi on the columns of ``A``.

    Wide inputs are handled through their transpose. Singular values come back
    non-increasing; columns of U belonging to exactly-zero singular values are an
    arbitrary orthonormal completion.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains NaN or infinite entries")
    if A.shape[0] < A.shape[1]:
        f = svd(A.T)
        return SvdFactors(U=f.V, S=f.S, V=f.U)

    # exact power-of-two rescale keeps squared column norms clear of under/overflow
    peak = float(np.max(np.abs(A)))
    scale = math.ldexp(1.0, math.frexp(peak)[1]) if peak > 0 else 1.0
    W = np.array(A.T / scale, dtype=np.float64, order="C")  # row i is column i of A
    Vt = np.eye(A.shape[1])  # row i is column i of V
    # columns below eps * |A|_F are rounding noise: never rotated, reported as zero
    negligible = np.finfo(np.float64).eps * np.linalg.norm(W)
    if _jacobi_kernel(W, Vt, SVD_TOL, 0.0, negligible**2, MAX_SWEEPS) < 0:
        residual = max_relative_coupling(W)
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps "
            f"(max relative column coupling {residual:.3e})",
            residual,
        )
    sigma = np.sqrt(np.einsum("ij,ij->i", W, W))
    order = np.argsort(-sigma, kind="stable")
    sigma, W, Vt = sigma[order], W[order], Vt[order]
    zero = sigma <= max(negligible, np.finfo(np.float64).tiny)
    U = np.zeros_like(W.T)
    U[:, ~zero] = (W[~zero] / sigma[~zero, None]).T
    if zero.any():
        sigma[zero] = 0.0
        U = _complete_orthonormal(U, np.flatnonzero(zero))
    return SvdFactors(U=U, S=sigma * scale, V=np.ascontiguousarray(Vt.T))


def _top_k(values, k):
    out = np.zeros(k)
    vals = np.sort(values)[::-1][:k]
    out[: vals.size] = vals
    return out


def singular_value_index(A, k: int = DEFAULT_K) -> IndexVector:
    """First ``k`` singular values of ``A``, zero-padded."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return IndexVector(IndexMode.SVD, _top_k(svd(A).S, k))


def histogram_index(img: GrayImage) -> IndexVector:
    """Normalized 256-bin intensity histogram."""
    counts = np.bincount(img.pixels.reshape(-1), minlength=HIST_BINS)
    return IndexVector(IndexMode.HIST, counts / float(img.width * img.height))


def covariance(A) -> np.ndarray:
    """Sample covariance of the columns of ``A`` (rows are observations)."""
    A = np.asarray(A, dtype=np.float64)
    if A.shape[0] < 2:
        raise ValueError("sample covariance needs at least 2 rows")
    centered = A - A.mean(axis=0)
    return centered.T @ centered / (A.shape[0] - 1)


def covariance_eigenvalues(A) -> np.ndarray:
    """Eigenvalues of the column covariance ``C`` of ``A`` by cyclic Jacobi.

    ``C`` is kept in factored form, ``C = X.T @ X / (m - 1)`` with ``X`` the
    column-centred data, so each Jacobi rotation of ``C`` is a rotation of two
    columns of ``X`` and the pivots ``c_pp, c_qq, c_pq`` are column inner
    products. Off-diagonal entries at or below ``EIG_TOL * trace(C)`` count as
    zero. No eigenvectors are accumulated. Returned unsorted.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 2:
        raise ValueError("sample covariance needs a 2-D matrix with at least 2 rows")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains NaN or infinite entries")
    X = np.ascontiguousarray((A - A.mean(axis=0)).T)
    scale = A.shape[0] - 1
    thresh = EIG_TOL * np.einsum("ij,ij->", X, X)
    if _jacobi_kernel(X, np.empty((X.shape[0], 0)), 0.0, thresh, 0.0, MAX_SWEEPS) < 0:
        residual = max_relative_coupling(X)
        raise ConvergenceError(
            f"Jacobi eigenvalue iteration did not converge in {MAX_SWEEPS} sweeps "
            f"(max relative coupling {residual:.3e})",
            residual,
        )
    return np.einsum("ij,ij->i", X, X) / scale


def pca_index(A, k: int = DEFAULT_K) -> IndexVector:
    """Top ``k`` covariance eigenvalues of ``A``, clamped at zero, zero-padded."""
    if k < 1:
        raise ValueError("k must be >= 1")
    eig = covariance_eigenvalues(A)
    return IndexVector(IndexMode.PCA, _top_k(np.maximum(eig, 0.0), k))


def index_image(img: GrayImage, mode=IndexMode.SVD, k: int = DEFAULT_K) -> IndexVector:
    """Index an image in the given mode; ``k`` is ignored for HIST."""
    mode = IndexMode.parse(mode)
    if mode is IndexMode.HIST:
        return histogram_index(img)
    A = to_matrix(img)
    if mode is IndexMode.SVD:
        return singular_value_index(A, k)
    return pca_index(A, k)
