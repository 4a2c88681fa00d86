"""Constructors turning a TVIR into a convolution-product expansion.

Every constructor returns an :class:`~convprod.expansion.Expansion` whose
materialized TVIR ``sum_k h_k w_k^T`` approximates the input:

* :func:`fourier_expand` truncates the Kohn-Nirenberg symbol;
* :func:`spline_expand` projects each row on periodic B-splines;
* :func:`wavelet_expand` keeps the coarse wavelet coefficients of each row;
* :func:`svd_expand` keeps the leading singular triplets;
* :func:`als_expand` fits windowed factors by alternating least squares;
* :func:`interp_expand` interpolates rows at equispaced positions.

:func:`meyer_expand` builds the doubly-compressed :class:`MeyerRep` instead.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .bases import (
    WaveletSpec,
    _row_spectrum,
    bspline_project,
    bspline_space,
    dwt,
    dwt2,
    idwt,
    idwt2,
    kn_symbol,
    wavelet_atoms,
)
from .exceptions import (
    DimensionError,
    ManifestError,
    ManifestVersionError,
    PreconditionError,
    SingularSystemError,
)
from .expansion import Expansion, dumps_manifest, loads_manifest
from .operator_model import Tvir
from .signal_core import Grid, as_signal

__all__ = [
    "fourier_expand",
    "spline_expand",
    "wavelet_expand",
    "svd_expand",
    "SvdFactors",
    "meyer_expand",
    "meyer_apply",
    "MeyerRep",
    "save_meyer",
    "load_meyer",
    "AlsConfig",
    "als_expand",
    "interp_expand",
    "fourier_basis",
]


def _is_pow2(m):
    return m >= 1 and not m & (m - 1)


def _band(T):
    """Row indices allowed to be nonzero by the support bound."""
    return np.flatnonzero(T.support)


def fourier_expand(T, m):
    """Truncated Fourier series of every row ``T(x, .)``.

    Keeps frequencies ``|k| <= m`` as real terms: the mean, then a cosine and
    a sine window per frequency, i.e. ``2m + 1`` terms. ``m = n/2`` adds the
    Nyquist cosine and reproduces ``T`` exactly.
    """
    n = T.n
    if not 0 <= m <= n // 2:
        raise PreconditionError(f"Fourier order must lie in [0, {n // 2}], got {m}")
    t = T.grid.t
    sym = kn_symbol(T, min(m, n // 2 - 1))
    H = [sym.column(0).real]
    W = [np.ones(n)]
    for k in range(1, min(m, n // 2 - 1) + 1):
        c = sym.column(k)
        H += [2 * c.real, -2 * c.imag]
        W += [np.cos(2 * np.pi * k * t), np.sin(2 * np.pi * k * t)]
    if m == n // 2:
        spec, freqs = _row_spectrum(T.values)
        H.append(spec[:, n // 2].real)
        W.append(np.where((np.arange(n) - n // 2) % 2, -1.0, 1.0))
    return Expansion.from_factors(
        np.stack(H, axis=1), np.stack(W, axis=1), {"method": "fourier", "m": int(m)}
    )


def spline_expand(T, m, alpha=1):
    """Row-wise projection on ``m`` periodic B-splines of order ``alpha``.

    ``w_k`` is the B-spline centered at ``k/m`` and ``h_k(x)`` its coefficient
    in the least-squares projection of ``T(x, .)``.
    """
    space = bspline_space(alpha, m, T.grid)
    coeffs = bspline_project(T.values, space)
    coeffs[~T.support] = 0.0
    W = space.basis.T
    w_supports = [space.support(k) for k in range(m)]
    return Expansion.from_factors(
        coeffs,
        W,
        {"method": "spline", "m": int(m), "alpha": int(alpha)},
        w_supports=w_supports,
    )


def wavelet_expand(T, m, alpha=2):
    """Keep the ``m`` coarsest wavelet coefficients of every row.

    ``m`` must be a power of two; the kept atoms are the scaling functions
    and all wavelets of resolution below ``log2(m)``.
    """
    n = T.n
    if not _is_pow2(m) or m > n:
        raise PreconditionError(f"wavelet term count must be a power of two <= {n}, got {m}")
    spec = WaveletSpec(alpha)
    D = dwt(T.values, spec)
    H = D[:, :m] / np.sqrt(n)
    W = wavelet_atoms(n, spec, m).T
    return Expansion.from_factors(H, W, {"method": "wavelet", "m": int(m), "alpha": int(alpha)})


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Schmidt decomposition ``T / n = sum_k sigma_k f_k e_k^T``.

    ``f`` and ``e`` hold the singular vectors as columns, orthonormal under
    the plain dot product; ``sigma`` is nonincreasing.
    """

    sigma: np.ndarray
    f: np.ndarray
    e: np.ndarray

    def tail_error(self, m):
        """HS error of the best rank-``m`` approximation."""
        return float(np.sqrt(np.sum(self.sigma[m:] ** 2)))


def _svd(T):
    rows = _band(T)
    U, S, Vt = np.linalg.svd(T.values[rows], full_matrices=False)
    # sign convention: first entry of e_k above round-off is positive
    for k in range(Vt.shape[0]):
        v = Vt[k]
        big = np.flatnonzero(np.abs(v) > 1e-12 * np.abs(v).max(initial=0.0))
        if big.size and v[big[0]] < 0:
            Vt[k] *= -1
            U[:, k] *= -1
    F = np.zeros((T.n, S.shape[0]))
    F[rows] = U
    return SvdFactors(S / T.n, F, Vt.T)


def svd_expand(T, m):
    """Best rank-``m`` approximation: ``h_k = sigma_k f_k``, ``w_k = e_k``.

    Returns
    -------
    expansion : Expansion
        ``min(m, rank bound)`` terms, where the bound is the number of rows
        inside the support of ``T``.
    factors : SvdFactors
        Full decomposition, for tail-energy bookkeeping.
    """
    n = T.n
    if not 0 <= m <= n:
        raise PreconditionError(f"rank must lie in [0, {n}], got {m}")
    factors = _svd(T)
    r = min(m, factors.sigma.shape[0])
    H = factors.f[:, :r] * (factors.sigma[:r] * n)
    W = factors.e[:, :r]
    E = Expansion.from_factors(H, W, {"method": "svd", "m": int(m)})
    return E, factors


@dataclass(frozen=True, eq=False)
class MeyerRep:
    """Coarse block ``c[lam, mu]`` of the 2D wavelet coefficients of a TVIR.

    ``lam`` indexes atoms in the offset variable (first ``m1``), ``mu`` atoms
    in the position variable (first ``m2``). The TVIR it represents is
    ``W^T C W`` with ``C`` zero-padded to ``n x n``.
    """

    grid: Grid
    spec: WaveletSpec
    m1: int
    m2: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.grid.n
        for name, v in (("m1", self.m1), ("m2", self.m2)):
            if not _is_pow2(v) or v > n:
                raise PreconditionError(f"{name} must be a power of two <= {n}, got {v}")
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.m1, self.m2):
            raise DimensionError(f"coefficient block {coeffs.shape} != ({self.m1}, {self.m2})")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self):
        return self.grid.n

    def storage_count(self):
        return int(self.coeffs.size)

    def _padded(self, width):
        C = np.zeros((self.n, width))
        C[:self.m1, :self.m2] = self.coeffs
        return C

    def materialize(self):
        values = idwt2(self._padded(self.n), self.spec)
        return Tvir(values, 1.0)

    def filters(self):
        """Columns ``c~_mu = sum_lam c[lam, mu] psi_lam`` (plain-orthonormal atoms)."""
        return idwt(self._padded(self.m2).T, self.spec).T

    def to_expansion(self):
        """Equivalent expansion with ``m2`` terms ``c~_mu * (psi_mu . u)``."""
        n = self.n
        W = wavelet_atoms(n, self.spec, self.m2).T / np.sqrt(n)
        provenance = {
            "method": "meyer",
            "m1": int(self.m1),
            "m2": int(self.m2),
            "alpha": int(self.spec.alpha),
        }
        return Expansion.from_factors(self.filters(), W, provenance)

    def to_manifest(self):
        return {
            "version": MEYER_VERSION,
            "n": self.n,
            "alpha": self.spec.alpha,
            "m1": self.m1,
            "m2": self.m2,
            "coeffs": self.coeffs.ravel(),
        }

    @classmethod
    def from_manifest(cls, manifest):
        if not isinstance(manifest, dict):
            raise ManifestError("manifest must be a JSON object")
        if manifest.get("version") != MEYER_VERSION:
            raise ManifestVersionError(
                f"unsupported Meyer manifest version {manifest.get('version')!r}"
            )
        try:
            m1, m2 = int(manifest["m1"]), int(manifest["m2"])
            coeffs = np.asarray(manifest["coeffs"], dtype=float).reshape(m1, m2)
            return cls(Grid(int(manifest["n"])), WaveletSpec(int(manifest["alpha"])), m1, m2, coeffs)
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"malformed Meyer manifest: {exc}") from exc


MEYER_VERSION = 1


def meyer_expand(T, m1, m2, alpha=2):
    """Keep the ``m1 x m2`` coarse block of the separable wavelet coefficients."""
    n = T.n
    for name, v in (("m1", m1), ("m2", m2)):
        if not _is_pow2(v) or v > n:
            raise PreconditionError(f"{name} must be a power of two <= {n}, got {v}")
    spec = WaveletSpec(alpha)
    C = dwt2(T, spec)
    return MeyerRep(T.grid, spec, int(m1), int(m2), C[:m1, :m2])


def meyer_apply(R, u):
    """Product with a Meyer representation through its ``m2`` filters."""
    u = as_signal(u, name="u")
    if u.shape[0] != R.n:
        raise DimensionError(f"u has {u.shape[0]} samples, representation grid has {R.n}")
    return R.to_expansion().apply(u)


def save_meyer(R, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_manifest(R.to_manifest()))


def load_meyer(path):
    with open(path, encoding="utf-8") as fh:
        return MeyerRep.from_manifest(loads_manifest(fh.read()))


@dataclass(frozen=True)
class AlsConfig:
    """Settings of the windowed alternating least squares fit.

    Parameters
    ----------
    windows : sequence of (start, length)
        Circular sample intervals; ``w_k`` may only be nonzero on window ``k``.
        Their union must cover the grid.
    max_iter : int
    tol : float
        Stop when the objective decreases by less than ``tol`` relatively.
    init : {"bspline", "window"}
        ``"bspline"`` starts from :func:`spline_expand` (windows must then be
        the B-spline supports, see :meth:`bspline`); ``"window"`` starts from
        window indicators.
    alpha : int
        B-spline order used by the ``"bspline"`` initializer.
    """

    windows: tuple
    max_iter: int = 200
    tol: float = 1e-8
    init: str = "bspline"
    alpha: int = 1

    def __post_init__(self):
        windows = tuple((int(s), int(length)) for s, length in self.windows)
        if not windows:
            raise PreconditionError("ALS needs at least one window")
        for k, (start, length) in enumerate(windows):
            if length <= 0:
                raise PreconditionError(f"window {k} is empty")
        if self.init not in ("bspline", "window"):
            raise PreconditionError(f"unknown initializer {self.init!r}")
        if self.max_iter < 0 or self.tol < 0:
            raise PreconditionError("max_iter and tol must be nonnegative")
        object.__setattr__(self, "windows", windows)

    @classmethod
    def bspline(cls, n, m, alpha=1, **kwargs):
        """Windows equal to the supports of the ``m`` B-splines of order ``alpha``."""
        space = bspline_space(alpha, m, Grid(n))
        windows = [space.support(k) for k in range(m)]
        return cls(windows, alpha=alpha, **kwargs)

    def mask(self, n):
        """Boolean (n, m) pattern: ``mask[j, k]`` iff sample j lies in window k."""
        M = np.zeros((n, len(self.windows)), dtype=bool)
        for k, (start, length) in enumerate(self.windows):
            if length > n:
                raise PreconditionError(f"window {k} longer than the grid")
            M[(start + np.arange(length)) % n, k] = True
        if not M.any(axis=1).all():
            raise PreconditionError("windows do not cover the grid")
        return M


def _solve_gram(G, B):
    """Solve ``G X = B`` for a symmetric PSD ``G``; minimum-norm if singular."""
    try:
        c, low = scipy.linalg.cho_factor(G, check_finite=False)
        if np.min(np.abs(np.diag(c))) ** 2 > 1e-14 * np.trace(G):
            return scipy.linalg.cho_solve((c, low), B, check_finite=False)
    except np.linalg.LinAlgError:
        pass
    return scipy.linalg.lstsq(G, B, cond=1e-14, check_finite=False)[0]


def _als_objective(A, H, W, n):
    return float(np.sum((A - H @ W.T) ** 2) / n ** 2)


def als_expand(T, cfg):
    """Fit ``T ~ sum_k h_k w_k^T`` with ``supp(w_k)`` inside window ``k``.

    Alternates an exact least-squares update of all filters (one shared
    ``m x m`` Gram solve) and of all windows (one small solve per group of
    columns sharing the same active windows), so the squared HS objective
    never increases. The objective after each sweep is stored in
    ``expansion.provenance["objective_history"]``, starting with the
    initializer's value.
    """
    n = T.n
    M = cfg.mask(n)
    m = M.shape[1]
    rows = _band(T)
    A = T.values[rows]

    if cfg.init == "bspline":
        space = bspline_space(cfg.alpha, m, T.grid)
        W = space.basis.T.copy()
        if np.any(W[~M] != 0):
            raise PreconditionError("B-spline initializer does not fit inside the windows")
    else:
        W = M.astype(float)
    H = _solve_gram(W.T @ W, (A @ W).T).T

    groups = {}
    for j, active in enumerate(M):
        groups.setdefault(tuple(np.flatnonzero(active)), []).append(j)
    groups = [(np.array(k), np.array(cols)) for k, cols in groups.items()]

    history = [_als_objective(A, H, W, n)]
    for _ in range(cfg.max_iter):
        G = H.T @ H
        HtA = H.T @ A
        W = np.zeros((n, m))
        for active, cols in groups:
            sub = G[np.ix_(active, active)]
            W[np.ix_(cols, active)] = _solve_gram(sub, HtA[np.ix_(active, cols)]).T
        H = _solve_gram(W.T @ W, (A @ W).T).T
        history.append(_als_objective(A, H, W, n))
        prev, cur = history[-2], history[-1]
        if cur == 0 or prev - cur <= cfg.tol * prev:
            break

    full_H = np.zeros((n, m))
    full_H[rows] = H
    W[~M] = 0.0
    provenance = {
        "method": "als",
        "m": int(m),
        "alpha": int(cfg.alpha),
        "init": cfg.init,
        "objective_history": history,
    }
    return Expansion.from_factors(full_H, W, provenance, w_supports=list(cfg.windows))


def fourier_basis(grid, m):
    """``m`` real Fourier atoms as columns: 1, cos/sin pairs, then a last cosine if ``m`` is even."""
    t = grid.t
    cols = [np.ones(grid.n)]
    k = 1
    while len(cols) < m:
        if len(cols) == m - 1 and m % 2 == 0:
            cols.append(np.cos(np.pi * m * t))
            break
        cols += [np.cos(2 * np.pi * k * t), np.sin(2 * np.pi * k * t)]
        k += 1
    return np.stack(cols[:m], axis=1)


def interp_expand(T, m, basis="fourier", alpha=1):
    """Interpolate the rows of ``T`` at the ``m`` positions ``i/m``.

    Positions are snapped to the nearest grid sample. The ``m x m``
    collocation matrix is factored once and reused for every row.
    """
    n = T.n
    if not 1 <= m <= n:
        raise PreconditionError(f"interpolation order must lie in [1, {n}], got {m}")
    grid = T.grid
    if basis == "fourier":
        E = fourier_basis(grid, m)
        w_supports = None
    elif basis == "spline":
        space = bspline_space(alpha, m, grid)
        E = space.basis.T
        w_supports = [space.support(k) for k in range(m)]
    else:
        raise PreconditionError(f"unknown interpolation basis {basis!r}")
    cols = np.array([grid.nearest_index(i / m) for i in range(m)])
    colloc = E[cols]
    if np.linalg.cond(colloc) > 1e12:
        raise SingularSystemError(f"{basis} collocation matrix is singular for m={m}")
    lu = scipy.linalg.lu_factor(colloc)
    rows = _band(T)
    C = np.zeros((n, m))
    C[rows] = scipy.linalg.lu_solve(lu, T.values[np.ix_(rows, cols)].T).T
    provenance = {"method": "interp", "m": int(m), "basis": basis}
    if basis == "spline":
        provenance["alpha"] = int(alpha)
    return Expansion.from_factors(C, E, provenance, w_supports=w_supports)
