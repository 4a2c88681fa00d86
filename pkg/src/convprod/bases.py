"""Fixed approximation systems for the rows of a TVIR.

Three families are provided:

* Fourier atoms, through the Kohn-Nirenberg symbol of a TVIR;
* periodic cardinal B-splines with ``m`` equispaced knots;
* periodized orthonormal Daubechies wavelets, in 1D and separable 2D.

Wavelet coefficients of a length-``n`` signal are kept in one flat array:
the scaling block first, then the detail blocks from coarse to fine. The
detail block of resolution ``j`` has ``2**j`` entries starting at index
``2**j``, so the first ``m`` coefficients (``m`` a power of two) are exactly
the atoms of resolution below ``log2(m)``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .exceptions import DimensionError, PreconditionError
from .signal_core import Grid, as_signal, centered_cconv

__all__ = [
    "DAUBECHIES",
    "KnSymbol",
    "kn_symbol",
    "cardinal_bspline",
    "BSplineSpace",
    "bspline_space",
    "bspline_by_convolution",
    "bspline_project",
    "WaveletSpec",
    "dwt",
    "idwt",
    "dwt2",
    "idwt2",
    "wavelet_atom",
    "wavelet_index",
    "wavelet_atoms",
]

# Orthonormal Daubechies scaling filters (sum = sqrt(2)), indexed by the
# number of vanishing moments of the associated wavelet.
DAUBECHIES = {
    1: (
        0.70710678118654752,
        0.70710678118654752,
    ),
    2: (
        0.48296291314453414,
        0.83651630373780791,
        0.22414386804201338,
        -0.12940952255126038,
    ),
    3: (
        0.33267055295008262,
        0.80689150931109258,
        0.45987750211849157,
        -0.13501102001025459,
        -0.085441273882026662,
        0.035226291885709537,
    ),
    4: (
        0.2303778133088965,
        0.71484657055291565,
        0.63088076792985891,
        -0.027983769416859854,
        -0.18703481171909308,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ),
    5: (
        0.16010239797419291,
        0.60382926979718967,
        0.72430852843777293,
        0.13842814590132073,
        -0.24229488706638203,
        -0.032244869584638375,
        0.077571493840045714,
        -0.0062414902127982743,
        -0.012580751999081999,
        0.0033357252854737713,
    ),
    6: (
        0.11154074335010946,
        0.49462389039845309,
        0.75113390802109535,
        0.31525035170919763,
        -0.22626469396543982,
        -0.12976686756726194,
        0.097501605587323049,
        0.027522865530305729,
        -0.03158203931748603,
        0.00055384220116149614,
        0.0047772575109455106,
        -0.0010773010853084796,
    ),
    7: (
        0.077852054085009179,
        0.39653931948191731,
        0.72913209084623512,
        0.46978228740519312,
        -0.14390600392856498,
        -0.22403618499387498,
        0.071309219266830265,
        0.080612609151083072,
        -0.038029936935014414,
        -0.016574541630666881,
        0.012550998556099841,
        0.00042957797292136652,
        -0.0018016407040474909,
        0.00035371379997452025,
    ),
    8: (
        0.05441584224310401,
        0.31287159091429997,
        0.67563073629728981,
        0.58535468365420671,
        -0.015829105256349306,
        -0.28401554296154693,
        0.00047248457391328277,
        0.12874742662047846,
        -0.017369301001807546,
        -0.044088253930794752,
        0.013981027917398282,
        0.0087460940474057767,
        -0.0048703529934515743,
        -0.00039174037337694705,
        0.00067544940645056937,
        -0.00011747678412476953,
    ),
}


@dataclass(frozen=True, eq=False)
class KnSymbol:
    """Row-wise Fourier coefficients ``N[i, k]`` for ``k = -k_max .. k_max``."""

    values: np.ndarray
    k_max: int

    @property
    def freqs(self):
        return np.arange(-self.k_max, self.k_max + 1)

    def column(self, k):
        return self.values[:, k + self.k_max]


def _row_spectrum(values):
    """``(1/n) sum_j v[:, j] exp(-2i pi k t_j)`` for every ``k`` (fft order)."""
    n = values.shape[-1]
    k = np.fft.fftfreq(n, 1.0 / n).astype(int)
    sign = np.where(k % 2, -1.0, 1.0)
    return np.fft.fft(values, axis=-1) * sign / n, k


def kn_symbol(T, k_max):
    """Kohn-Nirenberg symbol of a TVIR.

    Parameters
    ----------
    T : Tvir
    k_max : int
        Largest frequency kept, at most ``n/2 - 1``.
    """
    n = T.n
    if not 0 <= k_max <= n // 2 - 1:
        raise PreconditionError(f"k_max must lie in [0, {n // 2 - 1}], got {k_max}")
    spec, _ = _row_spectrum(T.values)
    cols = np.arange(-k_max, k_max + 1) % n
    return KnSymbol(spec[:, cols], int(k_max))


def cardinal_bspline(x, alpha):
    """Centered cardinal B-spline of degree ``alpha`` with unit integral.

    Supported on ``|x| <= (alpha + 1) / 2``. For ``alpha = 0`` the indicator
    is half open: 1 on ``[-1/2, 1/2)``.
    """
    x = np.asarray(x, dtype=float)
    if alpha == 0:
        return ((x >= -0.5) & (x < 0.5)).astype(float)
    half = (alpha + 1) / 2
    out = np.zeros_like(x)
    inside = np.abs(x) < half
    xi = x[inside] + half
    acc = np.zeros_like(xi)
    for j in range(alpha + 2):
        acc += (-1) ** j * comb(alpha + 1, j) * np.maximum(xi - j, 0.0) ** alpha
    out[inside] = acc / factorial(alpha)
    return out


@dataclass(frozen=True, eq=False)
class BSplineSpace:
    """Span of the ``m`` circular translates of a sampled cardinal B-spline.

    ``basis[k]`` samples ``B(y - k/m)`` where ``B(y) = M(m y)`` and ``M`` is
    the centered cardinal B-spline of degree ``alpha``.
    """

    alpha: int
    m: int
    grid: Grid
    basis: np.ndarray = field(repr=False)
    gram_eigenvalues: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.grid.n

    @property
    def step(self):
        """Samples between consecutive knots."""
        return self.n // self.m

    def support(self, k=0):
        """Circular support ``(start, length)`` of ``basis[k]``."""
        start, length = self._support0
        return (start + k * self.step) % self.n, length

    @property
    def _support0(self):
        from .signal_core import circular_support
        return circular_support(self.basis[0])


def _check_spline_params(alpha, m, n):
    if alpha < 0 or int(alpha) != alpha:
        raise PreconditionError(f"spline order must be a nonnegative integer, got {alpha}")
    if m < alpha + 2:
        raise PreconditionError(f"need m >= alpha + 2 knots, got m={m}, alpha={alpha}")
    if m > n or n % m:
        raise PreconditionError(f"knot count m={m} must divide the grid size n={n}")


def bspline_space(alpha, m, grid):
    """Sampled periodic B-spline space of order ``alpha`` with ``m`` knots."""
    grid = grid if isinstance(grid, Grid) else Grid(grid)
    n = grid.n
    _check_spline_params(alpha, m, n)
    step = n // m
    # sample i sits (i - n/2) samples away from the knot at t = 0
    b0 = cardinal_bspline((np.arange(n) - n // 2) / step, alpha)
    basis = np.stack([np.roll(b0, k * step) for k in range(m)])
    # Gram matrix of equispaced translates is circulant: G[k, l] = g[(l - k) mod m]
    g = basis @ basis[0] / n
    eig = np.fft.fft(g).real
    basis.flags.writeable = False
    return BSplineSpace(int(alpha), int(m), grid, basis, eig)


def bspline_by_convolution(alpha, m, grid):
    """``B_{alpha,m}`` built by repeated quadrature self-convolution.

    Mirrors the recursion ``B_a = m B_0 * B_{a-1}`` with the integral
    replaced by ``(1/n) sum``. Converges to the exact samples as ``n/m``
    grows; kept as an independent check of :func:`bspline_space`.
    """
    grid = grid if isinstance(grid, Grid) else Grid(grid)
    n = grid.n
    b_ind = cardinal_bspline(grid.t * m, 0)
    b = b_ind
    for _ in range(alpha):
        b = m * centered_cconv(b_ind, b) / n
    return b


def bspline_project(rows, space):
    """Coefficients of the quadrature-orthogonal projection on a spline space.

    Parameters
    ----------
    rows : array of shape (n,) or (r, n)
    space : BSplineSpace

    Returns
    -------
    array of shape (m,) or (r, m)
    """
    rows = np.asarray(rows, dtype=float)
    if rows.shape[-1] != space.n:
        raise DimensionError(f"rows have {rows.shape[-1]} samples, space has {space.n}")
    if np.any(np.abs(space.gram_eigenvalues) < 1e-14 * space.gram_eigenvalues.max()):
        raise AssertionError("singular B-spline Gram matrix")
    rhs = rows @ space.basis.T / space.n
    # G is symmetric circulant with first column g: G c = rhs  <=>  fft(g) fft(c) = fft(rhs)
    return np.fft.ifft(np.fft.fft(rhs, axis=-1) / space.gram_eigenvalues, axis=-1).real


@dataclass(frozen=True)
class WaveletSpec:
    """Periodized Daubechies wavelet with ``alpha`` vanishing moments.

    Parameters
    ----------
    alpha : int
        Vanishing moments, 1 to 8; the filter has ``2 * alpha`` taps.
    level : int, optional
        Number of decomposition levels. ``None`` decomposes down to a single
        scaling coefficient.
    """

    alpha: int = 2
    level: int | None = None

    def __post_init__(self):
        if self.alpha not in DAUBECHIES:
            raise PreconditionError(
                f"vanishing moments must be in 1..{max(DAUBECHIES)}, got {self.alpha}"
            )
        if self.level is not None and self.level < 0:
            raise PreconditionError(f"level must be nonnegative, got {self.level}")

    @property
    def lowpass(self):
        return np.array(DAUBECHIES[self.alpha])

    @property
    def highpass(self):
        lo = self.lowpass
        return lo[::-1] * np.where(np.arange(lo.size) % 2, -1.0, 1.0)

    def levels(self, n):
        full = int(n).bit_length() - 1
        if n < 2 or 1 << full != n:
            raise PreconditionError(f"signal length must be a power of two, got {n}")
        if self.level is None:
            return full
        if self.level > full:
            raise PreconditionError(f"level {self.level} exceeds log2(n) = {full}")
        return self.level


@lru_cache(maxsize=None)
def _forward_index(N, L):
    return (2 * np.arange(N // 2)[:, None] + np.arange(L)[None, :]) % N


@lru_cache(maxsize=None)
def _inverse_index(N, L):
    # output k gathers taps t of the same parity as k, from coefficient (k - t) / 2
    k = np.arange(N)[:, None]
    taps = 2 * np.arange(L // 2)[None, :] + (k % 2)
    return ((k - taps) % N) // 2, taps


def _analysis(a, lo, hi):
    N, L = a.shape[-1], lo.size
    blocks = a[..., _forward_index(N, L)]
    return blocks @ lo, blocks @ hi


def _synthesis(approx, detail, lo, hi):
    N, L = 2 * approx.shape[-1], lo.size
    idx, taps = _inverse_index(N, L)
    return (approx[..., idx] * lo[taps]).sum(-1) + (detail[..., idx] * hi[taps]).sum(-1)


def dwt(u, spec=WaveletSpec()):
    """Orthonormal periodized wavelet transform along the last axis."""
    u = np.asarray(u, dtype=float)
    n = u.shape[-1]
    J = spec.levels(n)
    lo, hi = spec.lowpass, spec.highpass
    out = np.empty_like(u)
    a = u
    N = n
    for _ in range(J):
        a, d = _analysis(a, lo, hi)
        out[..., N // 2:N] = d
        N //= 2
    out[..., :N] = a
    return out


def idwt(c, spec=WaveletSpec()):
    """Inverse of :func:`dwt`."""
    c = np.asarray(c, dtype=float)
    n = c.shape[-1]
    J = spec.levels(n)
    lo, hi = spec.lowpass, spec.highpass
    N = n >> J
    a = c[..., :N]
    for _ in range(J):
        a = _synthesis(a, c[..., N:2 * N], lo, hi)
        N *= 2
    return a


def _matrix(T):
    values = getattr(T, "values", T)
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {values.shape}")
    return values


def dwt2(T, spec=WaveletSpec()):
    """Separable 2D transform ``C = W T W^T``; ``C[lam, mu]`` pairs x and y atoms."""
    values = _matrix(T)
    return dwt(dwt(values, spec).T, spec).T


def idwt2(C, spec=WaveletSpec()):
    C = _matrix(C)
    return idwt(idwt(C, spec).T, spec).T


def wavelet_index(j, l, n, spec=WaveletSpec(), scaling=False):
    """Flat coefficient index of atom ``(j, l)``.

    Detail atoms of resolution ``j`` occupy ``[2**j, 2**(j+1))``. With
    ``scaling=True`` the scaling atom ``l`` of the coarsest level is meant
    and ``j`` is ignored.
    """
    J = spec.levels(n)
    coarse = n >> J
    if scaling:
        if not 0 <= l < coarse:
            raise PreconditionError(f"scaling shift {l} outside [0, {coarse})")
        return l
    if not coarse <= 1 << j < n or j < 0:
        raise PreconditionError(f"resolution {j} not present for n={n}, {J} levels")
    if not 0 <= l < 1 << j:
        raise PreconditionError(f"shift {l} outside [0, {1 << j}) at resolution {j}")
    return (1 << j) + l


def wavelet_atoms(n, spec=WaveletSpec(), count=None):
    """First ``count`` atoms (rows), quadrature-orthonormal: ``sqrt(n) W^T``."""
    count = n if count is None else count
    eye = np.zeros((count, n))
    eye[np.arange(count), np.arange(count)] = 1.0
    return np.sqrt(n) * idwt(eye, spec)


def wavelet_atom(spec, j, l, grid, scaling=False):
    """Sampled atom ``psi_{j,l}`` with unit quadrature norm ``(1/n) sum psi^2``."""
    grid = grid if isinstance(grid, Grid) else Grid(grid)
    n = grid.n
    e = np.zeros(n)
    e[wavelet_index(j, l, n, spec, scaling)] = 1.0
    return np.sqrt(n) * idwt(e, spec)
