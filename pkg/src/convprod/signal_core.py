"""Periodic grid, Fourier transforms and centered circular convolutions.

Signals are plain 1D float arrays sampled on a :class:`Grid`.  Sample ``i``
sits at coordinate ``t_i = (i - n/2) / n`` so that index ``n // 2`` is the
origin of the circle ``[-1/2, 1/2)``.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import ContractError, DimensionError, PreconditionError

__all__ = [
    "Grid",
    "Spectrum",
    "as_signal",
    "circular_support",
    "centered_cconv",
    "centered_ccorr",
    "overlap_add_cconv",
    "dft",
    "idft",
    "sobolev_norm_sq",
]


@dataclass(frozen=True)
class Grid:
    """Uniform sampling of the unit circle with ``n`` points.

    Parameters
    ----------
    n : int
        Number of samples. Must be a power of two, at least 4.
    """

    n: int

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise PreconditionError(f"grid size must be an integer, got {n!r}")
        if n < 4 or n & (n - 1):
            raise PreconditionError(f"grid size must be a power of two >= 4, got {n}")
        object.__setattr__(self, "n", int(n))

    @cached_property
    def t(self):
        """Sample coordinates, shape (n,)."""
        t = (np.arange(self.n) - self.n // 2) / self.n
        t.flags.writeable = False
        return t

    @property
    def center(self):
        """Index of the sample at coordinate 0."""
        return self.n // 2

    def nearest_index(self, x):
        """Index of the grid point closest to coordinate ``x`` (taken mod 1)."""
        return int(np.round(x * self.n + self.n // 2)) % self.n

    def zeros(self):
        return np.zeros(self.n)


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients ``c[k]`` for ``k = -n/2 .. n/2 - 1``."""

    coeffs: np.ndarray

    @property
    def n(self):
        return self.coeffs.shape[0]

    @property
    def freqs(self):
        n = self.n
        return np.arange(-(n // 2), n - n // 2)

    def at(self, k):
        """Coefficient of frequency ``k`` (with ``-n/2 <= k < n/2``)."""
        n = self.n
        if not -(n // 2) <= k < n - n // 2:
            raise PreconditionError(f"frequency {k} outside [-{n // 2}, {n // 2})")
        return self.coeffs[k + n // 2]


def as_signal(x, n=None, name="signal"):
    """Validate ``x`` as a finite real signal, optionally of length ``n``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise DimensionError(f"{name} has {x.shape[0]} samples, grid has {n}")
    if not np.all(np.isfinite(x)):
        raise ContractError(f"{name} contains non-finite values")
    return x


def _pair(f, g, names=("f", "g")):
    f = as_signal(f, name=names[0])
    g = as_signal(g, name=names[1])
    if f.shape != g.shape:
        raise DimensionError(
            f"{names[0]} and {names[1]} live on different grids "
            f"({f.shape[0]} vs {g.shape[0]} samples)"
        )
    return f, g


def circular_support(x, atol=0.0):
    """Smallest circular interval ``(start, length)`` holding the nonzeros of ``x``.

    Entries with ``|x| <= atol`` count as zero. Ties between intervals of the
    same length go to the smallest start index. An all-zero input gives
    ``(0, 0)``.
    """
    x = np.asarray(x)
    n = x.shape[0]
    idx = np.flatnonzero(np.abs(x) > atol)
    if idx.size == 0:
        return 0, 0
    # gap[i] is the distance from idx[i] to the next nonzero, wrapping around
    gaps = np.diff(np.append(idx, idx[0] + n))
    starts = np.roll(idx, -1)
    lengths = n - gaps + 1
    best = lengths.min()
    start = int(starts[lengths == best].min())
    return start, int(best)


def _check_support(x, length, start, name):
    n = x.shape[0]
    if not 0 <= length <= n:
        raise PreconditionError(f"{name} support length {length} outside [0, {n}]")
    if start is None:
        start, found = circular_support(x)
        if found > length:
            raise ContractError(
                f"{name} has nonzeros over {found} samples, declared support is {length}"
            )
        return start
    mask = np.ones(n, dtype=bool)
    mask[(start + np.arange(length)) % n] = False
    if np.any(x[mask] != 0):
        raise ContractError(
            f"{name} has nonzeros outside its declared support [{start}, +{length})"
        )
    return start % n


def centered_cconv(f, g):
    """Centered circular convolution.

    ``out[a] = sum_j f[(a - j + n/2) mod n] * g[j]``, so an impulse at the
    center index is the identity element.
    """
    f, g = _pair(f, g)
    n = f.shape[0]
    c = np.fft.irfft(np.fft.rfft(f) * np.fft.rfft(g), n)
    return np.roll(c, -(n // 2))


def centered_ccorr(f, v):
    """Adjoint of ``g -> centered_cconv(f, g)`` under the plain dot product.

    ``out[j] = sum_a f[(a - j + n/2) mod n] * v[a]``.
    """
    f, v = _pair(f, v, ("f", "v"))
    n = f.shape[0]
    r = np.fft.irfft(np.conj(np.fft.rfft(f)) * np.fft.rfft(v), n)
    return np.roll(r, n // 2)


def _segment(x, start, length):
    n = x.shape[0]
    if start + length <= n:
        return x[start:start + length]
    return np.take(x, np.arange(start, start + length), mode="wrap")


def _linear_conv_sectioned(a, b):
    """Linear convolution of two short real arrays by overlap-add sections.

    The longer input is cut into sections of the shorter input's length
    (rounded up to a power of two) so every FFT has size ``2 * L``.
    """
    if a.shape[0] < b.shape[0]:
        a, b = b, a
    la, lb = a.shape[0], b.shape[0]
    out_len = la + lb - 1
    block = 1 << max(lb - 1, 0).bit_length()
    nfft = 2 * block
    nb = -(-la // block)
    padded = np.zeros(nb * block)
    padded[:la] = a
    spec = np.fft.rfft(padded.reshape(nb, block), nfft, axis=1)
    spec *= np.fft.rfft(b, nfft)
    pieces = np.fft.irfft(spec, nfft, axis=1).reshape(nb, 2, block)
    acc = np.zeros((nb + 1, block))
    acc[:nb] += pieces[:, 0]
    acc[1:] += pieces[:, 1]
    return acc.ravel()[:out_len]


def overlap_add_cconv(f, g, q, p, f_start=None, g_start=None):
    """Centered circular convolution of two compactly supported signals.

    Parameters
    ----------
    f, g : array of shape (n,)
        Inputs of :func:`centered_cconv`.
    q, p : int
        Support lengths of ``f`` and ``g``.
    f_start, g_start : int, optional
        First index of each circular support interval. When omitted the
        minimal interval is located and checked against the declared length.

    Returns
    -------
    array of shape (n,)
        Same values as ``centered_cconv(f, g)``, computed in work proportional
        to ``(p + q) * log2(min(p, q))``.

    Raises
    ------
    ContractError
        If a nonzero sample lies outside a declared support.
    """
    f, g = _pair(f, g)
    n = f.shape[0]
    f_start = _check_support(f, int(q), f_start, "f")
    g_start = _check_support(g, int(p), g_start, "g")
    if q == 0 or p == 0:
        return np.zeros(n)
    lin = _linear_conv_sectioned(_segment(f, f_start, q), _segment(g, g_start, p))
    offset = f_start + g_start - n // 2
    idx = (offset + np.arange(lin.shape[0])) % n
    return np.bincount(idx, weights=lin, minlength=n)


def dft(u):
    """Fourier coefficients ``c[k] = (1/n) sum_j u[j] exp(-2i pi k t_j)``.

    Returns a :class:`Spectrum` ordered from ``k = -n/2`` to ``n/2 - 1``.
    """
    u = np.asarray(u)
    if u.ndim != 1:
        raise DimensionError(f"signal must be one-dimensional, got shape {u.shape}")
    n = u.shape[0]
    k = np.arange(-(n // 2), n - n // 2)
    # exp(-2i pi k t_j) = (-1)^k exp(-2i pi k j / n) because t_j = j/n - 1/2
    sign = np.where(k % 2, -1.0, 1.0)
    return Spectrum(np.fft.fftshift(np.fft.fft(u)) * sign / n)


def idft(spectrum, real=True):
    """Inverse of :func:`dft`; returns the real part unless ``real=False``."""
    c = spectrum.coeffs if isinstance(spectrum, Spectrum) else np.asarray(spectrum)
    n = c.shape[0]
    k = np.arange(-(n // 2), n - n // 2)
    sign = np.where(k % 2, -1.0, 1.0)
    u = np.fft.ifft(np.fft.ifftshift(c * sign)) * n
    return u.real if real else u


def sobolev_norm_sq(u, s):
    """Discrete Sobolev norm ``sum_k |c[k]|^2 (1 + k^2)^s``."""
    if s < 0:
        raise PreconditionError(f"Sobolev order must be nonnegative, got {s}")
    spec = dft(as_signal(u))
    k = spec.freqs.astype(float)
    return float(np.sum(np.abs(spec.coeffs) ** 2 * (1.0 + k * k) ** s))
