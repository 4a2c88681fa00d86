"""Example TVIRs used by the benchmarks, from smooth to adversarial."""
import numpy as np

from .exceptions import PreconditionError
from .operator_model import Tvir, support_rows
from .signal_core import Grid, as_signal

__all__ = [
    "KERNELS",
    "make_kernel",
    "make_gaussian",
    "make_hat",
    "make_piecewise",
    "make_worst_case",
    "make_pure_conv",
    "gaussian_width",
    "hat_width",
]


def gaussian_width(y):
    return 0.08 + 0.02 * np.cos(2 * np.pi * y)


def hat_width(y):
    return 0.1 + 0.3 * (1 - np.abs(y))


def _truncate(values, grid, kappa):
    values[~support_rows(grid, kappa)] = 0.0
    return values


def make_gaussian(n, kappa=0.3):
    """Gaussian impulse responses with position-dependent width.

    ``T(x, y) = exp(-x^2 / (2 s(y)^2)) / (sqrt(2 pi) s(y))`` with
    ``s(y) = 0.08 + 0.02 cos(2 pi y)``.  Offsets beyond ``kappa / 2`` are set
    to zero; the default ``kappa = 0.3`` is three times the largest width.
    Pass ``kappa=1`` for the untruncated kernel.
    """
    if not 0 < kappa <= 1:
        raise PreconditionError(f"kappa must lie in (0, 1], got {kappa}")
    grid = Grid(n)
    x = grid.t[:, None]
    s = gaussian_width(grid.t)[None, :]
    values = np.exp(-x ** 2 / (2 * s ** 2)) / (np.sqrt(2 * np.pi) * s)
    return Tvir(_truncate(values, grid, kappa), kappa, s_hint=np.inf)


def make_hat(n):
    """Unit-area hats of width ``s(y) = 0.1 + 0.3 (1 - |y|)``.

    ``T(x, y) = (2 / s) max(1 - 2|x| / s, 0)``, supported on ``|x| <= s/2``.
    """
    grid = Grid(n)
    x = grid.t[:, None]
    s = hat_width(grid.t)[None, :]
    values = (2 / s) * np.maximum(1 - 2 * np.abs(x) / s, 0.0)
    return Tvir(values, 0.4, s_hint=1)


def make_piecewise(n, sigma1=0.05, sigma2=0.1):
    """Sum of two tensor products switching at ``|y| = 1/4``.

    ``T(x, y) = g1(x)`` for ``|y| <= 1/4`` and ``g2(x)`` elsewhere, with
    ``g(x) = exp(-x^2 / sigma^2) / sqrt(2 pi)``.
    """
    grid = Grid(n)

    def g(sigma):
        return np.exp(-grid.t ** 2 / sigma ** 2) / np.sqrt(2 * np.pi)

    inner = (np.abs(grid.t) <= 0.25).astype(float)
    values = np.outer(g(sigma1), inner) + np.outer(g(sigma2), 1 - inner)
    return Tvir(values, 1.0, s_hint=0)


def make_worst_case(n, s=1, eps=0.1, kappa=1.0):
    """Smooth TVIR whose singular values decay as slowly as allowed.

    For ``kappa = 1``::

        T(x, y) = sum_{k>=1} 2 w_k cos(2 pi k (x + y)),  w_k = k^-(s + 1/2 + eps/2)

    For ``kappa < 1`` the offsets are compressed into ``|x| <= kappa/2``::

        T(x, y) = sum_{k>=1} (2 w_k / kappa) cos(2 pi k (x / kappa + y))
        w_k = kappa / ((1 + k^2)^s k^(1 + eps))

    The series stops at ``k = n/2 - 1``, the last mode the grid resolves.
    """
    if s < 1:
        raise PreconditionError(f"smoothness s must be >= 1, got {s}")
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    if not 0 < kappa <= 1:
        raise PreconditionError(f"kappa must lie in (0, 1], got {kappa}")
    grid = Grid(n)
    k = np.arange(1, n // 2)
    weights = worst_case_weights(k, s, eps, kappa)
    x = grid.t
    y = grid.t
    if kappa == 1:
        scale = 2 * weights
        phase_x = np.outer(x, k)
    else:
        scale = 2 * weights / kappa
        phase_x = np.outer(x / kappa, k)
    phase_y = np.outer(y, k)
    # cos(a + b) = cos a cos b - sin a sin b keeps this an O(n^2 K) product
    cx, sx = np.cos(2 * np.pi * phase_x), np.sin(2 * np.pi * phase_x)
    cy, sy = np.cos(2 * np.pi * phase_y), np.sin(2 * np.pi * phase_y)
    values = (cx * scale) @ cy.T - (sx * scale) @ sy.T
    if kappa < 1:
        values = _truncate(values, grid, kappa)
    return Tvir(values, kappa, s_hint=s)


def worst_case_weights(k, s=1, eps=0.1, kappa=1.0):
    k = np.abs(np.asarray(k, dtype=float))
    if kappa == 1:
        return k ** -(s + 0.5 + eps / 2)
    return kappa / ((1 + k ** 2) ** s * k ** (1 + eps))


def make_pure_conv(n, h=None, kappa=None):
    """Position-independent TVIR ``T(x, y) = h(x)``.

    Without ``h`` a unit-area Gaussian of width 0.05 cut at ``kappa = 0.3``
    is used.
    """
    grid = Grid(n)
    if h is None:
        kappa = 0.3 if kappa is None else kappa
        h = np.exp(-grid.t ** 2 / (2 * 0.05 ** 2)) / (np.sqrt(2 * np.pi) * 0.05)
        h = np.where(support_rows(grid, kappa), h, 0.0)
    else:
        h = as_signal(h, n, "h")
        if kappa is None:
            kappa = min(1.0, max(2 * np.abs(grid.t[h != 0]).max(initial=0.0), 1 / n))
    return Tvir(np.repeat(h[:, None], n, axis=1), kappa)


KERNELS = {
    "gaussian": make_gaussian,
    "hat": make_hat,
    "piecewise": make_piecewise,
    "worst_case": make_worst_case,
    "pure_conv": make_pure_conv,
}


def make_kernel(name, n, **params):
    """Build a gallery TVIR by name."""
    try:
        factory = KERNELS[name]
    except KeyError:
        raise PreconditionError(
            f"unknown kernel {name!r}; choose from {sorted(KERNELS)}"
        ) from None
    return factory(n, **params)
