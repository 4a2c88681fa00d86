"""Dense ground-truth representation of an operator through its TVIR.

The time varying impulse response is stored as an ``n x n`` matrix whose
row ``i`` is the offset ``t_i`` and column ``j`` the source position ``t_j``.
The quadrature weight ``1/n`` is applied when the operator acts, never
stored in the samples.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import ContractError, DimensionError, PreconditionError
from .signal_core import Grid, as_signal

__all__ = [
    "Tvir",
    "KernelMatrix",
    "tvir_to_kernel",
    "kernel_to_tvir",
    "apply_dense",
    "apply_dense_adjoint",
    "hs_norm",
    "hs_distance",
    "operator_spectrum",
    "support_rows",
]

SUPPORT_TOL = 1e-14


def _readonly(a):
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def support_rows(grid, kappa):
    """Boolean mask of the offsets ``|t_i| <= kappa / 2``."""
    return np.abs(grid.t) <= kappa / 2 + 1e-12


def _square(values, name):
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ContractError(f"{name} contains non-finite values")
    return values


def _shear_index(n):
    a = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    return (a - j + n // 2) % n, np.broadcast_to(j, (n, n))


@dataclass(frozen=True, eq=False)
class Tvir:
    """Samples ``T(t_i, t_j)`` of a time varying impulse response.

    Parameters
    ----------
    values : array of shape (n, n)
        Row ``i`` holds offset ``t_i``, column ``j`` holds position ``t_j``.
    kappa : float
        Support bound in (0, 1]; every row with ``|t_i| > kappa/2`` must be
        exactly zero.
    s_hint : float, optional
        Declared smoothness of ``T(x, .)``, informational only.
    """

    values: np.ndarray
    kappa: float = 1.0
    s_hint: float | None = None
    grid: Grid = field(init=False)

    def __post_init__(self):
        values = _square(self.values, "TVIR")
        kappa = float(self.kappa)
        if not 0.0 < kappa <= 1.0:
            raise PreconditionError(f"kappa must lie in (0, 1], got {kappa}")
        grid = Grid(values.shape[0])
        outside = ~support_rows(grid, kappa)
        if np.any(values[outside] != 0):
            raise ContractError(
                f"TVIR has nonzero rows with |x| > kappa/2 = {kappa / 2:g}"
            )
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "grid", grid)

    @property
    def n(self):
        return self.grid.n

    @cached_property
    def support(self):
        """Boolean mask of the rows allowed to be nonzero."""
        return support_rows(self.grid, self.kappa)

    @cached_property
    def kernel(self):
        """Kernel samples ``K[a, j] = T[(a - j + n/2) mod n, j]`` (cached)."""
        rows, cols = _shear_index(self.n)
        return _readonly(self.values[rows, cols])

    @classmethod
    def zeros(cls, n, kappa=1.0):
        return cls(np.zeros((n, n)), kappa)

    def __repr__(self):
        return f"Tvir(n={self.n}, kappa={self.kappa:g})"


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Samples ``K(t_a, t_j)`` of an integral kernel."""

    values: np.ndarray
    grid: Grid = field(init=False)

    def __post_init__(self):
        values = _square(self.values, "kernel")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "grid", Grid(values.shape[0]))


def tvir_to_kernel(T):
    return KernelMatrix(T.kernel)


def kernel_to_tvir(K, kappa=1.0, s_hint=None):
    """Inverse of :func:`tvir_to_kernel`.

    Offsets outside the declared support must vanish up to ``1e-14`` times
    the largest entry; such residues are set to exact zeros.
    """
    values = K.values if isinstance(K, KernelMatrix) else _square(K, "kernel")
    n = values.shape[0]
    grid = Grid(n)
    # T[i, j] = K[(i + j - n/2) mod n, j]
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    T = values[(i + j - n // 2) % n, np.broadcast_to(j, (n, n))]
    outside = ~support_rows(grid, kappa)
    scale = max(np.abs(T).max(initial=0.0), 1.0)
    if np.any(np.abs(T[outside]) > SUPPORT_TOL * scale):
        raise ContractError(f"kernel has offsets beyond kappa/2 = {kappa / 2:g}")
    T[outside] = 0.0
    return Tvir(T, kappa, s_hint)


def _check_same_grid(T, u, name="u"):
    u = as_signal(u, name=name)
    if u.shape[0] != T.n:
        raise DimensionError(f"{name} has {u.shape[0]} samples, operator grid has {T.n}")
    return u


def apply_dense(T, u):
    """Ground-truth product ``(Hu)[a] = (1/n) sum_j K[a, j] u[j]``."""
    u = _check_same_grid(T, u)
    return T.kernel @ u / T.n


def apply_dense_adjoint(T, v):
    v = _check_same_grid(T, v, "v")
    return T.kernel.T @ v / T.n


def hs_norm(T):
    """Hilbert-Schmidt norm under the ``1/n`` quadrature: ``||T||_F / n``."""
    return float(np.linalg.norm(T.values) / T.n)


def hs_distance(T1, T2):
    if T1.n != T2.n:
        raise DimensionError(f"TVIRs on different grids ({T1.n} vs {T2.n})")
    return float(np.linalg.norm(T1.values - T2.values) / T1.n)


def operator_spectrum(T):
    """Singular values of ``matrix(T) / n`` in nonincreasing order."""
    return np.linalg.svd(T.values / T.n, compute_uv=False)
