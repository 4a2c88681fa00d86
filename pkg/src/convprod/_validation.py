"""Input checks shared by the estimator layer and the CLI."""
import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import DimensionError, PreconditionError
from .operator_model import Tvir


def check_tvir(X, kappa=None):
    """Return ``X`` as a :class:`Tvir`.

    Arrays are taken as TVIR samples (rows = offsets). ``kappa`` defaults to
    1 for arrays and must agree with the stored bound for a ``Tvir``.
    """
    if isinstance(X, Tvir):
        if kappa is not None and kappa != X.kappa:
            raise PreconditionError(f"kappa={kappa} conflicts with the TVIR's {X.kappa}")
        return X
    values = check_array(X, dtype=np.float64, ensure_2d=True)
    if values.shape[0] != values.shape[1]:
        raise DimensionError(f"TVIR samples must be square, got shape {values.shape}")
    return Tvir(values, 1.0 if kappa is None else kappa)


def check_signals(U, n):
    """Validate a batch of signals, shape (n_samples, n); 1D input is one signal."""
    U = np.asarray(U)
    single = U.ndim == 1
    U = check_array(np.atleast_2d(U), dtype=np.float64)
    if U.shape[1] != n:
        raise DimensionError(f"signals have {U.shape[1]} samples, operator grid has {n}")
    return U, single


def check_count(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise PreconditionError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise PreconditionError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
