"""scikit-learn style front end for the expansion constructors.

Each estimator is fitted on a TVIR (a :class:`~convprod.operator_model.Tvir`
or an ``(n, n)`` array of samples) and then acts as a linear transformer on
batches of signals::

    >>> from convprod import SplineExpansion, make_gaussian
    >>> est = SplineExpansion(m=16, alpha=1).fit(make_gaussian(256))
    >>> est.hs_error_ < 1e-2
    True

``transform`` applies the compressed operator to every row of its input and
``adjoint_transform`` its adjoint, so the estimators drop into pipelines.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import approximators
from ._validation import check_count, check_signals, check_tvir
from .exceptions import PreconditionError
from .operator_model import hs_distance

__all__ = [
    "FourierExpansion",
    "SplineExpansion",
    "WaveletExpansion",
    "SVDExpansion",
    "ALSExpansion",
    "InterpolatedExpansion",
    "MeyerExpansion",
    "ESTIMATORS",
    "make_estimator",
]


class _ExpansionEstimator(TransformerMixin, BaseEstimator):
    """Shared fit/transform plumbing.

    Subclasses implement ``_build(T)`` returning an ``Expansion``.

    Fitted attributes
    -----------------
    expansion_ : Expansion
    n_features_in_ : int
        Grid size.
    n_terms_ : int
    hs_error_ : float
        Hilbert-Schmidt distance between the fitted expansion and its input.
    storage_count_ : int
    flop_estimate_ : float
    """

    def fit(self, X, y=None, kappa=None):
        T = check_tvir(X, kappa)
        self.expansion_ = self._build(T)
        self.n_features_in_ = T.n
        self.n_terms_ = self.expansion_.m
        self.hs_error_ = hs_distance(self.materialize(), T)
        self.storage_count_ = self._storage()
        self.flop_estimate_ = self.expansion_.flop_estimate()
        return self

    def _storage(self):
        return self.expansion_.storage_count()

    def materialize(self):
        check_is_fitted(self, "expansion_")
        return self.expansion_.materialize()

    def transform(self, X):
        """Apply the fitted operator to each row of ``X``."""
        check_is_fitted(self, "expansion_")
        U, single = check_signals(X, self.n_features_in_)
        out = np.stack([self.expansion_.apply(u) for u in U])
        return out[0] if single else out

    def adjoint_transform(self, X):
        """Apply the adjoint of the fitted operator to each row of ``X``."""
        check_is_fitted(self, "expansion_")
        V, single = check_signals(X, self.n_features_in_)
        out = np.stack([self.expansion_.apply_adjoint(v) for v in V])
        return out[0] if single else out

    def score(self, X, y=None):
        """Negative HS distance to the TVIR ``X``."""
        check_is_fitted(self, "expansion_")
        return -hs_distance(self.materialize(), check_tvir(X))


class FourierExpansion(_ExpansionEstimator):
    """Truncated Kohn-Nirenberg symbol with frequencies ``|k| <= m`` (``2m+1`` terms)."""

    def __init__(self, m=8):
        self.m = m

    def _build(self, T):
        return approximators.fourier_expand(T, check_count(self.m, "m"))


class SplineExpansion(_ExpansionEstimator):
    """Row projection on ``m`` periodic B-splines of order ``alpha``."""

    def __init__(self, m=16, alpha=1):
        self.m = m
        self.alpha = alpha

    def _build(self, T):
        return approximators.spline_expand(
            T, check_count(self.m, "m", 1), check_count(self.alpha, "alpha")
        )


class WaveletExpansion(_ExpansionEstimator):
    """The ``m`` coarsest Daubechies atoms (``alpha`` vanishing moments) per row."""

    def __init__(self, m=16, alpha=2):
        self.m = m
        self.alpha = alpha

    def _build(self, T):
        return approximators.wavelet_expand(
            T, check_count(self.m, "m", 1), check_count(self.alpha, "alpha", 1)
        )


class SVDExpansion(_ExpansionEstimator):
    """Best rank-``m`` approximation.

    Also exposes ``singular_values_``, the spectrum of ``matrix(T) / n``.
    """

    def __init__(self, m=8):
        self.m = m

    def _build(self, T):
        E, factors = approximators.svd_expand(T, check_count(self.m, "m"))
        self.singular_values_ = factors.sigma
        return E


class ALSExpansion(_ExpansionEstimator):
    """Windowed alternating least squares started from the B-spline solution.

    Windows are the supports of the ``m`` B-splines of order ``alpha``.
    ``objective_history_`` records the squared HS error after each sweep.
    """

    def __init__(self, m=16, alpha=1, max_iter=200, tol=1e-8):
        self.m = m
        self.alpha = alpha
        self.max_iter = max_iter
        self.tol = tol

    def _build(self, T):
        cfg = approximators.AlsConfig.bspline(
            T.n,
            check_count(self.m, "m", 1),
            check_count(self.alpha, "alpha"),
            max_iter=check_count(self.max_iter, "max_iter"),
            tol=self.tol,
        )
        E = approximators.als_expand(T, cfg)
        self.objective_history_ = np.array(E.provenance["objective_history"])
        self.n_iter_ = len(self.objective_history_) - 1
        return E


class InterpolatedExpansion(_ExpansionEstimator):
    """Row interpolation at ``i/m`` in a Fourier or B-spline basis."""

    def __init__(self, m=16, basis="fourier", alpha=1):
        self.m = m
        self.basis = basis
        self.alpha = alpha

    def _build(self, T):
        return approximators.interp_expand(
            T, check_count(self.m, "m", 1), self.basis, check_count(self.alpha, "alpha")
        )


class MeyerExpansion(_ExpansionEstimator):
    """Coarse ``m1 x m2`` block of 2D wavelet coefficients.

    ``representation_`` holds the :class:`~convprod.approximators.MeyerRep`;
    ``storage_count_`` counts its ``m1 * m2`` coefficients.
    """

    def __init__(self, m1=16, m2=16, alpha=2):
        self.m1 = m1
        self.m2 = m2
        self.alpha = alpha

    def _build(self, T):
        self.representation_ = approximators.meyer_expand(
            T,
            check_count(self.m1, "m1", 1),
            check_count(self.m2, "m2", 1),
            check_count(self.alpha, "alpha", 1),
        )
        return self.representation_.to_expansion()

    def _storage(self):
        return self.representation_.storage_count()

    def materialize(self):
        check_is_fitted(self, "representation_")
        return self.representation_.materialize()


ESTIMATORS = {
    "fourier": FourierExpansion,
    "spline": SplineExpansion,
    "wavelet": WaveletExpansion,
    "svd": SVDExpansion,
    "als": ALSExpansion,
    "interp": InterpolatedExpansion,
    "meyer": MeyerExpansion,
}


def make_estimator(method, m, alpha=None, **params):
    """Estimator for ``method`` at order ``m``.

    For ``"meyer"`` the order sets both block sizes. ``alpha`` is ignored by
    methods without an order parameter; ``None`` keeps the method default.
    """
    try:
        cls = ESTIMATORS[method]
    except KeyError:
        raise PreconditionError(
            f"unknown method {method!r}; choose from {sorted(ESTIMATORS)}"
        ) from None
    if method == "meyer":
        params.update(m1=m, m2=m)
    else:
        params["m"] = m
    if alpha is not None and "alpha" in cls().get_params():
        params["alpha"] = alpha
    return cls(**params)
