import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from convprod import (
    ALSExpansion,
    DimensionError,
    FourierExpansion,
    InterpolatedExpansion,
    MeyerExpansion,
    PreconditionError,
    SplineExpansion,
    SVDExpansion,
    WaveletExpansion,
    apply_dense,
    fourier_expand,
    hs_distance,
    make_estimator,
    make_gaussian,
    make_hat,
)
from convprod.estimators import ESTIMATORS
from convprod.operator_model import apply_dense_adjoint

ALL = [
    FourierExpansion(m=4),
    SplineExpansion(m=16, alpha=1),
    WaveletExpansion(m=16, alpha=2),
    SVDExpansion(m=4),
    ALSExpansion(m=16, alpha=1, max_iter=10),
    InterpolatedExpansion(m=9),
    MeyerExpansion(m1=16, m2=16),
]


@pytest.mark.parametrize("est", ALL, ids=lambda e: type(e).__name__)
def test_fit_transform_round_trip(est, rng):
    T = make_hat(128)
    est = clone(est).fit(T)
    Tm = est.materialize()
    U = rng.standard_normal((3, 128))
    out = est.transform(U)
    assert out.shape == (3, 128)
    for u, o in zip(U, out):
        np.testing.assert_allclose(o, apply_dense(Tm, u), atol=1e-12)
    np.testing.assert_allclose(est.adjoint_transform(U[0]), apply_dense_adjoint(Tm, U[0]), atol=1e-12)
    assert est.hs_error_ == pytest.approx(hs_distance(Tm, T))
    assert est.score(T) == pytest.approx(-est.hs_error_)
    assert est.n_features_in_ == 128
    assert est.storage_count_ > 0 and est.flop_estimate_ > 0


@pytest.mark.parametrize("est", ALL, ids=lambda e: type(e).__name__)
def test_params_and_clone(est):
    params = est.get_params()
    twin = clone(est)
    assert twin.get_params() == params
    assert twin is not est
    assert type(est)(**params).get_params() == params


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SplineExpansion().transform(np.ones(64))


def test_array_input_and_kappa(rng):
    T = make_gaussian(64)
    a = FourierExpansion(m=3).fit(np.array(T.values))
    b = FourierExpansion(m=3).fit(T)
    assert a.hs_error_ == pytest.approx(b.hs_error_)
    FourierExpansion(m=3).fit(np.array(T.values), kappa=0.3)
    with pytest.raises(PreconditionError):
        FourierExpansion(m=3).fit(T, kappa=0.5)
    with pytest.raises(DimensionError):
        FourierExpansion(m=3).fit(np.ones((8, 16)))


def test_signal_length_checked():
    est = SVDExpansion(m=2).fit(make_hat(64))
    with pytest.raises(DimensionError):
        est.transform(np.ones((2, 32)))


def test_bad_hyperparameters():
    T = make_hat(64)
    with pytest.raises(PreconditionError):
        SplineExpansion(m=2.5).fit(T)
    with pytest.raises(PreconditionError):
        WaveletExpansion(m=0).fit(T)
    with pytest.raises(PreconditionError):
        SVDExpansion(m=True).fit(T)


def test_fitted_attributes():
    T = make_hat(128)
    svd = SVDExpansion(m=3).fit(T)
    assert svd.singular_values_.shape[0] >= 3
    als = ALSExpansion(m=16, max_iter=20).fit(T)
    assert als.n_iter_ == len(als.objective_history_) - 1
    meyer = MeyerExpansion(m1=8, m2=16).fit(T)
    assert meyer.storage_count_ == 128
    fourier = FourierExpansion(m=5).fit(T)
    assert fourier.n_terms_ == 11
    assert fourier.hs_error_ == pytest.approx(hs_distance(fourier_expand(T, 5).materialize(), T))


def test_make_estimator():
    assert make_estimator("meyer", 8).get_params()["m1"] == 8
    assert make_estimator("spline", 8, alpha=3).alpha == 3
    assert make_estimator("svd", 4, alpha=3).get_params() == {"m": 4}
    assert set(ESTIMATORS) == {"fourier", "spline", "wavelet", "svd", "als", "interp", "meyer"}
    with pytest.raises(PreconditionError):
        make_estimator("nope", 4)
