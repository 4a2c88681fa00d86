import numpy as np
import pytest

from convprod import (
    ContractError,
    DimensionError,
    PreconditionError,
    Tvir,
    apply_dense,
    hs_distance,
    hs_norm,
    kernel_to_tvir,
    operator_spectrum,
    tvir_to_kernel,
)
from convprod.operator_model import apply_dense_adjoint

from conftest import dense_apply_oracle, random_tvir


def test_tvir_support_validation():
    T = np.zeros((16, 16))
    T[0, 3] = 1.0  # offset -1/2 is outside kappa/2 = 0.25
    with pytest.raises(ContractError):
        Tvir(T, 0.5)
    Tvir(T, 1.0)
    with pytest.raises(PreconditionError):
        Tvir(np.zeros((16, 16)), 0.0)
    with pytest.raises(DimensionError):
        Tvir(np.zeros((16, 8)))
    with pytest.raises(ContractError):
        Tvir(np.full((8, 8), np.nan))


def test_tvir_values_read_only(rng):
    T = random_tvir(rng, 8)
    with pytest.raises(ValueError):
        T.values[0, 0] = 1.0


def test_zero_offset_maps_to_diagonal():
    n = 16
    T = np.zeros((n, n))
    T[n // 2, 5] = 2.0
    K = tvir_to_kernel(Tvir(T)).values
    assert K[5, 5] == 2.0
    assert np.count_nonzero(K) == 1


def test_pure_convolution_kernel(rng):
    n = 16
    h = rng.standard_normal(n)
    K = tvir_to_kernel(Tvir(np.repeat(h[:, None], n, axis=1))).values
    a, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    np.testing.assert_array_equal(K, h[(a - j + n // 2) % n])


def test_kernel_round_trip(rng):
    for n in (4, 32):
        T = random_tvir(rng, n)
        K = tvir_to_kernel(T)
        np.testing.assert_array_equal(kernel_to_tvir(K).values, T.values)
        # index-formula oracle
        for a in range(n):
            for j in range(n):
                assert K.values[a, j] == T.values[(a - j + n // 2) % n, j]


def test_kernel_to_tvir_support(rng):
    n = 32
    T = random_tvir(rng, n, 0.5)
    K = tvir_to_kernel(T).values.copy()
    back = kernel_to_tvir(K, 0.5)
    np.testing.assert_array_equal(back.values, T.values)
    K[0, n // 2] += 1e-3  # offset -1/2
    with pytest.raises(ContractError):
        kernel_to_tvir(K, 0.5)
    K[0, n // 2] = T.values[0, n // 2] + 1e-17
    assert kernel_to_tvir(K, 0.5).values[0, n // 2] == 0.0


def test_apply_dense_trivial(rng):
    n = 32
    T = Tvir(np.ones((n, n)))
    u = rng.standard_normal(n)
    np.testing.assert_allclose(apply_dense(T, u), np.full(n, u.mean()), atol=1e-14)
    assert not np.any(apply_dense(random_tvir(rng, n), np.zeros(n)))


def test_apply_dense_double_loop(rng):
    n = 32
    T = random_tvir(rng, n, 0.5)
    u = rng.standard_normal(n)
    np.testing.assert_allclose(apply_dense(T, u), dense_apply_oracle(T, u), atol=1e-13)
    v = rng.standard_normal(n)
    assert apply_dense(T, u) @ v == pytest.approx(u @ apply_dense_adjoint(T, v), rel=1e-12)
    with pytest.raises(DimensionError):
        apply_dense(T, np.ones(16))


def test_hs_norm(rng):
    assert hs_norm(Tvir(np.ones((64, 64)))) == pytest.approx(1.0)
    assert hs_norm(Tvir.zeros(64)) == 0.0
    T = random_tvir(rng, 64)
    direct = np.sqrt(sum(v * v for v in T.values.ravel())) / 64
    assert abs(hs_norm(T) - direct) <= 1e-13


def test_hs_distance_axioms(rng):
    A, B, C = (random_tvir(rng, 32) for _ in range(3))
    assert hs_distance(A, A) == 0.0
    assert hs_distance(A, Tvir.zeros(32)) == pytest.approx(hs_norm(A))
    assert hs_distance(A, B) == hs_distance(B, A)
    assert hs_distance(A, C) <= hs_distance(A, B) + hs_distance(B, C)
    with pytest.raises(DimensionError):
        hs_distance(A, Tvir.zeros(16))


def test_operator_spectrum(rng):
    T = random_tvir(rng, 32)
    s = operator_spectrum(T)
    assert np.all(np.diff(s) <= 0)
    np.testing.assert_allclose(np.sqrt(np.sum(s**2)), hs_norm(T), rtol=1e-12)
