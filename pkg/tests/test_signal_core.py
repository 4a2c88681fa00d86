import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convprod import (
    ContractError,
    DimensionError,
    Grid,
    PreconditionError,
    centered_ccorr,
    centered_cconv,
    dft,
    idft,
    overlap_add_cconv,
    sobolev_norm_sq,
)
from convprod.signal_core import circular_support

from conftest import cconv_oracle


def test_grid_coordinates():
    g = Grid(8)
    np.testing.assert_array_equal(g.t, (np.arange(8) - 4) / 8)
    assert g.t[g.center] == 0.0
    assert g.nearest_index(0.25) == 6
    assert g.nearest_index(-0.5) == 0
    assert g.nearest_index(0.5) == 0


@pytest.mark.parametrize("n", [0, 2, 6, 100, 4.0, True])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(PreconditionError):
        Grid(n)


def test_cconv_impulse_is_identity(rng):
    g = rng.standard_normal(32)
    f = np.zeros(32)
    f[16] = 1.0
    np.testing.assert_allclose(centered_cconv(f, g), g, atol=1e-15)


def test_cconv_small_example():
    out = centered_cconv([1.0, 0, 0, 0], [1.0, 2, 3, 4])
    np.testing.assert_allclose(out, [3, 4, 1, 2], atol=1e-14)
    np.testing.assert_allclose(cconv_oracle([1.0, 0, 0, 0], [1.0, 2, 3, 4]), [3, 4, 1, 2])


def test_cconv_zero(rng):
    assert not np.any(centered_cconv(np.zeros(16), rng.standard_normal(16)))


@pytest.mark.parametrize("n", [4, 16, 64])
def test_cconv_matches_double_sum(rng, n):
    f, g = rng.standard_normal((2, n))
    np.testing.assert_allclose(centered_cconv(f, g), cconv_oracle(f, g), atol=1e-12)


def test_cconv_grid_mismatch():
    with pytest.raises(DimensionError):
        centered_cconv(np.ones(8), np.ones(16))


def test_ccorr_impulse_and_small_example():
    v = np.array([1.0, 2, 3, 4])
    f = np.zeros(4)
    f[2] = 1.0
    np.testing.assert_allclose(centered_ccorr(f, v), v, atol=1e-15)
    # adjoint of g -> cconv(f, g) written as an explicit matrix
    f = np.array([1.0, 0, 0, 0])
    C = np.column_stack([cconv_oracle(f, e) for e in np.eye(4)])
    np.testing.assert_allclose(centered_ccorr(f, v), C.T @ v, atol=1e-14)


def test_ccorr_is_adjoint(rng):
    for _ in range(20):
        f, g, v = rng.standard_normal((3, 64))
        lhs = centered_cconv(f, g) @ v
        rhs = g @ centered_ccorr(f, v)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def _supported(rng, n, start, length):
    x = np.zeros(n)
    x[(start + np.arange(length)) % n] = rng.standard_normal(length)
    return x


def test_overlap_add_full_support(rng):
    f, g = rng.standard_normal((2, 128))
    np.testing.assert_allclose(overlap_add_cconv(f, g, 128, 128), centered_cconv(f, g), atol=1e-12)


def test_overlap_add_impulse():
    rng = np.random.default_rng(3)
    n = 256
    f = np.zeros(n)
    f[n // 2] = 1.0
    g = _supported(rng, n, 40, 8)
    np.testing.assert_allclose(overlap_add_cconv(f, g, 1, 8), g, atol=1e-15)


def test_overlap_add_short_filters(rng):
    n = 1024
    f = _supported(rng, n, n // 2 - 8, 16)
    g = _supported(rng, n, 1000, 64)  # wraps around the end of the grid
    out = overlap_add_cconv(f, g, 16, 64)
    assert np.max(np.abs(out - centered_cconv(f, g))) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(
    logn=st.integers(2, 8),
    data=st.data(),
)
def test_overlap_add_property(logn, data):
    n = 2**logn
    q = data.draw(st.integers(0, n))
    p = data.draw(st.integers(0, n))
    fs = data.draw(st.integers(0, n - 1))
    gs = data.draw(st.integers(0, n - 1))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**31)))
    f = _supported(rng, n, fs, q)
    g = _supported(rng, n, gs, p)
    out = overlap_add_cconv(f, g, q, p, f_start=fs, g_start=gs)
    assert np.max(np.abs(out - centered_cconv(f, g))) <= 1e-12 * max(1, np.abs(f).sum() * np.abs(g).max(initial=0))


def test_overlap_add_contract(rng):
    n = 64
    f = _supported(rng, n, 10, 12)
    g = _supported(rng, n, 0, 4)
    with pytest.raises(ContractError):
        overlap_add_cconv(f, g, 8, 4)
    with pytest.raises(ContractError):
        overlap_add_cconv(f, g, 12, 4, f_start=11)


def test_circular_support():
    x = np.zeros(16)
    assert circular_support(x) == (0, 0)
    x[[15, 0, 1]] = 1.0
    assert circular_support(x) == (15, 3)
    x = np.zeros(8)
    x[[0, 4]] = 1.0
    assert circular_support(x) == (0, 5)


def test_dft_trivial_cases():
    n = 32
    c = dft(np.full(n, 2.5))
    assert c.at(0) == pytest.approx(2.5)
    assert np.max(np.abs(np.delete(c.coeffs, n // 2))) < 1e-15
    t = Grid(n).t
    c = dft(np.cos(2 * np.pi * t))
    assert c.at(1) == pytest.approx(0.5)
    assert c.at(-1) == pytest.approx(0.5)
    rest = np.delete(c.coeffs, [n // 2 - 1, n // 2 + 1])
    assert np.max(np.abs(rest)) < 1e-15


def test_dft_matches_direct_sum(rng):
    n = 16
    u = rng.standard_normal(n)
    t = Grid(n).t
    k = np.arange(-n // 2, n // 2)
    direct = np.exp(-2j * np.pi * np.outer(k, t)) @ u / n
    np.testing.assert_allclose(dft(u).coeffs, direct, atol=1e-12)
    np.testing.assert_allclose(idft(dft(u)), u, atol=1e-13)


def test_sobolev_norm():
    n = 64
    t = Grid(n).t
    assert sobolev_norm_sq(np.full(n, 3.0), 2) == pytest.approx(9.0)
    assert sobolev_norm_sq(np.cos(2 * np.pi * t), 1) == pytest.approx(1.0)


def test_sobolev_norm_direct(rng):
    n = 64
    u = rng.standard_normal(n)
    t = Grid(n).t
    k = np.arange(-n // 2, n // 2)
    c = np.exp(-2j * np.pi * np.outer(k, t)) @ u / n
    direct = np.sum(np.abs(c) ** 2 * (1 + k**2.0) ** 2)
    assert sobolev_norm_sq(u, 2) == pytest.approx(direct, rel=1e-12)
    with pytest.raises(PreconditionError):
        sobolev_norm_sq(u, -1)
