"""Convolution-product expansions of integral operators with varying impulse responses.

An operator ``Hu(x) = int K(x, y) u(y) dy`` is described by its TVIR
``T(x, y) = K(x + y, y)`` and compressed into
``H_m u = sum_k h_k * (w_k . u)``, which is applied with short FFTs.
"""
from .approximators import (
    AlsConfig,
    MeyerRep,
    SvdFactors,
    als_expand,
    fourier_expand,
    interp_expand,
    load_meyer,
    meyer_apply,
    meyer_expand,
    save_meyer,
    spline_expand,
    svd_expand,
    wavelet_expand,
)
from .bases import (
    BSplineSpace,
    KnSymbol,
    WaveletSpec,
    bspline_project,
    bspline_space,
    dwt,
    dwt2,
    idwt,
    idwt2,
    kn_symbol,
    wavelet_atom,
)
from .estimators import (
    ALSExpansion,
    FourierExpansion,
    InterpolatedExpansion,
    MeyerExpansion,
    SplineExpansion,
    SVDExpansion,
    WaveletExpansion,
    make_estimator,
)
from .exceptions import (
    ContractError,
    ConvprodError,
    DimensionError,
    ManifestError,
    ManifestVersionError,
    PreconditionError,
    SingularSystemError,
)
from .expansion import Expansion, Term, load, save
from .gallery import (
    make_gaussian,
    make_hat,
    make_kernel,
    make_piecewise,
    make_pure_conv,
    make_worst_case,
)
from .operator_model import (
    KernelMatrix,
    Tvir,
    apply_dense,
    hs_distance,
    hs_norm,
    kernel_to_tvir,
    operator_spectrum,
    tvir_to_kernel,
)
from .signal_core import (
    Grid,
    Spectrum,
    centered_ccorr,
    centered_cconv,
    dft,
    idft,
    overlap_add_cconv,
    sobolev_norm_sq,
)

__version__ = "0.1.0"
