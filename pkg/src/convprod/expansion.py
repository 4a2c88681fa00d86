"""Convolution-product expansions ``H_m u = (1/n) sum_k h_k * (w_k . u)``.

An :class:`Expansion` stores each filter ``h_k`` and window ``w_k`` through
its circular support, which is what makes products cheap: one term costs
``(p + q) log2(min(p, q))`` operations instead of ``n log n``.
"""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    ContractError,
    DimensionError,
    ManifestError,
    ManifestVersionError,
)
from .operator_model import Tvir
from .signal_core import (
    Grid,
    _linear_conv_sectioned,
    _segment,
    as_signal,
    circular_support,
)

__all__ = [
    "Term",
    "Expansion",
    "apply",
    "apply_adjoint",
    "materialize",
    "flop_estimate",
    "storage_count",
    "save",
    "load",
    "MANIFEST_VERSION",
]

MANIFEST_VERSION = 1


def _readonly(a):
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _support_values(x, support, name):
    n = x.shape[0]
    start, length = support
    if not (0 <= start < n and 0 <= length <= n):
        raise ContractError(f"{name} support {support} invalid for n={n}")
    mask = np.ones(n, dtype=bool)
    mask[(start + np.arange(length)) % n] = False
    if np.any(x[mask] != 0):
        raise ContractError(f"{name} has nonzeros outside its support {support}")
    return _segment(x, start, length)


@dataclass(frozen=True, eq=False)
class Term:
    """One filter/window pair with their circular supports.

    ``h_values`` and ``w_values`` hold only the samples inside the supports
    ``(start, length)``; the full-length vectors are rebuilt on demand.
    """

    n: int
    h_support: tuple
    h_values: np.ndarray
    w_support: tuple
    w_values: np.ndarray

    def __post_init__(self):
        for name in ("h", "w"):
            start, length = getattr(self, f"{name}_support")
            values = _readonly(getattr(self, f"{name}_values"))
            if values.ndim != 1 or values.shape[0] != length:
                raise ContractError(
                    f"{name} holds {values.shape} values for a support of length {length}"
                )
            if not np.all(np.isfinite(values)):
                raise ContractError(f"{name} contains non-finite values")
            object.__setattr__(self, f"{name}_support", (int(start) % self.n, int(length)))
            object.__setattr__(self, f"{name}_values", values)

    @classmethod
    def from_arrays(cls, h, w, h_support=None, w_support=None):
        """Build a term from full-length filter and window samples.

        Supports default to the minimal circular intervals of the nonzeros.
        """
        h = as_signal(h, name="h")
        w = as_signal(w, h.shape[0], name="w")
        h_support = circular_support(h) if h_support is None else tuple(h_support)
        w_support = circular_support(w) if w_support is None else tuple(w_support)
        return cls(
            h.shape[0],
            h_support,
            _support_values(h, h_support, "h"),
            w_support,
            _support_values(w, w_support, "w"),
        )

    @property
    def q(self):
        return self.h_support[1]

    @property
    def p(self):
        return self.w_support[1]

    def _full(self, support, values):
        out = np.zeros(self.n)
        start, length = support
        out[(start + np.arange(length)) % self.n] = values
        return out

    @property
    def h(self):
        return self._full(self.h_support, self.h_values)

    @property
    def w(self):
        return self._full(self.w_support, self.w_values)

    def apply(self, u):
        """``h * (w . u)`` without the ``1/n`` weight."""
        n = self.n
        out = np.zeros(n)
        if self.p == 0 or self.q == 0:
            return out
        (hs, q), (ws, p) = self.h_support, self.w_support
        prod = self.w_values * _segment(u, ws, p)
        lin = _linear_conv_sectioned(self.h_values, prod)
        idx = (hs + ws - n // 2 + np.arange(lin.shape[0])) % n
        return np.bincount(idx, weights=lin, minlength=n)

    def apply_adjoint(self, v):
        """``w . ccorr(h, v)`` without the ``1/n`` weight."""
        n = self.n
        out = np.zeros(n)
        if self.p == 0 or self.q == 0:
            return out
        (hs, q), (ws, p) = self.h_support, self.w_support
        # only the p outputs on the window support are needed; they read
        # v over a contiguous stretch of p + q - 1 samples
        vseg = _segment(v, (hs + ws - n // 2) % n, p + q - 1)
        corr = _linear_conv_sectioned(vseg, self.h_values[::-1])[q - 1:q - 1 + p]
        out[(ws + np.arange(p)) % n] = self.w_values * corr
        return out

    def flops(self):
        if self.p == 0 or self.q == 0:
            return 0.0
        return (self.p + self.q) * math.log2(min(self.p, self.q) + 1)


@dataclass(frozen=True, eq=False)
class Expansion:
    """Ordered list of convolution-product terms on a common grid.

    Parameters
    ----------
    grid : Grid
    terms : sequence of Term
    provenance : dict, optional
        Constructor name and parameters, carried through serialization.
    """

    grid: Grid
    terms: tuple = ()
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        terms = tuple(self.terms)
        for k, term in enumerate(terms):
            if term.n != self.grid.n:
                raise DimensionError(
                    f"term {k} lives on {term.n} samples, expansion grid has {self.grid.n}"
                )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "provenance", dict(self.provenance))

    @classmethod
    def from_factors(cls, H, W, provenance=None, h_supports=None, w_supports=None):
        """Expansion with ``h_k = H[:, k]`` and ``w_k = W[:, k]``."""
        H = np.asarray(H, dtype=float)
        W = np.asarray(W, dtype=float)
        if H.ndim != 2 or H.shape != W.shape:
            raise DimensionError(f"factor shapes differ: {H.shape} vs {W.shape}")
        n, m = H.shape
        terms = [
            Term.from_arrays(
                H[:, k],
                W[:, k],
                None if h_supports is None else h_supports[k],
                None if w_supports is None else w_supports[k],
            )
            for k in range(m)
        ]
        return cls(Grid(n), terms, provenance or {})

    @property
    def n(self):
        return self.grid.n

    @property
    def m(self):
        return len(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        kind = self.provenance.get("method", "custom")
        return f"Expansion(n={self.n}, m={self.m}, method={kind!r})"

    def _signal(self, u, name):
        u = as_signal(u, name=name)
        if u.shape[0] != self.n:
            raise DimensionError(f"{name} has {u.shape[0]} samples, expansion grid has {self.n}")
        return u

    def apply(self, u):
        """Fast product ``H_m u``; terms are summed in list order."""
        u = self._signal(u, "u")
        out = np.zeros(self.n)
        for term in self.terms:
            out += term.apply(u)
        return out / self.n

    def apply_adjoint(self, v):
        """Fast product with the adjoint, ``(1/n) sum_k w_k . ccorr(h_k, v)``."""
        v = self._signal(v, "v")
        out = np.zeros(self.n)
        for term in self.terms:
            out += term.apply_adjoint(v)
        return out / self.n

    def factors(self):
        """Full-length factor matrices ``(H, W)`` of shape (n, m)."""
        if not self.terms:
            return np.zeros((self.n, 0)), np.zeros((self.n, 0))
        H = np.stack([t.h for t in self.terms], axis=1)
        W = np.stack([t.w for t in self.terms], axis=1)
        return H, W

    def materialize(self):
        """TVIR ``T_m = sum_k h_k w_k^T`` of the expansion."""
        H, W = self.factors()
        values = H @ W.T
        rows = np.flatnonzero(np.any(H != 0, axis=1))
        reach = np.abs(self.grid.t[rows]).max(initial=0.0)
        kappa = min(1.0, max(2 * reach, 1.0 / self.n))
        return Tvir(values, kappa)

    def flop_estimate(self):
        """Cost model ``sum_k (p_k + q_k) log2(min(p_k, q_k) + 1)``."""
        return float(sum(t.flops() for t in self.terms))

    def storage_count(self):
        """Number of stored reals, ``sum_k (p_k + q_k)``."""
        return int(sum(t.p + t.q for t in self.terms))

    def to_manifest(self):
        return {
            "version": MANIFEST_VERSION,
            "n": self.n,
            "m": self.m,
            "provenance": self.provenance,
            "terms": [
                {
                    "h_support": list(t.h_support),
                    "h_values": t.h_values,
                    "w_support": list(t.w_support),
                    "w_values": t.w_values,
                }
                for t in self.terms
            ],
        }

    @classmethod
    def from_manifest(cls, manifest):
        if not isinstance(manifest, dict):
            raise ManifestError("manifest must be a JSON object")
        version = manifest.get("version")
        if version != MANIFEST_VERSION:
            raise ManifestVersionError(
                f"unsupported manifest version {version!r} (expected {MANIFEST_VERSION})"
            )
        try:
            n = int(manifest["n"])
            m = int(manifest["m"])
            raw_terms = manifest["terms"]
            terms = [
                Term(
                    n,
                    tuple(t["h_support"]),
                    np.asarray(t["h_values"], dtype=float),
                    tuple(t["w_support"]),
                    np.asarray(t["w_values"], dtype=float),
                )
                for t in raw_terms
            ]
            grid = Grid(n)
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"malformed expansion manifest: {exc}") from exc
        if len(terms) != m:
            raise ManifestError(f"manifest declares m={m} but holds {len(terms)} terms")
        return cls(grid, terms, manifest.get("provenance", {}))


def dumps_manifest(manifest):
    """JSON text with every float written with 17 significant digits."""

    def encode(obj):
        if isinstance(obj, np.ndarray):
            return "[" + ", ".join(format(v, ".17g") for v in obj.tolist()) + "]"
        if isinstance(obj, float):
            return format(obj, ".17g")
        if isinstance(obj, dict):
            items = ", ".join(f"{json.dumps(str(k))}: {encode(v)}" for k, v in obj.items())
            return "{" + items + "}"
        if isinstance(obj, (list, tuple)):
            return "[" + ", ".join(encode(v) for v in obj) + "]"
        if isinstance(obj, np.generic):
            return encode(obj.item())
        return json.dumps(obj)

    return encode(manifest) + "\n"


def loads_manifest(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc


def save(E, path):
    """Write an expansion manifest to ``path``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_manifest(E.to_manifest()))


def load(path):
    """Read an expansion written by :func:`save`."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return Expansion.from_manifest(loads_manifest(text))


def apply(E, u):
    return E.apply(u)


def apply_adjoint(E, v):
    return E.apply_adjoint(v)


def materialize(E):
    return E.materialize()


def flop_estimate(E):
    return E.flop_estimate()


def storage_count(E):
    return E.storage_count()
