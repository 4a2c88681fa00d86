"""Benchmark drivers behind the ``convprod-bench`` command.

Every driver returns its data and optionally writes a CSV file (header line,
comma separated, floats with 17 significant digits, LF line endings).
"""
import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .approximators import svd_expand
from .estimators import ESTIMATORS, make_estimator
from .exceptions import ContractError, PreconditionError
from .gallery import make_kernel
from .operator_model import apply_dense, hs_distance, operator_spectrum

__all__ = [
    "RateRow",
    "RateReport",
    "fit_slope",
    "cmd_spectrum",
    "cmd_rate",
    "cmd_timing",
    "cmd_compare",
    "write_csv",
]

ERROR_FLOOR = 1e-12


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def fit_slope(points):
    """Least-squares slope of ``log2(error)`` against ``log2(m)``.

    Points with ``error <= 1e-12`` are dropped; at least two must remain.
    """
    pts = [(m, e) for m, e in points if e > ERROR_FLOOR]
    if len(pts) < 2:
        raise PreconditionError(
            f"need at least 2 points with error > {ERROR_FLOOR:g}, got {len(pts)}"
        )
    x = np.log2([m for m, _ in pts])
    y = np.log2([e for _, e in pts])
    if np.ptp(x) == 0:
        raise PreconditionError("slope fit needs at least two distinct m values")
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class RateRow:
    m: int
    hs_error: float
    flop_estimate: float
    storage_count: int
    wall_time_ms: float


@dataclass
class RateReport:
    """Error and cost of one method across orders."""

    kernel: str
    method: str
    rows: list = field(default_factory=list)
    slope: float = float("nan")

    HEADER = ("m", "error", "flops", "storage", "time_ms")

    def to_csv(self, path):
        write_csv(
            path,
            self.HEADER,
            [(r.m, r.hs_error, r.flop_estimate, r.storage_count, r.wall_time_ms) for r in self.rows],
        )


def cmd_spectrum(kernel, n, out_path=None, **kernel_params):
    """Singular values of ``matrix(T) / n``, nonincreasing; CSV ``index,sigma`` (1-based)."""
    T = make_kernel(kernel, n, **kernel_params)
    sigma = operator_spectrum(T)
    if out_path is not None:
        write_csv(out_path, ("index", "sigma"), [(i + 1, float(s)) for i, s in enumerate(sigma)])
    return sigma


def cmd_rate(kernel, method, m_list, n, alpha=None, out_path=None, **kernel_params):
    """Error/cost table of ``method`` on a gallery kernel for each order in ``m_list``.

    ``time_ms`` is the wall-clock construction time of the expansion.
    """
    m_list = sorted(set(int(m) for m in m_list))
    if not m_list:
        raise PreconditionError("empty list of orders")
    T = make_kernel(kernel, n, **kernel_params)
    report = RateReport(kernel, method)
    for m in m_list:
        est = make_estimator(method, m, alpha)
        start = time.perf_counter()
        est.fit(T)
        elapsed = 1e3 * (time.perf_counter() - start)
        report.rows.append(
            RateRow(m, est.hs_error_, est.flop_estimate_, est.storage_count_, elapsed)
        )
    points = [(r.m, r.hs_error) for r in report.rows]
    if sum(e > ERROR_FLOOR for _, e in points) >= 2:
        report.slope = fit_slope(points)
    if out_path is not None:
        report.to_csv(out_path)
    return report


def _best_ms(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return 1e3 * best


def cmd_timing(kernel, method, m, n_list, alpha=None, out_path=None, seed=0, repeats=5,
               **kernel_params):
    """Dense versus fast product timings; CSV ``n,dense_ms,fast_ms,flop_estimate``.

    The fast product is checked against the dense one (relative error at
    most 1e-10) before anything is timed. Times are the best of ``repeats``.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for n in n_list:
        T = make_kernel(kernel, n, **kernel_params)
        est = make_estimator(method, m, alpha).fit(T)
        E = est.expansion_
        Tm = est.materialize()
        u = rng.standard_normal(n)
        fast = E.apply(u)
        dense = apply_dense(Tm, u)
        rel = np.linalg.norm(fast - dense) / max(np.linalg.norm(dense), np.finfo(float).tiny)
        if rel > 1e-10:
            raise ContractError(f"fast and dense products differ by {rel:.3e} at n={n}")
        dense_ms = _best_ms(lambda: apply_dense(Tm, u), repeats)
        fast_ms = _best_ms(lambda: E.apply(u), repeats)
        rows.append((int(n), dense_ms, fast_ms, E.flop_estimate()))
    if out_path is not None:
        write_csv(out_path, ("n", "dense_ms", "fast_ms", "flop_estimate"), rows)
    return rows


def cmd_compare(kernel, n, m_list, methods=None, alpha=None, out_path=None, **kernel_params):
    """Every method against the SVD at the same number of terms.

    CSV ``method,m,terms,error,svd_error,flops,storage``; ``svd_error`` is
    the error of the best approximation with ``terms`` terms.
    """
    methods = sorted(ESTIMATORS) if methods is None else list(methods)
    T = make_kernel(kernel, n, **kernel_params)
    svd_cache = {}
    rows = []
    for method in methods:
        for m in m_list:
            est = make_estimator(method, int(m), alpha).fit(T)
            r = est.n_terms_
            if r not in svd_cache:
                svd_cache[r] = hs_distance(svd_expand(T, r)[0].materialize(), T)
            rows.append(
                (method, int(m), r, est.hs_error_, svd_cache[r], est.flop_estimate_, est.storage_count_)
            )
    if out_path is not None:
        write_csv(out_path, ("method", "m", "terms", "error", "svd_error", "flops", "storage"), rows)
    return rows
