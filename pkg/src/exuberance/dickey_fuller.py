"""Right-tailed Dickey-Fuller regression on series windows.

The regression for window ``[s, e]`` is

    x_t = a + rho * x_{t-1} + sum_i theta_i * dx_{t-i} + eps_t

estimated in difference form (``dx_t`` on ``1, x_{t-1}, dx_{t-1..t-p}``) so the
reported statistic is the t-ratio of ``rho - 1``.  Window moments come from a
prefix table, so each window costs O((p+2)^3) regardless of its length.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from .errors import ConfigError, DegenerateRegression, SeriesTooShort, WindowTooSmall
from .series import Series

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_ZERO_RESIDUAL = 2


@dataclass(frozen=True)
class AdfConfig:
    lag: int = 0

    def __post_init__(self):
        if int(self.lag) != self.lag or self.lag < 0:
            raise ConfigError(f"lag must be a non-negative integer, got {self.lag!r}")

    @property
    def n_regressors(self):
        return self.lag + 2

    @property
    def min_window(self):
        """Shortest window leaving one residual degree of freedom."""
        return 2 * self.lag + 4


@dataclass(frozen=True)
class Window:
    start: int
    end: int

    def __len__(self):
        return self.end - self.start + 1


@dataclass(frozen=True)
class DfFit:
    intercept: float
    rho: float
    lag_coeffs: tuple
    residual_variance: float
    se_rho: float
    n_obs: int

    @property
    def tstat(self):
        return (self.rho - 1.0) / self.se_rho


@dataclass(frozen=True, eq=False)
class MomentTable:
    """Prefix cross-products of ``(1, x_{t-1}, dx_{t-1..t-p}, dx_t)``.

    ``hi + lo`` is a compensated running sum; row ``r`` covers regression
    rows ``< r``.  The series is shifted by ``shift`` (its mean) first, which
    leaves every t-ratio unchanged because the regression has an intercept.
    """

    hi: np.ndarray
    lo: np.ndarray
    lag: int
    T: int
    shift: float

    def window_sums(self, window):
        """Cross-product matrix of ``window`` (regressors then response)."""
        r0, r1 = window.start, window.end - self.lag
        return (self.hi[r1] - self.hi[r0]) + (self.lo[r1] - self.lo[r0])


def _values(series):
    if isinstance(series, Series):
        return series.values
    return np.asarray(series, dtype=np.float64)


def build_moments(series, config=AdfConfig()):
    x = _values(series)
    T = x.shape[0]
    if T < config.lag + 4:
        raise SeriesTooShort(f"need at least {config.lag + 4} observations for lag {config.lag}, got {T}")
    shift = float(x.mean())
    hi, lo = kernels.prefix_moments(np.ascontiguousarray(x - shift), config.lag)
    hi.flags.writeable = False
    lo.flags.writeable = False
    return MomentTable(hi, lo, config.lag, T, shift)


def _check_window(moments, window):
    p = moments.lag
    if not 0 <= window.start < window.end < moments.T:
        raise WindowTooSmall(f"window [{window.start}, {window.end}] outside series of length {moments.T}")
    if len(window) < 2 * p + 4:
        raise WindowTooSmall(
            f"window of {len(window)} observations leaves {len(window) - 1 - p} rows for "
            f"{p + 2} regressors; need at least {2 * p + 4} observations"
        )


def df_fit(moments, window):
    """Full OLS fit of the Dickey-Fuller regression on ``window``."""
    _check_window(moments, window)
    p = moments.lag
    t, rss, var_rho, status, beta = kernels.window_fit(moments.hi, moments.lo, p, window.start, window.end)
    _raise_status(status, window)
    n = len(window) - 1 - p
    beta = np.asarray(beta, dtype=np.float64)
    rho = 1.0 + float(beta[1])
    # intercept refers to the unshifted series: a - (rho - 1) * shift
    return DfFit(
        intercept=float(beta[0]) - float(beta[1]) * moments.shift,
        rho=rho,
        lag_coeffs=tuple(float(b) for b in beta[2:]),
        residual_variance=float(rss) / (n - p - 2),
        se_rho=float(np.sqrt(var_rho)),
        n_obs=n,
    )


def df_stat(moments, window):
    """t-ratio for ``rho = 1`` against ``rho > 1`` on ``window``.

    Raises
    ------
    WindowTooSmall
        Fewer than ``2 * lag + 4`` observations in the window.
    DegenerateRegression
        Normal equations numerically singular, or an exact fit.
    """
    _check_window(moments, window)
    t, _, _, status, _ = kernels.window_fit(moments.hi, moments.lo, moments.lag, window.start, window.end)
    _raise_status(status, window)
    return float(t)


def _raise_status(status, window):
    if status == STATUS_SINGULAR:
        raise DegenerateRegression(f"singular normal equations on window [{window.start}, {window.end}]")
    if status == STATUS_ZERO_RESIDUAL:
        raise DegenerateRegression(f"zero residual variance on window [{window.start}, {window.end}]")
