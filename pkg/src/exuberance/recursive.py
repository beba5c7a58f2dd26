"""SADF, backward-sup (BSADF) and GSADF statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._accel import kernels
from .dickey_fuller import AdfConfig, build_moments
from .errors import AllWindowsDegenerate, ConfigError, SeriesTooShort
from .series import Series


def min_window(T, lag=0):
    """Default smallest window, ``ceil(T * (0.01 + 1.8 / sqrt(T)))`` observations."""
    if T < 20:
        raise SeriesTooShort(f"recursive tests need T >= 20, got {T}")
    # T * (0.01 + 1.8/sqrt(T)) written so integer cases stay exact
    w0 = math.ceil(0.01 * T + 1.8 * math.sqrt(T) - 1e-9)
    return max(w0, AdfConfig(lag).min_window)


@dataclass(frozen=True)
class WindowPolicy:
    """Smallest admissible window.

    ``min_window_obs=None`` selects the fractional default rule.
    """

    min_window_obs: Optional[int] = None

    @property
    def rule(self):
        return "fractional" if self.min_window_obs is None else "explicit"

    def resolve(self, T, config=AdfConfig()):
        if self.min_window_obs is None:
            w0 = min_window(T, config.lag)
        else:
            w0 = int(self.min_window_obs)
            if w0 < config.min_window:
                raise ConfigError(
                    f"min window {w0} too small for lag {config.lag}; need >= {config.min_window}"
                )
        if w0 > T:
            raise SeriesTooShort(f"min window {w0} exceeds series length {T}")
        return w0


@dataclass(frozen=True, eq=False)
class BsadfSequence:
    """Backward-sup statistic per window endpoint.

    ``stats[j]`` belongs to series index ``endpoints[j] = w0 - 1 + j``.
    Endpoints whose every window is degenerate hold NaN and are flagged.
    """

    endpoints: np.ndarray
    stats: np.ndarray
    argmax_start: np.ndarray
    w0: int
    degenerate_windows: int = 0

    def __len__(self):
        return self.stats.shape[0]

    @property
    def degenerate(self):
        return np.isnan(self.stats)


@dataclass(frozen=True, eq=False)
class TestResult:
    __test__ = False

    sadf: float
    gsadf: float
    sadf_sequence: np.ndarray
    bsadf: BsadfSequence
    lag: int
    w0: int
    T: int
    name: str
    degenerate_windows: int = 0
    config: dict = field(default_factory=dict)

    @property
    def df_full(self):
        return float(self.sadf_sequence[-1])


def _prepare(series, config, policy):
    x = series.values if isinstance(series, Series) else np.asarray(series, dtype=np.float64)
    w0 = policy.resolve(x.shape[0], config)
    return build_moments(x, config), w0


def _all_nan(a):
    return a.size == 0 or bool(np.all(np.isnan(a)))


def run_sadf(series, config=AdfConfig(), policy=WindowPolicy()):
    """Forward-expanding sup: windows ``[0, k]`` for ``k = w0-1 .. T-1``.

    Returns ``(sadf, sequence)``; degenerate windows are NaN in the sequence
    and skipped by the sup.
    """
    moments, w0 = _prepare(series, config, policy)
    seq = np.asarray(kernels.forward_sweep(moments.hi, moments.lo, config.lag, w0))
    if _all_nan(seq):
        raise AllWindowsDegenerate("every forward window is degenerate")
    return float(np.nanmax(seq)), seq


def _bsadf_from_moments(moments, config, w0):
    stats, starts, forward, ndeg = kernels.bsadf(moments.hi, moments.lo, config.lag, w0)
    stats = np.asarray(stats)
    if _all_nan(stats):
        raise AllWindowsDegenerate("every window at every endpoint is degenerate")
    seq = BsadfSequence(
        endpoints=np.arange(w0 - 1, moments.T),
        stats=stats,
        argmax_start=np.asarray(starts),
        w0=w0,
        degenerate_windows=int(np.sum(ndeg)),
    )
    return seq, np.asarray(forward)


def run_bsadf(series, config=AdfConfig(), policy=WindowPolicy()):
    """For each endpoint, the sup over starts ``0 .. r2 - w0 + 1``.

    Ties resolve to the smallest start.
    """
    moments, w0 = _prepare(series, config, policy)
    return _bsadf_from_moments(moments, config, w0)[0]


def run_gsadf(series, config=AdfConfig(), policy=WindowPolicy()):
    moments, w0 = _prepare(series, config, policy)
    bs, forward = _bsadf_from_moments(moments, config, w0)
    if _all_nan(forward):
        raise AllWindowsDegenerate("every forward window is degenerate")
    name = series.name if isinstance(series, Series) else "series"
    return TestResult(
        sadf=float(np.nanmax(forward)),
        gsadf=float(np.nanmax(bs.stats)),
        sadf_sequence=forward,
        bsadf=bs,
        lag=config.lag,
        w0=w0,
        T=moments.T,
        name=name,
        degenerate_windows=bs.degenerate_windows,
        config={"lag": config.lag, "min_window": w0, "rule": policy.rule},
    )
