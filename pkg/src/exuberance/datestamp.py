"""Turning a BSADF sequence into dated exuberance episodes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, LengthMismatch


@dataclass(frozen=True)
class StampConfig:
    min_duration: Optional[int] = None  # None: ceil(log T)
    level: float = 0.95

    def __post_init__(self):
        if self.min_duration is not None and self.min_duration < 1:
            raise ConfigError(f"min_duration must be >= 1, got {self.min_duration}")
        if not 0.0 < self.level < 1.0:
            raise ConfigError(f"level {self.level} outside (0, 1)")


@dataclass(frozen=True)
class Episode:
    """A run of endpoints whose statistic exceeds its critical value.

    Indices are positions in the BSADF sequence; the matching series
    observation is ``index + w0 - 1``.
    """

    start_index: int
    end_index: int
    start_date: str
    end_date: str
    peak_stat: float
    peak_date: str
    peak_index: int

    @property
    def duration(self):
        return self.end_index - self.start_index + 1

    def series_span(self, w0):
        return self.start_index + w0 - 1, self.end_index + w0 - 1

    def to_dict(self):
        return {
            "start_index": self.start_index,
            "end_index": self.end_index,
            "start_date": self.start_date,
            "end_date": self.end_date,
            "duration": self.duration,
            "peak_stat": self.peak_stat,
            "peak_index": self.peak_index,
            "peak_date": self.peak_date,
        }


def default_min_duration(T):
    if T < 2:
        raise ConfigError(f"T must be >= 2, got {T}")
    return math.ceil(math.log(T))


def exceedance_runs(stats, cv):
    """Maximal ``(start, end)`` runs with ``stats > cv`` (NaN never exceeds)."""
    above = np.asarray(stats) > np.asarray(cv)
    edges = np.diff(np.concatenate(([0], above.astype(np.int8), [0])))
    return list(zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1) - 1))


def stamp(bsadf, cv, cfg, series):
    """Date-stamp episodes of at least ``cfg.min_duration`` consecutive exceedances."""
    stats = np.asarray(bsadf.stats)
    values = np.asarray(cv.values)
    if stats.shape != values.shape:
        raise LengthMismatch(f"BSADF has {stats.size} endpoints, critical values {values.size}")
    if abs(cfg.level - cv.level) > 1e-12:
        raise ConfigError(f"stamp level {cfg.level} differs from critical value level {cv.level}")
    min_dur = cfg.min_duration or default_min_duration(len(series))
    offset = bsadf.w0 - 1

    episodes = []
    for a, b in exceedance_runs(stats, values):
        if b - a + 1 < min_dur:
            continue
        k = int(a + np.argmax(stats[a:b + 1]))
        episodes.append(Episode(
            start_index=int(a),
            end_index=int(b),
            start_date=series.date_str(a + offset),
            end_date=series.date_str(b + offset),
            peak_stat=float(stats[k]),
            peak_date=series.date_str(k + offset),
            peak_index=k,
        ))
    return episodes
