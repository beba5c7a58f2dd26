"""Synthetic random walks with embedded explosive episodes.

Outside episodes the level follows a random walk; inside episode ``[a, b]``
(inclusive indices) it follows ``x_t = delta * x_{t-1} + e_t``.  The first
observation after an episode collapses to a re-initialisation level plus a
fresh innovation, after which the random walk resumes.  Innovations are
``noise_sd * N(0, 1)`` from ``numpy.random.default_rng(seed)``, one per step.

Both collapse policies are approximations of an unspecified O(1) post-crash
level: ``"origination"`` returns to the value at the episode's first index,
``"fixed"`` returns to ``reinit_value``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidSpec
from .series import MONTHLY, Series, monthly_calendar

BASE_LEVEL = 100.0
CALENDAR_START = "2000-01"
REINIT_POLICIES = ("origination", "fixed")


@dataclass(frozen=True)
class DgpSpec:
    T: int
    episodes: tuple = ()
    delta: float = 1.06
    noise_sd: float = 1.0
    seed: int = 0
    reinit: str = "origination"
    reinit_value: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "episodes", tuple(tuple(map(float, e)) for e in self.episodes))
        if self.T < 20:
            raise InvalidSpec(f"T must be >= 20, got {self.T}")
        if not self.delta > 1.0:
            raise InvalidSpec(f"explosive root must exceed 1, got {self.delta!r}")
        if not self.noise_sd > 0.0:
            raise InvalidSpec(f"noise_sd must be positive, got {self.noise_sd!r}")
        if self.reinit not in REINIT_POLICIES:
            raise InvalidSpec(f"reinit must be one of {REINIT_POLICIES}, got {self.reinit!r}")
        if self.reinit == "fixed" and self.reinit_value is None:
            raise InvalidSpec("reinit='fixed' needs reinit_value")
        prev_end = 0
        for a, b in self.episodes:
            if not 0.0 < a < b < 1.0:
                raise InvalidSpec(f"episode ({a}, {b}) must satisfy 0 < start < end < 1")
            ia, ib = frac_to_index(a, self.T), frac_to_index(b, self.T)
            if ia >= ib:
                raise InvalidSpec(f"episode ({a}, {b}) is empty at T={self.T}")
            if ia <= prev_end:
                raise InvalidSpec(f"episode ({a}, {b}) overlaps or abuts the previous one")
            prev_end = ib
        if prev_end >= self.T:
            raise InvalidSpec("last episode runs past the sample end")

    @property
    def index_episodes(self):
        return [(frac_to_index(a, self.T), frac_to_index(b, self.T)) for a, b in self.episodes]


@dataclass(frozen=True, eq=False)
class LabeledSeries:
    series: Series
    true_episodes: list


def frac_to_index(frac, T):
    return int(math.floor(frac * T + 0.5))


def innovations(T, noise_sd, seed):
    """The ``T - 1`` step innovations shared by every generator here."""
    return noise_sd * np.random.default_rng(seed).standard_normal(T - 1)


def _as_series(values, name):
    return Series(monthly_calendar(CALENDAR_START, values.shape[0]), values, MONTHLY, name)


def gen_random_walk(T, noise_sd=1.0, seed=0, name="random_walk"):
    if T < 1:
        raise InvalidSpec(f"T must be >= 1, got {T}")
    if not noise_sd > 0.0:
        raise InvalidSpec(f"noise_sd must be positive, got {noise_sd!r}")
    x = np.empty(T)
    x[0] = BASE_LEVEL
    x[1:] = BASE_LEVEL + np.cumsum(innovations(T, noise_sd, seed))
    return _as_series(x, name)


def gen_multi_bubble(spec, name="multi_bubble"):
    """Generate the multiple-episode process with its ground-truth labels."""
    eps = innovations(spec.T, spec.noise_sd, spec.seed)
    labels = spec.index_episodes
    if not labels:
        return LabeledSeries(gen_random_walk(spec.T, spec.noise_sd, spec.seed, name), [])

    regime = np.zeros(spec.T, dtype=np.int8)  # 0 walk, 1 explosive, 2 collapse
    for a, b in labels:
        regime[a:b + 1] = 1
        if b + 1 < spec.T:
            regime[b + 1] = 2
    origin = {b + 1: a for a, b in labels}

    x = np.empty(spec.T)
    x[0] = BASE_LEVEL
    for t in range(1, spec.T):
        e = eps[t - 1]
        if regime[t] == 1:
            x[t] = spec.delta * x[t - 1] + e
        elif regime[t] == 2:
            level = x[origin[t]] if spec.reinit == "origination" else spec.reinit_value
            x[t] = level + e
        else:
            x[t] = x[t - 1] + e
    return LabeledSeries(_as_series(x, name), labels)
