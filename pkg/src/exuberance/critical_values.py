"""Monte Carlo null distributions, critical values and p-values.

Null series are driftless Gaussian random walks ``y_t = y_{t-1} + e_t`` with
``y_0 = 0``; the ``T`` observations are ``y_1 .. y_T``.  Replication ``j`` draws
its innovations from its own substream: a Philox generator keyed by
``numpy.random.SeedSequence(seed, spawn_key=(j,))`` (SeedSequence's hash is
the mixing function), with normals from numpy's ziggurat sampler.  Draws are
stored by replication index, so results do not depend on how replications are
scheduled across threads.
"""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._accel import BACKEND, kernels, set_workers
from .dickey_fuller import AdfConfig
from .errors import ConfigError, EmptyDraws, SimulationFailed
from .recursive import WindowPolicy

logger = logging.getLogger(__name__)

GENERATOR_VERSION = "philox-seedseq-ziggurat-v1"
STANDARD_LEVELS = (0.90, 0.95, 0.99)
STATISTICS = ("sadf", "gsadf")


@dataclass(frozen=True, eq=False)
class NullDraws:
    T: int
    reps: int
    seed: int
    lag: int
    w0: int
    sadf_draws: np.ndarray
    gsadf_draws: np.ndarray
    bsadf_draws: np.ndarray
    redraws: int = 0

    def draws(self, kind):
        if kind not in STATISTICS:
            raise ConfigError(f"unknown statistic {kind!r}")
        return self.sadf_draws if kind == "sadf" else self.gsadf_draws

    def identical(self, other):
        return (
            (self.T, self.reps, self.seed, self.lag, self.w0, self.redraws)
            == (other.T, other.reps, other.seed, other.lag, other.w0, other.redraws)
            and np.array_equal(self.sadf_draws, other.sadf_draws)
            and np.array_equal(self.gsadf_draws, other.gsadf_draws)
            and np.array_equal(self.bsadf_draws, other.bsadf_draws, equal_nan=True)
        )


@dataclass(frozen=True)
class CriticalValueTable:
    levels: tuple
    values: dict  # statistic -> tuple of quantiles aligned with levels

    @classmethod
    def from_mapping(cls, kind, mapping):
        """Build a one-statistic table from ``{level: value}``."""
        levels = tuple(sorted(float(k) for k in mapping))
        vals = tuple(float(mapping[k]) for k in sorted(mapping))
        return cls(levels, {kind: vals})

    def value(self, kind, level):
        for lv, v in zip(self.levels, self.values[kind]):
            if abs(lv - level) < 1e-12:
                return v
        raise ConfigError(f"level {level} not in table {self.levels}")

    def to_dict(self):
        return {
            "levels": list(self.levels),
            "values": {k: list(v) for k, v in sorted(self.values.items())},
        }


@dataclass(frozen=True, eq=False)
class CvSequence:
    level: float
    values: np.ndarray

    def __len__(self):
        return self.values.shape[0]


class Significance(enum.Enum):
    AT_1PCT = "at_1pct"
    AT_5PCT = "at_5pct"
    AT_10PCT = "at_10pct"
    NOT_SIGNIFICANT = "not_significant"

    @property
    def mark(self):
        # table convention: ** 1%, *** 5%, * 10%
        return {"at_1pct": "**", "at_5pct": "***", "at_10pct": "*"}.get(self.value, "")

    @property
    def rejects_at_5pct(self):
        return self in (Significance.AT_1PCT, Significance.AT_5PCT)


def check_levels(levels):
    levels = tuple(float(lv) for lv in levels)
    if not levels:
        raise ConfigError("at least one quantile level is required")
    for lv in levels:
        if not 0.0 < lv < 1.0:
            raise ConfigError(f"quantile level {lv} outside (0, 1)")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ConfigError(f"quantile levels must be strictly increasing: {levels}")
    return levels


def _substream(seed, index):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


def null_paths(T, seed, indices):
    """Centred random-walk paths, one row per substream index."""
    Y = np.empty((len(indices), T))
    for row, j in enumerate(indices):
        Y[row] = np.cumsum(_substream(seed, j).standard_normal(T))
    Y -= Y.mean(axis=1, keepdims=True)
    return Y


def _sweep(Y, lag, w0, workers):
    if BACKEND == "numba":
        prev = set_workers(workers)
        try:
            return kernels.gsadf_batch(Y, lag, w0)
        finally:
            set_workers(prev)
    workers = max(1, int(workers or 1))
    if workers == 1 or Y.shape[0] < 2:
        return kernels.gsadf_batch(Y, lag, w0)
    chunks = np.array_split(np.arange(Y.shape[0]), workers)
    with ThreadPoolExecutor(workers) as pool:
        parts = list(pool.map(lambda idx: kernels.gsadf_batch(Y[idx], lag, w0), chunks))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(4))


def _cache_key(T, reps, seed, lag, w0):
    meta = {
        "T": T, "reps": reps, "seed": seed, "lag": lag, "w0": w0,
        "generator": GENERATOR_VERSION, "numpy": np.__version__, "backend": BACKEND,
    }
    digest = hashlib.sha256(json.dumps(meta, sort_keys=True).encode()).hexdigest()[:20]
    return digest, meta


def _load_cached(path, meta):
    try:
        with np.load(path, allow_pickle=False) as z:
            if json.loads(str(z["meta"])) != meta:
                return None
            return NullDraws(
                meta["T"], meta["reps"], meta["seed"], meta["lag"], meta["w0"],
                z["sadf"], z["gsadf"], z["bsadf"], int(z["redraws"]),
            )
    except (OSError, KeyError, ValueError):
        return None


def _save_cached(path, meta, draws):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".npz")
    os.close(fd)
    try:
        np.savez(
            tmp, meta=np.array(json.dumps(meta, sort_keys=True)),
            sadf=draws.sadf_draws, gsadf=draws.gsadf_draws, bsadf=draws.bsadf_draws,
            redraws=np.array(draws.redraws),
        )
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def simulate_null(T, reps=1000, seed=0, config=AdfConfig(), policy=WindowPolicy(),
                  workers=None, cache_dir=None):
    """Simulate SADF, GSADF and BSADF draws under a unit-root null.

    A replication whose every window is degenerate is replaced by the next
    unused substream (``reps, reps + 1, ...``); more than ``reps // 10`` such
    replacements raises :class:`SimulationFailed`.
    """
    if reps < 100:
        raise ConfigError(f"reps must be >= 100, got {reps}")
    if not 0 <= int(seed) < 2 ** 64:
        raise ConfigError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    seed = int(seed)
    w0 = policy.resolve(T, config)

    path = meta = None
    if cache_dir is not None:
        key, meta = _cache_key(T, reps, seed, config.lag, w0)
        path = os.path.join(cache_dir, f"null-{key}.npz")
        hit = _load_cached(path, meta)
        if hit is not None:
            logger.debug("null draws cache hit %s", path)
            return hit

    Y = null_paths(T, seed, range(reps))
    sadf, gsadf, bs, _ = (np.array(a) for a in _sweep(Y, config.lag, w0, workers))

    redraws = 0
    next_index = reps
    for i in np.flatnonzero(np.isnan(gsadf) | np.isnan(sadf)):
        while True:
            if redraws >= max(1, reps // 10):
                raise SimulationFailed(f"more than {reps // 10} degenerate null replications")
            y = null_paths(T, seed, [next_index])
            next_index += 1
            redraws += 1
            s, g, b, _ = kernels.gsadf_batch(y, config.lag, w0)
            if not (np.isnan(g[0]) or np.isnan(s[0])):
                sadf[i], gsadf[i], bs[i] = s[0], g[0], b[0]
                break
    if redraws:
        logger.info("replaced %d degenerate null replications", redraws)

    draws = NullDraws(T, reps, seed, config.lag, w0, sadf, gsadf, bs, redraws)
    if path is not None:
        _save_cached(path, meta, draws)
    return draws


def empirical_quantile(values, levels):
    """Type-7 (linear interpolation) quantiles of ``values``."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptyDraws("no draws")
    return np.quantile(values, check_levels(levels), method="linear", axis=0)


def quantile_table(draws, levels=STANDARD_LEVELS):
    levels = check_levels(levels)
    return CriticalValueTable(
        levels,
        {k: tuple(float(v) for v in empirical_quantile(draws.draws(k), levels)) for k in STATISTICS},
    )


def bsadf_cv_sequence(draws, level=0.95):
    """Per-endpoint null quantile of the backward-sup statistic."""
    (level,) = check_levels([level])
    if draws.bsadf_draws.size == 0:
        raise EmptyDraws("no BSADF draws")
    vals = np.nanquantile(draws.bsadf_draws, level, method="linear", axis=0)
    return CvSequence(level, np.asarray(vals, dtype=np.float64))


def p_value(stat, draws):
    """Share of null draws strictly greater than ``stat``."""
    draws = np.asarray(draws, dtype=np.float64)
    if draws.size == 0:
        raise EmptyDraws("no draws")
    return float(np.count_nonzero(draws > stat)) / draws.size


def classify(stat, table, kind="gsadf"):
    """Strongest standard level at which ``stat`` rejects (ties reject)."""
    for level, sig in ((0.99, Significance.AT_1PCT), (0.95, Significance.AT_5PCT),
                       (0.90, Significance.AT_10PCT)):
        if stat >= table.value(kind, level):
            return sig
    return Significance.NOT_SIGNIFICANT
