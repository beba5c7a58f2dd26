import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exuberance.critical_values import CvSequence
from exuberance.datestamp import StampConfig, default_min_duration, exceedance_runs, stamp
from exuberance.errors import ConfigError, LengthMismatch
from exuberance.recursive import BsadfSequence
from exuberance.series import Series, monthly_calendar


def bsadf_of(stats, w0=5):
    stats = np.asarray(stats, dtype=float)
    n = stats.size
    return BsadfSequence(np.arange(w0 - 1, w0 - 1 + n), stats, np.zeros(n, dtype=int), w0)


def series_for(n, w0=5):
    T = n + w0 - 1
    return Series(monthly_calendar("1999-01", T), np.arange(T, dtype=float))


class TestDefaultMinDuration:
    @pytest.mark.parametrize("T, expected", [(200, 6), (20, 3), (2, 1)])
    def test_values(self, T, expected):
        assert default_min_duration(T) == expected

    def test_too_small(self):
        with pytest.raises(ConfigError):
            default_min_duration(1)


class TestStamp:
    def test_rule_example(self):
        stats = [-1, 0.5, 2.0, 2.5, 1.8, 0.4, 2.2, 0.1]
        eps = stamp(bsadf_of(stats), CvSequence(0.95, np.ones(8)), StampConfig(2, 0.95), series_for(8))
        assert len(eps) == 1
        e = eps[0]
        assert (e.start_index, e.end_index, e.peak_index, e.peak_stat) == (2, 4, 3, 2.5)
        # endpoint k maps to observation k + w0 - 1 = k + 4
        assert e.start_date == "1999-07" and e.end_date == "1999-09" and e.peak_date == "1999-08"

    def test_all_below(self):
        eps = stamp(bsadf_of([0.1] * 6), CvSequence(0.95, np.ones(6)), StampConfig(1), series_for(6))
        assert eps == []

    def test_no_merging(self):
        stats = [2, 2, 2, 0, 2, 2, 2]
        eps = stamp(bsadf_of(stats), CvSequence(0.95, np.ones(7)), StampConfig(3), series_for(7))
        assert [(e.start_index, e.end_index) for e in eps] == [(0, 2), (4, 6)]

    def test_equality_is_not_exceedance(self):
        eps = stamp(bsadf_of([1.0, 1.0]), CvSequence(0.95, np.ones(2)), StampConfig(1), series_for(2))
        assert eps == []

    def test_nan_never_exceeds(self):
        runs = exceedance_runs([2.0, np.nan, 2.0], [1.0, 1.0, 1.0])
        assert runs == [(0, 0), (2, 2)]

    def test_default_duration_uses_series_length(self):
        # series of 12 obs: ceil(log 12) = 3
        stats = [2, 2, 0, 2, 2, 2, 0, 0]
        eps = stamp(bsadf_of(stats), CvSequence(0.95, np.ones(8)), StampConfig(None), series_for(8))
        assert [(e.start_index, e.end_index) for e in eps] == [(3, 5)]

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            stamp(bsadf_of([1, 2]), CvSequence(0.95, np.ones(3)), StampConfig(1), series_for(3))

    def test_level_mismatch(self):
        with pytest.raises(ConfigError):
            stamp(bsadf_of([1, 2]), CvSequence(0.99, np.ones(2)), StampConfig(1, 0.95), series_for(2))

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            StampConfig(0)
        with pytest.raises(ConfigError):
            StampConfig(2, 1.2)


stat_lists = st.lists(st.floats(-3, 5, allow_nan=False), min_size=1, max_size=60)


@settings(max_examples=100, deadline=None)
@given(stats=stat_lists, cv=st.floats(-1, 3), min_dur=st.integers(1, 6))
def test_episodes_disjoint_ordered_and_exceeding(stats, cv, min_dur):
    n = len(stats)
    eps = stamp(bsadf_of(stats), CvSequence(0.9, np.full(n, cv)), StampConfig(min_dur, 0.9), series_for(n))
    last = -1
    for e in eps:
        assert e.start_index > last
        assert e.duration >= min_dur
        assert all(stats[k] > cv for k in range(e.start_index, e.end_index + 1))
        assert e.peak_stat == max(stats[e.start_index:e.end_index + 1])
        last = e.end_index


@settings(max_examples=100, deadline=None)
@given(stats=stat_lists, base=st.floats(-1, 2), bumps=st.tuples(st.floats(0, 1), st.floats(0, 1)),
       min_dur=st.integers(1, 4))
def test_raising_level_never_enlarges(stats, base, bumps, min_dur):
    n = len(stats)
    s = series_for(n)
    levels = [(0.90, base), (0.95, base + bumps[0]), (0.99, base + bumps[0] + bumps[1])]
    sets = []
    for level, c in levels:
        eps = stamp(bsadf_of(stats), CvSequence(level, np.full(n, c)), StampConfig(min_dur, level), s)
        sets.append([set(range(e.start_index, e.end_index + 1)) for e in eps])
    for inner, outer in ((sets[2], sets[1]), (sets[1], sets[0])):
        for ep in inner:
            assert any(ep <= o for o in outer)
