"""Right-tailed recursive unit-root tests for explosive episodes in ratio series."""

__version__ = "0.1.0"

from .critical_values import (  # noqa: E402
    CriticalValueTable,
    CvSequence,
    NullDraws,
    Significance,
    bsadf_cv_sequence,
    classify,
    p_value,
    quantile_table,
    simulate_null,
)
from .datestamp import Episode, StampConfig, default_min_duration, stamp  # noqa: E402
from .dgp import DgpSpec, LabeledSeries, gen_multi_bubble, gen_random_walk  # noqa: E402
from .dickey_fuller import AdfConfig, DfFit, MomentTable, Window, build_moments, df_fit, df_stat  # noqa: E402
from .recursive import (  # noqa: E402
    BsadfSequence,
    TestResult,
    WindowPolicy,
    min_window,
    run_bsadf,
    run_gsadf,
    run_sadf,
)
from .series import ColumnSchema, Series, load_series, save_series, slice_series  # noqa: E402

__all__ = [
    "AdfConfig", "BsadfSequence", "ColumnSchema", "CriticalValueTable", "CvSequence",
    "DfFit", "DgpSpec", "Episode", "LabeledSeries", "MomentTable", "NullDraws", "Series",
    "Significance", "StampConfig", "TestResult", "Window", "WindowPolicy",
    "bsadf_cv_sequence", "build_moments", "classify", "default_min_duration", "df_fit",
    "df_stat", "gen_multi_bubble", "gen_random_walk", "load_series", "min_window",
    "p_value", "quantile_table", "run_bsadf", "run_gsadf", "run_sadf", "save_series",
    "simulate_null", "slice_series", "stamp",
]
