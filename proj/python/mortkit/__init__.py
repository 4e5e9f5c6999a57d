"""Mortality modeling toolkit.

Abridged life tables, log-bilinear (Lee-Carter) mortality fits and
random-walk index forecasts, backed by the C++ core in `mortkit._mortkit`.
Bundled abridged mortality data for Peru (1950-2020) lives under
``mortkit.data_dir()``.
"""

from pathlib import Path

from ._mortkit import *  # noqa: F401,F403
from ._mortkit import __version__  # noqa: F401


def data_dir() -> Path:
    """Directory with the bundled datasets (peru_*_q.csv, peru_params_*.csv)."""
    return Path(__file__).resolve().parent / "data"
