"""Figure rendering for the detector-forecast file formats.

Everything here draws from exported CSV/JSON tables alone; no physics is
recomputed.  See io.py for the accepted schemas.
"""

from .io import SchemaError, read_bound, read_table
from .plots import plot_budget, plot_sensitivity

__all__ = [
    "SchemaError",
    "read_bound",
    "read_table",
    "plot_budget",
    "plot_sensitivity",
]

__version__ = "0.1.0"
