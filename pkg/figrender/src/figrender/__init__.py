"""Figure rendering for mkgauss grid and histogram CSVs."""

from .render import count_modes, isoline_params, render_curves, render_grid, render_hist
from .schemas import GridData, HistData, SchemaError, read_grid_csv, read_hist_csv

__version__ = "0.1.0"
