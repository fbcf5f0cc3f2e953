"""Figures from simulator CSV output.

The tool draws only numbers that already exist in the CSV or its run
manifest; it performs no physics. Intensity maps become contour images
(log color scale, masked cells blanked, optional ridge overlay from the
manifest constants), parameter sweeps become line plots with gaps where
a row reported no result.
"""

__version__ = "0.1.0"

from .reader import RenderError, Table, column, load_manifest, map_grid, numeric, read_table
from .figures import PlotSpec, render_contour, render_sweep, ridge_line
