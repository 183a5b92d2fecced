"""Figure scripts for the annealing-bounds result files.

Strictly file-to-file: every plotted number originates in a CSV/JSON
produced by the qpt-bounds CLI; nothing is recomputed here.
"""

from .plots import plot_profiles, plot_scatter, plot_wl_sweep

__version__ = "0.1.0"
