"""Figure rendering for cascade-lab CSV outputs.

Pure views of the flat files the experiment harness writes: every curve and
guide line comes from CSV bodies and their '#'-prefixed headers, nothing is
recomputed.
"""

__version__ = "0.1.0"

from .io import Table, read_table  # noqa: F401
from .figures import FIGURE_KINDS, FigureSpec, render  # noqa: F401
