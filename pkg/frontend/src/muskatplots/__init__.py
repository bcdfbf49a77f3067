"""Figure pipeline for muskatlab run logs."""

from .figures import FIGURE_KINDS, FigureSpec, render
from .logdir import LogDir, SchemaError

__version__ = "0.1.0"
