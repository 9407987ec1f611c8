"""Lattices of coloured graphs and symmetry-restricted Gaussian graphical models."""
from __future__ import annotations

__version__ = "0.1.0"

from .partition import *  # noqa: F401,F403
from .coloured_graph import *  # noqa: F401,F403
from .classes import *  # noqa: F401,F403
from .gaussian import *  # noqa: F401,F403
from .search import *  # noqa: F401,F403
from .io import graph_from_dict, graph_to_json, load_graph, render_text  # noqa: F401
from .datasets import load_frets, load_marks  # noqa: F401
