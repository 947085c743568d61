"""Saturation and weak saturation in hypercubes and grids."""

from .grid import AxisSubgrid, GridSpace, enumerate_axis_subgrids
from .percolation import EdgeSubgraph, PatternFamily, is_weakly_saturated, percolate
from .wsat import build_wsat_graph, wsat_cube_formula, wsat_grid_formula
from .cycles import build_base_tree, build_cycle_tree

__all__ = [
    "AxisSubgrid", "GridSpace", "enumerate_axis_subgrids",
    "EdgeSubgraph", "PatternFamily", "is_weakly_saturated", "percolate",
    "build_wsat_graph", "wsat_cube_formula", "wsat_grid_formula",
    "build_base_tree", "build_cycle_tree",
]
__version__ = "0.1.0"
