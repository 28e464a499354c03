"""Joint repair of functional dependencies and data under a cell-change budget."""

from fdrepair.conflicts import (
    ConflictGraph,
    DifferenceCatalog,
    VertexCover,
    build_conflict_graph,
    check_satisfies,
    delta_p,
    difference_sets,
    diffset_violates,
    greedy_vertex_cover,
)
from fdrepair.datarepair import EmptyRepair, RepairResult, find_assignment, repair_data, repair_data_fds
from fdrepair.errors import ExtensionError, ParseError, RepairError, SchemaError
from fdrepair.fds import FD, apply_extension, dist_c, make_weight, parse_fds
from fdrepair.multirepair import find_repairs_fds, materialize_frontier, sample_repairs
from fdrepair.relation import Schema, Variable, VInstance, cells_equal, dist_d, load_csv
from fdrepair.search import SearchSpace, modify_fds_astar, modify_fds_bestfirst

__version__ = "0.1.0"

__all__ = [
    "ConflictGraph",
    "DifferenceCatalog",
    "VertexCover",
    "build_conflict_graph",
    "check_satisfies",
    "delta_p",
    "difference_sets",
    "diffset_violates",
    "greedy_vertex_cover",
    "EmptyRepair",
    "RepairResult",
    "find_assignment",
    "repair_data",
    "repair_data_fds",
    "ExtensionError",
    "ParseError",
    "RepairError",
    "SchemaError",
    "FD",
    "apply_extension",
    "dist_c",
    "make_weight",
    "parse_fds",
    "find_repairs_fds",
    "materialize_frontier",
    "sample_repairs",
    "Schema",
    "Variable",
    "VInstance",
    "cells_equal",
    "dist_d",
    "load_csv",
    "SearchSpace",
    "modify_fds_astar",
    "modify_fds_bestfirst",
]
