"""Generalized (a, b) knight's tours: constructions, search and verification."""
from .board import (BoardError, BoardSpec, Feasibility, LinkKind, LinkUndefined, MoveSpec, Obstruction, Tour,
                    VerifyReport, contains_link, feasibility_check, find_link, is_move, legal_moves, link_edge,
                    verify_tour)
from .merge import Bridge, CycleSet, MergeError, Unmergeable, compound, find_bridge, merge_all
from .search import SearchConfig, SearchTimeout, grid_ham_path_between, ham_cycle_search, two_factor
from .a1 import a1_tour, base_case_tour, build_guide, extend_by_rim, level_partition, replicate_square
from .multidim import extend_a1_to_d, extend_ab_to_d, grid_ham_path
from .ab23 import corner_check, extend_23, rim6_cycles, tour_23
from .ab25 import assemble_rect, assemble_strip, brick_cover, strip_tour, tour_25
from .formats import read_tour, write_tour
from .cli import construct_tour

__version__ = "0.1.0"

__all__ = [
    "BoardError", "BoardSpec", "Feasibility", "LinkKind", "LinkUndefined", "MoveSpec", "Obstruction", "Tour",
    "VerifyReport", "contains_link", "feasibility_check", "find_link", "is_move", "legal_moves", "link_edge",
    "verify_tour", "Bridge", "CycleSet", "MergeError", "Unmergeable", "compound", "find_bridge", "merge_all",
    "SearchConfig", "SearchTimeout", "grid_ham_path_between", "ham_cycle_search", "two_factor", "a1_tour",
    "base_case_tour", "build_guide", "extend_by_rim", "level_partition", "replicate_square", "extend_a1_to_d",
    "extend_ab_to_d", "grid_ham_path", "corner_check", "extend_23", "rim6_cycles", "tour_23", "assemble_rect",
    "assemble_strip", "brick_cover", "strip_tour", "tour_25", "read_tour", "write_tour", "construct_tour",
]
