"""Separation systems, tangles, blocks and profiles, and their dual trees."""

__version__ = "0.1.0"

from ._accel import backend
from .blocks import Block, block_number, find_k_blocks, is_inseparable, orientation_from_block
from .duality import (
    STree,
    StarFamily,
    TreeDecomposition,
    close_and_standardize,
    emulates,
    is_separable,
    shift_sep,
    stree_exists,
    stree_to_treedec,
    uncross_family,
    uncross_pair,
    verify_duality,
    verify_stree,
)
from .families import (
    ForbiddenFamily,
    Orientation,
    avoids,
    family_Bk,
    family_P,
    family_Sn,
    family_T,
    family_Tstar,
    find_f_tangle,
    orientation_flags,
    two_profile,
)
from .graphsep import (
    Graph,
    GraphParseError,
    GraphSeparation,
    enumerate_Sk,
    interior,
    is_separation,
    load_graph,
)
from .sepsys import (
    DomainError,
    InvariantError,
    OrientedSep,
    SepSystem,
    SepUniverse,
    classify,
    corner,
    is_nested,
    is_star,
    validate_universe,
)
from .widths import (
    adjusted_branch_width,
    block_width,
    profile_width,
    tree_width,
    verify_inequalities,
)
