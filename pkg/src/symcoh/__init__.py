"""Exact computation of symmetric-group cohomology via Fox-Neuwirth complexes."""

from .fncomplex import (
    INTEGERS,
    MOD2,
    INFINITE,
    Composition,
    DepthOrdering,
    LevelTree,
    Cochain,
    ComponentMismatchError,
    enumerate_cells,
    enumerate_labeled_cells,
    blocks,
    zero_segments,
    symm,
    shuffle_set,
    delta_unlabeled,
    delta_labeled,
    delta_cochain,
    is_cocycle,
    homotopy_P,
    chi,
)

__version__ = "0.1.0"
