"""Exact desk-scale solvers for the per-stage base problems."""

from .assignment import AssignmentInstance, Permutation, solve_assignment
from .hmmd import (
    DA,
    Component,
    CompositeSolution,
    MorphSystem,
    admissible_composites,
    evaluate_composite,
    hmmd_synthesize,
)
from .knapsack import (
    GroupSelection,
    Item,
    KnapsackInstance,
    MultipleChoiceInstance,
    SubsetSolution,
    knapsack_from_rows,
    solve_knapsack,
    solve_multiple_choice,
)
from .trees import TreeSolution, WeightedGraph, edge, minimum_spanning_tree, steiner_tree

__all__ = [
    "DA",
    "AssignmentInstance",
    "Component",
    "CompositeSolution",
    "GroupSelection",
    "Item",
    "KnapsackInstance",
    "MorphSystem",
    "MultipleChoiceInstance",
    "Permutation",
    "SubsetSolution",
    "TreeSolution",
    "WeightedGraph",
    "admissible_composites",
    "edge",
    "evaluate_composite",
    "hmmd_synthesize",
    "knapsack_from_rows",
    "minimum_spanning_tree",
    "solve_assignment",
    "solve_knapsack",
    "solve_multiple_choice",
    "steiner_tree",
]
