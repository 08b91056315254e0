"""One-stage restructuring for each base problem."""

from .model import (
    ChangeOp,
    ElementSetDelta,
    OpKind,
    RestructurePlan,
    SolutionDiff,
    change_cost,
    diff_sets,
    diff_subsets,
    element_set_delta,
    plan_key,
)
from .subsets import restructure_knapsack, restructure_multiple_choice
from .assignment import reassignment_op, restructure_assignment
from .hmmd import change_count, goal_reference, hmmd_proximity, restructure_hmmd
from .partitions import (
    LayeredRanking,
    Partition,
    apply_moves,
    layer_distance,
    moves_toward,
    restructure_clustering,
    restructure_ranking,
)
from .trees import restructure_steiner, restructure_tree

__all__ = [
    "ChangeOp",
    "ElementSetDelta",
    "LayeredRanking",
    "OpKind",
    "Partition",
    "RestructurePlan",
    "SolutionDiff",
    "apply_moves",
    "change_cost",
    "change_count",
    "diff_sets",
    "diff_subsets",
    "element_set_delta",
    "goal_reference",
    "hmmd_proximity",
    "layer_distance",
    "moves_toward",
    "plan_key",
    "reassignment_op",
    "restructure_assignment",
    "restructure_clustering",
    "restructure_hmmd",
    "restructure_knapsack",
    "restructure_multiple_choice",
    "restructure_ranking",
    "restructure_steiner",
    "restructure_tree",
]
