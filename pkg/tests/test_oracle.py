"""The brute-force oracles checked on hand-countable cases."""

import pytest

from restruct import InputError, Money, TooLargeError
from restruct.io import assignment_stage, hmmd_stage, knapsack_stage, multiple_choice_stage
from restruct.oracle import (
    MAX_KNAPSACK_ITEMS,
    oracle_assignment,
    oracle_hmmd,
    oracle_knapsack,
    oracle_mst,
    oracle_multiple_choice,
    oracle_pareto,
    oracle_restructure,
    oracle_steiner,
)
from restruct.restructure import reassignment_op
from restruct.scales import QualityVector
from restruct.solvers import (
    AssignmentInstance,
    Item,
    KnapsackInstance,
    MultipleChoiceInstance,
    WeightedGraph,
    edge,
    knapsack_from_rows,
)

from fx import doc

M = Money.of
Q = QualityVector.of


def test_course_initial_stage():
    rep = oracle_knapsack(knapsack_stage(doc("course"), 0).instance)
    assert rep.objective == M("22.0")
    assert rep.optimum == {1, 2, 4, 8, 11, 12, 13}
    assert rep.space_size == 2**13


def test_no_items():
    rep = oracle_knapsack(KnapsackInstance((), M(3)))
    assert (rep.objective, rep.n_optima, rep.optimum, rep.space_size) == (0, 1, frozenset(), 1)


def test_three_items():
    rep = oracle_knapsack(knapsack_from_rows([(1, 1, 1), (2, 2, 1), (3, 3, 3)], 2))
    assert rep.objective == 3 and rep.optimum == {1, 2} and rep.space_size == 8


def test_ties_are_counted_and_resolved_by_ids():
    rep = oracle_knapsack(knapsack_from_rows([(1, 1, 1), (2, 1, 1), (3, 1, 1)], 1))
    assert rep.n_optima == 3 and rep.optimum == {1}


def test_knapsack_cap():
    rows = [(i, 1, 1) for i in range(MAX_KNAPSACK_ITEMS + 1)]
    with pytest.raises(TooLargeError):
        oracle_knapsack(knapsack_from_rows(rows, 3))


def test_multiple_choice_counts_every_selection():
    inst = MultipleChoiceInstance(
        ((Item(1, M(5), M(1)), Item(2, M(7), M(1))), (Item(3, M(1), M(1)),)), M(1)
    )
    rep = oracle_multiple_choice(inst)
    assert rep.optimum == (2, None) and rep.objective == 7
    assert rep.space_size == 3 * 2


def test_assignment_by_permutations():
    rep = oracle_assignment(AssignmentInstance([[1, 2, 3], [3, 1, 2], [2, 3, 1]]))
    assert rep.objective == 9 and rep.space_size == 6
    assert rep.n_optima == 1 and rep.optimum.s == (3, 1, 2)


def test_mst_triangle():
    g = WeightedGraph.build([1, 2, 3], [(1, 2, 1), (2, 3, 2), (1, 3, 3)])
    rep = oracle_mst(g)
    assert rep.objective == 3 and rep.optimum.edges == {edge(1, 2), edge(2, 3)}
    assert rep.space_size == 3


def test_steiner_star():
    g = WeightedGraph.build(
        [1, 2, 3], [(1, 2, 5), (2, 3, 5), (1, 3, 5), (1, "c", 1), (2, "c", 1), (3, "c", 1)], steiner=["c"]
    )
    rep = oracle_steiner(g)
    assert rep.objective == 3 and rep.optimum.steiner == {"c"}


def test_hmmd_front_of_stage_one():
    sys1 = hmmd_stage(doc("team"), 1).system
    rep = oracle_hmmd(sys1)
    assert ("L2", "R4", "E2", "M2") in rep.optimum
    assert rep.space_size == sys1.size


def test_pareto_singleton_and_equal_pair():
    assert oracle_pareto([("x", Q(2, 1, 1, 1))]).optimum == {"x"}
    assert oracle_pareto([("a", Q(2, 3, 0, 0)), ("b", Q(2, 3, 0, 0))]).optimum == {"a", "b"}
    assert oracle_pareto([("a", (1, 2)), ("b", (2, 1)), ("c", (2, 2))]).optimum == {"a", "b"}


# restructuring -------------------------------------------------------------------------


def _sensor_inputs():
    d = doc("sensor")
    st = multiple_choice_stage(d, 1)
    return {"m0": multiple_choice_stage(d, 0).solution, "goal": st.instance, "costs": st.costs, "target": st.solution}


def test_sensor_reduced_problem():
    inputs = _sensor_inputs()
    start = sum(inputs["goal"].by_id[c].profit for c in inputs["m0"])
    rep = oracle_restructure("multiple-choice", inputs, 5)
    assert rep.optimum == ("R2", "P2", "D2", "Q1")
    assert rep.objective - start == 2
    assert rep.space_size == 4  # two independent ops


def test_sensor_zero_budget_changes_nothing():
    inputs = _sensor_inputs()
    assert oracle_restructure("multiple-choice", inputs, 0).optimum == inputs["m0"]


def _access_inputs():
    d = doc("access")
    cur = assignment_stage(d, 0).assignment
    st = assignment_stage(d, 1)
    ops = [reassignment_op(e, cur[e], to, st.costs, st.profit, label) for label, e, to in st.ops]
    return {"s1": cur, "ops": ops, "capacity": st.capacity}


def test_access_points():
    rep = oracle_restructure("assignment", _access_inputs(), 5)
    assert rep.optimum == {"op2", "op3"} and rep.objective == 6
    assert rep.space_size == 8


def test_min_feasible_cost_ignores_budget():
    rep = oracle_restructure("assignment", _access_inputs(), 0)
    assert rep.optimum == frozenset() and rep.min_feasible_cost == 0


def test_unknown_kind():
    with pytest.raises(InputError):
        oracle_restructure("sudoku", {}, 1)
