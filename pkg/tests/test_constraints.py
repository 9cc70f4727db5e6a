import numpy as np
import pytest

from boxtune import (
    Constraint,
    ConstrainedObjective,
    UnknownDimension,
    check,
    make_space,
    maximize,
    wrap_constraints,
)


def vec(space, **values):
    return space.from_dict(values)


SPACE = make_space({"x": (-10.0, 10.0), "y": (-10.0, 10.0)})


def test_boundary_semantics_open_vs_closed():
    lower_open = Constraint("lower_open", "x", (2.0,))
    lower_closed = Constraint("lower_closed", "x", (2.0,))
    upper_open = Constraint("upper_open", "x", (2.0,))
    upper_closed = Constraint("upper_closed", "x", (2.0,))

    assert not lower_open.satisfied(2.0)
    assert lower_closed.satisfied(2.0)
    assert not upper_open.satisfied(2.0)
    assert upper_closed.satisfied(2.0)

    assert lower_open.satisfied(2.0 + 1e-12)
    assert not lower_closed.satisfied(2.0 - 1e-12)
    assert upper_open.satisfied(2.0 - 1e-12)
    assert not upper_closed.satisfied(2.0 + 1e-12)


def test_range_is_closed_on_both_ends():
    c = Constraint("range", "x", (0.0, 1.0))
    assert c.satisfied(0.0)
    assert c.satisfied(1.0)
    assert c.satisfied(0.5)
    assert not c.satisfied(-1e-12)
    assert not c.satisfied(1.0 + 1e-12)


def test_constraint_validation():
    with pytest.raises(ValueError):
        Constraint("between", "x", (0.0, 1.0))
    with pytest.raises(ValueError):
        Constraint("range", "x", (1.0, 1.0))
    with pytest.raises(ValueError):
        Constraint("range", "x", (0.0,))
    with pytest.raises(ValueError):
        Constraint("lower_open", "x", (0.0, 1.0))
    with pytest.raises(ValueError):
        Constraint("lower_open", "", (0.0,))
    with pytest.raises(ValueError):
        Constraint("lower_open", "x", (float("nan"),))


def test_check_reports_violations_in_declaration_order():
    constraints = [
        Constraint("upper_closed", "y", (0.0,)),
        Constraint("lower_closed", "x", (5.0,)),
        Constraint("range", "x", (6.0, 8.0)),
    ]
    violated = check(constraints, vec(SPACE, x=4.0, y=1.0))
    assert [c.kind for c in violated] == ["upper_closed", "lower_closed", "range"]
    assert check(constraints, vec(SPACE, x=7.0, y=-1.0)) == []


def test_check_unknown_dimension():
    with pytest.raises(UnknownDimension, match="z"):
        check([Constraint("lower_open", "z", (0.0,))], vec(SPACE, x=0.0, y=0.0))


def test_wrapper_skips_inner_on_violation():
    calls = []

    def inner(p):
        calls.append(p["x"])
        return p["x"]

    f = wrap_constraints(inner, [Constraint("lower_closed", "x", (0.0,))], -1e18)
    assert isinstance(f, ConstrainedObjective)
    assert f(vec(SPACE, x=-3.0, y=0.0)) == -1e18
    assert calls == []
    assert f(vec(SPACE, x=3.0, y=0.0)) == 3.0
    assert calls == [3.0]
    assert f.inner_calls == 1


def test_random_points_agree_with_direct_predicate():
    rng = np.random.default_rng(17)
    constraints = [
        Constraint("range", "x", (-5.0, 5.0)),
        Constraint("lower_open", "y", (0.0,)),
    ]
    f = wrap_constraints(lambda p: 1.0, constraints, -7.0)
    for _ in range(300):
        x, y = rng.uniform(-10, 10, size=2)
        feasible = (-5.0 <= x <= 5.0) and (y > 0.0)
        assert f(vec(SPACE, x=x, y=y)) == (1.0 if feasible else -7.0)


def test_json_roundtrip():
    for c in (
        Constraint("range", "gamma", (0.25, 0.75)),
        Constraint("upper_open", "C", (100.0,)),
    ):
        assert Constraint.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        Constraint.from_json({"kind": "range", "dim": "x"})
    with pytest.raises(ValueError):
        Constraint.from_json({"kind": "range", "dim": "x", "bounds": [0, 1], "open": True})


def test_violating_evaluations_still_consume_budget():
    inner_calls = []

    def inner(p):
        inner_calls.append(p["x"])
        return -((p["x"] - 3.0) ** 2)

    f = wrap_constraints(inner, [Constraint("lower_closed", "x", (0.0,))], -1e18)
    result = maximize(f, num_evals=60, solver="pso", seed=5, x=(-10.0, 10.0))
    assert result.num_evals == 60
    # infeasible points were answered by the default, not the inner objective
    assert f.inner_calls == len(inner_calls) < 60
    assert all(x >= 0.0 for x in inner_calls)
    assert result.best_params["x"] >= 0.0
    assert result.best_score > -1.0


def test_default_value_must_suit_the_direction():
    # picking a penalty on the wrong side drags the search into the
    # infeasible region; the wrapper applies exactly what it is told
    f = wrap_constraints(lambda p: 0.0, [Constraint("lower_closed", "x", (0.0,))], 1e18)
    result = maximize(f, num_evals=40, solver="random", seed=0, x=(-10.0, 10.0))
    assert result.best_score == 1e18
    assert result.best_params["x"] < 0.0


def test_concurrency_mark_propagates():
    from boxtune import is_concurrency_safe, mark_concurrency_safe

    def plain(p):
        return 0.0

    assert not is_concurrency_safe(wrap_constraints(plain, [], 0.0))

    @mark_concurrency_safe
    def marked(p):
        return 0.0

    assert is_concurrency_safe(wrap_constraints(marked, [], 0.0))
