import math

import numpy as np
import pytest

from boxtune import (
    CmaesState,
    CovarianceDegenerate,
    UnknownSetting,
    cmaes_run,
    make_space,
    optimize,
)
from boxtune.solvers import SolverConfig
from boxtune.solvers.cmaes import default_popsize


def sphere(p):
    return sum(v * v for v in p.values)


def make_5d():
    return make_space({f"x{i}": (-5.0, 5.0) for i in range(5)})


def test_default_popsize_follows_log_rule():
    assert default_popsize(1) == 4
    assert default_popsize(2) == 6
    assert default_popsize(3) == 7
    assert default_popsize(10) == 10


def test_converges_on_smooth_bowl():
    space = make_space({"x": (-5.0, 5.0), "y": (-5.0, 5.0)})
    result = optimize("cmaes", sphere, space, "minimize", num_evals=2000, seed=1)
    assert result.stop_reason == "converged"
    assert result.best_score < 1e-10
    assert result.num_evals < 2000


def test_state_invariants_hold_across_generations():
    space = make_5d()
    state = CmaesState(space, seed=3)
    assert state.lam == default_popsize(5)
    for _ in range(25):
        candidates = state.ask()
        assert len(candidates) == state.lam
        losses = [sphere(c) for c in candidates]
        state.tell(losses)
        # covariance stays exactly symmetric and positive definite
        assert np.array_equal(state.cov, state.cov.T)
        eigvals = np.linalg.eigvalsh(state.cov)
        assert eigvals[0] > 0.0
        assert math.isfinite(state.sigma) and state.sigma > 0.0
        assert state.condition_number() >= 1.0
    assert state.generation == 25


def test_candidates_are_clamped_into_the_box():
    space = make_space({"x": (0.0, 1.0), "y": (0.0, 1.0)})
    state = CmaesState(space, seed=0, sigma0=50.0)
    for p in state.ask():
        assert 0.0 <= p["x"] <= 1.0
        assert 0.0 <= p["y"] <= 1.0


def test_ask_tell_misuse_is_rejected():
    state = CmaesState(make_5d(), seed=0)
    with pytest.raises(RuntimeError):
        state.tell([0.0] * state.lam)
    state.ask()
    with pytest.raises(RuntimeError):
        state.ask()
    with pytest.raises(ValueError):
        state.tell([0.0])


def test_failed_losses_are_ranked_last():
    space = make_space({"x": (-5.0, 5.0)})
    state = CmaesState(space, seed=2, popsize=6)
    candidates = state.ask()
    losses = [None if i % 2 == 0 else c["x"] ** 2 for i, c in enumerate(candidates)]
    state.tell(losses)  # must not raise; None ranks behind every number
    assert math.isfinite(state.sigma)
    assert np.all(np.isfinite(state.mean))


def test_start_setting_positions_the_mean():
    space = make_space({"x": (-5.0, 5.0), "y": (-5.0, 5.0)})
    state = CmaesState(space, seed=0, start={"x": 4.0, "y": -3.0})
    assert list(state.mean) == [4.0, -3.0]
    # out-of-box starts are clamped, not rejected
    clamped = CmaesState(space, seed=0, start={"x": 99.0, "y": 0.0})
    assert list(clamped.mean) == [5.0, 0.0]


def test_degenerate_axes_stay_frozen():
    space = make_space({"x": (-5.0, 5.0), "y": (7.0, 7.0)})
    state = CmaesState(space, seed=1)
    assert state.n == 1
    for p in state.ask():
        assert p["y"] == 7.0
    with pytest.raises(ValueError):
        CmaesState(make_space({"y": (7.0, 7.0)}), seed=0)


def test_unequal_axis_widths_shape_the_initial_covariance():
    space = make_space({"broad": (0.0, 10.0), "slim": (0.0, 1.0)})
    state = CmaesState(space, seed=0)
    assert state.sigma == pytest.approx(0.3 * 10.0)
    assert np.allclose(np.diag(state.cov), [1.0, 0.01])


def test_ill_conditioned_stop_signal():
    state = CmaesState(make_space({"x": (-5.0, 5.0), "y": (-5.0, 5.0)}), seed=0)
    state.cov = np.diag([1.0, 1e-16])
    state._refresh_eigensystem()
    assert state.condition_number() > 1e14
    assert state.should_stop() == "ill_conditioned"


def test_absurd_sigma0_raises_typed_degeneracy():
    space = make_5d()
    with pytest.raises(CovarianceDegenerate):
        optimize(
            SolverConfig("cmaes", {"sigma0": 1e308}),
            sphere,
            space,
            "minimize",
            num_evals=200,
            seed=0,
        )


def test_beats_random_search_on_an_ill_scaled_bowl():
    space = make_5d()
    names = space.names
    coef = 10.0 ** (4.0 * np.arange(5) / 4.0)

    def ellipsoid(p):
        x = np.array([p[n] for n in names])
        return float(np.sum(coef * x * x))

    wins = 0
    for seed in range(20):
        adapted = optimize("cmaes", ellipsoid, space, "minimize", 600, seed=seed)
        uniform = optimize("random", ellipsoid, space, "minimize", 600, seed=seed)
        wins += adapted.best_score < uniform.best_score
    assert wins >= 18


def test_run_is_deterministic_per_seed():
    space = make_5d()
    a = optimize("cmaes", sphere, space, "minimize", num_evals=300, seed=6)
    b = optimize("cmaes", sphere, space, "minimize", num_evals=300, seed=6)
    assert [(r.params.values, r.score) for r in a.call_log] == [
        (r.params.values, r.score) for r in b.call_log
    ]


def test_budget_stop_with_partial_generation():
    space = make_5d()
    # popsize 10 on 5 free dims; 25 is mid-generation
    result = optimize("cmaes", sphere, space, "minimize", num_evals=25, seed=0)
    assert result.num_evals == 25
    assert result.stop_reason == "budget"


def test_cmaes_run_operation():
    space = make_space({"x": (-5.0, 5.0), "y": (-5.0, 5.0)})
    result = cmaes_run(space, sphere, "minimize", 800, {"sigma0": 1.5, "lambda": 8}, seed=2)
    assert result.solver_name == "cmaes"
    assert result.best_score < 1e-6


def test_settings_validation():
    with pytest.raises(UnknownSetting):
        SolverConfig("cmaes", {"population": 9})
    with pytest.raises(ValueError):
        SolverConfig("cmaes", {"lambda": 1})
    with pytest.raises(ValueError):
        SolverConfig("cmaes", {"sigma0": -0.5})
    assert SolverConfig("cmaes", {"lambda": 12, "sigma0": 0.5}).resolved_settings()[
        "lambda"
    ] == 12


def test_fully_degenerate_space_short_circuits():
    space = make_space({"x": (2.0, 2.0)})
    result = optimize("cmaes", lambda p: p["x"], space, "minimize", num_evals=5)
    assert result.stop_reason == "converged"
    assert result.num_evals == 1
    assert result.best_params["x"] == 2.0
