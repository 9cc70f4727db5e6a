import math

import pytest

from boxtune import BRANIN_OPTIMUM, make_test_function
from boxtune.testfunctions import BUILTIN_NAMES, dim_names


def test_builtin_names():
    assert BUILTIN_NAMES == ("sphere", "rosenbrock", "branin")
    with pytest.raises(ValueError):
        make_test_function("ackley")


def test_dim_names_are_zero_padded_and_sorted():
    assert dim_names(2) == ["x00", "x01"]
    assert dim_names(10) == [f"x0{i}" for i in range(10)]
    names = dim_names(100)
    assert names[0] == "x00" and names[99] == "x99"
    assert sorted(names) == names


def test_sphere_box_and_optimum():
    f = make_test_function("sphere", dims=3)
    assert f.space.names == ("x00", "x01", "x02")
    for name in f.space.names:
        assert f.space.bounds(name) == (-5.0, 5.0)
    assert f.optimum == 0.0
    assert f.minimizers == ((0.0, 0.0, 0.0),)
    assert f(f.space.vector([0.0, 0.0, 0.0])) == 0.0
    assert f(f.space.from_dict({"x00": 1.0, "x01": 2.0, "x02": 3.0})) == 14.0


def test_rosenbrock_box_and_optimum():
    f = make_test_function("rosenbrock", dims=2)
    for name in f.space.names:
        assert f.space.bounds(name) == (-2.048, 2.048)
    assert f.optimum == 0.0
    assert f.minimizers == ((1.0, 1.0),)
    assert f(f.space.vector([1.0, 1.0])) == 0.0
    # classic start point value: 100(1 - 1.44)^2 + (1 + 1.2)^2 = 24.2
    start = f.space.from_dict({"x00": -1.2, "x01": 1.0})
    assert f(start) == pytest.approx(24.2, abs=1e-12)
    with pytest.raises(ValueError):
        make_test_function("rosenbrock", dims=1)


def test_branin_three_global_minimizers():
    f = make_test_function("branin")
    assert f.space.bounds("x00") == (-5.0, 10.0)
    assert f.space.bounds("x01") == (0.0, 15.0)
    assert f.optimum == BRANIN_OPTIMUM
    assert BRANIN_OPTIMUM == pytest.approx(0.397887, abs=5e-7)
    assert len(f.minimizers) == 3
    for m in f.minimizers:
        assert f(f.space.vector(m)) == pytest.approx(BRANIN_OPTIMUM, abs=1e-13)
    xs = sorted(f.minimizers)
    assert xs[0] == (-math.pi, 12.275)
    assert xs[1] == (math.pi, 2.275)
    assert xs[2] == (3.0 * math.pi, 2.475)


def test_branin_is_two_dimensional_only():
    with pytest.raises(ValueError):
        make_test_function("branin", dims=3)
    assert make_test_function("branin", dims=2).dim == 2


def test_sphere_dims_flow_through():
    f = make_test_function("sphere", dims=7)
    assert f.dim == 7
    assert len(f.space.names) == 7
