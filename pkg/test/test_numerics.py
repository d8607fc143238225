'''
Tests for grids, cumulative integration, finite differences and the Frenet
integrator.
'''
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from icurves.numerics import (CurveSamples, Frame, FrameError, FrameField, Grid,
    GridError, GridFn, Tabulated, cumulative_integral, finite_diff, fornberg_weights,
    integrate_frenet)


def _fn(grid, f):
    return GridFn(grid, f(grid.samples))


def test_grid_validation():
    grid = Grid(0.0, 1.0, 5)
    assert grid.h == 0.25
    assert list(grid.samples) == [0.0, 0.25, 0.5, 0.75, 1.0]
    with pytest.raises(GridError):
        Grid(0.0, 1.0, 4)
    with pytest.raises(GridError):
        Grid(0.0, 1.0, 3)
    with pytest.raises(GridError):
        Grid(1.0, 0.0, 5)
    with pytest.raises(GridError):
        Grid(0.0, math.inf, 5)


def test_grid_helpers():
    grid = Grid(0.0, 1.0, 101)
    assert grid.index_of(0.5) == 50
    assert grid.index_of(-3.0) == 0
    assert grid.index_of(7.0) == 100
    assert grid.interior(0.02) == slice(2, 99)
    assert grid.with_n(201).n == 201
    assert Grid.from_json(grid.to_json()) == grid


def test_grid_fn_gaps():
    grid = Grid(0.0, 1.0, 5)
    fn = GridFn(grid, [1.0, math.nan, 2.0, 3.0, 4.0],
        [True, False, True, True, True])
    assert not fn.is_complete
    assert fn.values[1] == 0.0
    with pytest.raises(GridError):
        GridFn(grid, [1.0, math.nan, 2.0, 3.0, 4.0])
    with pytest.raises(GridError):
        GridFn(grid, [1.0, 2.0])
    with pytest.raises(GridError):
        fn.sample(Grid(0.0, 2.0, 5))


def test_cumulative_integral_examples():
    grid = Grid(0.0, 1.0, 5)
    ones = cumulative_integral(_fn(grid, np.ones_like))
    assert np.allclose(ones.values, grid.samples, atol=1e-15)

    cubic = cumulative_integral(_fn(grid, lambda s: s ** 3), offset=2.0)
    assert np.allclose(cubic.values, 2.0 + grid.samples ** 4 / 4, atol=1e-14)

    grid = Grid(0.0, math.pi / 2, 513)
    sine = cumulative_integral(_fn(grid, np.cos))
    assert abs(sine.values[-1] - 1.0) <= 1e-8
    assert np.allclose(sine.values, np.sin(grid.samples), atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=4, max_size=4))
def test_cumulative_integral_exact_for_cubics(coefficients):
    c0, c1, c2, c3 = coefficients
    grid = Grid(-1.0, 2.0, 9)
    s = grid.samples
    f = GridFn(grid, c0 + c1 * s + c2 * s ** 2 + c3 * s ** 3)
    exact = (c0 * (s + 1) + c1 * (s ** 2 - 1) / 2 + c2 * (s ** 3 + 1) / 3
        + c3 * (s ** 4 - 1) / 4)
    assert np.allclose(cumulative_integral(f).values, exact, atol=1e-11)


def test_cumulative_integral_vector_offset():
    grid = Grid(0.0, 1.0, 9)
    f = GridFn(grid, np.column_stack([np.ones(9), 2 * grid.samples, np.zeros(9)]))
    result = cumulative_integral(f, offset=np.array([1.0, 2.0, 3.0]))
    assert np.allclose(result.values[-1], [2.0, 3.0, 3.0])


def test_cumulative_integral_order():
    errors = list()
    for n in (65, 129):
        grid = Grid(0.0, 1.0, n)
        result = cumulative_integral(_fn(grid, np.exp))
        errors.append(np.abs(result.values - (np.exp(grid.samples) - 1)).max())
    assert errors[0] / errors[1] >= 12


def test_cumulative_integral_rejects_gaps():
    grid = Grid(0.0, 1.0, 9)
    defined = np.ones(9, dtype=bool)
    defined[4] = False
    with pytest.raises(GridError):
        cumulative_integral(GridFn(grid, np.ones(9), defined))


def test_fornberg_weights():
    # the classic central second difference
    weights = fornberg_weights(0, [-1, 0, 1], 2)
    assert np.allclose(weights[:, 2], [1.0, -2.0, 1.0])
    assert np.allclose(weights[:, 1], [-0.5, 0.0, 0.5])
    assert np.allclose(weights[:, 0], [0.0, 1.0, 0.0])


def test_finite_diff_examples():
    grid = Grid(0.0, 1.0, 9)
    d = finite_diff(_fn(grid, lambda s: s ** 2), 1)
    assert abs(d.values[grid.index_of(0.5)] - 1.0) <= 1e-10
    assert np.allclose(d.values, 2 * grid.samples, atol=1e-10)

    grid = Grid(0.0, math.pi, 513)
    d2 = finite_diff(_fn(grid, np.sin), 2)
    assert abs(d2.values[0]) <= 1e-8
    assert np.allclose(d2.values, -np.sin(grid.samples), atol=1e-6)

    grid = Grid(0.0, 2.0, 1025)
    d3 = finite_diff(_fn(grid, np.exp), 3)
    assert abs(d3.values[grid.index_of(1.0)] - math.e) <= 1e-5


def test_finite_diff_needs_samples():
    with pytest.raises(GridError):
        finite_diff(GridFn(Grid(0.0, 1.0, 5), np.zeros(5)), 1)
    with pytest.raises(ValueError):
        finite_diff(GridFn(Grid(0.0, 1.0, 9), np.zeros(9)), 4)


def test_finite_diff_propagates_gaps():
    grid = Grid(0.0, 1.0, 33)
    defined = np.ones(33, dtype=bool)
    defined[16] = False
    d = finite_diff(GridFn(grid, grid.samples, defined), 1)
    assert not d.defined[14:19].any()
    assert d.defined[:14].all()
    assert d.defined[19:].all()


def test_integral_then_derivative():
    grid = Grid(0.0, 3.0, 4097)
    f = _fn(grid, lambda s: np.cos(3 * s) + s)
    recovered = finite_diff(cumulative_integral(f), 1)
    inner = grid.interior()
    assert np.allclose(recovered.values[inner], f.values[inner], rtol=1e-6,
        atol=1e-9)


def test_tabulated():
    grid = Grid(0.0, 1.0, 65)
    tab = Tabulated(grid, grid.samples ** 2)
    assert not tab.has_exact_slope
    assert np.allclose(tab.derive().values, 2 * grid.samples, atol=1e-10)
    with pytest.raises(GridError):
        tab.sample(Grid(0.0, 1.0, 129))
    exact = Tabulated(grid, grid.samples ** 2, 2 * grid.samples)
    assert exact.has_exact_slope
    again = Tabulated.from_json(exact.to_json(), grid)
    assert np.array_equal(again.slope, exact.slope)


IDENTITY = Frame(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 1.0]))


def test_frame_checks():
    IDENTITY.check()
    with pytest.raises(FrameError):
        Frame(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
            np.array([0.0, 0.0, -1.0])).check()
    with pytest.raises(FrameError):
        Frame(np.array([1.0, 0.1, 0.0]), np.array([0.0, 1.0, 0.0]),
            np.array([0.0, 0.0, 1.0])).check()
    frame = Frame.from_tangent_normal([2.0, 0.0, 0.0], [0.3, 1.0, 0.0])
    assert frame.deviation() <= 1e-12
    assert np.allclose(frame.b, [0.0, 0.0, 1.0])


def test_frame_field_gaps():
    field = FrameField(np.eye(3), np.eye(3), np.eye(3),
        np.array([True, False, True]))
    with pytest.raises(IndexError):
        field[1]


def test_integrate_frenet_circle_closes():
    grid = Grid(0.0, 2 * math.pi, 257)
    kappa = GridFn(grid, np.ones(grid.n))
    tau = GridFn(grid, np.zeros(grid.n))
    curve = integrate_frenet(kappa, tau, IDENTITY)
    assert np.linalg.norm(curve.points[-1] - curve.points[0]) <= 1e-6
    assert np.allclose(curve.points[:, 2], 0.0)
    assert curve.frames.max_deviation() <= 1e-12


def test_integrate_frenet_helix():
    grid = Grid(0.0, 10.0, 1025)
    kappa = GridFn(grid, np.full(grid.n, 0.5))
    tau = GridFn(grid, np.full(grid.n, 0.5))
    curve = integrate_frenet(kappa, tau, IDENTITY, p0=(1.0, 2.0, 3.0))
    assert np.allclose(curve.points[0], [1.0, 2.0, 3.0])
    # the tangent keeps a fixed angle with the axis t + b
    axis = (IDENTITY.t + IDENTITY.b) / math.sqrt(2)
    assert np.allclose(curve.frames.t @ axis, 1 / math.sqrt(2), atol=1e-9)
    rise = (curve.points[-1] - curve.points[0]) @ axis
    assert rise == pytest.approx(10.0 / math.sqrt(2), rel=1e-8)


def test_integrate_frenet_rejects_bad_frame():
    grid = Grid(0.0, 1.0, 9)
    kappa = GridFn(grid, np.ones(9))
    bad = Frame(np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]),
        np.array([0.0, 0.0, 1.0]))
    with pytest.raises(FrameError):
        integrate_frenet(kappa, kappa, bad)


def test_decimated_curve():
    grid = Grid(0.0, 2.0, 4097)
    s = grid.samples
    curve = CurveSamples(grid, np.column_stack([s, s ** 2, s ** 3]))
    coarse = curve.decimated(1025)
    assert coarse.grid == Grid(0.0, 2.0, 1025)
    assert np.array_equal(coarse.points, curve.points[::4])
    assert coarse.frames is None
    assert curve.decimated(4097) is curve
    # 99 samples cannot be halved to an odd count
    odd = CurveSamples(Grid(0.0, 1.0, 99), np.zeros((99, 3)))
    assert odd.decimated(9) is odd
