'''
Tests for curves built from an angular function and an intrinsic fraction.
'''
import math

import numpy as np
import pytest

from icurves import intrinsic
from icurves.exprlang import parse
from icurves.families import example_helix
from icurves.frenet import FrenetApparatus, sigma_from_kappa_tau
from icurves.intrinsic import DomainViolation, IntrinsicSpec
from icurves.numerics import Grid, Tabulated, integrate_frenet
from icurves.recipe import interior_mask, relative_error


def _generic(n=2049):
    return IntrinsicSpec(parse('s'), parse('s'), Grid(0.6, 1.6, n))


def _planar(n=513):
    return IntrinsicSpec(parse('s'), parse('0'), Grid(0.5, 2.5, n))


def test_validate_domain():
    report = intrinsic.validate_domain(example_helix(1.0, grid_n=513))
    assert report.valid
    assert report.violated is None
    assert report.min_domain_margin > 0

    assert intrinsic.validate_domain(_generic()).valid
    assert intrinsic.validate_domain(_planar()).valid


def test_constant_polar_is_rejected():
    spec = IntrinsicSpec(parse('1'), parse('0.5'), Grid(0.0, 1.0, 65))
    report = intrinsic.validate_domain(spec)
    assert not report.valid
    assert report.violated == intrinsic.MONOTONE_CONDITION
    assert report.first_violation_s == pytest.approx(1 / 64)
    assert report.to_json()['violated'] == intrinsic.MONOTONE_CONDITION
    with pytest.raises(DomainViolation) as exc_info:
        intrinsic.synthesize(spec)
    assert exc_info.value.report.violated == intrinsic.MONOTONE_CONDITION


def test_domain_margin_violation():
    # I starts at 0.9 while sin(phi) is about 0.56 at s = 0.6
    spec = IntrinsicSpec(parse('s'), parse('s'), Grid(0.6, 1.6, 65),
        inner_offset=0.9)
    report = intrinsic.validate_domain(spec)
    assert not report.valid
    assert report.violated == intrinsic.DOMAIN_CONDITION
    assert report.first_violation_s == pytest.approx(0.6)


def test_planar_curve_is_a_circle():
    spec = _planar()
    assert np.allclose(intrinsic.theta_prime(spec).values, 0.0)
    assert np.allclose(intrinsic.closed_curvature(spec).values, 1.0)
    assert np.allclose(intrinsic.closed_torsion(spec).values, 0.0)
    curve = intrinsic.synthesize(spec)
    assert np.allclose(curve.points[:, 1], 0.0)
    # the tangent (sin s, 0, cos s) traces a unit circle
    center = np.array([math.cos(0.5), 0.0, -math.sin(0.5)])
    radius = np.linalg.norm(curve.points - center, axis=1)
    assert np.allclose(radius, 1.0, atol=1e-9)


def test_example_helix_theta():
    spec = example_helix(1.0, grid_n=1025)
    theta = intrinsic.theta(spec).values
    expected = -math.atan(1.0) + math.atan(1 / math.sqrt(2))
    assert theta[512] - theta[0] == pytest.approx(expected, abs=1e-8)
    assert expected == pytest.approx(-0.1699, abs=1e-4)


def test_generic_theta_against_trapezoid():
    spec = _generic(1025)
    theta = intrinsic.theta(spec).values

    # independent fine trapezoid rule up to the midpoint
    s = np.linspace(0.6, 1.1, 2 ** 17 + 1)
    h = s[1] - s[0]
    integrand = s * np.sin(s)
    inner = np.concatenate([[0.0],
        np.cumsum(0.5 * h * (integrand[1:] + integrand[:-1]))])
    dtheta = inner / (np.sin(s) * np.sqrt(np.sin(s) ** 2 - inner ** 2))
    expected = np.sum(0.5 * h * (dtheta[1:] + dtheta[:-1]))
    assert theta[512] == pytest.approx(expected, abs=1e-6)


def test_unit_speed():
    curve = intrinsic.synthesize(_generic())
    app = FrenetApparatus.of(curve)
    assert np.abs(app.speed - 1).max() <= 1e-6
    assert curve.frames.max_deviation() <= 1e-9


def test_example_helix_height():
    spec = example_helix(1.0, grid_n=1025)
    curve = intrinsic.synthesize(spec)
    s = spec.grid.samples
    assert np.allclose(curve.points[:, 2], np.sin(math.pi * s) / (2 * math.pi),
        atol=1e-6)


def test_example_helix_closed_forms():
    spec = example_helix(1.0, grid_n=1025)
    kappa = intrinsic.closed_curvature(spec).values
    tau = intrinsic.closed_torsion(spec).values
    assert kappa[512] == pytest.approx(math.pi / 2, rel=1e-9)
    assert tau[512] == pytest.approx(math.pi / 2, rel=1e-9)
    # the curvature vanishes at the ends, so does sigma
    assert kappa[0] == pytest.approx(0.0, abs=1e-12)
    sigma = intrinsic.closed_sigma(spec)
    assert sigma.is_complete
    assert np.allclose(sigma.values, 0.0)


def test_closed_vs_numeric():
    spec = _generic()
    app = FrenetApparatus.of(intrinsic.synthesize(spec))
    inner = slice(103, 1946)
    kappa = intrinsic.closed_curvature(spec).values
    tau = intrinsic.closed_torsion(spec).values
    assert np.allclose(app.kappa.values[inner], kappa[inner], rtol=1e-3)
    assert np.allclose(app.tau.values[inner], tau[inner], rtol=1e-3, atol=1e-3)


def test_fraction_identity():
    spec = _generic()
    kappa = intrinsic.closed_curvature(spec).values
    tau = intrinsic.closed_torsion(spec).values
    assert np.allclose(tau / kappa, spec.grid.samples, rtol=1e-12)


def test_sigma_consistency():
    spec = _generic()
    closed = intrinsic.closed_sigma(spec)
    numeric = sigma_from_kappa_tau(intrinsic.closed_curvature(spec),
        intrinsic.closed_torsion(spec))
    inner = spec.grid.interior()
    assert np.allclose(closed.values[inner], numeric.values[inner], rtol=1e-6)


def test_oracle_closure():
    spec = _generic()
    curve = intrinsic.synthesize(spec)
    oracle = integrate_frenet(intrinsic.closed_curvature(spec),
        intrinsic.closed_torsion(spec), intrinsic.initial_frame(spec),
        spec.base_point)
    assert np.abs(oracle.points - curve.points).max() <= 1e-4


def test_binormal_axis():
    spec = _generic()
    frames = intrinsic.closed_frames(spec)
    assert frames.defined.all()
    assert frames.max_deviation() <= 1e-9
    inner = intrinsic.inner_integral(spec).values
    assert np.allclose(frames.b[:, 2], inner, atol=1e-9)
    rate = intrinsic.binormal_axis_rate(spec).values
    s = spec.grid.samples
    assert np.allclose(rate, s * np.sin(s))


def test_initial_frame_without_curvature():
    spec = example_helix(1.0, grid_n=257)
    frames = intrinsic.closed_frames(spec)
    assert not frames.defined[0]
    frame = intrinsic.initial_frame(spec)
    assert frame.deviation() <= 1e-12
    assert np.allclose(frame.t, frames.t[0])


def test_base_point_and_theta0():
    shifted = IntrinsicSpec(parse('s'), parse('s'), Grid(0.6, 1.6, 257),
        theta0=0.5, base_point=[1.0, 2.0, 3.0])
    curve = intrinsic.synthesize(shifted)
    assert np.allclose(curve.points[0], [1.0, 2.0, 3.0])
    assert intrinsic.theta(shifted).values[0] == 0.5


def test_tabulated_polar_matches_expression():
    grid = Grid(0.6, 1.6, 513)
    s = grid.samples
    exact = IntrinsicSpec(parse('s'), parse('s'), grid)
    tabulated = IntrinsicSpec(Tabulated(grid, s, np.ones_like(s)),
        Tabulated(grid, s), grid)
    assert np.allclose(intrinsic.synthesize(tabulated).points,
        intrinsic.synthesize(exact).points, atol=1e-12)


def test_convergence():
    errors = list()
    for n in (129, 257, 513):
        spec = example_helix(1.0, grid_n=n)
        curve = intrinsic.synthesize(spec)
        s = spec.grid.samples
        errors.append(np.abs(curve.points[:, 2]
            - np.sin(math.pi * s) / (2 * math.pi)).max())
    assert errors[1] <= errors[0] / 8
    assert errors[2] <= errors[1] / 8


def test_unit_speed_convergence():
    deviations = [np.abs(FrenetApparatus.of(intrinsic.synthesize(_generic(n)))
        .speed - 1).max() for n in (2049, 4097)]
    assert deviations[1] <= deviations[0] / 12


def test_curvature_convergence():
    errors = list()
    for n in (257, 513, 1025):
        spec = _generic(n)
        app = FrenetApparatus.of(intrinsic.synthesize(spec))
        keep = interior_mask(spec.grid)
        errors.append(relative_error(app.kappa.values,
            intrinsic.closed_curvature(spec).values, keep))
    assert errors[1] <= errors[0] / 12
    assert errors[2] <= errors[1] / 12
