'''
Curves built from an angular function and an intrinsic fraction function.

Given the polar angle ``φ(s)`` of the unit tangent and the intrinsic fraction
``φ̄ = τ/κ``, the azimuth ``θ`` of the tangent follows from

    θ' = φ' I / (sin φ √D),    I = inner_offset + ∫_a^s φ̄ φ' sin φ,
    D = sin²φ - I²,

and the curve is ``ρ = base_point + ∫_a^s (sin φ cos θ, sin φ sin θ, cos φ)``.
Its curvature is ``φ' sin φ / √D``, its torsion ``φ̄ κ``, and the geodesic
curvature of its normal indicatrix ``φ̄' √D / ((1 + φ̄²)^{3/2} φ' sin φ)``.

The construction is admissible when ``(cos φ)' < 0`` and ``D > 0`` along the
grid; :func:`validate_domain` checks both.
'''
from __future__ import annotations
from dataclasses import dataclass, field
import logging
import typing

import numpy as np

from .exprlang import Expr
from .frenet import DegenerateCurveError, KAPPA_EPS
from .numerics import (CurveSamples, Frame, FrameField, Grid, GridFn, Tabulated,
    cumulative_integral)


logger = logging.getLogger(__name__)

#: A scalar function of arc length: an expression or a tabulated function.
ScalarFn = typing.Union[Expr, Tabulated]

#: Margin by which the admissibility conditions must hold.
DOMAIN_EPS = 1e-9

#: Smallest admissible ``sin φ``.
SIN_GUARD = 1e-6

MONOTONE_CONDITION = "(cos phi)' < 0"
DOMAIN_CONDITION = '1 - cos^2 phi - I^2 > 0'
SIN_CONDITION = 'sin phi > 0'


def sample_fn(fn: ScalarFn, grid: Grid) -> np.ndarray:
    return fn.sample(grid)


def sample_derivative(fn: ScalarFn, grid: Grid) -> np.ndarray:
    ''' Exact derivative samples when available, finite differences otherwise. '''
    return fn.derive().sample(grid)


def has_exact_derivative(fn: ScalarFn) -> bool:
    if isinstance(fn, Tabulated):
        return fn.has_exact_slope
    return True


@dataclass(eq=False)
class IntrinsicSpec:
    ''' Everything needed to build one intrinsic representation curve. '''
    #: Polar angle ``φ(s)`` of the tangent, in radians.
    polar: ScalarFn

    #: Intrinsic fraction ``φ̄(s) = τ/κ``.
    fraction: ScalarFn

    grid: Grid

    #: Value of ``I`` at ``s = a``.
    inner_offset: float = 0.0

    #: Value of ``θ`` at ``s = a``.
    theta0: float = 0.0

    #: Position at ``s = a``.
    base_point: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.base_point = np.asarray(self.base_point, dtype=float).reshape(3)

    def with_grid(self, grid: Grid) -> IntrinsicSpec:
        ''' The same spec on another grid. Expressions only. '''
        return IntrinsicSpec(self.polar, self.fraction, grid, self.inner_offset,
            self.theta0, self.base_point)


@dataclass
class DomainReport:
    '''
    Outcome of checking the admissibility conditions on a grid.

    The strict conditions hold on interior samples. At the two end points,
    which bound the open interval, ``(cos φ)'`` may vanish.
    '''
    valid: bool

    #: Smallest ``-(cos φ)'`` over the interior samples.
    min_monotone_margin: float

    #: Smallest ``1 - cos²φ - I²`` over all samples.
    min_domain_margin: float

    first_violation_s: typing.Optional[float] = None

    #: The first violated condition, if any.
    violated: typing.Optional[str] = None

    @property
    def message(self) -> str:
        if self.valid:
            return 'domain conditions hold'
        return f'{self.violated} violated at s={self.first_violation_s!r}'

    def to_json(self):
        return {
            'valid': self.valid,
            'minMonotoneMargin': self.min_monotone_margin,
            'minDomainMargin': self.min_domain_margin,
            'firstViolationS': self.first_violation_s,
            'violated': self.violated,
        }


class DomainViolation(ValueError):
    ''' The angular function is not admissible for the given fraction. '''
    def __init__(self, report: DomainReport):
        super().__init__(report.message)
        self.report = report


@dataclass(eq=False)
class IntrinsicSamples:
    ''' Every intermediate quantity of the construction, sampled on one grid. '''
    spec: IntrinsicSpec
    report: DomainReport
    phi: np.ndarray
    dphi: np.ndarray
    fraction: np.ndarray
    #: ``φ' sin φ = -(cos φ)'``
    monotone: np.ndarray
    inner: np.ndarray
    #: ``sin²φ - I²``
    margin: np.ndarray
    dtheta: np.ndarray
    theta: np.ndarray

    @property
    def grid(self) -> Grid:
        return self.spec.grid

    @property
    def kappa(self) -> np.ndarray:
        return self.monotone / np.sqrt(self.margin)

    def tangent(self) -> np.ndarray:
        sin_phi = np.sin(self.phi)
        return np.column_stack([
            sin_phi * np.cos(self.theta),
            sin_phi * np.sin(self.theta),
            np.cos(self.phi),
        ])


def _first_violation(mask: np.ndarray) -> typing.Optional[int]:
    bad = np.flatnonzero(mask)
    return int(bad[0]) if bad.size else None


def _check(spec: IntrinsicSpec):
    grid = spec.grid
    phi = sample_fn(spec.polar, grid)
    dphi = sample_derivative(spec.polar, grid)
    fraction = sample_fn(spec.fraction, grid)
    sin_phi = np.sin(phi)
    monotone = dphi * sin_phi
    inner = cumulative_integral(GridFn(grid, fraction * monotone),
        spec.inner_offset).values
    margin = sin_phi ** 2 - inner ** 2

    monotone_bad = monotone <= DOMAIN_EPS
    monotone_bad[[0, -1]] = monotone[[0, -1]] < -DOMAIN_EPS
    candidates = [
        (SIN_CONDITION, _first_violation(sin_phi < SIN_GUARD)),
        (MONOTONE_CONDITION, _first_violation(monotone_bad)),
        (DOMAIN_CONDITION, _first_violation(margin <= DOMAIN_EPS)),
    ]
    violations = [(i, name) for name, i in candidates if i is not None]
    report = DomainReport(
        valid=not violations,
        min_monotone_margin=float(monotone[1:-1].min()),
        min_domain_margin=float(margin.min()),
    )
    if violations:
        i, name = min(violations)
        report.first_violation_s = float(grid.samples[i])
        report.violated = name
    return report, phi, dphi, fraction, monotone, inner, margin


def validate_domain(spec: IntrinsicSpec) -> DomainReport:
    '''
    Check ``(cos φ)' < 0`` and ``1 - cos²φ - I² > 0`` with margin
    :data:`DOMAIN_EPS` at every sample.

    :raises ExprDomainError: if ``φ`` or ``φ̄`` cannot be evaluated on the grid.
    '''
    report = _check(spec)[0]
    if not report.valid:
        logger.info('Domain check failed: %s', report.message)
    return report


def evaluate(spec: IntrinsicSpec) -> IntrinsicSamples:
    '''
    Sample every quantity of the construction.

    :raises DomainViolation: if the spec fails :func:`validate_domain`.
    '''
    report, phi, dphi, fraction, monotone, inner, margin = _check(spec)
    if not report.valid:
        raise DomainViolation(report)
    dtheta = dphi * inner / (np.sin(phi) * np.sqrt(margin))
    theta = cumulative_integral(GridFn(spec.grid, dtheta), spec.theta0).values
    return IntrinsicSamples(spec, report, phi, dphi, fraction, monotone, inner,
        margin, dtheta, theta)


def theta_prime(spec: IntrinsicSpec) -> GridFn:
    ''' Derivative of the tangent azimuth, sign included. '''
    ev = evaluate(spec)
    return GridFn(ev.grid, ev.dtheta)


def theta(spec: IntrinsicSpec) -> GridFn:
    ''' Tangent azimuth, ``theta0 + ∫_a^s θ'``. '''
    ev = evaluate(spec)
    return GridFn(ev.grid, ev.theta)


def synthesize(spec: IntrinsicSpec) -> CurveSamples:
    '''
    Build the curve by integrating its unit tangent. The returned samples carry
    the closed-form frames.
    '''
    ev = evaluate(spec)
    logger.info('Synthesizing curve on grid a=%r b=%r n=%d', ev.grid.a,
        ev.grid.b, ev.grid.n)
    points = cumulative_integral(GridFn(ev.grid, ev.tangent()), spec.base_point)
    return CurveSamples(ev.grid, points.values, _frames(ev))


def closed_curvature(spec: IntrinsicSpec) -> GridFn:
    ''' ``κ = φ' sin φ / √(sin²φ - I²)`` '''
    ev = evaluate(spec)
    return GridFn(ev.grid, ev.kappa)


def closed_torsion(spec: IntrinsicSpec) -> GridFn:
    ''' ``τ = φ̄ κ`` '''
    ev = evaluate(spec)
    return GridFn(ev.grid, ev.fraction * ev.kappa)


def closed_sigma(spec: IntrinsicSpec) -> GridFn:
    '''
    Geodesic curvature of the normal indicatrix,
    ``φ̄' √D / ((1 + φ̄²)^{3/2} φ' sin φ)``.

    Samples with ``κ <= KAPPA_EPS`` are gaps unless ``φ̄'`` vanishes there, in
    which case the value is 0.
    '''
    ev = evaluate(spec)
    dfraction = sample_derivative(spec.fraction, ev.grid)
    flat = dfraction == 0.0
    defined = (ev.kappa > KAPPA_EPS) | flat
    with np.errstate(divide='ignore', invalid='ignore'):
        sigma = dfraction * np.sqrt(ev.margin) / (
            (1 + ev.fraction ** 2) ** 1.5 * ev.monotone)
    sigma = np.where(flat, 0.0, sigma)
    if not defined.all():
        logger.warning('Closed sigma has %d gap(s) where the curvature vanishes',
            int((~defined).sum()))
    return GridFn(ev.grid, sigma, defined)


def _frames(ev: IntrinsicSamples) -> FrameField:
    t = ev.tangent()
    sin_phi, cos_phi = np.sin(ev.phi), np.cos(ev.phi)
    sin_theta, cos_theta = np.sin(ev.theta), np.cos(ev.theta)
    dt = (ev.dphi[:, None] * np.column_stack([cos_phi * cos_theta,
            cos_phi * sin_theta, -sin_phi])
        + (ev.dtheta * sin_phi)[:, None] * np.column_stack([-sin_theta,
            cos_theta, np.zeros_like(sin_phi)]))
    kappa = ev.kappa
    defined = kappa > KAPPA_EPS
    n = np.zeros_like(t)
    n[defined] = dt[defined] / kappa[defined, None]
    b = np.cross(t, n)
    return FrameField(t, n, b, defined)


def closed_frames(spec: IntrinsicSpec) -> FrameField:
    '''
    Frenet frames from the closed forms: ``t = (sin φ cos θ, sin φ sin θ,
    cos φ)``, ``n = t'/κ``, ``b = t × n``. Samples with ``κ <= KAPPA_EPS`` are
    gaps.
    '''
    return _frames(evaluate(spec))


def initial_frame(spec: IntrinsicSpec) -> Frame:
    '''
    Frame at ``s = a``. If the curvature vanishes there, the normal of the
    nearest sample with a frame is used and re-orthonormalized against the
    tangent at ``a``.
    '''
    frames = closed_frames(spec)
    if frames.defined[0]:
        return frames[0]
    defined = np.flatnonzero(frames.defined)
    if not defined.size:
        raise DegenerateCurveError('curvature vanishes on the whole grid')
    j = int(defined[0])
    logger.debug('No normal at s=a, taking the normal at sample %d', j)
    return Frame.from_tangent_normal(frames.t[0], frames.n[j])


def binormal_axis_rate(spec: IntrinsicSpec) -> GridFn:
    '''
    ``d/ds <b, e3> = τ φ' sin φ / κ``, which reduces to ``φ̄ φ' sin φ``; the
    binormal's third component is ``I`` itself.
    '''
    ev = evaluate(spec)
    return GridFn(ev.grid, ev.fraction * ev.monotone)


def inner_integral(spec: IntrinsicSpec) -> GridFn:
    ''' ``I = inner_offset + ∫_a^s φ̄ φ' sin φ`` '''
    ev = evaluate(spec)
    return GridFn(ev.grid, ev.inner)
