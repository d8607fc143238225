'''
Named curve families with known closed forms.

* :func:`example_helix`: constant intrinsic fraction ``φ₀`` with the angular
  function ``arccos(cos(π(s-a)/(b-a)) / (1+φ₀²))``, whose coordinates,
  curvature and torsion are all known explicitly.
* :func:`general_helix`: any angular function ``ξ`` admissible for a constant
  fraction ``φ₀``, in particular the one that realizes a prescribed curvature
  (:func:`xi_from_curvature`).
* :func:`slant_helix`: curves whose normal indicatrix has constant geodesic
  curvature ``m``.
'''
from __future__ import annotations
from dataclasses import dataclass, field
import logging
import math
import typing

import numpy as np
from scipy import integrate, optimize, special

from .exprlang import (Expr, ExprError, Number, ONE, add, call, div, mul, neg,
    parse, power)
from .frenet import KAPPA_EPS
from .intrinsic import (IntrinsicSpec, ScalarFn, closed_curvature, closed_frames,
    closed_sigma, closed_torsion, has_exact_derivative, sample_derivative,
    sample_fn, synthesize)
from .numerics import (DEFAULT_N, CurveSamples, FrameField, Grid, GridFn,
    Tabulated, cumulative_integral)


logger = logging.getLogger(__name__)

#: Margin kept below the bound on ``∫κ_α`` when locating the end of ``J``.
BOUND_MARGIN = 1e-6

#: Fraction of ``J`` dropped at its right end, where ``ξ'`` blows up.
J_SHRINK = 1e-4


class FamilyError(ValueError):
    ''' Invalid generator parameters. '''


@dataclass(eq=False)
class FamilyCurve:
    '''
    A generated curve together with its closed-form apparatus and whatever
    reference quantities its family knows explicitly.
    '''
    kind: str

    spec: IntrinsicSpec

    curve: CurveSamples

    kappa: GridFn

    tau: GridFn

    sigma: GridFn

    frames: FrameField

    #: True if ``sigma`` used an exact derivative of the fraction.
    sigma_closed: bool = True

    reference: typing.Dict[str, typing.Any] = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return self.spec.grid


def from_spec(kind: str, spec: IntrinsicSpec,
        reference: typing.Optional[typing.Dict[str, typing.Any]] = None) -> FamilyCurve:
    ''' Synthesize ``spec`` and evaluate its closed-form apparatus. '''
    return FamilyCurve(
        kind=kind,
        spec=spec,
        curve=synthesize(spec),
        kappa=closed_curvature(spec),
        tau=closed_torsion(spec),
        sigma=closed_sigma(spec),
        frames=closed_frames(spec),
        sigma_closed=has_exact_derivative(spec.fraction),
        reference=reference or dict(),
    )


def _check_interval(a: float, b: float):
    if not a < b:
        raise FamilyError(f'interval needs a < b, got ({a}, {b})')


def example_helix(phi0: float, a: float = 0.0, b: float = 1.0,
        grid_n: int = DEFAULT_N) -> IntrinsicSpec:
    '''
    The constant-fraction helix: ``φ = arccos(cos(π(s-a)/(b-a)) / (1+φ₀²))``,
    ``φ̄ ≡ φ₀``.

    The inner integral is fixed to ``I = -φ₀ cos φ``, so ``1 - cos²φ - I²``
    becomes ``1 - (1+φ₀²) cos²φ``, and ``θ(a) = -arctan(sgn(φ₀)/√(1+φ₀²))``.
    '''
    if phi0 == 0:
        raise FamilyError('phi0 must be nonzero')
    _check_interval(a, b)
    c2 = 1 + phi0 ** 2
    if phi0 < 0:
        logger.warning('Fraction of the example helix is reported signed, '
            'tau/kappa = %r rather than |phi0|', phi0)
    polar = parse(f'acos(cos(pi*(s - {a!r})/{b - a!r})/{c2!r})')
    return IntrinsicSpec(
        polar=polar,
        fraction=Number(float(phi0)),
        grid=Grid(a, b, grid_n),
        inner_offset=-phi0 / c2,
        theta0=-math.atan(math.copysign(1.0, phi0) / math.sqrt(c2)),
    )


def example_helix_reference(phi0: float, a: float, b: float,
        s: np.ndarray) -> typing.Dict[str, np.ndarray]:
    '''
    Closed forms of :func:`example_helix` with ``u = π(s-a)/(b-a)``,
    ``c = √(1+φ₀²)``:

    * ``x = |φ₀| (s-a) / c``
    * ``y = -sgn(φ₀) (b-a)/(π c) [E(u - π/2 | 1/c²) - E(-π/2 | 1/c²)]``
    * ``z = (b-a) sin u / (c² π)``
    * ``κ = π sin u / ((b-a) c √(φ₀² + sin²u))``, ``τ = φ₀ κ``
    * ``θ = -arctan(√(φ₀² + sin²u) / (φ₀ c))``
    '''
    s = np.asarray(s, dtype=float)
    length = b - a
    c = math.sqrt(1 + phi0 ** 2)
    u = math.pi * (s - a) / length
    m = 1 / c ** 2
    sign = math.copysign(1.0, phi0)
    x = abs(phi0) * (s - a) / c
    y = -sign * length / (math.pi * c) * (
        special.ellipeinc(u - math.pi / 2, m) - special.ellipeinc(-math.pi / 2, m))
    z = length * np.sin(u) / (c ** 2 * math.pi)
    root = np.sqrt(phi0 ** 2 + np.sin(u) ** 2)
    kappa = math.pi * np.sin(u) / (length * c * root)
    return {
        'points': np.column_stack([x, y, z]),
        'kappa': kappa,
        'tau': phi0 * kappa,
        'theta': -np.arctan(root / (phi0 * c)),
        # κ / sin u as s -> a
        'kappaLimit': math.pi / (length * c * abs(phi0)),
    }


def example_helix_curve(phi0: float, a: float = 0.0, b: float = 1.0,
        grid_n: int = DEFAULT_N) -> FamilyCurve:
    spec = example_helix(phi0, a, b, grid_n)
    reference = example_helix_reference(phi0, a, b, spec.grid.samples)
    reference['fraction'] = float(phi0)
    return from_spec('example_helix', spec, reference)


def _kappa_integral(kappa: Expr, a: float) -> typing.Callable[[float], float]:
    def integral(s: float) -> float:
        value, _ = integrate.quad(kappa.evaluate, a, s, limit=200)
        return value
    return integral


def xi_from_curvature(kappa: Expr, phi0: float, a: float,
        b: typing.Optional[float] = None,
        n: int = DEFAULT_N) -> typing.Tuple[Tabulated, float]:
    '''
    Angular function realizing the prescribed curvature ``κ_α`` for fraction
    ``φ₀``: with ``c = √(1+φ₀²)`` and ``K = ∫_a^s κ_α``,
    ``ξ = arccos(-sin(cK)/c)``, admissible while ``K < π/(2c)``.

    ``J_end`` is where ``K`` reaches ``π/(2c)`` less :data:`BOUND_MARGIN`,
    found by bisection, or ``b`` if the bound is not reached before it. The
    returned samples cover ``(a, J_end)`` less :data:`J_SHRINK` of its length
    (all of ``(a, b)`` when ``b`` comes first), and carry the exact slope
    ``ξ' = cos(cK) κ_α / sin ξ``.

    :raises FamilyError: if ``φ₀ = 0`` or ``κ_α`` is not positive at ``a``.
    '''
    if phi0 == 0:
        raise FamilyError('phi0 must be nonzero')
    if b is not None:
        _check_interval(a, b)
    c = math.sqrt(1 + phi0 ** 2)
    bound = math.pi / (2 * c) - BOUND_MARGIN
    if not kappa.evaluate(a) > 0:
        raise FamilyError(f'prescribed curvature must be positive at s={a!r}, '
            'the interval J is empty')
    integral = _kappa_integral(kappa, a)

    if b is not None and integral(b) < bound:
        j_end = end = b
    else:
        hi = b if b is not None else a + 1.0
        for _ in range(60):
            if integral(hi) >= bound:
                break
            hi = a + 2 * (hi - a)
        else:
            raise FamilyError('integral of the prescribed curvature never reaches '
                f'{bound!r}; pass an interval end')
        j_end = optimize.bisect(lambda s: integral(s) - bound, a, hi, xtol=1e-13)
        end = a + (j_end - a) * (1 - J_SHRINK)
    logger.info('Located J_end=%r for phi0=%r', j_end, phi0)

    grid = Grid(a, end, n)
    k = kappa.sample(grid)
    if not (k > 0).all():
        i = int(np.flatnonzero(k <= 0)[0])
        raise FamilyError('prescribed curvature must be positive, '
            f'not at s={grid.samples[i]!r}')
    phase = c * cumulative_integral(GridFn(grid, k)).values
    xi = np.arccos(-np.sin(phase) / c)
    slope = np.cos(phase) * k / np.sin(xi)
    return Tabulated(grid, xi, slope), j_end


def general_helix(phi0: float, a: float, b: typing.Optional[float] = None,
        n: int = DEFAULT_N, kappa: typing.Optional[Expr] = None,
        xi: typing.Optional[ScalarFn] = None) -> FamilyCurve:
    '''
    General helix with constant fraction ``φ₀``, from either a prescribed
    curvature ``kappa`` or an admissible angular function ``xi``.

    The reference holds ``beta``, the coordinates
    ``((1/c)∫√(1 - c²cos²ξ), φ₀(s-a)/c, ∫cos ξ)``; with a prescribed curvature
    also ``classic``, the same curve as ``((1/c)∫cos(cK), φ₀(s-a)/c,
    -(1/c)∫sin(cK))``, its closed ``frames`` and ``kappaPrescribed``.

    :raises FamilyError: on invalid parameters.
    :raises DomainViolation: if ``xi`` is not admissible for ``φ₀``.
    '''
    if phi0 == 0:
        raise FamilyError('phi0 must be nonzero')
    if (kappa is None) == (xi is None):
        raise FamilyError('general helix needs exactly one of kappa and xi')
    c = math.sqrt(1 + phi0 ** 2)
    reference: typing.Dict[str, typing.Any] = {'fraction': float(phi0)}

    polar: ScalarFn
    if kappa is not None:
        polar, j_end = xi_from_curvature(kappa, phi0, a, b, n)
        grid = polar.grid
        reference['jEnd'] = j_end
    else:
        if b is None:
            raise FamilyError('general helix from xi needs an interval end')
        _check_interval(a, b)
        polar = typing.cast(ScalarFn, xi)
        grid = polar.grid if isinstance(polar, Tabulated) else Grid(a, b, n)

    cos_xi = np.cos(sample_fn(polar, grid))
    width = np.sqrt(np.clip(1 - c ** 2 * cos_xi ** 2, 0.0, None))
    spec = IntrinsicSpec(
        polar=polar,
        fraction=Number(float(phi0)),
        grid=grid,
        inner_offset=-phi0 * cos_xi[0],
        theta0=math.atan2(phi0, width[0]),
    )
    if phi0 < 0:
        logger.warning('Fraction of the general helix is reported signed, '
            'tau/kappa = %r rather than |phi0|', phi0)

    s = grid.samples
    reference['beta'] = np.column_stack([
        cumulative_integral(GridFn(grid, width / c)).values,
        phi0 * (s - a) / c,
        cumulative_integral(GridFn(grid, cos_xi)).values,
    ])
    if kappa is not None:
        k = kappa.sample(grid)
        phase = c * cumulative_integral(GridFn(grid, k)).values
        reference['kappaPrescribed'] = k
        reference['classic'] = np.column_stack([
            cumulative_integral(GridFn(grid, np.cos(phase) / c)).values,
            phi0 * (s - a) / c,
            -cumulative_integral(GridFn(grid, np.sin(phase) / c)).values,
        ])
        t = np.column_stack([np.cos(phase) / c, np.full(grid.n, phi0 / c),
            -np.sin(phase) / c])
        normal = np.column_stack([-np.sin(phase), np.zeros(grid.n),
            -np.cos(phase)])
        reference['frames'] = FrameField(t, normal, np.cross(t, normal),
            np.ones(grid.n, dtype=bool))
    return from_spec('general_helix', spec, reference)


def slant_phase(m: float, fraction: np.ndarray) -> np.ndarray:
    ''' ``Φ = √(1+m²) arctan(φ̄)/m - arctan(mφ̄/√(1+m²))`` '''
    root = math.sqrt(1 + m ** 2)
    return root * np.arctan(fraction) / m - np.arctan(m * fraction / root)


def _slant_polar(m: float, fraction: ScalarFn, grid: Grid) -> ScalarFn:
    sign = math.copysign(1.0, m)
    big_m = 1 + m ** 2
    if isinstance(fraction, Expr):
        # cos ξ = -sgn(m) φ̄ / √((1+m²)(1+φ̄²))
        root = call('sqrt', mul(Number(big_m), add(ONE, power(fraction, Number(2.0)))))
        cos_xi = div(fraction, root)
        return call('acos', neg(cos_xi) if sign > 0 else cos_xi)
    f = sample_fn(fraction, grid)
    df = sample_derivative(fraction, grid)
    xi = np.arccos(-sign * f / np.sqrt(big_m * (1 + f ** 2)))
    slope = sign * df / (math.sqrt(big_m) * (1 + f ** 2) ** 1.5 * np.sin(xi))
    return Tabulated(grid, xi, slope)


def slant_helix(m: float, fraction: ScalarFn, a: float, b: float,
        n: int = DEFAULT_N) -> FamilyCurve:
    '''
    Slant helix whose normal indicatrix has constant geodesic curvature ``m``,
    for an intrinsic fraction ``φ̄`` with ``sgn(m) φ̄' > 0``.

    The angular function is ``ξ = arccos(-sgn(m) φ̄ / √((1+m²)(1+φ̄²)))``, which
    gives ``κ = φ̄' / (m (1+φ̄²)^{3/2})``. The reference holds ``alpha``, the
    coordinates ``(∫A cos Φ, -sgn(m)∫A sin Φ, -sgn(m)∫φ̄/√((1+m²)(1+φ̄²)))``
    with ``A = √((1+m²+m²φ̄²)/((1+m²)(1+φ̄²)))`` and the phase
    :func:`slant_phase`, along with ``phase``, ``phaseIntegral`` (the same phase
    by quadrature of its derivative) and ``kappa``.

    :raises FamilyError: if ``m = 0`` or the sign condition fails.
    '''
    if m == 0:
        raise FamilyError('m must be nonzero')
    _check_interval(a, b)
    grid = fraction.grid if isinstance(fraction, Tabulated) else Grid(a, b, n)
    sign = math.copysign(1.0, m)
    f = sample_fn(fraction, grid)
    df = sample_derivative(fraction, grid)
    if not (sign * df > 0).all():
        i = int(np.flatnonzero(sign * df <= 0)[0])
        raise FamilyError(f"fraction slope must have the sign of m={m!r}, "
            f"fails at s={grid.samples[i]!r}")

    big_m = 1 + m ** 2
    try:
        polar = _slant_polar(m, fraction, grid)
    except ExprError as exc:
        raise FamilyError(f'cannot build the angular function: {exc}') from exc
    phase = slant_phase(m, f)
    spec = IntrinsicSpec(
        polar=polar,
        fraction=fraction,
        grid=grid,
        inner_offset=-sign / math.sqrt(big_m * (1 + f[0] ** 2)),
        theta0=-sign * phase[0],
    )
    amplitude = np.sqrt((big_m + m ** 2 * f ** 2) / (big_m * (1 + f ** 2)))
    dphase = math.sqrt(big_m) / m * df / ((big_m + m ** 2 * f ** 2) * (1 + f ** 2))
    reference = {
        'alpha': np.column_stack([
            cumulative_integral(GridFn(grid, amplitude * np.cos(phase))).values,
            -sign * cumulative_integral(GridFn(grid, amplitude * np.sin(phase))).values,
            -sign * cumulative_integral(
                GridFn(grid, f / np.sqrt(big_m * (1 + f ** 2)))).values,
        ]),
        'phase': phase,
        'phaseIntegral': cumulative_integral(GridFn(grid, dphase), phase[0]).values,
        'kappa': df / (m * (1 + f ** 2) ** 1.5),
        'sigma': float(m),
    }
    logger.warning('Slant helix normal indicatrix geodesic curvature is m = %r '
        'rather than 1', m)
    family = from_spec('slant_helix', spec, reference)
    if (family.kappa.values <= KAPPA_EPS).any():
        logger.warning('Slant helix curvature drops below %r', KAPPA_EPS)
    return family
