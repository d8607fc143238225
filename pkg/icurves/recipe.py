'''
Recipes describe one curve construction as JSON:

.. code:: json

    {
        "kind": "example_helix",
        "params": {"phi0": 1},
        "grid": {"a": 0, "b": 1, "n": 4097},
        "outputs": ["csv"]
    }

Parameter blocks are registered per kind with
:func:`icurves.util.recipe_kind`. Function-valued parameters are expression
strings, numbers, or sampled functions ``{"samples": [...], "slope": [...]}``.

This module also holds the checks that :func:`verify` runs against a
generated curve and that :func:`analyze` runs against a curve file.
'''
from __future__ import annotations
from dataclasses import dataclass, field
import json as json_
import logging
import math
import os
import typing

import inflection
import numpy as np

from . import families
from .curvefile import CurveTable
from .exprlang import Expr, Number, parse
from .families import FamilyCurve
from .frenet import (KAPPA_EPS, FrenetApparatus, numeric_kappa, numeric_tau,
    sigma_from_kappa_tau)
from .intrinsic import (IntrinsicSpec, ScalarFn, initial_frame, inner_integral,
    sample_fn)
from .numerics import DEFAULT_N, Grid, GridFn, Tabulated, integrate_frenet
from .util import T_JSON_DICT, parse_json_params, recipe_kind, recipe_kinds


logger = logging.getLogger(__name__)

OUTPUTS = ('csv', 'obj', 'gnuplot', 'report')
DEFAULT_OUTPUTS = ['csv']
MIN_RECIPE_N = 65

UNIT_SPEED_TOL = 1e-6
CLOSED_NUMERIC_TOL = 1e-3
FRACTION_IDENTITY_TOL = 1e-12
SIGMA_CONSISTENCY_TOL = 1e-6
ORACLE_CLOSURE_TOL = 1e-4
ORACLE_REEXTRACTION_TOL = 1e-4
CONSTANCY_TOL = 1e-3
COORDINATE_TOL = 1e-6
PHASE_TOL = 1e-8

#: Largest sample count used for σ from positions.
SIGMA_MAX_N = 1025

#: Samples dropped at each end before comparisons.
EDGE_TRIM = 0.02

#: Relative errors are taken against ``max(|expected|, floor)`` where the floor
#: is this share of the largest expected magnitude, but at least
#: :data:`ABSOLUTE_FLOOR`.
RELATIVE_FLOOR = 1e-2
ABSOLUTE_FLOOR = 1e-6


class RecipeError(ValueError):
    ''' A recipe does not follow the schema. '''


def normalise_keys(json: T_JSON_DICT) -> T_JSON_DICT:
    ''' Accept both ``innerOffset`` and ``inner_offset`` style keys. '''
    if not isinstance(json, dict):
        raise RecipeError(f'expected a JSON object, got {type(json).__name__}')
    return {inflection.underscore(k): v for k, v in json.items()}


def _check_keys(json: T_JSON_DICT, where: str, required: typing.Iterable[str],
        optional: typing.Iterable[str] = ()):
    required = list(required)
    missing = [k for k in required if k not in json]
    if missing:
        raise RecipeError(f'{where}: missing {", ".join(missing)}')
    unknown = sorted(set(json) - set(required) - set(optional))
    if unknown:
        raise RecipeError(f'{where}: unknown key(s) {", ".join(unknown)}')


def _real(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) \
            or not math.isfinite(value):
        raise RecipeError(f'{name} must be a finite number, got {value!r}')
    return float(value)


@dataclass(eq=False)
class SampledFunction:
    ''' A function given by samples in a recipe; bound to a grid on use. '''
    samples: np.ndarray

    slope: typing.Optional[np.ndarray] = None

    def bind(self, grid: Grid) -> Tabulated:
        if self.samples.size != grid.n:
            raise RecipeError(f'{self.samples.size} samples given for a grid of '
                f'{grid.n}')
        return Tabulated(grid, self.samples, self.slope)

    def to_json(self) -> T_JSON_DICT:
        json: T_JSON_DICT = {'samples': [float(v) for v in self.samples]}
        if self.slope is not None:
            json['slope'] = [float(v) for v in self.slope]
        return json

    @classmethod
    def from_json(cls, json: T_JSON_DICT, name: str) -> SampledFunction:
        _check_keys(json, name, ['samples'], ['slope'])
        samples = np.asarray(json['samples'], dtype=float)
        slope = json.get('slope')
        if slope is not None:
            slope = np.asarray(slope, dtype=float)
            if slope.shape != samples.shape:
                raise RecipeError(f'{name}: slope and samples differ in length')
        return cls(samples, slope)


FunctionSource = typing.Union[Expr, SampledFunction]


def function_from_json(value, name: str) -> FunctionSource:
    '''
    :raises ExprError: if an expression string does not parse.
    '''
    if isinstance(value, str):
        return parse(value)
    if isinstance(value, dict):
        return SampledFunction.from_json(value, name)
    return Number(_real(value, name))


def function_to_json(fn: FunctionSource):
    return fn.to_json()


def _bind(fn: FunctionSource, grid: Grid) -> ScalarFn:
    if isinstance(fn, SampledFunction):
        return fn.bind(grid)
    return fn


def _sample_count(*fns: typing.Optional[FunctionSource]) -> typing.Optional[int]:
    counts = {fn.samples.size for fn in fns if isinstance(fn, SampledFunction)}
    if len(counts) > 1:
        raise RecipeError('sampled functions disagree on the number of samples')
    return counts.pop() if counts else None


def _need_end(b: typing.Optional[float], kind: str) -> float:
    if b is None:
        raise RecipeError(f'{kind} recipes need grid.b')
    return b


@recipe_kind('intrinsic')
@dataclass
class IntrinsicParams:
    ''' A curve from an arbitrary angular function and intrinsic fraction. '''
    polar: FunctionSource

    fraction: FunctionSource

    inner_offset: float = 0.0

    theta0: float = 0.0

    base_point: typing.List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])

    def sample_count(self) -> typing.Optional[int]:
        return _sample_count(self.polar, self.fraction)

    def generate(self, a: float, b: typing.Optional[float], n: int) -> FamilyCurve:
        grid = Grid(a, _need_end(b, 'intrinsic'), n)
        spec = IntrinsicSpec(
            polar=_bind(self.polar, grid),
            fraction=_bind(self.fraction, grid),
            grid=grid,
            inner_offset=self.inner_offset,
            theta0=self.theta0,
            base_point=np.asarray(self.base_point),
        )
        return families.from_spec('intrinsic', spec)

    def to_json(self) -> T_JSON_DICT:
        return {
            'polar': function_to_json(self.polar),
            'fraction': function_to_json(self.fraction),
            'innerOffset': self.inner_offset,
            'theta0': self.theta0,
            'basePoint': list(self.base_point),
        }

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> IntrinsicParams:
        _check_keys(json, 'intrinsic params', ['polar', 'fraction'],
            ['inner_offset', 'theta0', 'base_point'])
        base_point = json.get('base_point', [0.0, 0.0, 0.0])
        if not isinstance(base_point, list) or len(base_point) != 3:
            raise RecipeError('basePoint must be a list of three numbers')
        return cls(
            polar=function_from_json(json['polar'], 'polar'),
            fraction=function_from_json(json['fraction'], 'fraction'),
            inner_offset=_real(json.get('inner_offset', 0.0), 'innerOffset'),
            theta0=_real(json.get('theta0', 0.0), 'theta0'),
            base_point=[_real(v, 'basePoint') for v in base_point],
        )


@recipe_kind('example_helix')
@dataclass
class ExampleHelixParams:
    ''' The constant-fraction helix with explicit coordinates. '''
    phi0: float

    def sample_count(self) -> typing.Optional[int]:
        return None

    def generate(self, a: float, b: typing.Optional[float], n: int) -> FamilyCurve:
        return families.example_helix_curve(self.phi0, a,
            _need_end(b, 'example_helix'), n)

    def to_json(self) -> T_JSON_DICT:
        return {'phi0': self.phi0}

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> ExampleHelixParams:
        _check_keys(json, 'example_helix params', ['phi0'])
        return cls(phi0=_real(json['phi0'], 'phi0'))


@recipe_kind('general_helix')
@dataclass
class GeneralHelixParams:
    '''
    A general helix from a prescribed curvature ``kappa`` or an angular function
    ``xi``. With ``kappa``, ``grid.b`` is optional and caps the interval.
    '''
    phi0: float

    kappa: typing.Optional[Expr] = None

    xi: typing.Optional[FunctionSource] = None

    def sample_count(self) -> typing.Optional[int]:
        return _sample_count(self.xi)

    def generate(self, a: float, b: typing.Optional[float], n: int) -> FamilyCurve:
        if self.kappa is not None:
            return families.general_helix(self.phi0, a, b, n, kappa=self.kappa)
        b = _need_end(b, 'general_helix with xi')
        grid = Grid(a, b, n)
        xi = _bind(typing.cast(FunctionSource, self.xi), grid)
        return families.general_helix(self.phi0, a, b, n, xi=xi)

    def to_json(self) -> T_JSON_DICT:
        json: T_JSON_DICT = {'phi0': self.phi0}
        if self.kappa is not None:
            json['kappa'] = self.kappa.to_json()
        if self.xi is not None:
            json['xi'] = function_to_json(self.xi)
        return json

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> GeneralHelixParams:
        _check_keys(json, 'general_helix params', ['phi0'], ['kappa', 'xi'])
        if ('kappa' in json) == ('xi' in json):
            raise RecipeError('general_helix params need exactly one of kappa, xi')
        kappa = None
        if 'kappa' in json:
            source = function_from_json(json['kappa'], 'kappa')
            if isinstance(source, SampledFunction):
                raise RecipeError('kappa must be an expression')
            kappa = source
        return cls(
            phi0=_real(json['phi0'], 'phi0'),
            kappa=kappa,
            xi=function_from_json(json['xi'], 'xi') if 'xi' in json else None,
        )


@recipe_kind('slant_helix')
@dataclass
class SlantHelixParams:
    ''' A slant helix with normal indicatrix geodesic curvature ``m``. '''
    m: float

    fraction: FunctionSource

    def sample_count(self) -> typing.Optional[int]:
        return _sample_count(self.fraction)

    def generate(self, a: float, b: typing.Optional[float], n: int) -> FamilyCurve:
        b = _need_end(b, 'slant_helix')
        return families.slant_helix(self.m, _bind(self.fraction, Grid(a, b, n)),
            a, b, n)

    def to_json(self) -> T_JSON_DICT:
        return {'m': self.m, 'fraction': function_to_json(self.fraction)}

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> SlantHelixParams:
        _check_keys(json, 'slant_helix params', ['m', 'fraction'])
        return cls(
            m=_real(json['m'], 'm'),
            fraction=function_from_json(json['fraction'], 'fraction'),
        )


@dataclass
class RecipeGrid:
    a: float

    b: typing.Optional[float] = None

    n: typing.Optional[int] = None

    def to_json(self) -> T_JSON_DICT:
        json: T_JSON_DICT = {'a': self.a}
        if self.b is not None:
            json['b'] = self.b
        if self.n is not None:
            json['n'] = self.n
        return json

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> RecipeGrid:
        json = normalise_keys(json)
        _check_keys(json, 'grid', ['a'], ['b', 'n'])
        n = json.get('n')
        if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
            raise RecipeError(f'grid.n must be an integer, got {n!r}')
        return cls(
            a=_real(json['a'], 'grid.a'),
            b=_real(json['b'], 'grid.b') if json.get('b') is not None else None,
            n=n,
        )


def check_n(n: int) -> int:
    if n < MIN_RECIPE_N or n % 2 == 0:
        raise RecipeError(f'grid size must be odd and at least {MIN_RECIPE_N}, '
            f'got {n}')
    return n


def default_n() -> int:
    ''' Grid size from ``FRENET_DEFAULT_N``, else :data:`DEFAULT_N`. '''
    value = os.environ.get('FRENET_DEFAULT_N')
    if value is None:
        return DEFAULT_N
    try:
        return int(value)
    except ValueError:
        raise RecipeError(f'FRENET_DEFAULT_N must be an integer, got {value!r}') \
            from None


@dataclass
class Recipe:
    ''' A complete curve construction. '''
    kind: str

    params: typing.Any

    grid: RecipeGrid

    outputs: typing.List[str] = field(default_factory=lambda: list(DEFAULT_OUTPUTS))

    def resolve_n(self, override: typing.Optional[int] = None) -> int:
        '''
        Grid size: ``override`` (the ``--n`` flag), else ``grid.n``, else the
        number of samples of a sampled function, else :func:`default_n`.
        '''
        sampled = self.params.sample_count()
        if override is not None:
            n = override
        elif self.grid.n is not None:
            n = self.grid.n
        elif sampled is not None:
            n = sampled
        else:
            n = default_n()
        check_n(n)
        if sampled is not None and n != sampled:
            raise RecipeError(f'sampled functions fix the grid size to {sampled}, '
                f'not {n}')
        return n

    def generate(self, n: typing.Optional[int] = None) -> FamilyCurve:
        n = self.resolve_n(n)
        logger.info('Generating %s curve with n=%d', self.kind, n)
        return self.params.generate(self.grid.a, self.grid.b, n)

    def to_json(self) -> T_JSON_DICT:
        return {
            'kind': self.kind,
            'params': self.params.to_json(),
            'grid': self.grid.to_json(),
            'outputs': list(self.outputs),
        }

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> Recipe:
        json = normalise_keys(json)
        _check_keys(json, 'recipe', ['kind', 'params', 'grid'], ['outputs'])
        kind = json['kind']
        if kind not in recipe_kinds():
            raise RecipeError(f'unknown recipe kind {kind!r}, expected one of '
                f'{", ".join(recipe_kinds())}')
        outputs = json.get('outputs', DEFAULT_OUTPUTS)
        if not isinstance(outputs, list) or not set(outputs) <= set(OUTPUTS):
            raise RecipeError(f'outputs must be a subset of {", ".join(OUTPUTS)}')
        return cls(
            kind=kind,
            params=parse_json_params(kind, normalise_keys(json['params'])),
            grid=RecipeGrid.from_json(json['grid']),
            outputs=list(outputs),
        )

    @classmethod
    def load(cls, path) -> Recipe:
        try:
            with open(path, encoding='utf-8') as handle:
                json = json_.load(handle)
        except json_.JSONDecodeError as exc:
            raise RecipeError(f'{path}: invalid JSON: {exc}') from exc
        except UnicodeDecodeError as exc:
            raise RecipeError(f'{path}: not UTF-8 text: {exc}') from exc
        return cls.from_json(json)


@dataclass
class Check:
    ''' One verified property: passes when ``value <= tolerance``. '''
    name: str

    value: float

    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def to_json(self) -> T_JSON_DICT:
        return {
            'name': self.name,
            'value': _json_float(self.value),
            'tolerance': self.tolerance,
            'passed': self.passed,
        }


def _json_float(value: float) -> typing.Optional[float]:
    value = float(value)
    return value if math.isfinite(value) else None


def _json_column(fn: GridFn) -> typing.List[typing.Optional[float]]:
    return [float(v) if d else None for v, d in zip(fn.values, fn.defined)]


def interior_mask(grid: Grid, *fns: GridFn) -> np.ndarray:
    ''' Interior samples, with :data:`EDGE_TRIM` dropped, where every ``fn`` is
    defined. '''
    keep = np.zeros(grid.n, dtype=bool)
    keep[grid.interior(EDGE_TRIM)] = True
    for fn in fns:
        keep &= fn.defined
    return keep


def relative_error(actual: np.ndarray, expected: np.ndarray,
        mask: typing.Optional[np.ndarray] = None) -> float:
    '''
    Largest ``|actual - expected| / max(|expected|, floor)`` over ``mask``,
    vectors compared by norm. See :data:`RELATIVE_FLOOR`.
    '''
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    if mask is not None:
        actual, expected = actual[mask], expected[mask]
    if not expected.size:
        return math.nan
    diff = np.abs(actual - expected)
    scale = np.abs(expected)
    if expected.ndim > 1:
        diff = np.linalg.norm(diff, axis=1)
        scale = np.linalg.norm(expected, axis=1)
    floor = max(RELATIVE_FLOOR * scale.max(), ABSOLUTE_FLOOR)
    return float((diff / np.maximum(scale, floor)).max())


def max_abs_error(actual: np.ndarray, expected: np.ndarray) -> float:
    diff = np.asarray(actual, dtype=float) - np.asarray(expected, dtype=float)
    if diff.ndim > 1:
        return float(np.linalg.norm(diff, axis=1).max())
    return float(np.abs(diff).max())


def median_deviation(fn: GridFn, mask: np.ndarray) -> typing.Tuple[float, float]:
    ''' Median of ``fn`` over ``mask`` and the largest deviation from it. '''
    values = fn.values[mask & fn.defined]
    if not values.size:
        return math.nan, math.nan
    median = float(np.median(values))
    return median, float(np.abs(values - median).max())


@dataclass(eq=False)
class AnalysisReport:
    '''
    Numeric apparatus of one curve: a per-sample table, summary statistics
    over the trimmed interior, and checks.
    '''
    apparatus: FrenetApparatus

    summary: T_JSON_DICT = field(default_factory=dict)

    checks: typing.List[Check] = field(default_factory=list)

    @property
    def grid(self) -> Grid:
        return self.apparatus.grid

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> typing.List[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, value: float, tolerance: float) -> Check:
        check = Check(name, value, tolerance)
        self.checks.append(check)
        level = logging.DEBUG if check.passed else logging.WARNING
        logger.log(level, 'Check %s: %.3e (tolerance %.1e)', name, value, tolerance)
        return check

    def to_json(self) -> T_JSON_DICT:
        app = self.apparatus
        return {
            'grid': self.grid.to_json(),
            'passed': self.passed,
            'summary': {k: _json_float(v) for k, v in self.summary.items()},
            'checks': [c.to_json() for c in self.checks],
            'table': {
                's': [float(v) for v in self.grid.samples],
                'kappa': _json_column(app.kappa),
                'tau': _json_column(app.tau),
                'fraction': _json_column(app.fraction),
                'sigma': _json_column(app.sigma),
            },
        }


def _summarize(app: FrenetApparatus) -> AnalysisReport:
    report = AnalysisReport(app)
    keep = interior_mask(app.grid)
    report.summary['maxSpeedDeviation'] = float(np.abs(app.speed - 1).max())
    for name in ('kappa', 'tau', 'fraction', 'sigma'):
        median, deviation = median_deviation(getattr(app, name), keep)
        report.summary[f'{name}Median'] = median
        report.summary[f'{name}Deviation'] = deviation
    return report


def analyze(table: CurveTable, tol_rel: float = CLOSED_NUMERIC_TOL) -> AnalysisReport:
    '''
    Numeric κ, τ, τ/κ and σ of a curve file, with the unit-speed check and, when
    the file carries ``kappa`` and ``tau`` columns, a comparison against them.
    '''
    report = _summarize(FrenetApparatus.of(table.curve))
    app = report.apparatus
    report.add('unit_speed', report.summary['maxSpeedDeviation'], UNIT_SPEED_TOL)
    for name in ('kappa', 'tau'):
        given = getattr(table, name)
        if given is None:
            continue
        numeric = getattr(app, name)
        keep = interior_mask(app.grid, given, numeric)
        value = relative_error(numeric.values, given.values, keep)
        report.summary[f'closedVsNumeric{name.capitalize()}'] = value
        report.add(f'closed_vs_numeric_{name}', value, tol_rel)
    return report


def _common_checks(report: AnalysisReport, family: FamilyCurve):
    app = report.apparatus
    spec = family.spec
    grid = family.grid
    report.add('unit_speed', report.summary['maxSpeedDeviation'], UNIT_SPEED_TOL)

    for name in ('kappa', 'tau'):
        closed, numeric = getattr(family, name), getattr(app, name)
        keep = interior_mask(grid, closed, numeric)
        value = relative_error(numeric.values, closed.values, keep)
        report.summary[f'closedVsNumeric{name.capitalize()}'] = value
        report.add(f'closed_vs_numeric_{name}', value, CLOSED_NUMERIC_TOL)

    fraction = sample_fn(spec.fraction, grid)
    curved = family.kappa.values > KAPPA_EPS
    identity = relative_error(family.tau.values[curved] / family.kappa.values[curved],
        fraction[curved])
    report.add('fraction_identity', identity, FRACTION_IDENTITY_TOL)
    keep = interior_mask(grid, app.fraction)
    report.add('numeric_fraction',
        relative_error(app.fraction.values, fraction, keep), CLOSED_NUMERIC_TOL)

    sigma = sigma_from_kappa_tau(family.kappa, family.tau)
    keep = interior_mask(grid, sigma, family.sigma)
    report.add('sigma_consistency',
        relative_error(family.sigma.values, sigma.values, keep),
        SIGMA_CONSISTENCY_TOL)

    # <b, e3> is the inner integral I itself
    keep = interior_mask(grid) & app.frames.defined
    report.add('binormal_axis', max_abs_error(app.frames.b[keep, 2],
        inner_integral(spec).values[keep]), COORDINATE_TOL)

    oracle = integrate_frenet(family.kappa, family.tau, initial_frame(spec),
        spec.base_point)
    report.add('oracle_closure', max_abs_error(oracle.points, family.curve.points),
        ORACLE_CLOSURE_TOL)
    keep = interior_mask(grid)
    report.add('oracle_reextraction_kappa', relative_error(
        numeric_kappa(oracle).values, family.kappa.values, keep),
        ORACLE_REEXTRACTION_TOL)
    tau = numeric_tau(oracle)
    keep = interior_mask(grid, tau)
    report.add('oracle_reextraction_tau', relative_error(tau.values,
        family.tau.values, keep), ORACLE_REEXTRACTION_TOL)


def _lancret(report: AnalysisReport, expected: float):
    ''' τ/κ constant, and equal to ``expected``. '''
    app = report.apparatus
    median, deviation = median_deviation(app.fraction, interior_mask(app.grid))
    # the fraction is signed; its magnitude is reported alongside
    report.summary['fraction'] = expected
    report.summary['absFraction'] = abs(expected)
    report.add('lancret', deviation, CONSTANCY_TOL)
    report.add('fraction_value', abs(median - expected), CONSTANCY_TOL)


def _family_checks(report: AnalysisReport, family: FamilyCurve):
    ref = family.reference
    points = family.curve.points
    if family.kind == 'example_helix':
        _lancret(report, ref['fraction'])
        report.add('closed_coordinates', max_abs_error(points, ref['points']),
            COORDINATE_TOL)
        keep = interior_mask(family.grid)
        report.add('closed_kappa', relative_error(family.kappa.values,
            ref['kappa'], keep), COORDINATE_TOL)
    elif family.kind == 'general_helix':
        _lancret(report, ref['fraction'])
        report.add('beta_coordinates', max_abs_error(points, ref['beta']),
            COORDINATE_TOL)
        if 'classic' in ref:
            report.add('classic_form', max_abs_error(ref['beta'], ref['classic']),
                COORDINATE_TOL)
            keep = interior_mask(family.grid)
            report.add('kappa_prescribed', relative_error(family.kappa.values,
                ref['kappaPrescribed'], keep), COORDINATE_TOL)
    elif family.kind == 'slant_helix':
        closed = sigma_from_kappa_tau(family.kappa, family.tau)
        median, deviation = median_deviation(closed, interior_mask(family.grid))
        report.summary['sigmaClosedMedian'] = median
        report.add('sigma_closed_value', abs(median - ref['sigma']), CONSTANCY_TOL)
        # σ from positions needs a fourth difference, so it is taken on at most
        # SIGMA_MAX_N samples
        app = FrenetApparatus.of(family.curve.decimated(SIGMA_MAX_N))
        median, deviation = median_deviation(app.sigma, interior_mask(app.grid))
        report.summary['sigmaNumericMedian'] = median
        report.add('sigma_constancy', deviation, CONSTANCY_TOL)
        report.add('sigma_value', abs(median - ref['sigma']), CONSTANCY_TOL)
        report.add('alpha_coordinates', max_abs_error(points, ref['alpha']),
            COORDINATE_TOL)
        report.add('phase_closed_form',
            max_abs_error(ref['phase'], ref['phaseIntegral']), PHASE_TOL)


def verify_family(family: FamilyCurve) -> AnalysisReport:
    ''' Run every check that applies to ``family``. '''
    report = _summarize(FrenetApparatus.of(family.curve))
    _common_checks(report, family)
    _family_checks(report, family)
    logger.info('%d of %d checks passed', len(report.checks) - len(report.failed()),
        len(report.checks))
    return report


def verify(recipe: Recipe, n: typing.Optional[int] = None) -> AnalysisReport:
    ''' Generate the recipe's curve and run :func:`verify_family` on it. '''
    return verify_family(recipe.generate(n))


def curve_table(family: FamilyCurve) -> CurveTable:
    '''
    The CSV contents for a generated curve. σ is the closed form when the
    fraction's derivative is exact, otherwise it is computed from the closed κ
    and τ by :func:`icurves.frenet.sigma_from_kappa_tau`.
    '''
    if family.sigma_closed:
        sigma, source = family.sigma, 'closed'
    else:
        sigma, source = sigma_from_kappa_tau(family.kappa, family.tau), 'numeric'
    return CurveTable(family.curve, family.kappa, family.tau, sigma, source)
