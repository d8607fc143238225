'''
Curve files: the CSV written by ``generate`` and read by ``analyze``, plus the
OBJ and gnuplot exports.
'''
from __future__ import annotations
from dataclasses import dataclass
import logging
import typing

import numpy as np
import pandas as pd

from .numerics import CurveSamples, FrameField, Grid, GridError, GridFn


logger = logging.getLogger(__name__)

COLUMNS = ('s', 'x', 'y', 'z', 'tx', 'ty', 'tz', 'nx', 'ny', 'nz', 'bx', 'by',
    'bz', 'kappa', 'tau', 'sigma')
REQUIRED = ('s', 'x', 'y', 'z')
SIGMA_SOURCES = ('closed', 'numeric')

#: Largest accepted relative deviation of the ``s`` spacing from uniform.
SPACING_TOL = 1e-9

MIN_ROWS = 9
FLOAT_FORMAT = '%.17g'


class CurveFileError(ValueError):
    ''' A curve file is empty, malformed, too short or not uniformly sampled. '''


@dataclass(eq=False)
class CurveTable:
    ''' Contents of a curve CSV. Columns other than ``s,x,y,z`` are optional. '''
    curve: CurveSamples

    kappa: typing.Optional[GridFn] = None

    tau: typing.Optional[GridFn] = None

    sigma: typing.Optional[GridFn] = None

    #: ``closed`` or ``numeric``, from the ``# sigma:`` comment line.
    sigma_source: typing.Optional[str] = None

    @property
    def grid(self) -> Grid:
        return self.curve.grid


def _column(values: np.ndarray, defined: typing.Optional[np.ndarray] = None):
    values = np.array(values, dtype=float)
    if defined is not None:
        values[~defined] = np.nan
    return values


def write_csv(path, table: CurveTable) -> None:
    '''
    Write ``table`` as CSV: a ``# sigma: closed|numeric`` comment line, the
    header, then one row per sample with 17 significant digits. Gaps are empty
    fields.
    '''
    curve = table.curve
    data = {'s': curve.grid.samples}
    for i, axis in enumerate('xyz'):
        data[axis] = curve.points[:, i]
    frames = curve.frames
    if frames is not None:
        for name, vectors, defined in (('t', frames.t, None),
                ('n', frames.n, frames.defined), ('b', frames.b, frames.defined)):
            for i, axis in enumerate('xyz'):
                data[name + axis] = _column(vectors[:, i], defined)
    for name in ('kappa', 'tau', 'sigma'):
        fn = getattr(table, name)
        if fn is not None:
            data[name] = _column(fn.values, fn.defined)
    df = pd.DataFrame(data, columns=[c for c in COLUMNS if c in data])
    with open(path, 'w', newline='') as handle:
        if table.sigma_source is not None:
            handle.write(f'# sigma: {table.sigma_source}\n')
        df.to_csv(handle, index=False, float_format=FLOAT_FORMAT, na_rep='',
            lineterminator='\n')
    logger.info('Wrote %d samples to %s', curve.grid.n, path)


def _sigma_source(path) -> typing.Optional[str]:
    with open(path, encoding='utf-8') as handle:
        first = handle.readline().strip()
    if first.startswith('#') and ':' in first:
        key, value = first[1:].split(':', 1)
        if key.strip() == 'sigma' and value.strip() in SIGMA_SOURCES:
            return value.strip()
    return None


def _grid_from_samples(s: np.ndarray) -> Grid:
    n = s.size
    if n < MIN_ROWS:
        raise CurveFileError(f'need at least {MIN_ROWS} rows, got {n}')
    if n % 2 == 0:
        raise CurveFileError(f'need an odd number of rows, got {n}')
    h = (s[-1] - s[0]) / (n - 1)
    if not h > 0:
        raise CurveFileError('arc length must increase')
    deviation = np.abs(np.diff(s) - h).max() / h
    if deviation > SPACING_TOL:
        raise CurveFileError(
            f'arc length is not uniformly sampled (spacing deviation {deviation:.3e})')
    try:
        return Grid(float(s[0]), float(s[-1]), n)
    except GridError as exc:
        raise CurveFileError(str(exc)) from exc


def read_csv(path) -> CurveTable:
    '''
    Read a curve CSV. Lines starting with ``#`` are comments.

    :raises CurveFileError: if the file is empty, lacks ``s,x,y,z``, has fewer
        than 9 or an even number of rows, or is not uniformly sampled.
    '''
    try:
        df = pd.read_csv(path, comment='#')
    except pd.errors.EmptyDataError as exc:
        raise CurveFileError(f'{path}: empty curve file') from exc
    except pd.errors.ParserError as exc:
        raise CurveFileError(f'{path}: {exc}') from exc
    except UnicodeDecodeError as exc:
        raise CurveFileError(f'{path}: not UTF-8 text: {exc}') from exc
    missing = [c for c in REQUIRED if c not in df.columns]
    if missing:
        raise CurveFileError(f'{path}: missing column(s) {", ".join(missing)}')
    if df.empty:
        raise CurveFileError(f'{path}: empty curve file')
    try:
        numeric = df.apply(pd.to_numeric)
    except ValueError as exc:
        raise CurveFileError(f'{path}: non-numeric value: {exc}') from exc
    core = numeric[list(REQUIRED)].to_numpy(dtype=float)
    if not np.isfinite(core).all():
        raise CurveFileError(f'{path}: s, x, y and z must all be finite')

    grid = _grid_from_samples(core[:, 0])
    frames = None
    if all(c in numeric.columns for c in COLUMNS[4:13]):
        t, n, b = (numeric[[p + 'x', p + 'y', p + 'z']].to_numpy(dtype=float)
            for p in 'tnb')
        defined = np.isfinite(n).all(axis=1) & np.isfinite(b).all(axis=1)
        frames = FrameField(t, np.nan_to_num(n), np.nan_to_num(b), defined)
    table = CurveTable(CurveSamples(grid, core[:, 1:4], frames),
        sigma_source=_sigma_source(path))
    for name in ('kappa', 'tau', 'sigma'):
        if name in numeric.columns:
            values = numeric[name].to_numpy(dtype=float)
            setattr(table, name, GridFn(grid, values, np.isfinite(values)))
    logger.info('Read %d samples from %s', grid.n, path)
    return table


def export_obj(table: CurveTable) -> str:
    ''' OBJ polyline: one ``v`` line per sample and one ``l`` line chaining them. '''
    lines = ['# intrinsic-curves polyline']
    lines.extend('v ' + ' '.join(FLOAT_FORMAT % c for c in p)
        for p in table.curve.points)
    lines.append('l ' + ' '.join(str(i) for i in range(1, table.grid.n + 1)))
    return '\n'.join(lines) + '\n'


_GNUPLOT_HEADER = '''\
# gnuplot script written by intrinsic-curves
set datafile separator ','
set datafile commentschars '#'
set key autotitle columnheader
data = '%(path)s'
set multiplot layout %(rows)d,2
set title 'curve'
splot data using 'x':'y':'z' with lines notitle
'''

_GNUPLOT_PROFILE = '''\
set title '%(name)s'
plot data using 's':'%(name)s' with lines notitle
'''

_GNUPLOT_FOOTER = '''\
unset multiplot
pause mouse close
'''


def export_gnuplot(table: CurveTable, csv_path: str) -> str:
    '''
    A gnuplot script plotting the curve and its κ, τ and σ profiles from the
    CSV at ``csv_path``, the only file it reads.
    '''
    profiles = [name for name in ('kappa', 'tau', 'sigma')
        if getattr(table, name) is not None]
    rows = (len(profiles) + 2) // 2
    script = _GNUPLOT_HEADER % {'path': csv_path.replace("'", "''"), 'rows': rows}
    for name in profiles:
        script += _GNUPLOT_PROFILE % {'name': name}
    return script + _GNUPLOT_FOOTER
