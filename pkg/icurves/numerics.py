'''
Calculus on uniform arc-length grids.

Every indefinite integral of the construction becomes ``offset + ∫_a^s`` on a
:class:`Grid`; derivatives come from fixed fourth order stencils; and
:func:`integrate_frenet` integrates the Serret-Frenet system as an independent
oracle for curves given by their curvature and torsion.
'''
from __future__ import annotations
from dataclasses import dataclass, field
import functools
import logging
import math
import typing

import numpy as np

from .util import T_JSON_DICT


logger = logging.getLogger(__name__)

#: Grid size used when nothing else asks for one.
DEFAULT_N = 4097

#: Orthonormality tolerance for frames.
FRAME_TOL = 1e-9


class GridError(ValueError):
    ''' A grid is malformed, too small, or two grids that must agree do not. '''


class FrameError(ValueError):
    ''' A frame is not orthonormal and right handed. '''


@dataclass(frozen=True)
class Grid:
    '''
    Uniform samples ``s_i = a + i (b - a) / (n - 1)`` of an arc-length interval.
    '''
    a: float

    b: float

    #: Number of samples, odd and at least 5.
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise GridError(f'grid ends must be finite: ({self.a}, {self.b})')
        if not self.a < self.b:
            raise GridError(f'grid needs a < b, got ({self.a}, {self.b})')
        if self.n < 5 or self.n % 2 == 0:
            raise GridError(f'grid needs an odd n >= 5, got {self.n}')

    @property
    def h(self) -> float:
        ''' Sample spacing. '''
        return (self.b - self.a) / (self.n - 1)

    @property
    def samples(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n)

    def index_of(self, s: float) -> int:
        ''' Index of the sample nearest to ``s``. '''
        i = int(round((s - self.a) / self.h))
        return min(max(i, 0), self.n - 1)

    def interior(self, trim: float = 0.02) -> slice:
        ''' Sample indices with ``trim`` of the samples removed at each end. '''
        k = int(round(trim * (self.n - 1)))
        return slice(k, self.n - k)

    def with_n(self, n: int) -> Grid:
        return Grid(self.a, self.b, n)

    def to_json(self) -> T_JSON_DICT:
        return {'a': self.a, 'b': self.b, 'n': self.n}

    @classmethod
    def from_json(cls, json: T_JSON_DICT) -> Grid:
        return cls(
            a=float(json['a']),
            b=float(json['b']),
            n=int(json.get('n', DEFAULT_N)),
        )


@dataclass(eq=False)
class GridFn:
    '''
    A function sampled on a grid, scalar or vector valued.

    Samples where the function is not defined (for example torsion where the
    curvature vanishes) are *gaps*: ``defined`` is False there and the stored
    value is zero, so ``values`` is always finite.
    '''
    grid: Grid

    #: Shape ``(n,)`` or ``(n, k)``.
    values: np.ndarray

    defined: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape[:1] != (self.grid.n,):
            raise GridError(f'expected {self.grid.n} samples, got '
                f'{values.shape[0] if values.ndim else 0}')
        if self.defined is None:
            defined = np.ones(self.grid.n, dtype=bool)
        else:
            defined = np.array(self.defined, dtype=bool)
        finite = np.isfinite(values)
        if finite.ndim > 1:
            finite = finite.all(axis=tuple(range(1, finite.ndim)))
        if not finite[defined].all():
            i = int(np.flatnonzero(defined & ~finite)[0])
            raise GridError(f'non-finite sample at s={self.grid.samples[i]!r}')
        values[~defined] = 0.0
        self.values = values
        self.defined = defined

    @property
    def is_complete(self) -> bool:
        ''' True if there are no gaps. '''
        return bool(self.defined.all())

    def sample(self, grid: Grid) -> np.ndarray:
        if grid != self.grid:
            raise GridError(f'function sampled on {self.grid}, not {grid}')
        return self.values

    def __len__(self):
        return self.grid.n


@dataclass(eq=False)
class Tabulated:
    '''
    A scalar function known only by its samples on one grid, with an optional
    exact slope. Used where an expression cannot describe the function, e.g.
    an angular function built from the integral of a prescribed curvature.
    '''
    grid: Grid

    values: np.ndarray

    #: Exact derivative samples; estimated by :func:`finite_diff` when absent.
    slope: typing.Optional[np.ndarray] = None

    is_constant = False

    def __post_init__(self):
        self.values = GridFn(self.grid, self.values).values
        if self.slope is not None:
            self.slope = GridFn(self.grid, self.slope).values

    @property
    def has_exact_slope(self) -> bool:
        return self.slope is not None

    def sample(self, grid: Grid) -> np.ndarray:
        if grid != self.grid:
            raise GridError(f'tabulated function lives on {self.grid}, not {grid}')
        return self.values

    def derive(self) -> Tabulated:
        if self.slope is not None:
            return Tabulated(self.grid, self.slope)
        return Tabulated(self.grid,
            finite_diff(GridFn(self.grid, self.values), 1).values)

    def to_json(self) -> T_JSON_DICT:
        json: T_JSON_DICT = dict()
        json['samples'] = [float(v) for v in self.values]
        if self.slope is not None:
            json['slope'] = [float(v) for v in self.slope]
        return json

    @classmethod
    def from_json(cls, json: T_JSON_DICT, grid: Grid) -> Tabulated:
        return cls(
            grid=grid,
            values=np.asarray(json['samples'], dtype=float),
            slope=np.asarray(json['slope'], dtype=float) if 'slope' in json else None,
        )


@dataclass(eq=False)
class Frame:
    ''' Tangent, principal normal and binormal at one point. '''
    t: np.ndarray

    n: np.ndarray

    b: np.ndarray

    def deviation(self) -> float:
        '''
        Largest of the Gram matrix deviation from the identity and of
        ``|b - t × n|``.
        '''
        m = np.array([self.t, self.n, self.b], dtype=float)
        gram = np.abs(m @ m.T - np.eye(3)).max()
        return float(max(gram, np.abs(self.b - np.cross(self.t, self.n)).max()))

    def check(self, tol: float = FRAME_TOL) -> None:
        deviation = self.deviation()
        if deviation > tol:
            raise FrameError(f'frame deviates from orthonormal by {deviation:.3e}')

    @classmethod
    def from_tangent_normal(cls, t, n) -> Frame:
        ''' Orthonormalize ``t``, ``n`` and complete with ``b = t × n``. '''
        t, n, _ = orthonormalize(np.asarray(t, float), np.asarray(n, float),
            np.cross(t, n))
        return cls(t, n, np.cross(t, n))


@dataclass(eq=False)
class FrameField:
    '''
    Frames at every sample of a grid. Samples without a principal normal are
    gaps; their ``n`` and ``b`` are zero.
    '''
    t: np.ndarray

    n: np.ndarray

    b: np.ndarray

    defined: np.ndarray

    def __len__(self):
        return self.t.shape[0]

    def __getitem__(self, i: int) -> Frame:
        if not self.defined[i]:
            raise IndexError(f'no frame at sample {i}')
        return Frame(self.t[i], self.n[i], self.b[i])

    def max_deviation(self) -> float:
        ''' Largest :meth:`Frame.deviation` over the defined samples. '''
        idx = np.flatnonzero(self.defined)
        if not idx.size:
            return 0.0
        m = np.stack([self.t[idx], self.n[idx], self.b[idx]], axis=1)
        gram = np.einsum('kij,klj->kil', m, m) - np.eye(3)
        cross = self.b[idx] - np.cross(self.t[idx], self.n[idx])
        return float(max(np.abs(gram).max(), np.abs(cross).max()))


@dataclass(eq=False)
class CurveSamples:
    ''' Positions of a curve at every sample of a grid, frames optional. '''
    grid: Grid

    #: Shape ``(n, 3)``.
    points: np.ndarray

    frames: typing.Optional[FrameField] = None

    def __post_init__(self):
        self.points = GridFn(self.grid, self.points).values
        if self.points.shape != (self.grid.n, 3):
            raise GridError(f'expected points of shape ({self.grid.n}, 3), got '
                f'{self.points.shape}')

    def decimated(self, max_n: int) -> CurveSamples:
        '''
        Every ``step``-th sample, with ``step`` the smallest power of two that
        brings the count to at most ``max_n`` while keeping it odd. Frames are
        dropped. Returns ``self`` when no step applies.
        '''
        step = 1
        count = self.grid.n - 1
        while count // step + 1 > max_n and count % (4 * step) == 0:
            step *= 2
        if step == 1:
            return self
        return CurveSamples(self.grid.with_n(count // step + 1),
            self.points[::step])


def orthonormalize(t, n, b):
    ''' Modified Gram-Schmidt on the triple ``t``, ``n``, ``b``. '''
    t = t / np.linalg.norm(t)
    n = n - np.dot(n, t) * t
    n = n / np.linalg.norm(n)
    b = b - np.dot(b, t) * t
    b = b - np.dot(b, n) * n
    b = b / np.linalg.norm(b)
    return t, n, b


def cumulative_integral(f: GridFn, offset=0.0) -> GridFn:
    '''
    Cumulative integral ``offset + ∫_a^{s_i} f`` at every sample.

    Each grid interval is integrated with the cubic through four neighbouring
    samples (weights ``[-1, 13, 13, -1] / 24``, one-sided ``[9, 19, -5, 1] /
    24`` in the first and last interval), so the result is fourth order
    accurate and exact for cubics. ``offset`` may be a vector for vector valued
    ``f``.
    '''
    if not f.is_complete:
        raise GridError('cannot integrate a function with gaps')
    y = f.values
    h = f.grid.h
    first = (9 * y[0] + 19 * y[1] - 5 * y[2] + y[3]) / 24
    middle = (-y[:-3] + 13 * y[1:-2] + 13 * y[2:-1] - y[3:]) / 24
    last = (9 * y[-1] + 19 * y[-2] - 5 * y[-3] + y[-4]) / 24
    increments = np.concatenate([first[None], middle, last[None]]) * h
    zero = np.zeros((1,) + y.shape[1:])
    result = np.asarray(offset, dtype=float) + np.concatenate(
        [zero, np.cumsum(increments, axis=0)])
    return GridFn(f.grid, result)


def fornberg_weights(z: float, x: typing.Sequence[float], m: int) -> np.ndarray:
    '''
    Finite difference weights for derivatives ``0..m`` at ``z`` from samples
    at ``x``, by Fornberg's recurrence. Column ``k`` holds the weights of the
    ``k``-th derivative.
    '''
    npts = len(x)
    c = np.zeros((npts, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, npts):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


@dataclass(frozen=True)
class _Stencils:
    half: int
    width: int
    central: np.ndarray
    left: typing.Tuple[np.ndarray, ...]
    right: typing.Tuple[np.ndarray, ...]


@functools.lru_cache(maxsize=None)
def _stencils(order: int) -> _Stencils:
    ''' Fourth order stencils in units of the grid spacing. '''
    half = (order + 1) // 2 + 1
    width = max(2 * half + 1, order + 4)
    central = fornberg_weights(0, range(-half, half + 1), order)[:, order]
    left = tuple(fornberg_weights(i, range(width), order)[:, order]
        for i in range(half))
    right = tuple(fornberg_weights(width - 1 - i, range(width), order)[:, order]
        for i in range(half))
    return _Stencils(half, width, central, left, right)


def finite_diff(f: GridFn, order: int) -> GridFn:
    '''
    Derivative of order 1, 2 or 3 with fourth order central stencils in the
    interior and fourth order one-sided stencils at the edge samples. Vector
    valued functions are differentiated componentwise. A result sample is a gap
    if its stencil touches a gap.
    '''
    if order not in (1, 2, 3):
        raise ValueError(f'derivative order must be 1, 2 or 3, got {order}')
    st = _stencils(order)
    n = f.grid.n
    if n < max(7, st.width):
        raise GridError(f'need at least {max(7, st.width)} samples, got {n}')
    y = f.values
    out = np.zeros_like(y)
    defined = np.ones(n, dtype=bool)
    interior = slice(st.half, n - st.half)
    for k, w in zip(range(-st.half, st.half + 1), st.central):
        window = slice(st.half + k, n - st.half + k)
        out[interior] += w * y[window]
        defined[interior] &= f.defined[window]
    for i in range(st.half):
        out[i] = np.tensordot(st.left[i], y[:st.width], axes=(0, 0))
        out[n - 1 - i] = np.tensordot(st.right[i], y[n - st.width:], axes=(0, 0))
        defined[i] = f.defined[:st.width].all()
        defined[n - 1 - i] = f.defined[n - st.width:].all()
    return GridFn(f.grid, out / f.grid.h ** order, defined)


def _frenet_rhs(state: np.ndarray, kappa: float, tau: float) -> np.ndarray:
    _, t, n, b = state
    return np.array([t, kappa * n, -kappa * t + tau * b, -tau * n])


def integrate_frenet(kappa: GridFn, tau: GridFn, frame0: Frame,
        p0=(0.0, 0.0, 0.0)) -> CurveSamples:
    '''
    Integrate the Serret-Frenet equations ``t' = κn``, ``n' = -κt + τb``,
    ``b' = -τn`` together with ``p' = t``.

    Classic fourth order Runge-Kutta with one step per grid interval; κ and τ
    at the half step are the mean of the neighbouring samples. The frame is
    re-orthonormalized by modified Gram-Schmidt after every step.

    :raises FrameError: if ``frame0`` is not orthonormal and right handed.
    '''
    if kappa.grid != tau.grid:
        raise GridError('curvature and torsion must share one grid')
    if not (kappa.is_complete and tau.is_complete):
        raise GridError('cannot integrate curvature or torsion with gaps')
    frame0.check()
    grid = kappa.grid
    h = grid.h
    k = kappa.values
    w = tau.values
    states = np.empty((grid.n, 4, 3))
    state = np.array([p0, frame0.t, frame0.n, frame0.b], dtype=float)
    states[0] = state
    drift = 0.0
    for i in range(grid.n - 1):
        k_mid = 0.5 * (k[i] + k[i + 1])
        w_mid = 0.5 * (w[i] + w[i + 1])
        d1 = _frenet_rhs(state, k[i], w[i])
        d2 = _frenet_rhs(state + 0.5 * h * d1, k_mid, w_mid)
        d3 = _frenet_rhs(state + 0.5 * h * d2, k_mid, w_mid)
        d4 = _frenet_rhs(state + h * d3, k[i + 1], w[i + 1])
        state = state + (h / 6) * (d1 + 2 * d2 + 2 * d3 + d4)
        gram = state[1:] @ state[1:].T
        drift = max(drift, float(np.abs(gram - np.eye(3)).max()))
        state[1], state[2], state[3] = orthonormalize(state[1], state[2], state[3])
        states[i + 1] = state
    logger.debug('Frenet integration over %d steps, largest frame drift before '
        're-orthonormalization %.3e', grid.n - 1, drift)
    frames = FrameField(states[:, 1].copy(), states[:, 2].copy(),
        states[:, 3].copy(), np.ones(grid.n, dtype=bool))
    return CurveSamples(grid, states[:, 0].copy(), frames)
