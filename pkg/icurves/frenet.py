'''
Numeric Frenet apparatus of a sampled curve.

Everything here is computed from positions alone, through
:func:`icurves.numerics.finite_diff`, so it serves as the independent check
on the closed forms of :mod:`icurves.intrinsic` and :mod:`icurves.families`.
'''
from __future__ import annotations
from dataclasses import dataclass
import logging

import numpy as np

from .numerics import CurveSamples, FrameField, Grid, GridError, GridFn, finite_diff


logger = logging.getLogger(__name__)

#: Curvature below which the normal, torsion and σ are reported as gaps.
KAPPA_EPS = 1e-6

#: Smallest admissible speed ``‖β'‖``.
SPEED_EPS = 1e-9

MIN_SAMPLES = 9


class DegenerateCurveError(ValueError):
    ''' The curve stops, or has no principal normal where one is required. '''


class CurvatureError(ValueError):
    ''' No sample has curvature above :data:`KAPPA_EPS`. '''


def _derivatives(c: CurveSamples, orders=(1, 2, 3)):
    if c.grid.n < MIN_SAMPLES:
        raise GridError(f'need at least {MIN_SAMPLES} samples, got {c.grid.n}')
    points = GridFn(c.grid, c.points)
    derivatives = [finite_diff(points, k).values for k in orders]
    speed = np.linalg.norm(derivatives[0], axis=1)
    slow = np.flatnonzero(speed < SPEED_EPS)
    if slow.size:
        raise DegenerateCurveError(
            f'curve is stationary at s={c.grid.samples[slow[0]]!r}')
    return derivatives


def numeric_kappa(c: CurveSamples) -> GridFn:
    ''' ``κ = ‖β' × β''‖ / ‖β'‖³`` '''
    d1, d2 = _derivatives(c, (1, 2))
    speed = np.linalg.norm(d1, axis=1)
    return GridFn(c.grid, np.linalg.norm(np.cross(d1, d2), axis=1) / speed ** 3)


def numeric_tau(c: CurveSamples) -> GridFn:
    '''
    ``τ = (β' × β'')·β‴ / ‖β' × β''‖²``, with gaps where
    ``κ <= KAPPA_EPS``.
    '''
    d1, d2, d3 = _derivatives(c)
    cross = np.cross(d1, d2)
    norm2 = np.einsum('ij,ij->i', cross, cross)
    kappa = np.sqrt(norm2) / np.linalg.norm(d1, axis=1) ** 3
    defined = kappa > KAPPA_EPS
    tau = np.zeros(c.grid.n)
    tau[defined] = np.einsum('ij,ij->i', cross[defined], d3[defined]) / norm2[defined]
    return GridFn(c.grid, tau, defined)


def frames(c: CurveSamples, strict: bool = False) -> FrameField:
    '''
    Frenet frames: ``t = β'/‖β'‖``, ``n`` the unit component of ``t'``, and
    ``b = t × n``.

    :param strict: raise instead of leaving gaps where ``κ <= KAPPA_EPS``.
    :raises DegenerateCurveError: in strict mode, at the first sample without a
        principal normal.
    '''
    d1, d2 = _derivatives(c, (1, 2))
    speed = np.linalg.norm(d1, axis=1)
    t = d1 / speed[:, None]
    # t' is parallel to the part of β'' normal to β'
    normal = d2 - np.einsum('ij,ij->i', d2, t)[:, None] * t
    kappa = np.linalg.norm(normal, axis=1) / speed ** 2
    defined = kappa > KAPPA_EPS
    if strict and not defined.all():
        i = int(np.flatnonzero(~defined)[0])
        raise DegenerateCurveError(
            f'no principal normal at s={c.grid.samples[i]!r}')
    n = np.zeros_like(t)
    n[defined] = normal[defined] / np.linalg.norm(normal[defined], axis=1)[:, None]
    return FrameField(t, n, np.cross(t, n), defined)


def _fraction(kappa: GridFn, tau: GridFn) -> GridFn:
    if kappa.grid != tau.grid:
        raise GridError('curvature and torsion must share one grid')
    defined = kappa.defined & tau.defined & (kappa.values > KAPPA_EPS)
    if not defined.any():
        raise CurvatureError(f'curvature never exceeds {KAPPA_EPS}')
    fraction = np.zeros(kappa.grid.n)
    fraction[defined] = tau.values[defined] / kappa.values[defined]
    return GridFn(kappa.grid, fraction, defined)


def fraction(kappa: GridFn, tau: GridFn) -> GridFn:
    ''' Intrinsic fraction ``τ/κ``, with gaps where ``κ <= KAPPA_EPS``. '''
    return _fraction(kappa, tau)


def sigma_from_kappa_tau(kappa: GridFn, tau: GridFn) -> GridFn:
    '''
    Geodesic curvature of the normal indicatrix,
    ``σ = (τ/κ)' / ((1 + (τ/κ)²)^{3/2} κ)``.

    ``τ/κ`` is formed pointwise and differentiated once. Samples whose stencil
    touches a sample with ``κ <= KAPPA_EPS`` are gaps.

    :raises CurvatureError: if no sample has ``κ > KAPPA_EPS``.
    '''
    ratio = _fraction(kappa, tau)
    dratio = finite_diff(ratio, 1)
    defined = dratio.defined & ratio.defined
    if not defined.all():
        logger.warning('sigma has %d gap(s) where the curvature vanishes',
            int((~defined).sum()))
    sigma = np.zeros(kappa.grid.n)
    sigma[defined] = dratio.values[defined] / (
        (1 + ratio.values[defined] ** 2) ** 1.5 * kappa.values[defined])
    return GridFn(kappa.grid, sigma, defined)


def sigma_from_darboux(kappa: GridFn, tau: GridFn) -> GridFn:
    ''' The same quantity through the Darboux norm: ``κ² / (κ² + τ²)^{3/2} · (τ/κ)'``. '''
    ratio = _fraction(kappa, tau)
    dratio = finite_diff(ratio, 1)
    defined = dratio.defined & ratio.defined
    k = kappa.values[defined]
    w = tau.values[defined]
    sigma = np.zeros(kappa.grid.n)
    sigma[defined] = k ** 2 / (k ** 2 + w ** 2) ** 1.5 * dratio.values[defined]
    return GridFn(kappa.grid, sigma, defined)


@dataclass(eq=False)
class FrenetApparatus:
    ''' Numeric κ, τ, τ/κ, σ and frames of one sampled curve. '''
    grid: Grid

    kappa: GridFn

    tau: GridFn

    fraction: GridFn

    sigma: GridFn

    frames: FrameField

    #: ``‖β'‖`` at every sample; 1 for an arc-length parametrization.
    speed: np.ndarray

    @classmethod
    def of(cls, c: CurveSamples) -> FrenetApparatus:
        ''' Compute the full apparatus of ``c``. '''
        kappa = numeric_kappa(c)
        tau = numeric_tau(c)
        d1 = finite_diff(GridFn(c.grid, c.points), 1).values
        return cls(
            grid=c.grid,
            kappa=kappa,
            tau=tau,
            fraction=fraction(kappa, tau),
            sigma=sigma_from_kappa_tau(kappa, tau),
            frames=frames(c),
            speed=np.linalg.norm(d1, axis=1),
        )

    def residuals(self, trim: float = 0.02) -> float:
        '''
        Largest of ``‖t' - κn‖``, ``‖n' + κt - τb‖`` and ``‖b' + τn‖`` over the
        trimmed interior, derivatives by finite differences.
        '''
        grid = self.grid
        ff = self.frames
        dt = finite_diff(GridFn(grid, ff.t), 1)
        dn = finite_diff(GridFn(grid, ff.n, ff.defined), 1)
        db = finite_diff(GridFn(grid, ff.b, ff.defined), 1)
        k = self.kappa.values[:, None]
        w = self.tau.values[:, None]
        parts = [
            np.linalg.norm(dt.values - k * ff.n, axis=1),
            np.linalg.norm(dn.values + k * ff.t - w * ff.b, axis=1),
            np.linalg.norm(db.values + w * ff.n, axis=1),
        ]
        keep = np.zeros(grid.n, dtype=bool)
        keep[grid.interior(trim)] = True
        keep &= dn.defined & db.defined & self.tau.defined
        if not keep.any():
            raise CurvatureError('no interior sample with a frame')
        return float(max(p[keep].max() for p in parts))
