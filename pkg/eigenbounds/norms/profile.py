#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Radial profiles ``v(r) = ess-sup_omega |V(r omega)|`` and the sphere
functionals (sup and L^2 over the sphere) used to compute them.

A :class:`RadialProfile` is a piecewise constant function: ``v_i`` on the cell
``[r_i, r_(i+1))``, where the first cell is extended down to ``0``. Beyond the
last grid point the profile continues as ``c r^beta``, fitted to the upper
envelope of the last decade, unless the profile ends in zeros, in which case
it is compactly supported.
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from eigenbounds.errors import InvalidArgumentError
from eigenbounds.potentials import (
    IjPotential, WvnPotential, ij_potential, sphere_area, wvn_potential
)
from eigenbounds.quadrature import panel_nodes, power_law_fit

#: Number of angles in the dense fallback of the sphere sup.
DENSE_ANGLES = 256


@dataclass(frozen=True)
class NormReport:
    """The value of a norm functional and its error estimate."""
    functional: str
    value: float
    error: float
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not (self.value >= 0 and self.error >= 0):
            raise InvalidArgumentError(
                f'Invalid {self.functional} report: {self.value} +- {self.error}')

    def row(self) -> Dict[str, Any]:
        """The report as a flat row for the writers."""
        return {'functional': self.functional, **self.params,
                'value': self.value, 'error': self.error}


@dataclass(frozen=True)
class Tail:
    """The power-law continuation ``c r^beta`` of a profile."""
    coeff: float
    exponent: float

    def __call__(self, r):
        return self.coeff * np.asarray(r, dtype=float) ** self.exponent


class RadialProfile:
    """
    A sampled radial profile.

    :param r_grid: strictly increasing positive radii.
    :param v: the non-negative profile values at _r_grid_.
    :param nu: the dimension.
    :param tail_exponent: the decay exponent beyond the grid; fitted to the
                          last decade if ``None``.
    """
    def __init__(self, r_grid: Sequence[float], v: Sequence[float], nu: int,
                 tail_exponent: Optional[float] = None):
        self.r_grid = np.asarray(r_grid, dtype=float)
        self.v = np.abs(np.asarray(v, dtype=float))
        self.nu = nu
        if self.r_grid.ndim != 1 or len(self.r_grid) < 2:
            raise InvalidArgumentError('A profile needs at least two radii.')
        if self.r_grid.shape != self.v.shape:
            raise InvalidArgumentError('The radii and values differ in shape.')
        if self.r_grid[0] <= 0 or np.any(np.diff(self.r_grid) <= 0):
            raise InvalidArgumentError('The radii must be positive and '
                                       'strictly increasing.')
        if not np.all(np.isfinite(self.v)):
            raise InvalidArgumentError('The profile values must be finite.')
        if nu < 1:
            raise InvalidArgumentError(f'Invalid dimension {nu}.')
        self.tail = self._fit_tail(tail_exponent)

    def __repr__(self):
        return (f'RadialProfile(nu={self.nu}, {len(self.r_grid)} radii in '
                f'[{self.r_grid[0]:.3g}, {self.r_grid[-1]:.3g}], tail={self.tail})')

    @property
    def r_end(self) -> float:
        return float(self.r_grid[-1])

    @property
    def sphere(self) -> float:
        """``|S^(nu-1)|``."""
        return sphere_area(self.nu - 1)

    def _last_decade(self) -> np.ndarray:
        return self.r_grid >= self.r_end / 10

    def _fit_tail(self, exponent: Optional[float]) -> Optional[Tail]:
        decade = self._last_decade()
        r, v = self.r_grid[decade], self.v[decade]
        if self.v[-1] == 0 or not np.any(v > 0):
            return None
        # upper envelope: the running maximum from the right
        envelope = np.maximum.accumulate(v[::-1])[::-1]
        keep = (v == envelope) & (v > 0)
        if exponent is None:
            if keep.sum() >= 2:
                exponent, _, _ = power_law_fit(r[keep], v[keep])
            else:
                exponent = -np.inf
        if not np.isfinite(exponent):
            # a single positive value in the last decade; treat it as a
            # very fast decaying tail
            exponent = -50.0
        coeff = float(np.max(v[keep] * r[keep] ** -exponent))
        logging.debug(f'Profile tail: {coeff:.6g} r^{exponent:.6g}')
        return Tail(coeff, float(exponent))

    @property
    def compact(self) -> bool:
        return self.tail is None

    def cells(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The left and right edges and the values of the cells."""
        left = np.concatenate([[0.0], self.r_grid[1:-1]])
        return left, self.r_grid[1:].copy(), self.v[:-1].copy()

    def cell_measures(self, left: np.ndarray = None,
                      right: np.ndarray = None) -> np.ndarray:
        """The measures of the cells with respect to ``|S^(nu-1)| r^(nu-1) dr``."""
        if left is None:
            left, right, _ = self.cells()
        return self.sphere * (right ** self.nu - left ** self.nu) / self.nu

    def tail_measure(self, tau: np.ndarray) -> np.ndarray:
        """The measure of ``{r > r_end: c r^beta > tau}``."""
        tau = np.asarray(tau, dtype=float)
        if self.tail is None:
            return np.zeros_like(tau)
        c, beta = self.tail.coeff, self.tail.exponent
        with np.errstate(divide='ignore', over='ignore'):
            reach = np.where(tau > 0, (c / np.where(tau > 0, tau, 1)) ** (1 / -beta),
                             np.inf)
        reach = np.maximum(reach, self.r_end)
        return self.sphere * (reach ** self.nu - self.r_end ** self.nu) / self.nu

    def __call__(self, r: Sequence[float]) -> np.ndarray:
        """Evaluates the piecewise constant model (with its tail)."""
        r = np.asarray(r, dtype=float)
        index = np.clip(np.searchsorted(self.r_grid, r, side='right') - 1,
                        0, len(self.r_grid) - 2)
        values = self.v[index]
        beyond = r >= self.r_end
        if np.any(beyond):
            values = np.where(beyond, 0.0 if self.tail is None
                              else self.tail(np.where(beyond, r, 1.0)), values)
        return values

    def scaled(self, factor: float) -> 'RadialProfile':
        """The profile ``factor * v``."""
        tail = None if self.tail is None else self.tail.exponent
        return RadialProfile(self.r_grid, factor * self.v, self.nu, tail)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray],
                      r_grid: Sequence[float], nu: int,
                      tail_exponent: Optional[float] = None) -> 'RadialProfile':
        """Samples ``|f|`` on _r_grid_."""
        r_grid = np.asarray(r_grid, dtype=float)
        return cls(r_grid, np.abs(f(r_grid)), nu, tail_exponent)


# ---------------------------- sphere functionals ----------------------------

class _SupStats:
    """Counts the radii at which the angular objective was not unimodal."""
    def __init__(self):
        self.multimodal = 0
        self.total = 0

    def report(self):
        if self.multimodal:
            logging.warning(
                f'The angular objective was not unimodal at {self.multimodal} '
                f'of {self.total} radii; refined all near-maximal local maxima '
                f'of a {DENSE_ANGLES}-point dense sample.')


def _bounded_max(obj: Callable[[float], float], lo: float, hi: float) -> float:
    result = optimize.minimize_scalar(lambda t: -obj(t), bounds=(lo, hi),
                                      method='bounded',
                                      options={'xatol': 1e-10})
    return -float(result.fun)


def angular_sup(f: Callable[[np.ndarray, np.ndarray], np.ndarray], r: float,
                stats: _SupStats = None) -> float:
    """
    ``sup_theta |f(r cos theta, r sin theta)|`` over ``theta in [0, pi]``.
    A bounded scalar search refines the maximum of a dense sample; if the
    sample has more than one local maximum, every local maximum within 5% of
    the best is refined.
    """
    theta = np.linspace(0, np.pi, DENSE_ANGLES)
    values = np.abs(f(r * np.cos(theta), r * np.sin(theta)))
    best = float(values.max())
    if r == 0 or best == 0:
        return best
    padded = np.concatenate([[-np.inf], values, [-np.inf]])
    peaks = np.flatnonzero((values >= padded[:-2]) & (values >= padded[2:]))
    if stats is not None:
        stats.total += 1
        stats.multimodal += len(peaks) > 1

    def objective(t):
        return float(np.abs(f(r * np.cos(t), r * np.sin(t))))

    step = theta[1]
    for peak in peaks:
        if values[peak] >= 0.95 * best:
            lo = max(theta[peak] - step, 0.0)
            hi = min(theta[peak] + step, np.pi)
            best = max(best, _bounded_max(objective, lo, hi))
    return best


def angular_l2(f: Callable[[np.ndarray, np.ndarray], np.ndarray], r: float,
               nu: int) -> float:
    """
    ``(int_{S^(nu-1)} |f(r omega)|^2 d omega)^(1/2)`` for a function of
    ``(x_1, |x'|)``; the polar angle carries the weight
    ``|S^(nu-2)| sin^(nu-2) theta``.
    """
    panels = max(8, int(math.ceil(2 * r)))
    theta, w = panel_nodes(np.linspace(0, np.pi, panels + 1), 16)
    values = np.abs(f(r * np.cos(theta), r * np.sin(theta))) ** 2
    weight = sphere_area(nu - 2) * np.sin(theta) ** (nu - 2)
    return math.sqrt(float(np.dot(w, values * weight)))


def axial_function(V: Any) -> Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]]:
    """The ``f(x_1, s)`` form of _V_, or ``None`` if _V_ is radial."""
    if isinstance(V, IjPotential):
        return lambda x1, s: ij_potential(V, x1, s)
    if isinstance(V, WvnPotential):
        return None
    if callable(V) and getattr(V, 'axial', False):
        return V
    return None


def radial_function(V: Any) -> Callable[[np.ndarray], np.ndarray]:
    """The ``v(r)`` form of a radial _V_."""
    if isinstance(V, WvnPotential):
        return lambda r: wvn_potential(V, r)
    if callable(V):
        return V
    raise InvalidArgumentError(f'Cannot evaluate {V!r} as a radial function.')


def axial(f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Callable:
    """Marks _f_ as a function of ``(x_1, |x'|)`` rather than of ``r``."""
    def wrapper(x1, s):
        return f(x1, s)
    wrapper.axial = True
    wrapper.__name__ = getattr(f, '__name__', 'axial')
    return wrapper


def profile_of(V: Any, r_grid: Sequence[float], nu: int,
               tail_exponent: Optional[float] = None) -> RadialProfile:
    """
    The radial profile ``ess-sup_omega |V(r omega)|`` of a potential family
    or a callable sampled on _r_grid_.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    f = axial_function(V)
    if f is None:
        return RadialProfile.from_function(radial_function(V), r_grid, nu,
                                           tail_exponent)
    stats = _SupStats()
    v = np.array([angular_sup(f, r, stats) for r in r_grid])
    stats.report()
    return RadialProfile(r_grid, v, nu, tail_exponent)
