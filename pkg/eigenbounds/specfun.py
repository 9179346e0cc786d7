#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Bessel, Hankel and modified Bessel functions of real order ``mu >= 0`` and
positive real argument, with error estimates; the WKB phase ``phi_mu``; and
the five-region envelopes that bound ``|J_mu|`` and ``|H^(1)_mu|`` uniformly
in the order.

The values come from the AMOS routines wrapped by :mod:`scipy.special`, which
already switch between power series, recurrences, and the large-argument and
uniform (Airy-type) expansions. Orders with ``2 mu`` odd are evaluated from the
spherical Bessel functions (the recurrence for ``K``); order ``1/2`` reduces
to the elementary closed forms. All functions are vectorized over _r_.
"""

from dataclasses import dataclass
from enum import Enum
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from eigenbounds.errors import InvalidArgumentError, OverflowDomainError
from eigenbounds.sweeps import sweep

ArrayLike = Union[float, Sequence[float], np.ndarray]

EPS = np.finfo(float).eps
#: Rounding units charged to every evaluation.
ROUNDING_UNITS = 10
#: The default of the free constant alpha_0 in (0, 1/2).
DEFAULT_ALPHA0 = 0.4
HALF_INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class Order:
    """A Bessel order ``mu >= 0``."""
    mu: float

    def __post_init__(self):
        if not np.isfinite(self.mu) or self.mu < 0:
            raise InvalidArgumentError(f'Invalid Bessel order {self.mu}.')

    @classmethod
    def from_channel(cls, l: int, nu: float) -> 'Order':
        """The order ``mu_l = l + (nu - 2) / 2`` of angular momentum _l_."""
        return cls(l + (nu - 2) / 2)

    def __float__(self):
        return float(self.mu)


@dataclass(frozen=True)
class Eval:
    """A function value together with a bound on its absolute error."""
    value: Union[float, complex, np.ndarray]
    abs_err: Union[float, np.ndarray]


class Kind(Enum):
    """The two functions the region envelopes bound."""
    J = 'J'
    H1 = 'H1'


class Region(Enum):
    """
    The five regions of the uniform bounds. The members are
    ``(index, description)`` tuples.
    """
    SMALL_ARG = (0, '0 < r <= 1')
    OSCILL_BELOW = (1, '1 < r <= mu sech alpha0')
    TRANSITION_BELOW = (2, 'mu sech alpha0 < r <= mu - mu^(1/3)')
    TURNING = (3, 'mu - mu^(1/3) < r <= mu + mu^(1/3)')
    ABOVE = (4, 'r > mu + mu^(1/3)')

    def __init__(self, index: int, description: str):
        self.index = index
        self.description = description

    @classmethod
    def from_index(cls, index: int) -> 'Region':
        return list(cls)[index]


@dataclass(frozen=True)
class BoundRegion:
    """The region _tag_ of the partition belonging to _mu_ and _alpha0_."""
    tag: Region
    mu: float
    alpha0: float = DEFAULT_ALPHA0


def _as_mu(mu: Union[float, Order]) -> float:
    mu = float(mu)
    if not np.isfinite(mu) or mu < 0:
        raise InvalidArgumentError(f'Invalid Bessel order {mu}.')
    return mu


def _as_r(r: ArrayLike) -> Tuple[np.ndarray, bool]:
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(~(r > 0)):
        raise InvalidArgumentError('The argument r must be positive.')
    return r, scalar


def _pack(value: np.ndarray, err: np.ndarray, scalar: bool) -> Eval:
    if scalar:
        return Eval(value[0].item(), float(err[0]))
    return Eval(value, err)


def _half_degree(mu: float) -> Optional[int]:
    """``mu - 1/2`` if ``2 mu`` is an odd integer, ``None`` otherwise."""
    n = round(mu - 0.5)
    return n if abs(mu - 0.5 - n) <= HALF_INTEGER_TOL else None


def _riccati(r: np.ndarray) -> np.ndarray:
    """``sqrt(2 r / pi)``, which takes spherical Bessel functions to ``mu``."""
    return np.sqrt(2 * r / np.pi)


def _half_k_scaled(n: int, r: np.ndarray) -> np.ndarray:
    """``exp(r) K_{n+1/2}(r)``, upwards from ``K_{-1/2} = K_{1/2}``."""
    prev = cur = np.sqrt(np.pi / (2 * r))
    with np.errstate(over='ignore'):
        for m in range(n):
            prev, cur = cur, prev + (2 * m + 1) / r * cur
    return cur


def _check_finite(value: np.ndarray, name: str, mu: float):
    if not np.all(np.isfinite(value)):
        raise OverflowDomainError(
            f'{name}_{mu} is not representable at some of the requested '
            f'arguments; use the scaled or logarithmic form.')


def _error(value: np.ndarray, mu: float, r: np.ndarray,
           oscillating: bool = True) -> np.ndarray:
    """Rounding error bound: relative, plus absolute in the oscillatory range."""
    scale = np.abs(value)
    if oscillating:
        scale = scale + np.where(r > mu, np.sqrt(2 / (np.pi * r)), 0.0)
    return ROUNDING_UNITS * EPS * scale


def bessel_j(mu: Union[float, Order], r: ArrayLike,
             derivative: int = 0) -> Eval:
    """
    Evaluates the Bessel function of the first kind.

    :param mu: the order.
    :param r: the argument(s); must be positive.
    :param derivative: the order of the derivative in _r_ (0 or 1).
    :returns: an :class:`Eval` of ``J_mu(r)`` (or its derivative).
    """
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    n = _half_degree(mu)
    if derivative:
        value = special.jvp(mu, r, derivative)
    elif n is not None:
        value = _riccati(r) * special.spherical_jn(n, r)
    else:
        value = special.jv(mu, r)
    _check_finite(value, 'J', mu)
    return _pack(value, _error(value, mu, r), scalar)


def bessel_y(mu: Union[float, Order], r: ArrayLike,
             derivative: int = 0) -> Eval:
    """
    Evaluates the Bessel function of the second kind; see :func:`bessel_j`.
    Raises :class:`OverflowDomainError` for tiny _r_ at large _mu_, where the
    value overflows.
    """
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    n = _half_degree(mu)
    if derivative:
        value = special.yvp(mu, r, derivative)
    elif n is not None:
        with np.errstate(over='ignore'):
            value = _riccati(r) * special.spherical_yn(n, r)
    else:
        value = special.yv(mu, r)
    _check_finite(value, 'Y', mu)
    return _pack(value, _error(value, mu, r), scalar)


def hankel1(mu: Union[float, Order], r: ArrayLike) -> Eval:
    """Evaluates the Hankel function ``H^(1)_mu = J_mu + i Y_mu``."""
    j = bessel_j(mu, r)
    y = bessel_y(mu, r)
    value = np.asarray(j.value) + 1j * np.asarray(y.value)
    err = np.hypot(j.abs_err, y.abs_err)
    if np.ndim(value) == 0:
        return Eval(complex(value), float(err))
    return Eval(value, err)


def bessel_i(mu: Union[float, Order], r: ArrayLike,
             scaled: bool = False, derivative: int = 0) -> Eval:
    """
    Evaluates the modified Bessel function ``I_mu``.

    :param scaled: return ``exp(-r) I_mu(r)`` instead, which never overflows.
                   Above order ``1/2``, the scaled form is not a closed one.
    """
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    n = _half_degree(mu)
    if derivative:
        if scaled:
            raise InvalidArgumentError('Scaled derivatives are not supported.')
        value = special.ivp(mu, r, derivative)
    elif n == 0 and scaled:
        value = np.sqrt(2 / (np.pi * r)) * -np.expm1(-2 * r) / 2
    elif n is not None and not scaled:
        with np.errstate(over='ignore'):
            value = _riccati(r) * special.spherical_in(n, r)
    else:
        value = special.ive(mu, r) if scaled else special.iv(mu, r)
    _check_finite(value, 'I', mu)
    return _pack(value, _error(value, mu, r, False), scalar)


def bessel_k(mu: Union[float, Order], r: ArrayLike,
             scaled: bool = False, derivative: int = 0) -> Eval:
    """
    Evaluates the modified Bessel function ``K_mu``.

    :param scaled: return ``exp(r) K_mu(r)`` instead, which does not
                   underflow at large _r_.
    """
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    n = _half_degree(mu)
    if derivative:
        if scaled:
            raise InvalidArgumentError('Scaled derivatives are not supported.')
        value = special.kvp(mu, r, derivative)
    elif n is not None:
        value = _half_k_scaled(n, r)
        if not scaled:
            value = value * np.exp(-r)
    else:
        value = special.kve(mu, r) if scaled else special.kv(mu, r)
    _check_finite(value, 'K', mu)
    return _pack(value, _error(value, mu, r, False), scalar)


def _alpha(mu: float, r: np.ndarray) -> np.ndarray:
    """``arccosh(mu / r)`` for ``0 < r <= mu``, accurate near ``r = mu``."""
    delta = (mu - r) / r
    return np.log1p(delta + np.sqrt(delta * (delta + 2)))


def phase_phi(mu: Union[float, Order], r: ArrayLike) -> Union[float, np.ndarray]:
    """
    The WKB phase ``phi_mu(r) = alpha - tanh(alpha)`` with
    ``r = mu sech(alpha)``, i.e. ``arccosh(mu/r) - sqrt(1 - (r/mu)^2)``.

    :param r: in ``(0, mu]``.
    """
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    if np.any(r > mu):
        raise InvalidArgumentError(f'phi_{mu} is only defined for r <= mu.')
    alpha = _alpha(mu, r)
    # alpha - tanh(alpha) cancels catastrophically for small alpha
    series = alpha ** 3 / 3 - 2 * alpha ** 5 / 15 + 17 * alpha ** 7 / 315
    direct = alpha - np.sqrt(np.clip(1 - (r / mu) ** 2, 0, None))
    phi = np.clip(np.where(alpha < 1e-2, series, direct), 0, None)
    return float(phi[0]) if scalar else phi


def _debye(mu: float, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Debye forms of ``log |J_mu|`` and ``log |Y_mu|`` below the turning point."""
    alpha = _alpha(mu, r)
    phi = alpha - np.tanh(alpha)
    tanh = np.tanh(alpha)
    log_j = -mu * phi - 0.5 * np.log(2 * np.pi * mu * tanh)
    log_y = mu * phi - 0.5 * np.log(np.pi * mu * tanh / 2)
    return log_j, log_y


def _log_abs_jy(mu: float, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        j = special.jv(mu, r)
        y = special.yv(mu, r)
        log_j = np.log(np.abs(j))
        log_y = np.log(np.abs(y))
        bad_j = (j == 0) & (r < mu)
        bad_y = ~np.isfinite(y) & (r < mu)
        if np.any(bad_j | bad_y):
            debye_j, debye_y = _debye(mu, np.where(r < mu, r, mu / 2))
            log_j = np.where(bad_j, debye_j, log_j)
            log_y = np.where(bad_y, debye_y, log_y)
    return log_j, log_y


def log_abs_j(mu: Union[float, Order], r: ArrayLike) -> Union[float, np.ndarray]:
    """``log |J_mu(r)|`` without underflow; ``-inf`` at the zeros."""
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    log_j = _log_abs_jy(mu, r)[0]
    return float(log_j[0]) if scalar else log_j


def log_abs_h1(mu: Union[float, Order], r: ArrayLike) -> Union[float, np.ndarray]:
    """``log |H^(1)_mu(r)|`` without overflow."""
    mu = _as_mu(mu)
    r, scalar = _as_r(r)
    log_j, log_y = _log_abs_jy(mu, r)
    log_h = 0.5 * np.logaddexp(2 * log_j, 2 * log_y)
    return float(log_h[0]) if scalar else log_h


def hankel_modulus_sq_asymptotic(mu: Union[float, Order],
                                 r: ArrayLike) -> Union[float, np.ndarray]:
    """
    The large-argument expansion of ``|H^(1)_mu(r)|^2 = J^2 + Y^2`` to
    ``O(r^-6)``.
    """
    mu = _as_mu(mu)
    r = np.asarray(r, dtype=float)
    m = 4 * mu ** 2
    return (2 / (np.pi * r)) * (1 + (m - 1) / (8 * r ** 2)
                               + 3 * (m - 1) * (m - 9) / (128 * r ** 4))


def region_edges(mu: Union[float, Order],
                 alpha0: float = DEFAULT_ALPHA0) -> Tuple[float, float, float, float]:
    """
    The right edges of the first four regions. The edges are monotone, so
    some regions are empty for small _mu_.
    """
    mu = _as_mu(mu)
    if mu < 0.5:
        raise InvalidArgumentError(
            f'The region partition needs mu >= 1/2, not {mu}.')
    if not 0 < alpha0 < 0.5:
        raise InvalidArgumentError(f'alpha0 must be in (0, 1/2), not {alpha0}.')
    cube = mu ** (1 / 3)
    c2 = max(1.0, min(mu / np.cosh(alpha0), mu - cube))
    c3 = max(c2, mu - cube)
    c4 = max(c3, mu + cube)
    return 1.0, c2, c3, c4


def region_indices(mu: Union[float, Order], r: ArrayLike,
                   alpha0: float = DEFAULT_ALPHA0) -> np.ndarray:
    """Vectorized :func:`classify_region`: the region index of each _r_."""
    edges = region_edges(mu, alpha0)
    r, _ = _as_r(r)
    return np.searchsorted(np.asarray(edges), r, side='left')


def classify_region(mu: Union[float, Order], r: float,
                    alpha0: float = DEFAULT_ALPHA0) -> BoundRegion:
    """
    Returns the region containing _r_. The regions are left-open and
    right-closed: ``(0, c1], (c1, c2], ..., (c4, inf)``.
    """
    index = int(region_indices(mu, r, alpha0)[0])
    return BoundRegion(Region.from_index(index), float(mu), alpha0)


def log_envelope(region: BoundRegion, r: ArrayLike,
                 kind: Kind = Kind.J) -> np.ndarray:
    """The logarithm of :func:`envelope`."""
    mu = region.mu
    r, _ = _as_r(r)
    if np.any(region_indices(mu, r, region.alpha0) != region.tag.index):
        raise InvalidArgumentError(
            f'Some arguments lie outside region {region.tag.name} of mu={mu}.')
    sign = -1 if kind is Kind.J else 1
    tag = region.tag
    if tag is Region.SMALL_ARG:
        if kind is Kind.J:
            return mu * np.log(r / 2) - special.gammaln(mu + 1)
        return special.gammaln(mu) - mu * np.log(r / 2)
    elif tag is Region.OSCILL_BELOW:
        return sign * mu * phase_phi(mu, r) - 0.5 * np.log(mu)
    elif tag is Region.TRANSITION_BELOW:
        return (sign * mu * phase_phi(mu, r) - 0.25 * np.log(mu)
                - 0.25 * np.log(mu - r))
    elif tag is Region.TURNING:
        return np.full_like(r, -np.log(mu) / 3)
    else:
        return -0.25 * np.log(r) - 0.25 * np.log(r - mu)


def envelope(region: BoundRegion, r: ArrayLike,
             kind: Kind = Kind.J) -> Union[float, np.ndarray]:
    """
    The uniform bound on ``|J_mu(r)|`` or ``|H^(1)_mu(r)|`` in _region_,
    without its constant.

    :raises InvalidArgumentError: if _r_ is outside _region_.
    """
    value = np.exp(log_envelope(region, r, kind))
    return float(value[0]) if np.ndim(r) == 0 else value


@dataclass(frozen=True)
class Certificate:
    """The empirical constant of one (region, kind) pair."""
    region: Region
    kind: Kind
    constant: float
    mu_at_max: float
    r_at_max: float
    samples: int


def region_samples(mu: float, alpha0: float,
                   samples_per_region: int) -> Dict[Region, np.ndarray]:
    """
    Sample points of each non-empty region: geometric on ``[1e-3, 1]``,
    uniform on the bounded regions and on ``(c4, c4 + 20 + 2 mu]``.
    """
    c1, c2, c3, c4 = region_edges(mu, alpha0)
    n = samples_per_region
    bounds = [(c1, c2), (c2, c3), (c3, c4), (c4, c4 + 20 + 2 * mu)]
    samples = {Region.SMALL_ARG: np.geomspace(1e-3, 1, n)}
    for region, (left, right) in zip(list(Region)[1:], bounds):
        if right > left:
            samples[region] = np.linspace(left, right, n + 1)[1:]
    return samples


def _certify_one(mu: float, samples_per_region: int,
                 alpha0: float) -> Dict[Tuple[Region, Kind], Tuple[float, float, int]]:
    """Log-ratio maxima of a single order, keyed by (region, kind)."""
    result = {}
    for region, r in region_samples(mu, alpha0, samples_per_region).items():
        bound = BoundRegion(region, mu, alpha0)
        for kind, log_f in ((Kind.J, log_abs_j(mu, r)),
                            (Kind.H1, log_abs_h1(mu, r))):
            ratio = log_f - log_envelope(bound, r, kind)
            best = int(np.argmax(ratio))
            result[(region, kind)] = (float(ratio[best]), float(r[best]), len(r))
    return result


def certify_bounds(mu_grid: Sequence[float], samples_per_region: int = 200,
                   alpha0: float = DEFAULT_ALPHA0,
                   processes: int = 1) -> List[Certificate]:
    """
    Estimates the constant of the uniform bounds empirically: for each region
    and function, the maximum of ``|f(r)| / envelope(r)`` over the sampled
    ``(mu, r)`` pairs. Regions that are empty for every order on the grid are
    left out.
    """
    mus = [_as_mu(mu) for mu in mu_grid]
    if not mus:
        raise InvalidArgumentError('The order grid is empty.')
    if min(mus) < 0.5:
        raise InvalidArgumentError('The bounds hold only for mu >= 1/2.')
    if samples_per_region < 1:
        raise InvalidArgumentError('At least one sample per region is needed.')
    per_mu = sweep(_certify_one,
                   [(mu, samples_per_region, alpha0) for mu in mus],
                   processes, desc='certify')
    certificates = []
    for region in Region:
        for kind in Kind:
            best, arg, count = -np.inf, (np.nan, np.nan), 0
            for mu, table in zip(mus, per_mu):
                if (region, kind) in table:
                    log_ratio, r, n = table[(region, kind)]
                    count += n
                    if log_ratio > best:
                        best, arg = log_ratio, (mu, r)
            if count:
                certificates.append(Certificate(
                    region, kind, float(np.exp(best)), arg[0], arg[1], count))
                logging.debug(f'{region.name}/{kind.value}: '
                              f'C = {np.exp(best):.6g} at mu={arg[0]}, '
                              f'r={arg[1]:.6g}')
    return certificates
