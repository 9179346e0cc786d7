#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The Bessel integrals behind the uniform resolvent bound: the kernel norm

    ``Q = int_0^inf int_r^inf |J_mu(r)|^q |H^(1)_mu(r')|^q (r r')^rho dr' dr``,

its supremum over the order, the single integrals of ``|J_mu|^q r^rho`` over
the five regions of the uniform bounds (the last one split at ``2 mu``) and
the double integrals below the turning point.

Everything is integrated in log space on grids made of segments with an even
number of intervals, so that every other node forms a coarser grid with the
same break points; the difference of the two results is the reported
quadrature error. Beyond the cutoff, the integrals are continued with the
large argument expansion of ``|H^(1)_mu|^2``; ``|J_mu|^q`` is replaced by the
mean of ``|cos|^q`` times ``|H^(1)_mu|^q`` there.
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from eigenbounds.errors import DivergenceError, InvalidArgumentError
from eigenbounds.norms.profile import NormReport
from eigenbounds.quadrature import log_integral, reverse_log_cumint
from eigenbounds.resolvent.kernels import ChannelIndex
from eigenbounds.specfun import (
    DEFAULT_ALPHA0, Order, hankel_modulus_sq_asymptotic, log_abs_h1,
    log_abs_j, region_edges
)
from eigenbounds.sweeps import sweep

#: Grid step where the integrands oscillate.
STEP = 0.02
#: The grid starts here; below it the integrand is continued as a power law.
HEAD_START = 1e-10
HEAD_PER_DECADE = 40
#: The number of single integral regions.
REGIONS = 6


def default_cutoff(mu: float) -> float:
    """The radius where the asymptotic tails take over: ``max(200, 4 mu + 100)``."""
    return max(200.0, 4 * float(mu) + 100)


def mean_power(q: float) -> float:
    """The mean of ``|cos t|^q`` over a period."""
    return math.exp(special.gammaln((q + 1) / 2) - special.gammaln(q / 2 + 1)
                    - 0.5 * math.log(math.pi))


def _modulus_tail(mu: float, q: float, rho: float, R):
    """
    ``int_R^inf |H^(1)_mu(r)|^q r^rho dr`` from the first two terms of the
    expansion of ``|H^(1)_mu|^2``.
    """
    a = rho - q / 2 + 1
    m = 4 * mu ** 2
    R = np.asarray(R, dtype=float)
    return (2 / np.pi) ** (q / 2) * (R ** a / -a + (q / 2) * (m - 1) / 8
                                     * R ** (a - 2) / (2 - a))


def _below_step(mu: float) -> float:
    """The grid step below the turning point, where nothing oscillates."""
    return min(0.5, max(mu, 1.0) ** (1 / 3) / 20)


def _segment(a: float, b: float, step: float) -> np.ndarray:
    """Nodes of ``[a, b]`` with an even number of intervals; geometric at 0."""
    if a == 0:
        start = HEAD_START * min(b, 1.0)
        count = max(int(math.ceil(math.log10(b / start) * HEAD_PER_DECADE / 2)), 1)
        return np.geomspace(start, b, 2 * count + 1)
    count = max(int(math.ceil((b - a) / (2 * step))), 1)
    return np.linspace(a, b, 2 * count + 1)


def _grid(breaks: Sequence[float], steps: Sequence[float]) -> Tuple[np.ndarray, List[int]]:
    """
    Joins the segments between consecutive _breaks_.

    :returns: the nodes and the (even) indices of the break points.
    """
    nodes, indices = [], [0]
    for a, b, step in zip(breaks[:-1], breaks[1:], steps):
        segment = _segment(a, b, step)
        nodes.append(segment if not nodes else segment[1:])
        indices.append(indices[-1] + len(segment) - 1)
    return np.concatenate(nodes), indices


def _pair(log_f: np.ndarray, r: np.ndarray) -> Tuple[float, float]:
    """The integral on the grid and its error against every other node."""
    fine = math.exp(log_integral(log_f, r))
    coarse = math.exp(log_integral(log_f[::2], r[::2]))
    return fine, abs(fine - coarse)


def _head(log_f: np.ndarray, r: np.ndarray) -> float:
    """``int_0^r_0`` of the power law through the first two nodes."""
    slope = (log_f[1] - log_f[0]) / math.log(r[1] / r[0])
    if not (np.isfinite(slope) and slope > -1):
        return 0.0
    return math.exp(log_f[0]) * r[0] / (slope + 1)


def _check_conditions(mu: float, q: float, rho: float, double: bool):
    if not q > 0:
        raise InvalidArgumentError(f'The exponent q must be positive, not {q}.')
    if double and rho <= -1:
        # near 0 the inner integral grows like r^(rho - mu q + 1)
        raise DivergenceError(f'rho = {rho} <= -1: the double integral '
                              f'diverges at the origin', 'origin')
    if mu * q + rho + 1 <= 0:
        raise DivergenceError(f'mu q + rho + 1 = {mu * q + rho + 1} <= 0: the '
                              f'integral diverges at the origin', 'origin')
    if q / 2 <= rho + 1:
        raise DivergenceError(f'q/2 = {q / 2} <= rho + 1 = {rho + 1}: the '
                              f'integral diverges at infinity', 'tail')


def _double(log_outer: np.ndarray, log_inner: np.ndarray, r: np.ndarray,
            log_tail: float = -np.inf,
            head: bool = True) -> Tuple[float, float]:
    """
    ``int f(r) (int_r^end g + tail) dr`` and its error, from ``log f`` and
    ``log g``. With _head_, the integrand is continued to ``0`` as a power law.
    """
    results = []
    for stride in (1, 2):
        x = r[::stride]
        log_g = np.logaddexp(reverse_log_cumint(log_inner[::stride], x), log_tail)
        results.append((math.exp(log_integral(log_outer[::stride] + log_g, x)),
                        log_outer[::stride] + log_g))
    (fine, log_f), (coarse, _) = results
    extra = _head(log_f, r) if head else 0.0
    return fine + extra, abs(fine - coarse) + extra


def kernel_qnorm(mu: float, q: float, rho: float, cutoff: float = None,
                 step: float = STEP) -> NormReport:
    """
    Computes ``int_0^inf int_r^inf |J_mu(r)|^q |H^(1)_mu(r')|^q (r r')^rho``.

    :param cutoff: the radius beyond which the asymptotic tails are used; by
                   default :func:`default_cutoff`.
    :raises DivergenceError: with condition ``origin`` if ``rho <= -1`` and
                             ``tail`` if ``q/2 <= rho + 1``.
    """
    mu = float(Order(float(mu)))
    _check_conditions(mu, q, rho, True)
    cutoff = default_cutoff(mu) if cutoff is None else float(cutoff)
    if cutoff <= 2 * mu or cutoff <= 1:
        raise InvalidArgumentError(f'The cutoff {cutoff} must exceed 2 mu.')
    r, _ = _grid([0.0, 1.0, cutoff], [step, step])
    log_r = np.log(r)
    log_outer = q * log_abs_j(mu, r) + rho * log_r
    log_inner = q * log_abs_h1(mu, r) + rho * log_r
    inner_tail = float(_modulus_tail(mu, q, rho, cutoff))
    value, error = _double(log_outer, log_inner, r, math.log(inner_tail))

    def outer_tail(x):
        modulus = hankel_modulus_sq_asymptotic(mu, x) ** (q / 2)
        return modulus * x ** rho * _modulus_tail(mu, q, rho, x)

    tail = mean_power(q) * integrate.quad(outer_tail, cutoff, np.inf)[0]
    rel = ((4 * mu ** 2 + 9) / (8 * cutoff ** 2)) ** 2
    outer_mass = math.exp(log_integral(log_outer, r))
    error += 0.5 * tail + rel * inner_tail * outer_mass
    logging.debug(f'Q(mu={mu}, q={q}, rho={rho}) = {value + tail:.10g} '
                  f'+- {error:.3g} (tail {tail:.3g}, cutoff {cutoff})')
    return NormReport('qnorm', value + tail, error,
                      {'mu': mu, 'q': q, 'rho': rho, 'cutoff': cutoff})


def channel_rho(q: float, nu: float) -> float:
    """The weight exponent ``-q(nu-2)/2 + nu - 1`` of dimension _nu_."""
    return -q * (nu - 2) / 2 + nu - 1


def admissible_window(nu: float) -> Tuple[float, float]:
    """The exponents ``2 nu/(nu-1) < q < 2 nu/(nu-2)`` of the uniform bound."""
    upper = math.inf if nu == 2 else 2 * nu / (nu - 2)
    return 2 * nu / (nu - 1), upper


@dataclass(frozen=True)
class MuSweep:
    """The kernel norm on a grid of orders."""
    q: float
    nu: float
    reports: List[NormReport]
    growing: bool

    @property
    def sup(self) -> float:
        return max(report.value for report in self.reports)

    @property
    def mu_at_sup(self) -> float:
        return max(self.reports, key=lambda report: report.value).params['mu']

    def rows(self) -> List[Dict[str, Any]]:
        return [{'nu': self.nu, 'mu': report.params['mu'], 'q': self.q,
                 'rho': report.params['rho'], 'value': report.value,
                 'error': report.error} for report in self.reports]


def _growing(reports: List[NormReport]) -> bool:
    """Whether the values grow monotonically across the top decade of orders."""
    ordered = sorted(reports, key=lambda report: report.params['mu'])
    top = ordered[-1].params['mu']
    decade = [report for report in ordered if report.params['mu'] >= top / 10]
    if len(decade) < 2:
        return False
    return all(b.value - a.value > a.error + b.error
               for a, b in zip(decade, decade[1:]))


def sup_over_mu(q: float, nu: float, mu_grid: Sequence[float],
                cutoff: float = None, processes: int = 1) -> MuSweep:
    """
    Evaluates :func:`kernel_qnorm` with the weight of dimension _nu_ on
    _mu_grid_. A monotone growth across the top decade of the grid is flagged
    and logged, since the supremum should be finite.
    """
    mus = [float(Order(float(mu))) for mu in mu_grid]
    if not mus:
        raise InvalidArgumentError('The order grid is empty.')
    rho = channel_rho(q, nu)
    reports = sweep(kernel_qnorm, [(mu, q, rho, cutoff) for mu in mus],
                    processes, desc='sup over mu')
    result = MuSweep(q, nu, reports, _growing(reports))
    if result.growing:
        logging.warning(f'The kernel norm grows monotonically across the top '
                        f'decade of mu (q = {q}, nu = {nu}).')
    logging.info(f'sup_mu Q = {result.sup:.10g} at mu = {result.mu_at_sup}')
    return result


# ------------------------------ region integrals ----------------------------

def _region_breaks(mu: float, alpha0: float) -> List[float]:
    c1, c2, c3, c4 = region_edges(mu, alpha0)
    return [0.0, c1, c2, c3, c4, max(c4, 2 * mu)]


def _dyadic_points(mu: float, lo: float, hi: float) -> List[float]:
    """The points ``mu - 2^j mu^(1/3)`` inside ``(lo, hi)``."""
    cube = mu ** (1 / 3)
    points, j = [], 1
    while mu - 2 ** j * cube > lo:
        if mu - 2 ** j * cube < hi:
            points.append(mu - 2 ** j * cube)
        j += 1
    return points[::-1]


@dataclass(frozen=True)
class RegionIntegrals:
    """``int |J_mu|^q r^rho`` over the six regions."""
    mu: float
    q: float
    rho: float
    alpha0: float
    edges: Tuple[float, ...]
    values: Tuple[float, ...]
    errors: Tuple[float, ...]

    @property
    def total(self) -> float:
        return sum(self.values)

    @property
    def total_error(self) -> float:
        return sum(self.errors)

    def rows(self) -> List[Dict[str, Any]]:
        bounds = list(self.edges) + [math.inf]
        return [{'mu': self.mu, 'q': self.q, 'rho': self.rho,
                 'region': f'I{i + 1}', 'lo': bounds[i], 'hi': bounds[i + 1],
                 'value': value, 'error': error}
                for i, (value, error) in enumerate(zip(self.values, self.errors))]


def _j_tail(mu: float, q: float, rho: float, R: float) -> Tuple[float, float]:
    """``int_R^inf |J_mu|^q r^rho`` and its error."""
    tail = mean_power(q) * float(_modulus_tail(mu, q, rho, R))
    rel = 1 / R + ((4 * mu ** 2 + 9) / (8 * R ** 2)) ** 2
    return tail, rel * tail


def region_integrals(mu: float, q: float, rho: float,
                     alpha0: float = DEFAULT_ALPHA0,
                     step: float = STEP) -> RegionIntegrals:
    """
    Integrates ``|J_mu(r)|^q r^rho`` over the regions
    ``(0, 1], (1, mu sech alpha0], (mu sech alpha0, mu - mu^(1/3)],
    (mu - mu^(1/3), mu + mu^(1/3)], (mu + mu^(1/3), 2 mu], (2 mu, inf)``.
    The third region is split at ``mu - 2^j mu^(1/3)``. Empty regions
    contribute zero.

    :raises DivergenceError: ``origin`` if ``mu q + rho + 1 <= 0``, ``tail``
                             if ``q/2 <= rho + 1``.
    """
    mu = float(Order(float(mu)))
    _check_conditions(mu, q, rho, False)
    if q / 3 < rho + 1 / 3:
        logging.warning(f'q/3 < rho + 1/3 (q = {q}, rho = {rho}): the third '
                        f'and fourth regions grow with mu.')
    edges = _region_breaks(mu, alpha0)
    cutoff = max(default_cutoff(mu), edges[-1] + 100)
    breaks = edges[:3] + _dyadic_points(mu, edges[2], edges[3]) + edges[3:]
    breaks = sorted(set(breaks + [cutoff]))
    below = mu - mu ** (1 / 3)
    steps = [_below_step(mu) if b <= below else step
             for b in breaks[1:]]
    r, indices = _grid(breaks, steps)
    log_f = q * log_abs_j(mu, r) + rho * np.log(r)
    at = dict(zip(breaks, indices))
    values, errors = [], []
    bounds = edges + [cutoff]
    for i in range(REGIONS):
        lo, hi = bounds[i], bounds[i + 1]
        if hi <= lo:
            values.append(0.0)
            errors.append(0.0)
            continue
        start, stop = (at[lo] if lo > 0 else 0), at[hi]
        value, error = _pair(log_f[start:stop + 1], r[start:stop + 1])
        if lo == 0:
            head = _head(log_f, r)
            value, error = value + head, error + head
        values.append(value)
        errors.append(error)
    tail, tail_error = _j_tail(mu, q, rho, cutoff)
    values[-1] += tail
    errors[-1] += tail_error
    logging.debug(f'Region integrals of mu = {mu}: {values}')
    return RegionIntegrals(mu, q, rho, alpha0, tuple(edges), tuple(values),
                           tuple(errors))


def line_integral(mu: float, q: float, rho: float,
                  step: float = STEP) -> Tuple[float, float]:
    """``int_0^inf |J_mu|^q r^rho`` in one piece, and its error."""
    mu = float(Order(float(mu)))
    _check_conditions(mu, q, rho, False)
    cutoff = default_cutoff(mu)
    r, _ = _grid([0.0, 1.0, cutoff], [step, step])
    log_f = q * log_abs_j(mu, r) + rho * np.log(r)
    value, error = _pair(log_f, r)
    head = _head(log_f, r)
    tail, tail_error = _j_tail(mu, q, rho, cutoff)
    return value + head + tail, error + head + tail_error


def region_exponents(q: float, rho: float) -> Dict[str, float]:
    """
    The powers of ``mu`` bounding the third and sixth single integrals and the
    two double integrals.
    """
    if q > 4:
        double = 2 * rho - 2 * q / 3 + 2 / 3
    elif q == 4:
        # up to a factor of ln mu
        double = 2 * rho - 2
    else:
        double = 2 * rho - q + 2
    return {'I3': -q / 3 + rho + 1 / 3, 'I6': -q / 2 + rho + 1,
            'double_I1': -q + 2 * rho + 2, 'double_I2': double}


@dataclass(frozen=True)
class DoubleRegionIntegrals:
    """
    The double integrals over ``r < r' <= mu - mu^(1/3)`` with ``r`` below and
    above ``mu sech alpha0``, and the majorants obtained from the monotonicity
    of ``r |H^(1)_mu(r)|^2``.
    """
    mu: float
    q: float
    rho: float
    alpha0: float
    values: Tuple[float, float]
    errors: Tuple[float, float]
    majorants: Tuple[float, float]

    def rows(self) -> List[Dict[str, Any]]:
        return [{'mu': self.mu, 'q': self.q, 'rho': self.rho,
                 'region': f'I{i + 1}', 'value': value, 'error': error,
                 'majorant': majorant}
                for i, (value, error, majorant)
                in enumerate(zip(self.values, self.errors, self.majorants))]


def double_region_integrals(mu: float, q: float, rho: float,
                            alpha0: float = DEFAULT_ALPHA0,
                            step: float = None) -> DoubleRegionIntegrals:
    """
    Computes ``int int_{r < r' <= mu - mu^(1/3)} |J_mu(r)|^q
    |H^(1)_mu(r')|^q (r r')^rho`` split at ``r = mu sech alpha0``. The
    majorants replace the inner integral by ``r^(rho+1) |H(r)|^q /
    (q/2 - rho - 1)`` and ``r^rho (mu - r) |H(r)|^q``, respectively.
    """
    mu = float(Order(float(mu)))
    _check_conditions(mu, q, rho, True)
    _, c2, c3, _ = region_edges(mu, alpha0)
    top = min(c3, mu - mu ** (1 / 3))
    if top <= 0:
        # the triangle is empty for mu <= 1
        return DoubleRegionIntegrals(mu, q, rho, alpha0, (0.0, 0.0), (0.0, 0.0),
                                     (0.0, 0.0))
    c2 = min(c2, top)
    step = _below_step(mu) if step is None else step
    breaks = sorted({0.0, min(1.0, top), c2, top})
    r, indices = _grid(breaks, [step] * (len(breaks) - 1))
    at = dict(zip(breaks, indices))
    log_r = np.log(r)
    log_j = q * log_abs_j(mu, r)
    log_h = q * log_abs_h1(mu, r)
    log_outer = log_j + rho * log_r
    log_inner = log_h + rho * log_r
    split = at[c2]

    first = _double(log_outer[:split + 1], log_inner[:split + 1], r[:split + 1],
                    float(reverse_log_cumint(log_inner, r)[split]))
    second = (0.0, 0.0)
    if top > c2:
        second = _double(log_outer[split:], log_inner[split:], r[split:],
                         head=False)

    log_jh = log_j + log_h
    majorant1 = (math.exp(log_integral(log_jh[:split + 1]
                                       + (2 * rho + 1) * log_r[:split + 1],
                                       r[:split + 1]))
                 / (q / 2 - rho - 1))
    majorant2 = 0.0
    if top > c2:
        with np.errstate(divide='ignore'):
            log_gap = np.log(mu - r[split:])
        majorant2 = math.exp(log_integral(log_jh[split:] + 2 * rho * log_r[split:]
                                          + log_gap, r[split:]))
    logging.debug(f'Double integrals of mu = {mu}: {first[0]:.6g}, '
                  f'{second[0]:.6g}')
    return DoubleRegionIntegrals(mu, q, rho, alpha0, (first[0], second[0]),
                                 (first[1], second[1]), (majorant1, majorant2))


# --------------------------- operator majorants -----------------------------

def intop_majorant(channel: ChannelIndex, p: float,
                   cutoff: float = None) -> NormReport:
    """
    The bound ``(2 Q)^(1/p')`` on the ``L^p -> L^p'`` norm (against
    ``r^(nu-1) dr``) of the operator with kernel
    ``(r r')^-(nu-2)/2 J_mu(min) H^(1)_mu(max)``, where _Q_ is the kernel norm
    of ``q = p'`` and the weight of the channel's dimension. The channel's
    resolvent is ``pi/2`` times this operator.
    """
    if not 1 < p < math.inf:
        raise InvalidArgumentError(f'p must be in (1, inf), not {p}.')
    q = p / (p - 1)
    rho = channel_rho(q, channel.nu)
    mu = float(channel.mu_l)
    report = kernel_qnorm(mu, q, rho, cutoff)
    value = (2 * report.value) ** (1 / q)
    error = value * report.error / (q * report.value) if report.value else 0.0
    return NormReport('intop', value, error,
                      {'nu': channel.nu, 'l': channel.l, 'mu': mu, 'p': p})


@dataclass(frozen=True)
class MajorantSweep:
    """The operator majorants of the channels ``l <= l_max``."""
    p: float
    nu: float
    reports: List[NormReport] = field(default_factory=list)

    @property
    def sup(self) -> float:
        return max(report.value for report in self.reports)

    @property
    def l_at_sup(self) -> int:
        return max(self.reports, key=lambda report: report.value).params['l']

    def rows(self) -> List[Dict[str, Any]]:
        return [report.row() for report in self.reports]


def intop_sup(nu: float, p: float, l_max: int, cutoff: float = None,
              processes: int = 1) -> MajorantSweep:
    """:func:`intop_majorant` for ``l = 0, ..., l_max`` and their supremum."""
    if l_max < 0:
        raise InvalidArgumentError(f'Invalid l_max {l_max}.')
    reports = sweep(intop_majorant,
                    [(ChannelIndex(l, nu), p, cutoff) for l in range(l_max + 1)],
                    processes, desc='intop')
    result = MajorantSweep(p, nu, reports)
    logging.info(f'sup_l of the majorant: {result.sup:.10g} at l = {result.l_at_sup}')
    return result
