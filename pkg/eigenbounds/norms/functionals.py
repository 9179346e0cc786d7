#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The norm functionals of the potentials: full-space ``L^p`` integrals, mixed
norms with an ``L^2`` or ``L^inf`` inner norm over the sphere, the Lorentz
``L^(nu,1)`` norm, the Mizohata-Takeuchi norm, the dyadic sum norm and a few
relatives.

The profile functionals work on the piecewise constant model of a
:class:`RadialProfile`, tail included. They are exact for that model except
where an error estimate says otherwise.
"""

from dataclasses import dataclass
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from eigenbounds.errors import DivergenceError, InvalidArgumentError
from eigenbounds.norms.profile import (
    NormReport, RadialProfile, _SupStats, angular_l2, angular_sup,
    axial_function, profile_of, radial_function
)
from eigenbounds.potentials import (
    Family, IjPotential, WvnPotential, ij_potential, sphere_area, wvn_potential
)
from eigenbounds.quadrature import (
    integrate_panels, panel_nodes, power_law_fit, uniform_edges
)
from eigenbounds.sweeps import sweep

#: The integration box of a family scales as ``BOX_SCALE n``.
BOX_SCALE = 40
#: Rows of ``x_1`` nodes evaluated at once.
CHUNK = 4096
#: The geometric cells that discretize a fitted tail.
TAIL_CELL_RATIO = 2 ** (1 / 16)
TAIL_CELLS = 16 * 20
#: The number of ``tau`` levels of the level-set Lorentz quadrature.
LORENTZ_LEVELS = 2000
#: Radii per decade of the Mizohata-Takeuchi sup.
MT_PER_DECADE = 60
INNER_NORMS = ('l2', 'linf')


def _dimension(V: Any, nu: Optional[int]) -> int:
    if isinstance(V, (IjPotential, WvnPotential)):
        if nu is not None and nu != V.nu:
            raise InvalidArgumentError(f'{V} lives in dimension {V.nu}, not {nu}.')
        return V.nu
    if nu is None:
        raise InvalidArgumentError('The dimension of a callable potential '
                                   'must be given.')
    return nu


def _check_p(p: float):
    if not p > 0:
        raise InvalidArgumentError(f'The exponent p must be positive, not {p}.')


def _split_edges(stop: float, width: float) -> np.ndarray:
    """Panels of at most _width_ on ``[0, stop]`` with an edge at ``stop / 2``."""
    half = stop / 2
    return np.concatenate([uniform_edges(0, half, width),
                           uniform_edges(half, stop, width)[1:]])


def _shell_tail(total: float, inner: float, ratio: float) -> float:
    """
    Extends ``int_B(L)`` geometrically: the shells ``B(2^(k+1) L) - B(2^k L)``
    shrink by _ratio_.
    """
    shell = total - inner
    return shell * ratio / (1 - ratio)


# ------------------------------ full space L^p ------------------------------

def _ij_boxes(V: IjPotential, p: float, L: float) -> Tuple[float, float]:
    """
    ``int |V|^p`` over ``|x_1| <= L, s <= sqrt(L)`` and over the box of
    half the size.
    """
    half = L / 2
    s_half, s_full = math.sqrt(half), math.sqrt(L)
    s_edges = np.concatenate([np.linspace(0, s_half, 18),
                              np.linspace(s_half, s_full, 8)[1:]])
    x, wx = panel_nodes(_split_edges(L, 0.5), 8)
    s, ws = panel_nodes(s_edges, 8)
    ws = ws * sphere_area(V.nu - 2) * s ** (V.nu - 2)
    in_x, in_s = x < half, s < s_half
    total = inner = 0.0
    for start in range(0, len(x), CHUNK):
        rows = slice(start, start + CHUNK)
        values = np.abs(ij_potential(V, x[rows, None], s[None, :])) ** p
        total += float(wx[rows] @ (values @ ws))
        inner += float((wx[rows] * in_x[rows]) @ (values[:, in_s] @ ws[in_s]))
    # V is even in x_1
    return 2 * total, 2 * inner


def _radial_boxes(v: Callable, p: float, nu: int, R: float) -> Tuple[float, float]:
    """``int_{|x| < R} |v|^p`` and the same over ``|x| < R / 2``."""
    r, w = panel_nodes(_split_edges(R, 0.5), 8)
    values = np.abs(v(r)) ** p * w * sphere_area(nu - 1) * r ** (nu - 1)
    return float(values.sum()), float(values[r < R / 2].sum())


def _lp_family(V: Family, p: float) -> NormReport:
    if isinstance(V, IjPotential):
        # the shells scale as 2^((nu + 1) / 2 - p)
        growth = (V.nu + 1) / 2 - p
        extent = BOX_SCALE * V.n
        total, inner = _ij_boxes(V, p, extent)
    else:
        growth = V.nu - p
        extent = BOX_SCALE * (V.n + 1)
        total, inner = _radial_boxes(lambda r: wvn_potential(V, r), p, V.nu,
                                     extent)
    if growth >= 0:
        raise DivergenceError(f'int |V|^p diverges at infinity for p = {p} '
                              f'and nu = {V.nu}.', 'tail')
    tail = _shell_tail(total, inner, 2 ** growth)
    logging.debug(f'L^{p} of {V}: box {total:.10g}, tail {tail:.3g}')
    return NormReport('lp', total + tail, 0.5 * abs(tail) + 1e-12 * total,
                      {'family': V.family, 'nu': V.nu, 'n': V.n,
                       'alpha': V.alpha, 'p': p})


def _lp_radial(v: Callable, p: float, nu: int, extent: float,
               breakpoints: Sequence[float],
               tail_exponent: Optional[float]) -> NormReport:
    cuts = [b for b in breakpoints if 0 < b < extent]
    corners = np.unique(np.concatenate([[0.0], cuts, [extent]]))
    edges = np.unique(np.concatenate([np.linspace(a, b, 65)
                                      for a, b in zip(corners[:-1], corners[1:])]))
    area = sphere_area(nu - 1)

    def integrand(r):
        return np.abs(v(r)) ** p * area * r ** (nu - 1)

    value, error = integrate_panels(integrand, edges, 16)
    if tail_exponent is not None:
        exponent = tail_exponent * p + nu
        if exponent >= 0:
            raise DivergenceError(f'The tail r^{tail_exponent} is not in L^{p} '
                                  f'in dimension {nu}.', 'tail')
        end = float(np.abs(v(np.array([extent])))[0]) ** p
        tail = area * end * extent ** nu / -exponent
        value += tail
        error += 0.5 * tail
    return NormReport('lp', value, error, {'nu': nu, 'p': p})


def _lp_axial(f: Callable, p: float, nu: int, extent: float,
              s_extent: Optional[float]) -> NormReport:
    s_extent = extent if s_extent is None else s_extent
    weight = sphere_area(nu - 2)

    def box(order):
        x, wx = panel_nodes(uniform_edges(-extent, extent, 0.5), order)
        s, ws = panel_nodes(uniform_edges(0, s_extent, 0.5), order)
        ws = ws * weight * s ** (nu - 2)
        return float(wx @ (np.abs(f(x[:, None], s[None, :])) ** p) @ ws)

    value = box(8)
    return NormReport('lp', value, abs(value - box(4)), {'nu': nu, 'p': p})


def lp_fullspace(V: Any, p: float, nu: int = None, extent: float = None,
                 breakpoints: Sequence[float] = (),
                 tail_exponent: float = None,
                 s_extent: float = None) -> NormReport:
    """
    ``int_{R^nu} |V|^p dx`` (no root taken).

    :param V: an :class:`IjPotential`, a :class:`WvnPotential`, a radial
              callable ``v(r)`` or a callable ``f(x_1, s)`` marked with
              :func:`axial`.
    :param p: the exponent.
    :param nu: the dimension; only needed for callables.
    :param extent: the radius (for axial callables, the ``|x_1|`` extent) of
                   the integration domain of a callable.
    :param breakpoints: the radii where a radial callable is not smooth.
    :param tail_exponent: continues a radial callable as ``r^tail_exponent``
                          beyond _extent_.
    :param s_extent: the ``|x'|`` extent of an axial callable; _extent_ by
                     default.
    :returns: the value and its error estimate. The families are integrated
              over a box of size ``~40 n`` and extended by geometric shells.
    """
    _check_p(p)
    nu = _dimension(V, nu)
    if isinstance(V, (IjPotential, WvnPotential)):
        return _lp_family(V, p)
    if extent is None or extent <= 0:
        raise InvalidArgumentError('Callables need a positive extent.')
    f = axial_function(V)
    if f is not None:
        return _lp_axial(f, p, nu, extent, s_extent)
    return _lp_radial(radial_function(V), p, nu, extent, breakpoints,
                      tail_exponent)


# -------------------------------- mixed norms -------------------------------

def default_extent(V: Any) -> Optional[float]:
    """The radius up to which the radial integrals of a family are done."""
    if isinstance(V, IjPotential):
        return BOX_SCALE * V.n
    if isinstance(V, WvnPotential):
        return BOX_SCALE * (V.n + 1)
    return None


def sphere_norms(V: Any, r: np.ndarray, inner: str, nu: int) -> np.ndarray:
    """The inner norms ``||V(r .)||`` over the sphere at each radius."""
    f = axial_function(V)
    if f is None:
        v = np.abs(radial_function(V)(r))
        return v * math.sqrt(sphere_area(nu - 1)) if inner == 'l2' else v
    if inner == 'l2':
        return np.array([angular_l2(f, radius, nu) for radius in r])
    stats = _SupStats()
    values = np.array([angular_sup(f, radius, stats) for radius in r])
    stats.report()
    return values


def mixed_norm(V: Any, p: float, inner: str = 'linf', nu: int = None,
               r_max: float = None, tail: bool = True) -> NormReport:
    """
    ``(int_0^inf ||V(r .)||^p r^(nu-1) dr)^(1/p)``, where the inner norm is
    the _L^2_ or the _L^inf_ norm over the sphere.

    The inner norm of a function of ``(x_1, |x'|)`` is a problem in the polar
    angle alone. Beyond _r_max_ the inner norms continue as the power law
    fitted to the upper envelope of the last decade.

    :param tail: whether to add the fitted tail; with ``False``, the
                 integral stops at _r_max_.
    """
    _check_p(p)
    if inner not in INNER_NORMS:
        raise InvalidArgumentError(f'Invalid inner norm {inner}; try one of '
                                   f'{", ".join(INNER_NORMS)}.')
    nu = _dimension(V, nu)
    r_max = default_extent(V) if r_max is None else r_max
    if r_max is None or r_max <= 0:
        raise InvalidArgumentError('Callables need a positive r_max.')
    r, w = panel_nodes(uniform_edges(0, r_max, 0.5), 8)
    norms = sphere_norms(V, r, inner, nu)
    head = float(np.dot(w * r ** (nu - 1), norms ** p))
    rest = 0.0
    if tail:
        fit = RadialProfile(r, norms, nu).tail
        if fit is not None:
            exponent = fit.exponent * p + nu
            if exponent >= 0:
                raise DivergenceError(
                    f'The inner norms decay like r^{fit.exponent:.4g}, which '
                    f'is not p-integrable against r^(nu-1) for p = {p}.', 'tail')
            rest = fit.coeff ** p * r_max ** exponent / -exponent
    total = head + rest
    value = total ** (1 / p)
    error = value / p * (0.5 * rest / total if total > 0 else 0) + 1e-12 * value
    params = {'nu': nu, 'p': p, 'inner': inner}
    if isinstance(V, (IjPotential, WvnPotential)):
        params.update(family=V.family, n=V.n, alpha=V.alpha)
    return NormReport('mixed', value, error, params)


# ---------------------------------- Lorentz ---------------------------------

def _check_tail(profile: RadialProfile, limit: float, name: str):
    if profile.tail is not None and profile.tail.exponent >= limit:
        raise DivergenceError(
            f'The {name} of a profile decaying like '
            f'r^{profile.tail.exponent:.4g} diverges.', 'tail')


def _ball_layer_cake(profile: RadialProfile, level: float) -> float:
    """
    ``int_0^level |B(reach(tau))|^(1/nu) dtau``, where ``reach`` inverts the
    tail. It bounds the part of the layer cake below _level_ from above.
    """
    c, beta = profile.tail.coeff, profile.tail.exponent
    k = 1 / -beta
    return ((profile.sphere / profile.nu) ** (1 / profile.nu) * c ** k
            * level ** (1 - k) / (1 - k))


def _sorted_layer_cake(values: np.ndarray, measures: np.ndarray, nu: int,
                       floor: float = 0.0) -> float:
    """
    ``int_floor^inf |{v > tau}|^(1/nu) dtau`` of a step function by its
    decreasing rearrangement: ``sum_k (v_(k) - v_(k+1)) M_k^(1/nu)``.
    """
    order = np.argsort(-values, kind='stable')
    v = np.maximum(values[order], floor)
    cumulative = np.cumsum(measures[order])
    steps = v - np.append(v[1:], floor)
    return float(np.dot(steps, cumulative ** (1 / nu)))


def _lorentz_sort(profile: RadialProfile) -> Tuple[float, float]:
    left, right, values = profile.cells()
    measures = profile.cell_measures(left, right)
    if profile.compact:
        value = _sorted_layer_cake(values, measures, profile.nu)
        return value, 1e-12 * value
    edges = profile.r_end * TAIL_CELL_RATIO ** np.arange(TAIL_CELLS + 1)
    a, b = edges[:-1], edges[1:]
    far = float(profile.tail(edges[-1]))
    measures = np.concatenate([measures, profile.cell_measures(a, b)])
    upper = _sorted_layer_cake(np.concatenate([values, profile.tail(a)]),
                               measures, profile.nu, far)
    lower = _sorted_layer_cake(np.concatenate([values, profile.tail(b)]),
                               measures, profile.nu, far)
    beyond = _ball_layer_cake(profile, far)
    return (upper + lower + beyond) / 2, (upper - lower + beyond) / 2


def _superlevel_measures(profile: RadialProfile, tau: np.ndarray) -> np.ndarray:
    """``|{v > tau}|`` of the model, tail included."""
    left, right, values = profile.cells()
    measures = profile.cell_measures(left, right)
    order = np.argsort(values)
    # suffix[i]: the measure of the cells from the i-th smallest value up
    suffix = np.append(np.cumsum(measures[order][::-1])[::-1], 0.0)
    index = np.searchsorted(values[order], tau, side='right')
    return suffix[index] + profile.tail_measure(tau)


def _lorentz_levels(profile: RadialProfile) -> Tuple[float, float]:
    top = float(profile.v.max())
    if profile.tail is not None:
        top = max(top, float(profile.tail(profile.r_end)))
    if top == 0:
        return 0.0, 0.0
    tau = np.geomspace(top * 1e-12, top, LORENTZ_LEVELS)
    g = _superlevel_measures(profile, tau) ** (1 / profile.nu)
    steps = np.diff(tau)
    upper = float(np.dot(steps, g[:-1]))
    lower = float(np.dot(steps, g[1:]))
    # below the lowest level
    lower += tau[0] * g[0]
    if profile.compact:
        support = _superlevel_measures(profile, np.zeros(1))[0]
        upper += tau[0] * support ** (1 / profile.nu)
    else:
        upper += _ball_layer_cake(profile, tau[0])
    return (upper + lower) / 2, (upper - lower) / 2


def lorentz_nu1(profile: RadialProfile, method: str = 'sort') -> NormReport:
    """
    The Lorentz norm ``int_0^inf |{r: v(r) > tau}|_nu^(1/nu) dtau``, the
    measure being ``|S^(nu-1)| r^(nu-1) dr``.

    :param method: ``sort`` sums over the decreasing rearrangement of the
                   cells; ``levels`` integrates over a geometric grid of
                   levels ``tau`` with left and right Riemann sums. Both
                   bracket the value of the model, the error being half the
                   width of the bracket.
    """
    _check_tail(profile, -1, 'Lorentz norm')
    if method == 'sort':
        value, error = _lorentz_sort(profile)
    elif method == 'levels':
        value, error = _lorentz_levels(profile)
    else:
        raise InvalidArgumentError(f'Invalid method {method}; try sort or levels.')
    return NormReport('lorentz', value, error,
                      {'nu': profile.nu, 'method': method})


def weak_lorentz(profile: RadialProfile, q: float) -> NormReport:
    """
    The weak ``L^(q,inf)`` quasi-norm ``sup_tau tau |{v > tau}|^(1/q)``.

    The sup over the cell levels is exact; below the tail value at the end
    of the grid, the sup is taken over a geometric grid of levels down to
    ``1e-30`` times that value.
    """
    if not q > 0:
        raise InvalidArgumentError(f'Invalid exponent q = {q}.')
    left, right, values = profile.cells()
    measures = profile.cell_measures(left, right)
    order = np.argsort(-values, kind='stable')
    v = values[order]
    candidates = v * (np.cumsum(measures[order])
                      + profile.tail_measure(v)) ** (1 / q)
    best, error = float(candidates.max()), 0.0
    if profile.tail is not None:
        if profile.nu / (-profile.tail.exponent * q) > 1.01:
            raise DivergenceError(
                f'A profile decaying like r^{profile.tail.exponent:.4g} is '
                f'not in weak L^{q}.', 'tail')
        start = float(profile.tail(profile.r_end))
        tau = np.geomspace(start, start * 1e-30, 3000)
        grid = tau * _superlevel_measures(profile, tau) ** (1 / q)
        if grid.max() > best:
            best = float(grid.max())
            error = best * (tau[0] / tau[1] - 1)
    return NormReport('weak', best, error, {'nu': profile.nu, 'q': q})


def mt_lorentz_constant(nu: int) -> float:
    """
    ``(nu / |S^(nu-1)|)^(1/nu)``: the smallest ``C`` with
    ``||V||_MT <= C ||V||_(L^(nu,1))`` for radial profiles (balls around the
    origin are extremal). Only valid for ``nu >= 2``.
    """
    if nu < 2:
        raise InvalidArgumentError('The bound needs nu >= 2.')
    return (nu / sphere_area(nu - 1)) ** (1 / nu)


# ----------------------------- Mizohata-Takeuchi ----------------------------

def _mt_tail(profile: RadialProfile, R: np.ndarray) -> np.ndarray:
    """
    ``int_r0^inf c r^(beta+1) (r^2 - R^2)^(-1/2) dr`` with
    ``r0 = max(r_end, R)``, in closed form:
    ``c r0^(beta+1) / -(beta+1) 2F1(a, 1/2; a+1; R^2/r0^2)``,
    ``a = -(beta+1)/2``.
    """
    c, beta = profile.tail.coeff, profile.tail.exponent
    e = beta + 1
    a = -e / 2
    r0 = np.maximum(profile.r_end, R)
    x = np.minimum((R / r0) ** 2, 1.0)
    at_one = special.gamma(a + 1) * math.sqrt(math.pi) / special.gamma(a + 0.5)
    hyper = np.where(x < 1, special.hyp2f1(a, 0.5, a + 1, np.minimum(x, 0.999999)),
                     at_one)
    return c * r0 ** e / -e * hyper


def mt_values(profile: RadialProfile, R: Sequence[float]) -> np.ndarray:
    """``int_R^inf v(r) r (r^2 - R^2)^(-1/2) dr`` at each _R_."""
    R = np.asarray(R, dtype=float)
    left, right, values = profile.cells()
    out = np.empty(len(R))
    for start in range(0, len(R), 256):
        block = R[start:start + 256, None]
        # r (r^2 - R^2)^(-1/2) integrates to (r^2 - R^2)^(1/2)
        lo = np.sqrt(np.clip(np.maximum(left, block) ** 2 - block ** 2, 0, None))
        hi = np.sqrt(np.clip(right ** 2 - block ** 2, 0, None))
        out[start:start + 256] = (hi - lo) @ values
    if profile.tail is not None:
        out += _mt_tail(profile, R)
    return out


def mt_norm(profile: RadialProfile) -> NormReport:
    """
    The Mizohata-Takeuchi norm
    ``sup_R int_R^inf v(r) r (r^2 - R^2)^(-1/2) dr``.

    The integral is exact on every cell; the sup runs over ``R = 0``, the
    cell edges and :data:`MT_PER_DECADE` radii per decade. The error is the
    largest change of the integral between the maximizer and its neighbors.
    """
    _check_tail(profile, -1, 'Mizohata-Takeuchi norm')
    stop = profile.r_end * (1 if profile.compact else 10)
    start = profile.r_grid[0] / 10
    count = int(math.ceil(math.log10(stop / start) * MT_PER_DECADE)) + 1
    R = np.unique(np.concatenate([[0.0], np.geomspace(start, stop, count),
                                  profile.r_grid]))
    values = mt_values(profile, R)
    best = int(np.argmax(values))
    neighbors = values[max(best - 1, 0):best + 2]
    error = float(np.max(np.abs(neighbors - values[best])))
    logging.debug(f'MT sup at R = {R[best]:.6g}')
    return NormReport('mt', float(values[best]), error,
                      {'nu': profile.nu, 'R_max': float(R[best])})


# -------------------------------- dyadic sums -------------------------------

def _block_index(r: np.ndarray) -> np.ndarray:
    """``floor(log2 r)``, exact at the powers of two."""
    return np.frexp(r)[1] - 1


def dyadic_sum_norm(profile: RadialProfile, p: float) -> NormReport:
    """
    ``sum_j (int_(2^j)^(2^(j+1)) v^p r^(p-1) dr)^(1/p)``; for ``p = inf`` the
    blocks are ``sup r v(r)``.

    The blocks inside the first cell (where ``v`` is constant) and beyond
    the grid (where ``v`` follows the tail) are summed as geometric series.
    """
    if not p > 2:
        raise InvalidArgumentError(f'The dyadic norm needs p in (2, inf], not {p}.')
    finite = not math.isinf(p)
    if profile.tail is not None and profile.tail.exponent >= -1:
        raise DivergenceError(
            f'The dyadic blocks of a profile decaying like '
            f'r^{profile.tail.exponent:.4g} are not summable.', 'summability')
    left, right, values = profile.cells()
    first = _block_index(right[:1])[0] - 1
    head_ratio = ((2 ** p - 1) / p) ** (1 / p) if finite else 2.0
    head = values[0] * head_ratio * 2.0 ** (first + 1)
    left = left.copy()
    left[0] = 2.0 ** (first + 1)
    last = int(_block_index(np.array([profile.r_end]))[0])
    powers = 2.0 ** np.arange(first + 2, last + 1)
    edges = np.union1d(np.append(left, profile.r_end),
                       powers[(powers > left[0]) & (powers < profile.r_end)])
    a, b = edges[:-1], edges[1:]
    v = values[np.searchsorted(left, a, side='right') - 1]
    blocks = _block_index(a) - (first + 1)
    size = max(int(blocks.max()), last - first - 1) + 1
    sums = np.zeros(size)
    if finite:
        np.add.at(sums, blocks, v ** p * (b ** p - a ** p) / p)
    else:
        np.maximum.at(sums, blocks, v * b)

    rest = 0.0
    if profile.tail is not None:
        c, beta = profile.tail.coeff, profile.tail.exponent
        e = beta + 1
        top = 2.0 ** (last + 1)
        if finite:
            sums[last - first - 1] += (c ** p * (top ** (e * p) - profile.r_end
                                                 ** (e * p)) / (e * p))
            shape = ((2 ** (e * p) - 1) / (e * p)) ** (1 / p)
        else:
            sums[last - first - 1] = max(sums[last - first - 1],
                                         c * profile.r_end ** e)
            shape = 1.0
        rest = c * top ** e * shape / (1 - 2 ** e)
    norms = sums ** (1 / p) if finite else sums
    value = float(head + norms.sum() + rest)
    return NormReport('dyadic', value, 1e-12 * value,
                      {'nu': profile.nu, 'p': p})


def dyadic_mt_constant(p: float) -> float:
    """
    The ``C`` in ``||V||_MT <= C sum_j ||...||_j``: H\\"older on
    ``[R, 2R]`` gives ``c_p = (int_1^2 (r / sqrt(r^2 - 1))^p' dr / r)^(1/p')``
    and beyond ``2R`` each block contributes ``(2/sqrt 3) (ln 2)^(1/p')``.
    """
    if not p > 2:
        raise InvalidArgumentError(f'Invalid exponent p = {p}.')
    if math.isinf(p):
        return math.acosh(2) + 2 / math.sqrt(3) * math.log(2)
    dual = p / (p - 1)
    # (r - 1)^(-p'/2) goes into the weight
    value, _ = integrate.quad(lambda r: r ** (dual - 1) * (r + 1) ** (-dual / 2),
                              1, 2, weight='alg', wvar=(-dual / 2, 0))
    return value ** (1 / dual) + 2 / math.sqrt(3) * math.log(2) ** (1 / dual)


def weighted_sup_norm(profile: RadialProfile, eps: float) -> NormReport:
    """``sup_r (1 + r)^(1+eps) v(r)``."""
    if eps < 0:
        raise InvalidArgumentError(f'Invalid eps = {eps}.')
    _, right, values = profile.cells()
    best = float(np.max(values * (1 + right) ** (1 + eps)))
    if profile.tail is not None:
        if profile.tail.exponent + 1 + eps > 0:
            raise DivergenceError(
                f'(1 + r)^(1+{eps}) v(r) is unbounded for a profile decaying '
                f'like r^{profile.tail.exponent:.4g}.', 'tail')
        r = np.geomspace(profile.r_end, profile.r_end * 1e6, 2000)
        best = max(best, float(np.max(profile.tail(r) * (1 + r) ** (1 + eps))))
    return NormReport('weighted', best, 1e-12 * best,
                      {'nu': profile.nu, 'eps': eps})


# --------------------------------- registry ---------------------------------

class Functional:
    """
    Base class of the functionals selectable by name. The profile functionals
    sample the radial profile of the potential on _r_grid_ first.

    :param p: the exponent of ``lp``, ``mixed`` and ``dyadic``.
    :param q: the exponent of ``weak``.
    :param inner: the inner norm of ``mixed``.
    :param method: the method of ``lorentz``.
    :param eps: the weight exponent of ``weighted``.
    """
    def __init__(self, p: float = 2.0, q: float = None, inner: str = 'linf',
                 method: str = 'sort', eps: float = 0.0):
        self.p = p
        self.q = q
        self.inner = inner
        self.method = method
        self.eps = eps

    def compute(self, V: Any, nu: int, r_grid: Sequence[float]) -> NormReport:
        profile = profile_of(V, r_grid, nu)
        logging.debug(f'{self.__class__.__name__} of {profile!r}')
        return self.of_profile(profile)

    def of_profile(self, profile: RadialProfile) -> NormReport:
        raise NotImplementedError('of_profile() must be implemented')


class LpFunctional(Functional):
    def compute(self, V: Any, nu: int, r_grid: Sequence[float]) -> NormReport:
        return lp_fullspace(V, self.p, nu, extent=float(r_grid[-1]))


class MixedFunctional(Functional):
    def compute(self, V: Any, nu: int, r_grid: Sequence[float]) -> NormReport:
        return mixed_norm(V, self.p, self.inner, nu, r_max=float(r_grid[-1]))


class LorentzFunctional(Functional):
    def of_profile(self, profile: RadialProfile) -> NormReport:
        return lorentz_nu1(profile, self.method)


class MtFunctional(Functional):
    def of_profile(self, profile: RadialProfile) -> NormReport:
        return mt_norm(profile)


class DyadicFunctional(Functional):
    def of_profile(self, profile: RadialProfile) -> NormReport:
        return dyadic_sum_norm(profile, self.p)


class WeakFunctional(Functional):
    """Defaults to ``q = nu / (nu - 1)``."""
    def of_profile(self, profile: RadialProfile) -> NormReport:
        q = self.q if self.q else profile.nu / max(profile.nu - 1, 1)
        return weak_lorentz(profile, q)


class WeightedFunctional(Functional):
    def of_profile(self, profile: RadialProfile) -> NormReport:
        return weighted_sup_norm(profile, self.eps)


# -------------------------------- decay slopes ------------------------------

@dataclass(frozen=True)
class DecaySlope:
    """The fitted exponent of ``||V_n||_p`` against ``n``."""
    family: str
    nu: int
    p: float
    exponent: float
    corrected: float
    expected: float
    rms: float
    n_grid: Tuple[float, ...]
    norms: Tuple[float, ...]

    def rows(self) -> List[Dict[str, Any]]:
        return [{'n': n, 'norm': norm} for n, norm in zip(self.n_grid, self.norms)]


def expected_decay_slope(V: Family, p: float) -> float:
    """The exponent ``-1 + (nu+1)/(2p)`` (IJ) or ``-1 + nu/p`` (WvN)."""
    if isinstance(V, IjPotential):
        return -1 + (V.nu + 1) / (2 * p)
    return -1 + V.nu / p


def _lp_root(V: Family, p: float) -> float:
    return lp_fullspace(V, p).value ** (1 / p)


def decay_slope(V: Family, p: float, n_grid: Sequence[float],
                processes: int = 1, corrections: int = 0) -> DecaySlope:
    """
    Fits ``||V_n||_p ~ n^e`` over _n_grid_: with the default _corrections_,
    the exponent is the least-squares slope of ``log ||V_n||_p`` against
    ``log n``. The ``corrected`` field of the result is the exponent of the
    fit with (up to) two more terms in ``1/n``, which takes out most of the
    bias of the small ``n``.
    """
    norms = sweep(_lp_root, [(V.with_n(n), p) for n in n_grid], processes,
                  desc='Decay')
    exponent, _, rms = power_law_fit(n_grid, norms, corrections)
    corrected, _, _ = power_law_fit(n_grid, norms, min(2, len(n_grid) - 2))
    expected = expected_decay_slope(V, p)
    logging.info(f'Decay of the L^{p} norm of {V.family}: n^{exponent:.4f} '
                 f'(corrected {corrected:.4f}, expected {expected:.4f})')
    return DecaySlope(V.family, V.nu, p, exponent, corrected, expected, rms,
                      tuple(n_grid), tuple(norms))
