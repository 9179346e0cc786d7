#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Quadrature building blocks shared by the norm functionals and the appendix
integrals: composite Gauss-Legendre panels, a power-law rule for integrands
known only through their logarithm and least-squares power-law fits.
"""

from functools import lru_cache
import logging
from typing import Callable, Sequence, Tuple

import numpy as np

from eigenbounds.errors import InvalidArgumentError


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[-1, 1]``."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_nodes(edges: Sequence[float],
                order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule on the panels ``[edges[i], edges[i+1]]``.

    :returns: the flat arrays of nodes and weights.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        return np.empty(0), np.empty(0)
    if np.any(np.diff(edges) < 0):
        raise InvalidArgumentError('Panel edges must be non-decreasing.')
    nodes, weights = gauss_legendre(order)
    half = np.diff(edges)[:, None] / 2
    mid = (edges[:-1] + edges[1:])[:, None] / 2
    return (mid + half * nodes).ravel(), (half * weights).ravel()


def integrate_panels(f: Callable[[np.ndarray], np.ndarray],
                     edges: Sequence[float],
                     order: int = 16) -> Tuple[float, float]:
    """
    Integrates the vectorized function _f_ over the panels with a rule of
    _order_ and estimates the error by comparing with a rule of half the
    order.

    :returns: the tuple of ``(value, error estimate)``.
    """
    x, w = panel_nodes(edges, order)
    if len(x) == 0:
        return 0.0, 0.0
    value = float(np.dot(w, f(x)))
    x2, w2 = panel_nodes(edges, max(order // 2, 2))
    coarse = float(np.dot(w2, f(x2)))
    return value, abs(value - coarse)


def geometric_edges(start: float, stop: float,
                    per_decade: int = 10) -> np.ndarray:
    """Edges of geometrically growing panels covering ``[start, stop]``."""
    if not 0 < start <= stop:
        raise InvalidArgumentError(f'Invalid geometric range [{start}, {stop}].')
    if start == stop:
        return np.array([start])
    count = max(int(np.ceil(np.log10(stop / start) * per_decade)), 1)
    return np.geomspace(start, stop, count + 1)


def uniform_edges(start: float, stop: float, width: float) -> np.ndarray:
    """Edges of panels of at most _width_ covering ``[start, stop]``."""
    if stop <= start:
        return np.array([start])
    count = max(int(np.ceil((stop - start) / width)), 1)
    return np.linspace(start, stop, count + 1)


def log_segments(log_f: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    The logarithms of ``int_{x_i}^{x_(i+1)} f`` when only ``log f`` is known.
    On each segment _f_ is interpolated by the power law through its end
    points, so the rule is exact for ``c x^b`` and second order otherwise.
    Segments with a zero end point fall back to the trapezoid rule.

    :param x: strictly increasing positive abscissae.
    """
    log_f, x = np.asarray(log_f, dtype=float), np.asarray(x, dtype=float)
    log_x = np.log(x)
    a = log_f[:-1] + log_x[:-1]
    b = log_f[1:] + log_x[1:]
    with np.errstate(invalid='ignore'):
        finite = np.isfinite(a) & np.isfinite(b)
        d = np.where(finite, np.abs(b - a), 0.0)
        safe = np.where(d > 1e-12, d, 1.0)
        shape = np.where(d > 1e-12, np.log(-np.expm1(-safe) / safe), -d / 2)
        power = np.log(np.diff(log_x)) + np.maximum(a, b) + shape
    trapezoid = (np.logaddexp(log_f[:-1], log_f[1:])
                 + np.log(np.diff(x)) - np.log(2))
    return np.where(finite, power, trapezoid)


def reverse_log_cumint(log_f: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    ``log G`` with ``G(x_i) = int_{x_i}^{x_N} f``, integrated with the rule of
    :func:`log_segments`. The last entry is ``-inf``.
    """
    seg = log_segments(log_f, x)
    log_g = np.empty(len(seg) + 1)
    log_g[-1] = -np.inf
    log_g[:-1] = np.logaddexp.accumulate(seg[::-1])[::-1]
    return log_g


def log_integral(log_f: np.ndarray, x: np.ndarray) -> float:
    """The logarithm of ``int f`` over _x_; see :func:`log_segments`."""
    if len(x) < 2:
        return -np.inf
    return float(np.logaddexp.reduce(log_segments(log_f, x)))


def power_law_fit(x: Sequence[float], y: Sequence[float],
                  corrections: int = 0) -> Tuple[float, float, float]:
    """
    Least-squares fit of ``log y = e log x + log c + sum_k a_k x^{-k}``.

    :param corrections: the number of ``x^{-k}`` correction columns; they
                        soak up the finite-size effects at small _x_.
    :returns: the tuple ``(e, c, rms residual)``.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if len(x) < 2 + corrections:
        raise InvalidArgumentError(
            f'A power-law fit with {corrections} corrections needs at least '
            f'{2 + corrections} points, got {len(x)}.')
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidArgumentError('Power-law fits need positive data.')
    columns = [np.log(x), np.ones_like(x)]
    columns.extend(x ** -k for k in range(1, corrections + 1))
    design = np.column_stack(columns)
    coeffs, *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
    residual = np.log(y) - design @ coeffs
    rms = float(np.sqrt(np.mean(residual ** 2)))
    logging.debug(f'Power-law fit: exponent {coeffs[0]:.6g}, rms {rms:.3g}')
    return float(coeffs[0]), float(np.exp(coeffs[1])), rms
