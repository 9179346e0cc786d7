#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Green kernels of the angular momentum channels
``h_l = -d^2/dr^2 - (nu-1)/r d/dr + l(l+nu-2)/r^2`` on the half-line, taken
against the measure ``r^(nu-1) dr``:

- at ``z = k^2 + i0``:
  ``(i pi/2) (r r')^-(nu-2)/2 J_mu(k min) H^(1)_mu(k max)``;
- at ``z = -kappa^2``:
  ``(r r')^-(nu-2)/2 I_mu(kappa min) K_mu(kappa max)``,

where ``mu = l + (nu-2)/2``. The constants are the inverse Wronskians, so
``(h_l - z) int K(., r') f(r') r'^(nu-1) dr' = f``.
"""

from dataclasses import dataclass
import logging
import math
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from eigenbounds.errors import InvalidArgumentError
from eigenbounds.quadrature import panel_nodes, uniform_edges
from eigenbounds.specfun import Order, bessel_i, bessel_j, bessel_k, hankel1


@dataclass(frozen=True)
class ChannelIndex:
    """The channel of angular momentum _l_ in dimension _nu_."""
    l: int
    nu: float

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise InvalidArgumentError(f'Invalid angular momentum {self.l}.')
        if not self.nu >= 2:
            raise InvalidArgumentError(f'Channels need nu >= 2, not {self.nu}.')

    @property
    def mu_l(self) -> Order:
        return Order.from_channel(self.l, self.nu)

    @property
    def centrifugal(self) -> float:
        """``l(l + nu - 2)``."""
        return self.l * (self.l + self.nu - 2)


@dataclass(frozen=True)
class PositiveLimit:
    """The boundary value ``z = lam + i0``."""
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidArgumentError(f'The energy must be positive, not {self.lam}.')

    @property
    def z(self) -> complex:
        return complex(self.lam)


@dataclass(frozen=True)
class Negative:
    """The energy ``z = -lam``."""
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidArgumentError(f'The energy must be positive, not {self.lam}.')

    @property
    def z(self) -> complex:
        return complex(-self.lam)


Energy = Union[PositiveLimit, Negative]


@dataclass(frozen=True)
class KernelSpec:
    """A channel and an energy."""
    channel: ChannelIndex
    energy: Energy

    @property
    def wavenumber(self) -> float:
        """``k = sqrt(lam)`` (resp. ``kappa = sqrt(lam)``)."""
        return math.sqrt(self.energy.lam)

    @property
    def wavelength(self) -> float:
        """``2 pi / k``; the decay length ``2 pi / kappa`` at negative energies."""
        return 2 * math.pi / self.wavenumber

    @property
    def oscillating(self) -> bool:
        return isinstance(self.energy, PositiveLimit)


def _regular(spec: KernelSpec, x: np.ndarray) -> np.ndarray:
    """The solution regular at the origin: ``J`` or ``exp(-x) I``."""
    mu = spec.channel.mu_l
    if spec.oscillating:
        return np.asarray(bessel_j(mu, x).value)
    return np.asarray(bessel_i(mu, x, scaled=True).value)


def _outgoing(spec: KernelSpec, x: np.ndarray) -> np.ndarray:
    """The outgoing (resp. decaying) solution: ``H^(1)`` or ``exp(x) K``."""
    mu = spec.channel.mu_l
    if spec.oscillating:
        return np.asarray(hankel1(mu, x).value)
    return np.asarray(bessel_k(mu, x, scaled=True).value)


def green_kernel(spec: KernelSpec, r: Union[float, np.ndarray],
                 r_prime: Union[float, np.ndarray]) -> Union[complex, np.ndarray]:
    """
    Evaluates the Green kernel of _spec_ at ``(r, r')``. The arguments are
    broadcast against each other. The modified Bessel functions are used in
    their scaled forms, so negative energies do not overflow at large
    ``kappa r``.
    """
    r, r_prime = np.broadcast_arrays(np.asarray(r, dtype=float),
                                     np.asarray(r_prime, dtype=float))
    if np.any(r <= 0) or np.any(r_prime <= 0):
        raise InvalidArgumentError('The radii must be positive.')
    k = spec.wavenumber
    lo, hi = np.minimum(r, r_prime), np.maximum(r, r_prime)
    weight = (lo * hi) ** (-(spec.channel.nu - 2) / 2)
    inner = _regular(spec, (k * lo).ravel()).reshape(lo.shape)
    outer = _outgoing(spec, (k * hi).ravel()).reshape(hi.shape)
    if spec.oscillating:
        value = 0.5j * np.pi * weight * inner * outer
    else:
        value = weight * inner * outer * np.exp(-k * (hi - lo))
    return value[()] if value.ndim == 0 else value


def kernel_matrix(spec: KernelSpec, nodes: np.ndarray) -> np.ndarray:
    """``K(r_i, r_j)`` on _nodes_, with one Bessel evaluation per node."""
    nodes = np.asarray(nodes, dtype=float)
    k = spec.wavenumber
    inner = _regular(spec, k * nodes)
    outer = _outgoing(spec, k * nodes)
    below = nodes[:, None] <= nodes[None, :]
    value = np.where(below, inner[:, None] * outer[None, :],
                     inner[None, :] * outer[:, None])
    value = value * np.outer(nodes, nodes) ** (-(spec.channel.nu - 2) / 2)
    if spec.oscillating:
        return 0.5j * np.pi * value
    return value * np.exp(-k * np.abs(nodes[:, None] - nodes[None, :]))


def gauss_panels(r_min: float, r_max: float, width: float, order: int = 8,
                 nu: float = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre nodes on ``[r_min, r_max]`` with panels of at
    most _width_, and weights against ``r^(nu-1) dr``.
    """
    if not 0 <= r_min < r_max:
        raise InvalidArgumentError(f'Invalid range [{r_min}, {r_max}].')
    if width <= 0 or order < 1:
        raise InvalidArgumentError('The panel width and order must be positive.')
    nodes, weights = panel_nodes(uniform_edges(r_min, r_max, width), order)
    return nodes, weights * nodes ** (nu - 1)


def _apply(spec: KernelSpec, f: Callable[[np.ndarray], np.ndarray], x: float,
           support: Tuple[float, float], width: float) -> complex:
    """``int K(x, r') f(r') r'^(nu-1) dr'``, split at the kink ``r' = x``."""
    lo, hi = support
    total = 0j
    for a, b in ((lo, min(x, hi)), (max(x, lo), hi)):
        if b > a:
            nodes, weights = gauss_panels(a, b, width, 16, spec.channel.nu)
            total += np.dot(weights, green_kernel(spec, x, nodes) * f(nodes))
    return total


def kernel_identity_residual(spec: KernelSpec,
                             f: Callable[[np.ndarray], np.ndarray],
                             grid: Sequence[float],
                             support: Tuple[float, float] = (0.0, 12.0),
                             width: float = 0.25) -> float:
    """
    Applies the finite difference form of ``h_l - z`` to
    ``u = int K(., r') f(r') r'^(nu-1) dr'`` on the uniform _grid_ and returns
    the relative residual ``||(h_l - z) u - f|| / ||f||``. The residual is
    ``O(h^2)`` in the grid step.

    :param f: a smooth function, negligible outside _support_.
    :param grid: uniformly spaced positive radii.
    """
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 3:
        raise InvalidArgumentError('The grid needs at least three radii.')
    h = float(grid[1] - grid[0])
    if h <= 0 or not np.allclose(np.diff(grid), h, rtol=1e-9, atol=0):
        raise InvalidArgumentError('The grid must be uniform and increasing.')
    if grid[0] - h <= 0:
        raise InvalidArgumentError('The grid must stay one step away from 0.')
    points = np.concatenate([grid - h, grid, grid + h])
    u = np.array([_apply(spec, f, x, support, width) for x in points])
    left, mid, right = np.split(u, 3)
    nu = spec.channel.nu
    applied = (-(right - 2 * mid + left) / h ** 2
               - (nu - 1) / grid * (right - left) / (2 * h)
               + spec.channel.centrifugal / grid ** 2 * mid
               - spec.energy.z * mid)
    target = f(grid)
    residual = float(np.linalg.norm(applied - target) / np.linalg.norm(target))
    logging.debug(f'Kernel identity residual of {spec} at h = {h}: {residual:.3e}')
    return residual
