#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Birman-Schwinger operators of a radial potential in one angular momentum
channel: the Nystrom discretization of
``sgn(V) |V|^1/2 (h_l - z)^-1 |V|^1/2`` and its largest singular value. An
eigenvalue ``z`` of ``h_l + V`` makes the operator have the eigenvalue
``-1``, so its norm is at least ``1`` there.
"""

from dataclasses import dataclass
import logging
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from eigenbounds.errors import (
    GridResolutionError, InvalidArgumentError, NonConvergenceError
)
from eigenbounds.norms.profile import radial_function
from eigenbounds.potentials import WvnPotential
from eigenbounds.resolvent.kernels import (
    ChannelIndex, KernelSpec, PositiveLimit, gauss_panels, kernel_matrix
)
from eigenbounds.sweeps import sweep

#: The potential is cut off where ``|V| r^(nu-1)`` falls below this fraction
#: of its maximum.
TRUNCATION = 1e-10
#: The minimum number of nodes per wavelength over the support of V.
NODES_PER_WAVELENGTH = 10
#: The l-scan stops after this many channels below half of the first one.
STOP_AFTER = 2

Potential = Union[WvnPotential, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class BSMatrix:
    """
    The matrix ``M_ij = sgn(V_i) |V_i|^1/2 K(r_i, r_j) |V_j|^1/2 w_j``, where
    ``w_j`` are the quadrature weights against ``r^(nu-1) dr``.
    """
    nodes: np.ndarray
    weights: np.ndarray
    entries: np.ndarray
    potential: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)


def support_radius(V: Potential, nu: float, r_max: float,
                   samples: int = 20000) -> float:
    """
    The radius beyond which ``|V| r^(nu-1)`` stays below
    :data:`TRUNCATION` times its maximum on ``(0, r_max]``.
    """
    v = radial_function(V)
    r = np.linspace(r_max / samples, r_max, samples)
    mass = np.abs(v(r)) * r ** (nu - 1)
    top = mass.max()
    if top == 0:
        return float(r_max)
    return float(r[np.flatnonzero(mass >= TRUNCATION * top)[-1]])


def bs_grid(V: Potential, spec: KernelSpec, r_max: float, scale: float = 1.0,
            order: int = 8) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre panels on ``(0, R]``, with _R_ the :func:`support_radius`
    and panels no wider than half of the wavelength or of the length _scale_
    of the potential.
    """
    nu = spec.channel.nu
    radius = support_radius(V, nu, r_max)
    width = min(spec.wavelength, scale) / 2
    return gauss_panels(0.0, radius, width, order, nu)


def _check_resolution(nodes: np.ndarray, values: np.ndarray,
                      spec: KernelSpec):
    support = nodes[np.abs(values) > 0]
    if len(support) < 2:
        return
    wavelengths = (support[-1] - support[0]) / spec.wavelength
    if len(support) < NODES_PER_WAVELENGTH * wavelengths:
        raise GridResolutionError(
            f'{len(support)} nodes cannot resolve {wavelengths:.3g} '
            f'wavelengths; at least {NODES_PER_WAVELENGTH} are needed per '
            f'wavelength.')


def bs_matrix(V: Potential, spec: KernelSpec,
              grid: Tuple[np.ndarray, np.ndarray]) -> BSMatrix:
    """
    Discretizes the Birman-Schwinger operator of the (possibly complex)
    radial potential _V_ in the channel and at the energy of _spec_.

    :param grid: quadrature nodes and weights against ``r^(nu-1) dr``, e.g.
                 from :func:`bs_grid`.
    :raises GridResolutionError: if the grid has fewer than 10 nodes per
                                 wavelength over the support of _V_.
    """
    nodes, weights = (np.asarray(a, dtype=float) for a in grid)
    if nodes.shape != weights.shape or nodes.ndim != 1 or len(nodes) == 0:
        raise InvalidArgumentError('Invalid quadrature grid.')
    values = np.asarray(radial_function(V)(nodes), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError('The potential is not finite on the grid.')
    _check_resolution(nodes, values, spec)
    modulus = np.abs(values)
    root = np.sqrt(modulus)
    sign = np.divide(values, modulus, out=np.zeros_like(values),
                     where=modulus > 0)
    kernel = kernel_matrix(spec, nodes)
    entries = (sign * root)[:, None] * kernel * (root * weights)[None, :]
    if np.all(values.imag == 0) and not spec.oscillating:
        entries = entries.real
    logging.debug(f'Birman-Schwinger matrix of size {len(nodes)} for {spec}')
    return BSMatrix(nodes, weights, entries, values)


def op_norm(M: Union[BSMatrix, np.ndarray], tol: float = 1e-10,
            max_iter: int = 10000, seed: int = 0) -> float:
    """
    The largest singular value of _M_, by power iteration on ``M^* M`` from a
    random start vector drawn with _seed_.

    :raises NonConvergenceError: after _max_iter_ iterations; the error
                                 carries the last estimate.
    """
    matrix = M.entries if isinstance(M, BSMatrix) else np.asarray(M)
    if matrix.ndim != 2:
        raise InvalidArgumentError('op_norm needs a matrix.')
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgumentError('The matrix has non-finite entries.')
    if not np.any(matrix):
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(matrix.shape[1])
    if np.iscomplexobj(matrix):
        v = v + 1j * rng.standard_normal(matrix.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for iteration in range(max_iter):
        image = matrix @ v
        estimate = float(np.linalg.norm(image))
        w = matrix.conj().T @ image
        size = np.linalg.norm(w)
        if size == 0:
            # v is in the kernel; restart from a fresh random vector
            v = rng.standard_normal(matrix.shape[1]).astype(matrix.dtype)
            v /= np.linalg.norm(v)
            continue
        v = w / size
        if abs(estimate - sigma) <= tol * estimate:
            logging.debug(f'Power iteration converged after {iteration + 1} '
                          f'steps: {estimate:.12g}')
            return estimate
        sigma = estimate
    raise NonConvergenceError(
        f'Power iteration did not converge in {max_iter} steps', sigma)


@dataclass(frozen=True)
class BSScan:
    """The largest singular values of a scan over energies and channels."""
    nu: float
    rows: List[Dict[str, Any]]

    @property
    def crossings(self) -> List[float]:
        """The energies where ``sup_l sigma_max >= 1``."""
        lams = []
        for row in self.rows:
            if row['eigenvalue'] and row['lam'] not in lams:
                lams.append(row['lam'])
        return lams

    def sup(self, lam: float) -> float:
        return max(row['sigma_max'] for row in self.rows if row['lam'] == lam)


def _scan_energy(V: Potential, nu: float, lam: float, l_max: int,
                 r_max: float, scale: float, tol: float,
                 seed: int = 0) -> List[Tuple[int, float]]:
    """
    The channels ``l = 0, 1, ...`` at one energy, until :data:`STOP_AFTER`
    consecutive channels fall below half of the first one or _l_max_ is
    reached.
    """
    sigmas, below = [], 0
    for l in range(l_max + 1):
        spec = KernelSpec(ChannelIndex(l, nu), PositiveLimit(lam))
        matrix = bs_matrix(V, spec, bs_grid(V, spec, r_max, scale))
        sigma = op_norm(matrix, tol, seed=seed)
        sigmas.append((l, sigma))
        below = below + 1 if l > 0 and sigma < 0.5 * sigmas[0][1] else 0
        if below == STOP_AFTER:
            return sigmas
    if l_max > 0:
        logging.warning(f'The l-truncation criterion is unmet at lam = {lam}: '
                        f'l_max = {l_max} is too small.')
    return sigmas


def bs_scan(V: Potential, nu: float, lams: Sequence[float], l_max: int,
            r_max: float, scale: float = 1.0, tol: float = 1e-8,
            processes: int = 1, seed: int = 0) -> BSScan:
    """
    Computes the Birman-Schwinger norm of _V_ at ``z = lam + i0`` for each
    energy in _lams_ and the channels ``l <= l_max``. The channel loop stops
    once two consecutive channels stay below half of the ``l = 0`` value.
    """
    if l_max < 0:
        raise InvalidArgumentError(f'Invalid l_max {l_max}.')
    lams = [float(lam) for lam in lams]
    per_lam = sweep(_scan_energy,
                    [(V, nu, lam, l_max, r_max, scale, tol, seed)
                     for lam in lams],
                    processes, desc='BS scan')
    rows = [{'lam': lam, 'l': l, 'sigma_max': sigma, 'eigenvalue': sigma >= 1}
            for lam, sigmas in zip(lams, per_lam) for l, sigma in sigmas]
    scan = BSScan(nu, rows)
    logging.info(f'Birman-Schwinger crossings: {scan.crossings or "none"}')
    return scan
