#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The two families of potentials with the embedded eigenvalue ``1``:

- the anisotropic family decaying like ``(n + |x_1| + |x'|^2)^-1``, built from
  ``g(x_1) = 2 x_1 - sin(2 x_1)`` and the eigenfunction ``w sin(x_1)``;
- the radial Wigner-von Neumann family decaying like ``(n + r)^-1``, built
  from ``phi(r) = r^-(nu-2)/2 J_(nu-2)/2 (r)`` and the eigenfunction
  ``phi w``.

Points are given in reduced coordinates: ``(x_1, s)`` with ``s = |x'|`` for
the former and ``r = |x|`` for the latter. All functions are vectorized.
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import integrate, special

from eigenbounds.errors import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]

#: The bounds of the h^2 ratio test.
RATIO_RANGE = (3.5, 4.5)


def default_alpha(nu: int) -> float:
    """The default decay exponent ``max(nu/4 + 1/2, 1)``."""
    return max(nu / 4 + 0.5, 1.0)


@dataclass(frozen=True)
class _Family:
    nu: int
    n: float = 1.0
    alpha: Optional[float] = None
    min_nu = 1

    def __post_init__(self):
        if int(self.nu) != self.nu or self.nu < self.min_nu:
            raise InvalidArgumentError(
                f'{self.__class__.__name__} needs an integer dimension '
                f'>= {self.min_nu}, not {self.nu}.')
        if self.alpha is None:
            object.__setattr__(self, 'alpha', default_alpha(self.nu))
        if not self.n >= 1:
            raise InvalidArgumentError(f'The scale n must be >= 1, not {self.n}.')
        if not self.alpha > self.nu / 4:
            raise InvalidArgumentError(
                f'alpha must exceed nu/4 = {self.nu / 4}, not {self.alpha}.')

    def with_n(self, n: float) -> '_Family':
        return self.__class__(self.nu, n, self.alpha)


@dataclass(frozen=True)
class IjPotential(_Family):
    """Parameters ``(nu, n, alpha)`` of the anisotropic family."""
    min_nu = 2
    family = 'ij'


@dataclass(frozen=True)
class WvnPotential(_Family):
    """
    Parameters ``(nu, n, alpha)`` of the radial family. For ``nu = 1`` the
    three dimensional potential is evaluated at ``|x|``.
    """
    min_nu = 1
    family = 'wvn'

    @property
    def radial_nu(self) -> int:
        return 3 if self.nu == 1 else self.nu


Family = Union[IjPotential, WvnPotential]


@dataclass(frozen=True)
class ReducedPoint:
    """A point in reduced coordinates; ``s`` is only used by the IJ family."""
    x1: float = 0.0
    s: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.s < 0 or self.r < 0:
            raise InvalidArgumentError('Radii must be non-negative.')


def make_family(family: str, nu: int, n: float = 1.0,
                alpha: float = None) -> Family:
    """Instantiates a family by name (``ij`` or ``wvn``)."""
    try:
        cls = {'ij': IjPotential, 'wvn': WvnPotential}[family.lower()]
    except KeyError:
        raise InvalidArgumentError(f'No potential family {family}. Try one of '
                                   f'ij or wvn.')
    return cls(nu, n, alpha)


def sphere_area(dim: int) -> float:
    """``|S^dim|``, the area of the unit sphere in ``R^(dim+1)``."""
    return 2 * math.pi ** ((dim + 1) / 2) / math.gamma((dim + 1) / 2)


# --------------------------- anisotropic family -----------------------------

def ij_g(x1: ArrayLike) -> ArrayLike:
    """``g(x_1) = 2 x_1 - sin(2 x_1)``."""
    return 2 * x1 - np.sin(2 * x1)


def ij_g_derivatives(x1: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """``g'(x_1) = 4 sin^2 x_1`` and ``g''(x_1) = 4 sin(2 x_1)``."""
    return 4 * np.sin(x1) ** 2, 4 * np.sin(2 * x1)


def _ij_m(p: IjPotential, x1: ArrayLike, s: ArrayLike) -> ArrayLike:
    return p.n ** 2 + ij_g(x1) ** 2 + np.asarray(s) ** 4


def ij_w(p: IjPotential, x1: ArrayLike, s: ArrayLike = 0.0) -> ArrayLike:
    """``w = (n^2 + g(x_1)^2 + s^4)^-alpha``."""
    return _ij_m(p, x1, s) ** -p.alpha


def ij_potential(p: IjPotential, x1: ArrayLike, s: ArrayLike = 0.0) -> ArrayLike:
    """
    The potential ``V_n(x_1, s)``. The product ``g' cot(x_1)`` is evaluated
    as ``2 sin(2 x_1)``, so the zeros of ``sin`` need no special treatment.
    """
    x1 = np.asarray(x1, dtype=float)
    s = np.asarray(s, dtype=float)
    alpha, nu = p.alpha, p.nu
    m = _ij_m(p, x1, s)
    g = ij_g(x1)
    g1, g2 = ij_g_derivatives(x1)
    g1_cot = 2 * np.sin(2 * x1)
    s2 = s ** 2
    return (-4 * alpha / m * g * g1_cot
            + 4 * alpha * (alpha + 1) / m ** 2 * (g ** 2 * g1 ** 2 + 4 * s2 ** 3)
            - 2 * alpha / m * (g1 ** 2 + g * g2 + 2 * (nu + 1) * s2))


def ij_asymptotic(p: IjPotential, x1: ArrayLike, s: ArrayLike = 0.0) -> ArrayLike:
    """
    The leading part of :func:`ij_potential` at large ``|x_1| + s^2``, with
    ``D = 4 x_1^2 + s^4``::

        -32 alpha x_1 sin(2 x_1) / D + 16 alpha (alpha + 1) s^6 / D^2
            - 4 alpha (nu + 1) s^2 / D
    """
    x1 = np.asarray(x1, dtype=float)
    s2 = np.asarray(s, dtype=float) ** 2
    alpha = p.alpha
    d = 4 * x1 ** 2 + s2 ** 2
    return (-32 * alpha * x1 * np.sin(2 * x1) / d
            + 16 * alpha * (alpha + 1) * s2 ** 3 / d ** 2
            - 4 * alpha * (p.nu + 1) * s2 / d)


def ij_eigenfunction(p: IjPotential, x1: ArrayLike, s: ArrayLike = 0.0) -> ArrayLike:
    """``psi = w sin(x_1)``."""
    return ij_w(p, x1, s) * np.sin(x1)


def ij_envelope(p: IjPotential, x1: ArrayLike, s: ArrayLike = 0.0) -> ArrayLike:
    """The decay envelope ``(n + |x_1| + s^2)^-1``."""
    return 1 / (p.n + np.abs(x1) + np.asarray(s) ** 2)


def ij_l2_norm_sq(p: IjPotential) -> float:
    """
    ``||psi||_2^2`` over ``R^nu``. The transverse integral is done in closed
    form,
    ``int_0^inf (A + s^4)^-2a s^(nu-2) ds = A^(k - 2a) B(k, 2a - k) / 4``
    with ``k = (nu - 1) / 4``, which leaves a one dimensional integral in
    ``x_1``.
    """
    k = (p.nu - 1) / 4
    a2 = 2 * p.alpha
    exponent = k - a2
    if exponent >= -0.5:
        raise InvalidArgumentError('The eigenfunction is not square integrable.')
    transverse = special.beta(k, a2 - k) / 4 * sphere_area(p.nu - 2)

    def integrand(x):
        return np.sin(x) ** 2 * (p.n ** 2 + ij_g(x) ** 2) ** exponent

    cutoff = 200.0 * p.n
    edges = np.arange(0, cutoff + np.pi / 2, np.pi / 2)
    head = sum(integrate.quad(integrand, a, b)[0]
               for a, b in zip(edges[:-1], edges[1:]))
    # sin^2 averages to 1/2 and g ~ 2x beyond the cutoff
    x_end = edges[-1]
    tail = 0.5 * 4 ** exponent * x_end ** (1 + 2 * exponent) / -(1 + 2 * exponent)
    return 2 * (head + tail) * transverse


# ------------------------------ radial family -------------------------------

def _mu(nu: int) -> float:
    return (nu - 2) / 2


def wvn_phi(nu: int, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    ``phi(r) = r^-mu J_mu(r)`` with ``mu = (nu - 2) / 2`` and its derivative
    ``phi'(r) = -r^-mu J_(mu+1)(r)``; at ``r = 0`` the limits
    ``2^-mu / Gamma(mu + 1)`` and ``0``.
    """
    if nu < 2:
        raise InvalidArgumentError(f'phi needs nu >= 2, not {nu}.')
    mu = _mu(nu)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidArgumentError('The radius must be non-negative.')
    positive = r > 0
    safe = np.where(positive, r, 1.0)
    power = safe ** -mu
    phi = np.where(positive, power * special.jv(mu, safe),
                   2 ** -mu / special.gamma(mu + 1))
    dphi = np.where(positive, -power * special.jv(mu + 1, safe), 0.0)
    return phi, dphi


def _wvn_g_all(nu: int, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``g``, ``g' = J^2 r`` and ``g'' = (r^(nu-1) phi^2)'`` on radii ``r >= 0``."""
    mu = _mu(nu)
    j = special.jv(mu, r)
    j1 = special.jv(mu + 1, r)
    # Lommel: int_0^r J_mu(t)^2 t dt
    g = r ** 2 / 2 * (j ** 2 + j1 ** 2) - mu * r * j * j1
    g1 = j ** 2 * r
    g2 = (2 * mu + 1) * j ** 2 - 2 * r * j * j1
    return g, g1, g2


def wvn_g(nu: int, r: ArrayLike) -> ArrayLike:
    """
    ``g(r) = int_0^r J_mu(t)^2 t dt``, in the closed form
    ``(r^2/2)(J_mu^2 + J_(mu+1)^2) - mu r J_mu J_(mu+1)``.
    """
    if nu < 2:
        raise InvalidArgumentError(f'g needs nu >= 2, not {nu}.')
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidArgumentError('The radius must be non-negative.')
    return _wvn_g_all(nu, r)[0]


def wvn_potential(p: WvnPotential, r: ArrayLike) -> ArrayLike:
    """
    The radial potential
    ``4a(a+1) g^2 g'^2 / m^2 - (2a/m)(g'^2 + g g'') - (2a/m) g (r^(nu-1) phi^2)'``
    with ``m = n^2 + g^2``. The last factor equals ``g''``, so the zeros of
    ``phi`` never appear in a denominator.

    :param r: ``|x|``; for ``nu = 1`` negative values are allowed.
    """
    r = np.abs(np.asarray(r, dtype=float)) if p.nu == 1 else np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidArgumentError('The radius must be non-negative.')
    alpha = p.alpha
    g, g1, g2 = _wvn_g_all(p.radial_nu, r)
    m = p.n ** 2 + g ** 2
    return (4 * alpha * (alpha + 1) * g ** 2 * g1 ** 2 / m ** 2
            - 2 * alpha / m * (g1 ** 2 + g * g2)
            - 2 * alpha / m * g * g2)


def wvn_eigenfunction(p: WvnPotential, r: ArrayLike) -> ArrayLike:
    """
    ``psi = phi (n^2 + g^2)^-alpha``. For ``nu = 1`` the odd function
    ``x psi_3(|x|)`` is returned, which solves the equation on the line.
    """
    r = np.asarray(r, dtype=float)
    if p.nu == 1:
        radius = np.abs(r)
        phi, _ = wvn_phi(3, radius)
        return r * phi * (p.n ** 2 + wvn_g(3, radius) ** 2) ** -p.alpha
    phi, _ = wvn_phi(p.nu, r)
    return phi * (p.n ** 2 + wvn_g(p.nu, r) ** 2) ** -p.alpha


def wvn_envelope(p: WvnPotential, r: ArrayLike) -> ArrayLike:
    """The decay envelope ``(n + r)^-1``."""
    return 1 / (p.n + np.abs(r))


def wvn_l2_norm_sq(p: WvnPotential) -> float:
    """
    ``int_0^inf psi^2 r^(nu-1) dr``. Since ``psi^2 r^(nu-1) = g' m^-2a``,
    substituting ``G = g(r)`` gives ``n^(1-4a) B(1/2, 2a - 1/2) / 2``.
    """
    if p.nu == 1:
        raise InvalidArgumentError('Use the three dimensional norm for nu = 1.')
    a2 = 2 * p.alpha
    return p.n ** (1 - 2 * a2) * special.beta(0.5, a2 - 0.5) / 2


# ------------------------------- dispatch -----------------------------------

def potential(p: Family, pt: ReducedPoint) -> float:
    """Evaluates the potential of either family at _pt_."""
    if isinstance(p, IjPotential):
        return float(ij_potential(p, pt.x1, pt.s))
    return float(wvn_potential(p, pt.r))


def eigenfunction(p: Family, pt: ReducedPoint) -> float:
    """Evaluates the eigenfunction of either family at _pt_."""
    if isinstance(p, IjPotential):
        return float(ij_eigenfunction(p, pt.x1, pt.s))
    return float(wvn_eigenfunction(p, pt.r))


def sample(p: Family, extent: float, h: float,
           s_extent: float = None) -> List[Dict[str, float]]:
    """
    Samples the potential, the eigenfunction and the decay envelope on a
    uniform grid.

    :param extent: ``r_max`` for the radial family (``|x|`` max for
                   ``nu = 1``), ``|x_1|`` max for the IJ family.
    :param s_extent: the transverse extent of the IJ family; by default
                     ``sqrt(extent)``.
    :returns: a list of rows.
    """
    if h <= 0 or extent <= 0:
        raise InvalidArgumentError('The grid step and extent must be positive.')
    count = int(round(extent / h))
    if isinstance(p, IjPotential):
        s_extent = math.sqrt(extent) if s_extent is None else s_extent
        x1 = h * np.arange(-count, count + 1)
        s = h * np.arange(0, int(round(s_extent / h)) + 1)
        x1, s = (a.ravel() for a in np.meshgrid(x1, s, indexing='ij'))
        columns = {'x1': x1, 's': s, 'V': ij_potential(p, x1, s),
                   'psi': ij_eigenfunction(p, x1, s),
                   'envelope': ij_envelope(p, x1, s)}
    else:
        start = -count if p.nu == 1 else 0
        r = h * np.arange(start, count + 1)
        columns = {'r': r, 'V': wvn_potential(p, r),
                   'psi': wvn_eigenfunction(p, r),
                   'envelope': wvn_envelope(p, r)}
    names = list(columns)
    return [dict(zip(names, map(float, row)))
            for row in zip(*(columns[name] for name in names))]


def decay_constant(p: Family, step: float = 0.1) -> float:
    """
    ``sup |V_n| (n + |x_1| + s^2)`` (resp. ``sup |V_n| (n + r)``) over a
    grid of step _step_ extending to ``20 n + 50``.
    """
    extent = 20 * p.n + 50
    count = int(math.ceil(extent / step)) + 1
    if isinstance(p, IjPotential):
        # V is even in x_1
        x1 = np.linspace(0, extent, count)[:, None]
        s = np.linspace(0, math.sqrt(extent), 100)[None, :]
        values = np.abs(ij_potential(p, x1, s)) / ij_envelope(p, x1, s)
    else:
        r = np.linspace(0, extent, 5 * count)
        values = np.abs(wvn_potential(p, r)) / wvn_envelope(p, r)
    return float(values.max())


# ---------------------------- grid residuals --------------------------------

@dataclass(frozen=True)
class Residual:
    """Relative residuals of ``(-Delta + V - 1) psi`` on a grid of step _h_."""
    h: float
    max_rel: float
    l2_rel: float
    points: int


@dataclass(frozen=True)
class RatioTest:
    """Residuals at ``h`` and ``h/2`` and their ratio."""
    coarse: Residual
    fine: Residual
    ratio: float
    passed: bool = field(default=False)


def _relative(res: np.ndarray, psi: np.ndarray, weight: np.ndarray,
              h: float) -> Residual:
    l2 = math.sqrt(np.sum(res ** 2 * weight) / np.sum(psi ** 2 * weight))
    return Residual(h, float(np.abs(res).max() / np.abs(psi).max()), l2,
                    res.size)


def _ij_residual(p: IjPotential, h: float, x1_max: float, s_max: float,
                 scale: float) -> Residual:
    count = int(round(x1_max / h))
    x1 = h * np.arange(-count, count + 1)[:, None]
    if p.nu == 2:
        # the transverse direction is the whole line x_2
        t = int(round(s_max / h))
        x2 = h * np.arange(-t, t + 1)[None, :]
        psi = scale * ij_eigenfunction(p, x1, np.abs(x2))
        inner = psi[1:-1, 1:-1]
        lap = (psi[2:, 1:-1] + psi[:-2, 1:-1] + psi[1:-1, 2:] + psi[1:-1, :-2]
               - 4 * inner) / h ** 2
        v = ij_potential(p, x1[1:-1], np.abs(x2[:, 1:-1]))
        weight = np.ones_like(inner)
    else:
        # half-offset transverse grid with an even ghost point at -h/2
        s = h * (np.arange(int(round(s_max / h))) + 0.5)[None, :]
        psi = scale * ij_eigenfunction(p, x1, s)
        padded = np.concatenate([psi[:, :1], psi], axis=1)
        inner = psi[1:-1, :-1]
        s_in = s[:, :-1]
        up, down = padded[1:-1, 2:], padded[1:-1, :-2]
        lap = ((psi[2:, :-1] + psi[:-2, :-1] - 2 * inner) / h ** 2
               + (up + down - 2 * inner) / h ** 2
               + (p.nu - 2) / s_in * (up - down) / (2 * h))
        v = ij_potential(p, x1[1:-1], s_in)
        weight = np.broadcast_to(s_in ** (p.nu - 2), inner.shape)
    res = -lap + (v - 1) * inner
    return _relative(res, inner, weight, h)


def _wvn_residual(p: WvnPotential, h: float, r_max: float,
                  scale: float) -> Residual:
    count = int(round(r_max / h))
    if p.nu == 1:
        x = h * np.arange(-count, count + 1)
        psi = scale * wvn_eigenfunction(p, x)
        inner = psi[1:-1]
        lap = (psi[2:] + psi[:-2] - 2 * inner) / h ** 2
        v = wvn_potential(p, x[1:-1])
        weight = np.ones_like(inner)
    else:
        r = h * (np.arange(count) + 0.5)
        psi = scale * wvn_eigenfunction(p, r)
        padded = np.concatenate([psi[:1], psi])
        inner = psi[:-1]
        r_in = r[:-1]
        up, down = padded[2:], padded[:-2]
        lap = ((up + down - 2 * inner) / h ** 2
               + (p.nu - 1) / r_in * (up - down) / (2 * h))
        v = wvn_potential(p, r_in)
        weight = r_in ** (p.nu - 1)
    res = -lap + (v - 1) * inner
    return _relative(res, inner, weight, h)


def default_box(p: Family) -> Tuple[float, float]:
    """The default grid extents: ``(30, 10)`` for IJ, ``(60, 0)`` for WvN."""
    return (30.0, 10.0) if isinstance(p, IjPotential) else (60.0, 0.0)


def residual_grid(p: Family, h: float, box: Tuple[float, float] = None,
                  scale: float = 1.0) -> Residual:
    """
    Applies the second order finite difference Laplacian to the eigenfunction
    and returns the residual of ``-Delta psi + (V - 1) psi`` relative to
    ``psi``, both in the max norm and in the (weighted) l2 norm of the grid.

    :param h: the grid step.
    :param box: ``(x1_max, s_max)`` for IJ, ``(r_max, _)`` for WvN.
    :param scale: multiplies the eigenfunction; the relative residuals do
                  not depend on it.
    """
    if not h > 0:
        raise InvalidArgumentError(f'The grid step must be positive, not {h}.')
    box = box or default_box(p)
    if isinstance(p, IjPotential):
        result = _ij_residual(p, h, box[0], box[1], scale)
    else:
        result = _wvn_residual(p, h, box[0], scale)
    logging.debug(f'{p}: h={h}, residual max {result.max_rel:.3e}, '
                  f'l2 {result.l2_rel:.3e}')
    return result


def residual_ratio_test(p: Family, h: float,
                        box: Tuple[float, float] = None) -> RatioTest:
    """
    Runs :func:`residual_grid` at _h_ and ``h/2``. The residual is in the
    asymptotic ``O(h^2)`` regime if the ratio of the l2 residuals is in
    ``[3.5, 4.5]``; a warning is logged otherwise.
    """
    coarse = residual_grid(p, h, box)
    fine = residual_grid(p, h / 2, box)
    ratio = coarse.l2_rel / fine.l2_rel if fine.l2_rel > 0 else math.inf
    passed = RATIO_RANGE[0] <= ratio <= RATIO_RANGE[1]
    if not passed:
        logging.warning(f'Grid too coarse for {p}: the h/(h/2) residual '
                        f'ratio is {ratio:.3f}, not in {RATIO_RANGE}.')
    return RatioTest(coarse, fine, ratio, passed)
