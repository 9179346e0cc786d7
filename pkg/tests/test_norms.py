#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Tests for :mod:`eigenbounds.norms`."""

import math

import numpy as np
import pytest

from eigenbounds.errors import DivergenceError, InvalidArgumentError
from eigenbounds.norms import (
    RadialProfile, angular_l2, angular_sup, axial, decay_slope,
    dyadic_mt_constant, dyadic_sum_norm, keller_quotient, lorentz_nu1,
    lp_fullspace, mixed_norm, mt_lorentz_constant, mt_norm, mt_values,
    profile_of, split_bound_quotient, square_well_ground_state, weak_lorentz,
    weighted_sup_norm
)
from eigenbounds.norms.functionals import MtFunctional
from eigenbounds.potentials import (
    IjPotential, WvnPotential, ij_potential, sphere_area, wvn_potential
)
from eigenbounds.quadrature import panel_nodes, uniform_edges
from eigenbounds.utils import get_subclasses_of

N_GRID = [1, 2, 4, 8, 16, 32, 64]


def indicator(lo, hi):
    return lambda r: ((r >= lo) & (r < hi)).astype(float)


# ------------------------------- full space ---------------------------------

def test_ball_volume():
    for p in (1, 3.7):
        report = lp_fullspace(lambda r: (r <= 1) * 1.0, p, nu=3, extent=2,
                              breakpoints=(1,))
        assert report.value == pytest.approx(4 * math.pi / 3, rel=1e-12)
        assert report.error < 1e-10


def test_lp_arguments():
    with pytest.raises(InvalidArgumentError):
        lp_fullspace(np.exp, 2, extent=3)
    with pytest.raises(InvalidArgumentError):
        lp_fullspace(np.exp, 2, nu=3)
    with pytest.raises(InvalidArgumentError):
        lp_fullspace(WvnPotential(3, 1, 1), 4, nu=2)
    with pytest.raises(InvalidArgumentError):
        lp_fullspace(WvnPotential(3, 1, 1), 0)


def test_lp_divergence():
    with pytest.raises(DivergenceError) as error:
        lp_fullspace(IjPotential(2, 1, 1), 1.5)
    assert error.value.condition == 'tail'
    with pytest.raises(DivergenceError):
        lp_fullspace(WvnPotential(3, 1, 1), 3)
    with pytest.raises(DivergenceError):
        lp_fullspace(lambda r: 1 / r, 2, nu=3, extent=10, tail_exponent=-1)


def test_radial_tail():
    # int_0^inf (1 + r)^-4 4 pi r^2 dr = 4 pi / 3
    f = lambda r: (1 + r) ** -2
    report = lp_fullspace(f, 2, nu=3, extent=1e4, tail_exponent=-2,
                          breakpoints=(1, 10, 100, 1000))
    assert report.value == pytest.approx(4 * math.pi / 3, rel=1e-3)


def test_envelope_scaling():
    def box(n):
        envelope = axial(lambda x1, s: 1 / (n + np.abs(x1) + s ** 2))
        return lp_fullspace(envelope, 2, nu=2, extent=40 * n,
                            s_extent=math.sqrt(40 * n)).value
    assert box(2) / box(1) == pytest.approx(2 ** -0.5, rel=1e-4)


def test_homogeneity():
    f = lambda r: np.exp(-r) * np.cos(r)
    plain = lp_fullspace(f, 2.5, nu=3, extent=30).value
    scaled = lp_fullspace(lambda r: 3 * f(r), 2.5, nu=3, extent=30).value
    assert scaled == pytest.approx(3 ** 2.5 * plain, rel=1e-12)
    family = lp_fullspace(WvnPotential(3, 1, 1), 4).value
    v = lambda r: wvn_potential(WvnPotential(3, 1, 1), r)
    doubled = lp_fullspace(lambda r: -2 * v(r), 4, nu=3, extent=80).value
    direct = lp_fullspace(v, 4, nu=3, extent=80).value
    assert doubled == pytest.approx(16 * direct, rel=1e-12)
    assert direct < family


@pytest.mark.slow
def test_wvn_lp_monte_carlo():
    p = WvnPotential(3, 1, 1)
    rng = np.random.default_rng(2024)
    scale, chunks = 5.0, 10
    total = 0.0
    for _ in range(chunks):
        u = rng.uniform(size=10 ** 6)
        r = scale * u / (1 - u)
        # r has the density scale / (scale + r)^2
        weight = (scale + r) ** 2 / scale
        total += np.sum(np.abs(wvn_potential(p, r)) ** 4 * r ** 2 * weight)
    estimate = 4 * math.pi * total / (chunks * 10 ** 6)
    assert lp_fullspace(p, 4).value == pytest.approx(estimate, rel=0.01)


# ------------------------------- mixed norms --------------------------------

def test_mixed_radial_relations():
    f = lambda r: np.exp(-r ** 2)
    area = sphere_area(2)
    lp = lp_fullspace(f, 3, nu=3, extent=8).value
    linf = mixed_norm(f, 3, 'linf', nu=3, r_max=8, tail=False).value
    l2 = mixed_norm(f, 3, 'l2', nu=3, r_max=8, tail=False).value
    assert lp == pytest.approx(area * linf ** 3, rel=1e-8)
    assert l2 ** 3 == pytest.approx(area ** 1.5 * linf ** 3, rel=1e-8)


def test_mixed_holder():
    f = axial(lambda x1, s: np.exp(-(x1 - 1) ** 2 - 2 * s ** 2))
    p = 1.5
    full = lp_fullspace(f, p, nu=3, extent=10).value ** (1 / p)
    mixed = mixed_norm(f, p, 'l2', nu=3, r_max=10, tail=False).value
    assert full <= sphere_area(2) ** ((2 - p) / (2 * p)) * mixed * (1 + 1e-6)


def test_mixed_divergence():
    with pytest.raises(DivergenceError):
        mixed_norm(lambda r: 1 / (1 + r), 2, nu=2, r_max=50)
    with pytest.raises(InvalidArgumentError):
        mixed_norm(np.exp, 2, 'l3', nu=2, r_max=5)


def test_ij_mixed_against_dense_sampling():
    p = IjPotential(2, 1, 1)
    r, w = panel_nodes(uniform_edges(0, 20, 0.5), 8)
    theta = np.linspace(0, math.pi, 10001)
    dense = np.array([np.abs(ij_potential(p, x * np.cos(theta),
                                          x * np.sin(theta))).max()
                      for x in r])
    expected = math.sqrt(np.dot(w * r, dense ** 2))
    report = mixed_norm(p, 2, 'linf', r_max=20, tail=False)
    assert report.value == pytest.approx(expected, rel=5e-3)


def test_angular_functionals():
    assert angular_sup(lambda x1, s: np.cos(x1), 1.0) == pytest.approx(1)
    assert angular_sup(lambda x1, s: x1 + 0 * s, 2.0) == pytest.approx(2)
    # constant on the circle: sqrt(2 pi)
    assert angular_l2(lambda x1, s: 1 + 0 * x1, 3.0, 2) == pytest.approx(
        math.sqrt(2 * math.pi))
    assert angular_l2(lambda x1, s: 1 + 0 * x1, 3.0, 3) == pytest.approx(
        math.sqrt(4 * math.pi))


def test_multimodal_warning(caplog):
    profile = profile_of(axial(lambda x1, s: np.cos(5 * x1)), [1, 2, 3], 2)
    assert np.allclose(profile.v, 1)
    assert 'not unimodal' in caplog.text


# --------------------------------- profiles ---------------------------------

def test_profile_validation():
    with pytest.raises(InvalidArgumentError):
        RadialProfile([1], [1], 3)
    with pytest.raises(InvalidArgumentError):
        RadialProfile([1, 1], [1, 1], 3)
    with pytest.raises(InvalidArgumentError):
        RadialProfile([0, 1], [1, 1], 3)
    with pytest.raises(InvalidArgumentError):
        RadialProfile([1, 2], [1, np.nan], 3)
    with pytest.raises(InvalidArgumentError):
        RadialProfile([1, 2, 3], [1, 1], 3)


def test_profile_tail():
    r = np.geomspace(0.1, 100, 200)
    profile = RadialProfile(r, 3 * r ** -2.5, 3)
    assert profile.tail.exponent == pytest.approx(-2.5)
    assert profile.tail.coeff == pytest.approx(3)
    assert profile(200.0) == pytest.approx(3 * 200 ** -2.5)
    assert profile(r[5] * 1.0001) == pytest.approx(3 * r[5] ** -2.5)
    compact = RadialProfile(np.arange(1, 21) / 10, np.arange(1, 21) < 10, 2)
    assert compact.compact
    assert compact(5.0) == 0
    assert compact.scaled(2)(0.05) == 2


# ------------------------------ Lorentz norms -------------------------------

def test_lorentz_indicator():
    r = np.arange(1, 21) / 10
    profile = RadialProfile(r, indicator(0, 1)(r), 2)
    report = lorentz_nu1(profile)
    assert report.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    levels = lorentz_nu1(profile, 'levels')
    assert abs(levels.value - math.sqrt(math.pi)) <= levels.error
    with pytest.raises(InvalidArgumentError):
        lorentz_nu1(profile, 'bisect')


def test_lorentz_gaussian():
    # the superlevel sets are discs of area pi ln(1/tau)
    r = np.linspace(0.001, 6, 6000)
    profile = RadialProfile(r, np.exp(-r ** 2), 2)
    assert lorentz_nu1(profile).value == pytest.approx(math.pi / 2, rel=0.01)


@pytest.mark.parametrize('method', ['sort', 'levels'])
def test_lorentz_scaling(method):
    r = np.geomspace(0.01, 100, 300)
    v = 1 / (1 + r ** 3)
    for grid, values in ((r, v), (np.arange(1, 21) / 10, np.arange(20) < 9)):
        plain = lorentz_nu1(RadialProfile(grid, values, 3), method).value
        squeezed = lorentz_nu1(RadialProfile(grid / 4, values, 3), method).value
        assert squeezed == pytest.approx(plain / 4, rel=1e-9)


def test_lorentz_methods_agree():
    r = np.geomspace(0.01, 100, 300)
    for values, nu in ((1 / (1 + r ** 3), 3), (np.exp(-r), 2),
                       ((r < 7) / (1 + r), 3)):
        profile = RadialProfile(r, values, nu)
        by_sort = lorentz_nu1(profile, 'sort')
        by_levels = lorentz_nu1(profile, 'levels')
        assert abs(by_sort.value - by_levels.value) <= \
            by_sort.error + by_levels.error + 1e-12


def test_lorentz_divergence():
    r = np.geomspace(0.01, 100, 300)
    profile = RadialProfile(r, r ** -0.9, 3)
    with pytest.raises(DivergenceError) as error:
        lorentz_nu1(profile)
    assert error.value.condition == 'tail'
    with pytest.raises(DivergenceError):
        mt_norm(profile)
    with pytest.raises(DivergenceError) as error:
        dyadic_sum_norm(profile, math.inf)
    assert error.value.condition == 'summability'
    with pytest.raises(DivergenceError):
        weak_lorentz(profile, 1.5)


def test_weak_lorentz():
    r = np.arange(1, 21) / 10
    profile = RadialProfile(r, indicator(0, 1)(r), 3)
    assert weak_lorentz(profile, 1.5).value == pytest.approx(
        (4 * math.pi / 3) ** (2 / 3))
    # rho_1 = r^-1 (r^2 - 1)^-1/2 on r > 1 is in weak L^(3/2)
    grid = np.concatenate([np.linspace(0.1, 0.9, 9),
                           1 + np.geomspace(1e-6, 1e3, 4000)])
    rho = np.where(grid > 1, 1 / (grid * np.sqrt(np.abs(grid ** 2 - 1))), 0)
    value = weak_lorentz(RadialProfile(grid, rho, 3), 1.5).value
    assert 2.6 <= value <= 3.0


# ---------------------------- Mizohata-Takeuchi -----------------------------

def test_mt_indicator():
    r = np.arange(1, 21) / 10
    report = mt_norm(RadialProfile(r, indicator(0, 1)(r), 2))
    assert report.value == pytest.approx(1, rel=1e-12)
    assert report.params['R_max'] == 0
    assert report.error < 1e-3


def test_mt_decreasing_profile():
    # for decreasing v the sup is at R = 0, where the norm is int v dr
    r = np.geomspace(1e-3, 50, 3000)
    report = MtFunctional().compute(lambda x: np.exp(-x), 3, r)
    assert report.value == pytest.approx(1, rel=0.01)


def test_mt_tail_closed_form():
    r = np.geomspace(0.1, 10, 100)
    profile = RadialProfile(r, r ** -3, 3)
    # beyond the grid only the tail r^-3 contributes: int_0^inf (R cosh t)^-2 dt
    assert mt_values(profile, [20.0])[0] == pytest.approx(1 / 400, rel=1e-9)
    cells = np.sum(profile.v[:-1] * np.diff(np.concatenate([[0], r[1:]])))
    assert mt_values(profile, [0.0])[0] == pytest.approx(cells + 0.005, rel=1e-9)
    # int_10^inf r^-2 (r^2 - 25)^-1/2 dr = (1 - sqrt(0.75)) / 25
    R = 5.0
    left, right, values = profile.cells()
    lo = np.sqrt(np.clip(np.maximum(left, R) ** 2 - R ** 2, 0, None))
    hi = np.sqrt(np.clip(right ** 2 - R ** 2, 0, None))
    expected = np.dot(hi - lo, values) + (1 - math.sqrt(0.75)) / 25
    assert mt_values(profile, [R])[0] == pytest.approx(expected, rel=1e-9)


# ----------------------------- dyadic and weights ---------------------------

def test_dyadic_single_block():
    r = np.arange(1, 41) / 10
    profile = RadialProfile(r, indicator(1, 2)(r), 3)
    assert dyadic_sum_norm(profile, math.inf).value == pytest.approx(2)
    assert dyadic_sum_norm(profile, 4).value == pytest.approx(3.75 ** 0.25)
    with pytest.raises(InvalidArgumentError):
        dyadic_sum_norm(profile, 2)


def test_dyadic_power_decay():
    r = np.geomspace(0.01, 1000, 500)
    finite = RadialProfile(r, (1 + r) ** -1.5, 3)
    assert np.isfinite(dyadic_sum_norm(finite, math.inf).value)
    assert np.isfinite(dyadic_sum_norm(finite, 6).value)
    slow = RadialProfile(r, 1 / (1 + r), 3)
    with pytest.raises(DivergenceError):
        dyadic_sum_norm(slow, math.inf)


def test_weighted_sup_norm():
    r = np.geomspace(0.01, 100, 400)
    profile = RadialProfile(r, (1 + r) ** -2, 3)
    assert weighted_sup_norm(profile, 0.5).value == pytest.approx(1, rel=0.05)
    with pytest.raises(DivergenceError):
        weighted_sup_norm(profile, 1.5)


def test_constants():
    assert mt_lorentz_constant(3) == pytest.approx((3 / (4 * math.pi)) ** (1 / 3))
    assert mt_lorentz_constant(2) == pytest.approx(math.pi ** -0.5)
    with pytest.raises(InvalidArgumentError):
        mt_lorentz_constant(1)
    infinite = math.acosh(2) + 2 / math.sqrt(3) * math.log(2)
    assert dyadic_mt_constant(math.inf) == pytest.approx(infinite)
    assert dyadic_mt_constant(1e6) == pytest.approx(infinite, rel=1e-4)
    assert np.isfinite(dyadic_mt_constant(3))


def _monotone_pair(rng):
    r = np.geomspace(0.05, 20, 120)
    base = rng.uniform(0, 1, len(r)) * (r < 10)
    return r, base, base + rng.uniform(0, 0.5, len(r)) * (r < 10)


def test_monotonicity():
    r, low, high = _monotone_pair(np.random.default_rng(3))
    for functional in (lorentz_nu1, mt_norm,
                       lambda pr: dyadic_sum_norm(pr, 4),
                       lambda pr: weak_lorentz(pr, 1.5)):
        assert functional(RadialProfile(r, low, 3)).value <= \
            functional(RadialProfile(r, high, 3)).value


def _corpus(count=20):
    rng = np.random.default_rng(11)
    r = np.geomspace(0.01, 100, 200)
    for i in range(count):
        nu = 2 + i % 2
        if i % 3:
            values = rng.uniform(0, 1, len(r)) * (r < rng.uniform(1, 50))
        else:
            values = rng.uniform(0.2, 1, len(r)) * (1 + r) ** -rng.uniform(2, 3)
        yield RadialProfile(r, values, nu)


def test_chain_of_bounds():
    ratios = []
    for profile in _corpus():
        slack = 1 + (1e-9 if profile.compact else 1e-3)
        mt = mt_norm(profile).value
        lorentz = lorentz_nu1(profile)
        bound = mt_lorentz_constant(profile.nu) * (lorentz.value + lorentz.error)
        assert mt <= bound * slack
        for p in (4, math.inf):
            dyadic = dyadic_sum_norm(profile, p).value
            assert mt <= dyadic_mt_constant(p) * dyadic * slack
        ratios.append(mt / bound)
    assert max(ratios) <= 1 + 1e-3
    assert min(ratios) > 0


# --------------------------------- registry ---------------------------------

def test_functional_registry():
    functionals = get_subclasses_of('Functional', 'eigenbounds.norms.functionals')
    assert set(functionals) == {'lp', 'mixed', 'lorentz', 'mt', 'dyadic',
                                'weak', 'weighted'}
    r = np.arange(1, 21) / 10
    report = functionals['lorentz']().compute(indicator(0, 1), 2, r)
    assert report.value == pytest.approx(math.sqrt(math.pi))


# -------------------------------- decay slopes ------------------------------

@pytest.mark.slow
@pytest.mark.parametrize('potential, p', [(IjPotential(2, 1, 1), 2),
                                          (WvnPotential(3, 1, 1), 6)])
def test_decay_slope(potential, p):
    fit = decay_slope(potential, p, N_GRID)
    assert fit.expected == pytest.approx(-0.25 if p == 2 else -0.5)
    assert fit.exponent == pytest.approx(fit.expected, abs=0.05)
    assert fit.corrected == pytest.approx(fit.expected, abs=0.05)
    assert len(fit.rows()) == len(N_GRID)


def test_decay_slope_is_least_squares(monkeypatch):
    # log ||V_n|| = -log(n) / 2 + 1 / (2 n)
    def norms(func, args, processes, desc):
        return [n ** -0.5 * math.exp(0.5 / n) for n in (V.n for V, _ in args)]

    monkeypatch.setattr('eigenbounds.norms.functionals.sweep', norms)
    fit = decay_slope(WvnPotential(3, 1, 1), 6, N_GRID)
    slope = np.polyfit(np.log(N_GRID), np.log(fit.norms), 1)[0]
    assert fit.exponent == pytest.approx(slope, rel=1e-10)
    assert fit.exponent < -0.55
    assert fit.corrected == pytest.approx(-0.5, rel=1e-8)


# -------------------------------- quotients ---------------------------------

def test_keller_quotient():
    assert keller_quotient(0, 1.0, 0.5) == 0
    assert keller_quotient(-4 + 3j, 2.0, 1) == pytest.approx(2.5)
    with pytest.raises(InvalidArgumentError):
        keller_quotient(1, 0, 0.5)


@pytest.mark.parametrize('v0', [0.1, 1, 5, 50])
@pytest.mark.parametrize('a', [0.5, 1, 3])
def test_square_well_keller_bound(v0, a):
    E = square_well_ground_state(v0, a)
    assert -v0 < E < 0
    k, kappa = math.sqrt(v0 + E), math.sqrt(-E)
    assert k * math.tan(k * a) == pytest.approx(kappa, rel=1e-9)
    norm = lp_fullspace(lambda x: v0 * (x <= a), 1, nu=1, extent=2 * a,
                        breakpoints=(a,)).value
    assert norm == pytest.approx(2 * a * v0)
    assert keller_quotient(E, norm, 0.5) <= 0.5 + 1e-3


def test_keller_scaling_invariance():
    v0, a, scale = 5.0, 1.0, 3.0
    plain = keller_quotient(square_well_ground_state(v0, a), 2 * a * v0, 0.5)
    E = square_well_ground_state(scale ** 2 * v0, a / scale)
    scaled = keller_quotient(E, 2 * (a / scale) * scale ** 2 * v0, 0.5)
    assert scaled == pytest.approx(plain, rel=1e-9)


def test_half_line_well():
    E = square_well_ground_state(5, 1, 'odd')
    k, kappa = math.sqrt(5 + E), math.sqrt(-E)
    assert k / math.tan(k) == pytest.approx(-kappa, rel=1e-9)
    with pytest.raises(InvalidArgumentError):
        square_well_ground_state(2, 1, 'odd')
    with pytest.raises(InvalidArgumentError):
        square_well_ground_state(2, 1, 'both')


def test_split_bound_quotient():
    E = square_well_ground_state(5, 1)
    norm = 10.0
    # |V| > 1 everywhere on the well, so the second part vanishes
    assert split_bound_quotient(E, norm, 0.5, 0.0, 1.0) == pytest.approx(
        1 / keller_quotient(E, norm, 0.5))
    assert split_bound_quotient(E, norm, 0.5, 0.0, 1.0) > 0
    assert split_bound_quotient(1e12, 1, 0.5, 1, 1) < 1e-5
    with pytest.raises(InvalidArgumentError):
        split_bound_quotient(0, 1, 0.5, 1, 1)
