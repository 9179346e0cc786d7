#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Tests for :mod:`eigenbounds.resolvent`."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from eigenbounds.errors import (
    DivergenceError, GridResolutionError, InvalidArgumentError,
    NonConvergenceError
)
from eigenbounds.norms import square_well_ground_state
from eigenbounds.potentials import WvnPotential, wvn_potential
from eigenbounds.quadrature import power_law_fit
from eigenbounds.resolvent import (
    ChannelIndex, KernelSpec, Negative, PositiveLimit, admissible_window,
    bs_grid, bs_matrix, bs_scan, channel_rho, double_region_integrals,
    gauss_panels, green_kernel, intop_majorant, intop_sup,
    kernel_identity_residual, kernel_matrix, kernel_qnorm, line_integral,
    mean_power, op_norm,
    region_exponents, region_integrals, sup_over_mu, support_radius
)

#: The kernel norm of mu = 1/2, q = 4, rho = 0: (2/pi)^4 int sin^4 r / r^3.
HALF_ORDER_QNORM = 16 * math.log(2) / math.pi ** 4


def spec(l, nu, energy):
    return KernelSpec(ChannelIndex(l, nu), energy)


def test_channel_index():
    assert ChannelIndex(2, 3).mu_l.mu == 2.5
    assert ChannelIndex(0, 2).mu_l.mu == 0
    assert ChannelIndex(1, 4).centrifugal == 3
    with pytest.raises(InvalidArgumentError):
        ChannelIndex(-1, 3)
    with pytest.raises(InvalidArgumentError):
        ChannelIndex(0, 1)
    with pytest.raises(InvalidArgumentError):
        PositiveLimit(0)
    assert Negative(4).z == -4
    assert spec(0, 3, PositiveLimit(4)).wavenumber == 2


def test_green_kernel_closed_forms():
    radii = np.geomspace(0.1, 50, 40)
    r, rp = np.meshgrid(radii, radii, indexing='ij')
    lo, hi = np.minimum(r, rp), np.maximum(r, rp)

    k = 1.3
    value = green_kernel(spec(0, 3, PositiveLimit(k ** 2)), r, rp)
    expected = np.sin(k * lo) * np.exp(1j * k * hi) / (k * r * rp)
    np.testing.assert_allclose(value, expected, rtol=1e-8, atol=1e-13)

    kappa = 0.7
    value = green_kernel(spec(0, 3, Negative(kappa ** 2)), r, rp)
    expected = np.sinh(kappa * lo) * np.exp(-kappa * hi) / (kappa * r * rp)
    np.testing.assert_allclose(value, expected, rtol=1e-8, atol=1e-300)


def test_green_kernel_arguments():
    s = spec(1, 3, PositiveLimit(1))
    assert green_kernel(s, 2.0, 3.0) == pytest.approx(green_kernel(s, 3.0, 2.0))
    assert isinstance(green_kernel(s, 2.0, 3.0), complex)
    with pytest.raises(InvalidArgumentError):
        green_kernel(s, 0.0, 1.0)


@pytest.mark.parametrize('s', [spec(2, 3, PositiveLimit(2)),
                               spec(1, 2, Negative(1.5)),
                               spec(0, 4, PositiveLimit(0.5))])
def test_kernel_matrix(s):
    nodes = np.linspace(0.05, 12, 60)
    np.testing.assert_allclose(kernel_matrix(s, nodes),
                               green_kernel(s, nodes[:, None], nodes[None, :]),
                               rtol=1e-12, atol=1e-300)


def test_gauss_panels():
    nodes, weights = gauss_panels(0, 2, 0.3, 8, 3)
    assert np.all((nodes > 0) & (nodes < 2))
    assert weights.sum() == pytest.approx(8 / 3, rel=1e-13)
    with pytest.raises(InvalidArgumentError):
        gauss_panels(2, 1, 0.1)


@pytest.mark.parametrize('s', [spec(0, 3, PositiveLimit(1)),
                               spec(1, 3, Negative(2)),
                               spec(0, 2, PositiveLimit(2)),
                               spec(2, 4, PositiveLimit(0.5))])
def test_kernel_identity_residual(s):
    def f(r):
        return np.exp(-(r - 3) ** 2)

    coarse = kernel_identity_residual(s, f, np.linspace(1, 6, 101))
    fine = kernel_identity_residual(s, f, np.linspace(1, 6, 201))
    assert fine < 5e-3
    assert 3 <= coarse / fine <= 5


def test_kernel_identity_residual_grid():
    s = spec(0, 3, PositiveLimit(1))
    with pytest.raises(InvalidArgumentError):
        kernel_identity_residual(s, np.exp, [1.0, 1.5, 1.7])
    with pytest.raises(InvalidArgumentError):
        kernel_identity_residual(s, np.exp, [0.1, 0.2, 0.3])


def test_mean_power():
    assert mean_power(2) == pytest.approx(0.5)
    assert mean_power(4) == pytest.approx(3 / 8)


def test_qnorm_half_order():
    report = kernel_qnorm(0.5, 4, 0)
    assert report.value == pytest.approx(HALF_ORDER_QNORM, rel=1e-3)
    assert abs(report.value - HALF_ORDER_QNORM) <= report.error
    assert report.params['cutoff'] == 200


def test_qnorm_cutoff_stable():
    short = kernel_qnorm(1.5, 4, 0, cutoff=100)
    long = kernel_qnorm(1.5, 4, 0, cutoff=200)
    assert abs(short.value - long.value) <= short.error + long.error


def test_qnorm_small_orders():
    for mu in (0, 0.25):
        report = kernel_qnorm(mu, 4, 0)
        assert 0 < report.value < math.inf


def test_qnorm_divergence():
    assert admissible_window(3) == (3, 6)
    assert admissible_window(2) == (4, math.inf)
    with pytest.raises(DivergenceError) as info:
        kernel_qnorm(0.5, 3, channel_rho(3, 3))
    assert info.value.condition == 'tail'
    with pytest.raises(DivergenceError) as info:
        kernel_qnorm(0.5, 6, channel_rho(6, 3))
    assert info.value.condition == 'origin'
    with pytest.raises(InvalidArgumentError):
        kernel_qnorm(10, 4, 0, cutoff=15)


def test_sup_over_single_mu():
    result = sup_over_mu(4, 3, [0.5])
    assert result.sup == result.reports[0].value
    assert result.mu_at_sup == 0.5
    assert not result.growing
    assert result.rows()[0]['rho'] == 0


@pytest.mark.slow
def test_sup_over_mu():
    mus = [0.5, 1.5, 2.5, 5, 10, 20, 50]
    result = sup_over_mu(4, 3, mus)
    values = [report.value for report in result.reports]
    errors = [report.error for report in result.reports]
    assert max(values) / min(values) < 10
    for i in (-3, -2):
        assert values[i + 1] <= values[i] + errors[i] + errors[i + 1]
    assert not result.growing


def test_region_partition():
    regions = region_integrals(10, 4, 0)
    assert len(regions.values) == 6
    assert all(value >= 0 for value in regions.values)
    whole, whole_error = line_integral(10, 4, 0)
    assert abs(regions.total - whole) <= (regions.total_error + whole_error
                                          + 1e-12)
    assert [row['region'] for row in regions.rows()] == [
        'I1', 'I2', 'I3', 'I4', 'I5', 'I6']


def test_region_empty():
    # mu sech alpha0 > mu - mu^(1/3) for small mu
    regions = region_integrals(8, 2, -0.5)
    assert regions.values[2] == 0
    assert regions.values[3] > 0


def test_region_divergence():
    with pytest.raises(DivergenceError) as info:
        region_integrals(1, 2, 0)
    assert info.value.condition == 'tail'
    with pytest.raises(DivergenceError) as info:
        region_integrals(0.5, 0.5, -1.3)
    assert info.value.condition == 'origin'


@pytest.mark.slow
def test_region_scalings():
    q, rho = 2, -0.5
    expected = region_exponents(q, rho)
    assert expected['I3'] == pytest.approx(-5 / 6)
    assert expected['I6'] == pytest.approx(-0.5)

    mus = [8, 27, 64, 125]
    sixth = [region_integrals(mu, q, rho).values[5] for mu in mus]
    exponent, _, _ = power_law_fit(mus, sixth)
    assert exponent == pytest.approx(expected['I6'], abs=0.1)

    # mu - mu^(1/3) > mu sech alpha0 only for mu > 48.7 at the default alpha0
    mus = [1000, 2000, 4000, 8000]
    third = [region_integrals(mu, q, rho).values[2] for mu in mus]
    exponent, _, _ = power_law_fit(mus, third)
    assert exponent == pytest.approx(expected['I3'], abs=0.1)


def test_double_region_majorants():
    q, rho = 5, -0.5
    scaled = []
    for mu in (8, 16, 32):
        result = double_region_integrals(mu, q, rho)
        for value, error, majorant in zip(result.values, result.errors,
                                          result.majorants):
            assert value <= majorant * (1 + 1e-6) + error
        scaled.append(result.values[0] * mu ** -region_exponents(q, rho)['double_I1'])
    assert max(scaled) <= 1.1 * scaled[0]
    assert max(scaled) / min(scaled) < 10


def test_double_region_small_orders():
    empty = double_region_integrals(0.5, 4, 0)
    assert empty.values == (0, 0) and empty.majorants == (0, 0)

    # r' stops at 2 - 2^(1/3), below the first edge
    mu, q = 2, 4
    top = mu - mu ** (1 / 3)

    def inner(r):
        return integrate.quad(lambda s: abs(special.hankel1(mu, s)) ** q,
                              r, top, limit=200)[0]

    expected, _ = integrate.quad(
        lambda r: abs(special.jv(mu, r)) ** q * inner(r), 0, top, limit=200)
    result = double_region_integrals(mu, q, 0)
    assert abs(result.values[0] - expected) <= 1e-3 * expected + result.errors[0]
    assert result.values[1] == 0 and result.majorants[1] == 0
    assert result.values[0] <= result.majorants[0] + result.errors[0]


def test_double_region_divergence():
    with pytest.raises(DivergenceError) as info:
        double_region_integrals(4, 2, -1)
    assert info.value.condition == 'origin'


@pytest.mark.slow
def test_double_region_scaling():
    q, rho = 5, -0.5
    mus = [4096, 8192, 16384]
    second = [double_region_integrals(mu, q, rho).values[1] for mu in mus]
    exponent, _, _ = power_law_fit(mus, second)
    assert exponent == pytest.approx(region_exponents(q, rho)['double_I2'],
                                     abs=0.3)


def test_intop_majorant():
    report = intop_majorant(ChannelIndex(0, 3), 4 / 3)
    assert report.value == pytest.approx((2 * HALF_ORDER_QNORM) ** 0.25, rel=1e-3)
    with pytest.raises(InvalidArgumentError):
        intop_majorant(ChannelIndex(0, 3), 1)
    with pytest.raises(DivergenceError):
        intop_majorant(ChannelIndex(0, 3), 1.5)


def test_intop_sup():
    result = intop_sup(3, 4 / 3, 2)
    assert [report.params['l'] for report in result.reports] == [0, 1, 2]
    assert result.sup == max(report.value for report in result.reports)
    assert result.rows()[0]['functional'] == 'intop'


# ----------------------------- Birman-Schwinger ------------------------------

def test_support_radius():
    radius = support_radius(lambda r: np.exp(-r ** 2), 3, 20)
    assert 4.8 < radius < 5.6
    assert support_radius(lambda r: np.zeros_like(r), 3, 20) == 20


def test_zero_potential():
    s = spec(0, 3, PositiveLimit(1))
    M = bs_matrix(lambda r: np.zeros_like(r), s, gauss_panels(0, 5, 0.5, 8, 3))
    assert not np.any(M.entries)
    assert op_norm(M) == 0


def test_bs_matrix_symmetry():
    s = spec(1, 3, PositiveLimit(2))
    grid = gauss_panels(0, 10, 0.25, 8, 3)
    M = bs_matrix(lambda r: np.exp(-r), s, grid)
    reduced = M.entries / M.weights[None, :]
    np.testing.assert_allclose(reduced, reduced.T, rtol=1e-12, atol=1e-300)
    assert M.size == len(grid[0])


def test_grid_resolution():
    s = spec(0, 3, PositiveLimit(400))
    with pytest.raises(GridResolutionError):
        bs_matrix(lambda r: np.exp(-r), s, gauss_panels(0, 10, 5, 2, 3))


def test_square_well_threshold():
    v0, a = 5.0, 1.0
    energy = square_well_ground_state(v0, a, 'odd')

    def well(r):
        return np.where(r <= a, -v0, 0.0)

    s = spec(0, 3, Negative(-energy))
    M = bs_matrix(well, s, bs_grid(well, s, a, scale=0.2))
    assert np.isrealobj(M.entries)
    assert op_norm(M) == pytest.approx(1, abs=0.02)


def test_op_norm():
    assert op_norm(np.diag([3.0, 1.0, 2.0])) == pytest.approx(3, rel=1e-8)
    rng = np.random.default_rng(1)
    M = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
    sigma = op_norm(M)
    assert sigma == pytest.approx(np.linalg.svd(M, compute_uv=False)[0], rel=1e-6)
    assert op_norm(-2.5j * M) == pytest.approx(2.5 * sigma, rel=1e-6)
    assert op_norm(M, seed=7) == pytest.approx(sigma, rel=1e-6)
    with pytest.raises(NonConvergenceError) as info:
        op_norm(M, max_iter=1)
    assert info.value.estimate > 0


def test_scan_structure():
    scan = bs_scan(lambda r: 0.1 * np.exp(-r ** 2), 3, [1.0, 2.0], 3, 8)
    assert scan.crossings == []
    assert {row['lam'] for row in scan.rows} == {1.0, 2.0}
    for lam in (1.0, 2.0):
        ls = [row['l'] for row in scan.rows if row['lam'] == lam]
        assert ls == list(range(len(ls)))
        assert scan.sup(lam) < 1


@pytest.mark.slow
def test_wvn_threshold():
    p = WvnPotential(3, 1, 1)
    s = spec(0, 3, PositiveLimit(1))
    M = bs_matrix(p, s, bs_grid(p, s, 60))
    assert op_norm(M) >= 0.98


@pytest.mark.slow
def test_weak_wvn_has_no_crossing():
    p = WvnPotential(3, 1, 1)

    def weak(r):
        return wvn_potential(p, r) / 100

    scan = bs_scan(weak, 3, np.geomspace(0.1, 10, 5), 2, 40)
    assert scan.crossings == []
