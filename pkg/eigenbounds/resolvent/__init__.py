#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Channel Green kernels, their appendix integrals and Birman-Schwinger operators."""

from eigenbounds.resolvent.appendix import (
    DoubleRegionIntegrals, MajorantSweep, MuSweep, RegionIntegrals,
    admissible_window, channel_rho, default_cutoff, double_region_integrals,
    intop_majorant, intop_sup, kernel_qnorm, line_integral, mean_power,
    region_exponents, region_integrals, sup_over_mu
)
from eigenbounds.resolvent.birman_schwinger import (
    BSMatrix, BSScan, bs_grid, bs_matrix, bs_scan, op_norm, support_radius
)
from eigenbounds.resolvent.kernels import (
    ChannelIndex, Energy, KernelSpec, Negative, PositiveLimit, gauss_panels,
    green_kernel, kernel_identity_residual, kernel_matrix
)
