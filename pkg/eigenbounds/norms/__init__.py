#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Norm functionals of radial and axially symmetric potentials."""

from eigenbounds.norms.functionals import (
    DecaySlope, Functional, decay_slope, default_extent, dyadic_mt_constant,
    dyadic_sum_norm, expected_decay_slope, lorentz_nu1, lp_fullspace,
    mixed_norm, mt_lorentz_constant, mt_norm, mt_values, weak_lorentz,
    weighted_sup_norm
)
from eigenbounds.norms.profile import (
    NormReport, RadialProfile, Tail, angular_l2, angular_sup, axial,
    profile_of
)
from eigenbounds.norms.quotients import (
    keller_quotient, split_bound_quotient, square_well_ground_state
)
