#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Empirical constants of the eigenvalue bounds: the Keller quotient
``|E|^gamma / int |V|^(gamma + nu/2)``, the two-potential sum that must stay
away from zero, and the square well whose ground state serves as the oracle.
"""

import logging
import math

from scipy import optimize

from eigenbounds.errors import InvalidArgumentError

#: Parities of the square well: the well on the line and on the half-line.
PARITIES = ('even', 'odd')


def keller_quotient(E: complex, norm_value: float, gamma: float) -> float:
    """
    ``|E|^gamma / norm_value``, the candidate for the constant of the Keller
    inequality when _norm_value_ is ``int |V|^(gamma + nu/2)``.
    """
    if not norm_value > 0:
        raise InvalidArgumentError(f'The norm must be positive, not {norm_value}.')
    return abs(E) ** gamma / norm_value


def split_bound_quotient(E: complex, norm1: float, gamma1: float,
                         norm2: float, gamma2: float) -> float:
    """
    ``|E|^-gamma1 norm1 + |E|^-gamma2 norm2`` for a potential split as
    ``V_1 + V_2``, with ``norm_i = int |V_i|^(gamma_i + nu/2)``.
    """
    if E == 0:
        raise InvalidArgumentError('The split bound needs E != 0.')
    if norm1 < 0 or norm2 < 0:
        raise InvalidArgumentError('The norms must be non-negative.')
    size = abs(E)
    return size ** -gamma1 * norm1 + size ** -gamma2 * norm2


def square_well_ground_state(v0: float, a: float, parity: str = 'even') -> float:
    """
    The ground state energy ``E = -kappa^2`` of ``-d^2/dx^2 - v0 1_[-a, a]``.

    With parity ``even`` this is the well on the line, where
    ``k tan(k a) = kappa``; with ``odd`` it is the well ``[0, a]`` on the
    half-line with a Dirichlet condition at ``0`` (i.e. the s-wave of the
    three dimensional well), where ``k cot(k a) = -kappa``. In both cases
    ``k^2 + kappa^2 = v0``.

    :raises InvalidArgumentError: if the half-line well is too shallow to
                                  bind.
    """
    if not (v0 > 0 and a > 0):
        raise InvalidArgumentError('The depth and the width must be positive.')
    depth = math.sqrt(v0)

    def kappa(k):
        return math.sqrt(max(v0 - k * k, 0.0))

    if parity == 'even':
        top = min(math.pi / (2 * a), depth) * (1 - 1e-15)
        k = optimize.brentq(lambda k: k * math.tan(k * a) - kappa(k),
                            0.0, top, xtol=1e-15)
    elif parity == 'odd':
        if depth * a <= math.pi / 2:
            raise InvalidArgumentError(
                f'The half-line well v0 = {v0}, a = {a} has no bound state.')
        bottom = math.pi / (2 * a)
        top = min(math.pi / a, depth) * (1 - 1e-15)
        k = optimize.brentq(lambda k: k / math.tan(k * a) + kappa(k),
                            bottom, top, xtol=1e-15)
    else:
        raise InvalidArgumentError(f'Invalid parity {parity}; try one of '
                                   f'{", ".join(PARITIES)}.')
    energy = -(v0 - k * k)
    logging.debug(f'Square well v0 = {v0}, a = {a} ({parity}): E = {energy:.15g}')
    return energy
