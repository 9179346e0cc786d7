#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exceptions raised by the package. Each class knows the exit code the command
line front end should return when it escapes a subcommand.
"""

from typing import Optional


class EigenboundsError(Exception):
    """Base class of all errors raised by the package."""
    exit_code = 1


class InvalidArgumentError(EigenboundsError, ValueError):
    """An argument violates the precondition of an operation."""
    exit_code = 2


class GridResolutionError(InvalidArgumentError):
    """The quadrature grid does not resolve the wavelength or the potential."""


class DivergenceError(EigenboundsError, ArithmeticError):
    """
    An integral or a series diverges.

    :param condition: the name of the convergence condition that failed,
                      e.g. ``origin``, ``tail`` or ``summability``.
    """
    exit_code = 3

    def __init__(self, message: str, condition: str):
        super().__init__(f'{message} [condition: {condition}]')
        self.condition = condition


class OverflowDomainError(EigenboundsError, OverflowError):
    """The unscaled value of a special function is not representable."""
    exit_code = 3


class NonConvergenceError(EigenboundsError, ArithmeticError):
    """An iterative method ran out of iterations."""
    exit_code = 3

    def __init__(self, message: str, estimate: Optional[float] = None):
        super().__init__(message if estimate is None
                         else f'{message} (last estimate: {estimate!r})')
        self.estimate = estimate
