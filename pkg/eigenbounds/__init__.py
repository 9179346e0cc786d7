#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Uniform resolvent estimates and eigenvalue bounds for Schrodinger operators
with complex potentials, in numbers.
"""

__version__ = '0.1.0'
