#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Tests for :mod:`eigenbounds.utils`."""

from argparse import ArgumentTypeError

import pytest

from eigenbounds.norms.functionals import Functional, LorentzFunctional
from eigenbounds.utils import (
    float_list, float_range, get_subclasses_of, int_list, prefix_name
)


def test_prefix_name():
    assert prefix_name(LorentzFunctional) == 'lorentz'


def test_functional_registry():
    functionals = get_subclasses_of('Functional', 'eigenbounds.norms.functionals')
    assert set(functionals) == {'lp', 'mixed', 'lorentz', 'mt', 'dyadic',
                                'weak', 'weighted'}
    assert all(issubclass(cls, Functional) for cls in functionals.values())


def test_lists():
    assert float_list('0.5,1.5,2.5') == [0.5, 1.5, 2.5]
    assert float_list('1,') == [1.0]
    assert int_list('1,2,4') == [1, 2, 4]
    with pytest.raises(ArgumentTypeError, match='--mu'):
        float_list('a,b', arg='--mu')
    with pytest.raises(ArgumentTypeError, match='"1.5"'):
        int_list('1.5')
    with pytest.raises(ArgumentTypeError):
        float_list('')


def test_float_range():
    assert float_range('2') == [2.0]
    values = float_range('0.1:10:5')
    assert values[0] == 0.1 and values[-1] == 10.0
    assert values[2] == pytest.approx(1.0)
    assert float_range('3:5:1') == [3.0]
    for bad in ('0:1:3', '2:1:3', '1:2', '1:2:0', 'x'):
        with pytest.raises(ArgumentTypeError):
            float_range(bad)
