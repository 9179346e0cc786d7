#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Miscellaneous utility functions."""

from argparse import ArgumentTypeError
import importlib
import inspect
from typing import Callable, Dict, List, Type


def prefix_name(cls: Type) -> str:
    """
    Returns the (lower cased) prefix before _superclass_'s name; e.g.
    (``LorentzFunctional`` becomes ``lorentz``).

    .. note::
    Only takes the first superclass into account in case of multiple
    inheritence.
    """
    return cls.__name__[:cls.__name__.find(cls.__bases__[0].__name__)].lower()


def get_subclasses_of(superclass: str, module: str) -> Dict[str, Type]:
    """
    Enumerates all subclasses of _superclass_ in module _module_.

    .. note::
    This function is very specific of the layout of the classes in this package.
    It won't work in other contexts.

    :param superclass: the name of the class whose subclasses we enumerate.
    :param module: the where both _superclass_ and its subclasses are defined.
    :returns: a dictionary of {{class name: its type}}. Class name is not the
              full name of the class, but rather its (lower cased) prefix before
              _superclass_'s name; e.g. (``CsvWriter`` becomes ``csv``).
    """
    mod = importlib.import_module(module)
    scls = getattr(mod, superclass)
    return {
        prefix_name(cls): cls
        for name, cls in inspect.getmembers(mod, inspect.isclass)
        if name != superclass and issubclass(cls, scls)
    }


def _parse_list(value: str, convert: Callable, arg: str = None) -> List:
    try:
        items = [convert(item) for item in value.split(',') if item.strip()]
    except ValueError:
        items = []
    if not items:
        if arg:
            raise ArgumentTypeError(f'The value of {arg} is not a valid '
                                    f'comma-separated list')
        else:
            raise ArgumentTypeError(f'"{value}" is not a valid '
                                    f'comma-separated list')
    return items


def float_list(value: str, arg: str = None) -> List[float]:
    """
    A comma-separated list of floats type for argparse; e.g.
    ``0.5,1.5,2.5``.

    :param value: the argument value
    :param arg: the name of the argument; see :func:`int_list`.
    """
    return _parse_list(value, float, arg)


def int_list(value: str, arg: str = None) -> List[int]:
    """
    A comma-separated list of ints type for argparse.

    :param value: the argument value
    :param arg: the name of the argument. If not specified, the error message
                will contain the argument value if anything goes wrong. If it
                is, by e.g. binding it with :func:`functools.partial`, the
                name of the argument is used for brevity and readability.
    """
    return _parse_list(value, int, arg)


def float_range(value: str, arg: str = None) -> List[float]:
    """
    A ``start:stop:count`` type for argparse; the result is the list of
    _count_ geometrically spaced points between _start_ and _stop_ (both
    included). A single number is accepted as a range of one.
    """
    parts = value.split(':')
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        elif len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if start > 0 and stop >= start and count >= 1:
                if count == 1:
                    return [start]
                ratio = (stop / start) ** (1 / (count - 1))
                return [start * ratio ** i for i in range(count - 1)] + [stop]
    except ValueError:
        pass
    raise ArgumentTypeError(f'The value of {arg or value} is not a valid '
                            f'start:stop:count range')
