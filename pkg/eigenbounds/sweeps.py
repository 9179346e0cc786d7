#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Ordered parameter sweeps over a process pool. The results always come back in
the order of the arguments, so the output of a sweep does not depend on the
number of processes.
"""

from functools import partial
from multiprocessing import Pool
import sys
from typing import Any, Callable, Iterable, List, Sequence

from tqdm import tqdm


class _Star:
    """Picklable ``f(*args)`` adapter for :meth:`Pool.imap`."""
    def __init__(self, func: Callable):
        self.func = func

    def __call__(self, args: Sequence[Any]) -> Any:
        return self.func(*args)


def sweep(func: Callable, arg_tuples: Iterable[Sequence[Any]],
          processes: int = 1, desc: str = None) -> List[Any]:
    """
    Calls _func_ on each tuple in _arg_tuples_ and collects the results.

    :param func: a module-level (i.e. picklable) function.
    :param arg_tuples: the positional arguments of each call.
    :param processes: the number of worker processes. With ``1``, everything
                      runs in the calling process.
    :param desc: the label of the progress bar.
    :returns: the list of results, in the order of _arg_tuples_.
    """
    arg_tuples = list(arg_tuples)
    progress_bar = partial(tqdm, total=len(arg_tuples), desc=desc,
                           file=sys.stderr, disable=len(arg_tuples) < 2)
    star = _Star(func)
    if processes <= 1:
        return [star(args) for args in progress_bar(arg_tuples)]
    with Pool(processes) as pool:
        results = list(progress_bar(pool.imap(star, arg_tuples)))
        pool.close()
        pool.join()
    return results
