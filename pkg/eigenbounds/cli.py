#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Numerical experiments on the resolvent of the Schrodinger operator: special
function envelopes, potentials with embedded eigenvalues, norm functionals,
kernel norms of the angular momentum channels and Birman-Schwinger scans.
Every run writes a single CSV or JSON document.
"""

from argparse import ArgumentParser, Namespace
from functools import partial
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, Sequence

from multiprocessing_logging import install_mp_handler
import numpy as np

from eigenbounds.errors import EigenboundsError
from eigenbounds.norms import (
    decay_slope, default_extent, keller_quotient, square_well_ground_state
)
from eigenbounds.norms.quotients import PARITIES
from eigenbounds.potentials import (
    make_family, residual_ratio_test, sample, sphere_area, wvn_potential
)
from eigenbounds.reports import open_output
from eigenbounds.resolvent import (
    ChannelIndex, KernelSpec, Negative, PositiveLimit, bs_grid, bs_matrix,
    bs_scan, channel_rho, double_region_integrals, intop_sup, kernel_qnorm,
    op_norm, region_integrals, sup_over_mu
)
from eigenbounds.specfun import (
    DEFAULT_ALPHA0, bessel_i, bessel_j, bessel_k, bessel_y, certify_bounds,
    hankel1
)
from eigenbounds.sweeps import sweep
from eigenbounds.utils import (
    float_list, float_range, get_subclasses_of, int_list
)

Rows = List[Dict[str, Any]]


# --------------------------------- potentials -------------------------------

def _square_well(v0: float, a: float, r: np.ndarray) -> np.ndarray:
    """The attractive well ``-v0 1_[0, a]``."""
    return np.where(np.asarray(r) <= a, -v0, 0.0)


def _coupled(V: Any, coupling: float, r: np.ndarray) -> np.ndarray:
    return coupling * wvn_potential(V, r)


def _family(args: Namespace):
    return make_family(args.family, args.nu, args.n, args.alpha)


def _radial_potential(args: Namespace) -> Callable[[np.ndarray], np.ndarray]:
    """The potential of the ``bs`` commands; module level, so it pickles."""
    if args.well:
        v0, a = args.well
        return partial(_square_well, args.coupling * v0, a)
    V = make_family('wvn', args.nu, args.n, args.alpha)
    return partial(_coupled, V, args.coupling)


# ---------------------------------- handlers --------------------------------

def potential_sample(args: Namespace) -> Rows:
    return sample(_family(args), args.rmax, args.h, args.s_extent)


def verify_residual(args: Namespace) -> Rows:
    """The ratio test runs between ``2h`` and ``h``."""
    V = _family(args)
    box = tuple(args.box) if args.box else None
    test = residual_ratio_test(V, 2 * args.h, box)
    return [{'family': V.family, 'nu': V.nu, 'n': V.n, 'alpha': V.alpha,
             'h': args.h, 'l2_rel_residual': test.fine.l2_rel,
             'max_rel_residual': test.fine.max_rel,
             'coarse_l2_rel_residual': test.coarse.l2_rel,
             'ratio': test.ratio, 'passed': test.passed}]


def norms_compute(args: Namespace) -> Rows:
    functionals = get_subclasses_of('Functional', 'eigenbounds.norms.functionals')
    functional = functionals[args.functional](
        p=args.p, q=args.q, inner=args.inner, method=args.method, eps=args.eps)
    V = _family(args)
    r_max = args.rmax or default_extent(V)
    r_grid = np.geomspace(args.rmin, r_max, args.points)
    return [functional.compute(V, V.nu, r_grid).row()]


def _bessel_row(mu: float, r: float) -> Dict[str, Any]:
    row = {'mu': mu, 'r': r}
    for name, func in (('J', bessel_j), ('Y', bessel_y), ('H1', hankel1),
                       ('I', bessel_i), ('K', bessel_k)):
        result = func(mu, r)
        row[name] = result.value
        row[f'{name}_err'] = result.abs_err
    return row


def bessel_eval(args: Namespace) -> Rows:
    return [_bessel_row(mu, r) for mu in args.mu for r in args.r]


def bessel_certify(args: Namespace) -> Rows:
    certificates = certify_bounds(args.mu, args.samples, args.alpha0,
                                  args.processes)
    return [{'region': c.region.name, 'kind': c.kind.value,
             'constant': c.constant, 'mu_at_max': c.mu_at_max,
             'r_at_max': c.r_at_max, 'samples': c.samples}
            for c in certificates]


def _rho(args: Namespace) -> float:
    return channel_rho(args.q, args.nu) if args.rho is None else args.rho


def kernel_qnorm_rows(args: Namespace) -> Rows:
    rho = _rho(args)
    reports = sweep(kernel_qnorm, [(mu, args.q, rho, args.cutoff) for mu in args.mu],
                    args.processes, desc='qnorm')
    return [report.row() for report in reports]


def kernel_supmu(args: Namespace) -> Rows:
    return sup_over_mu(args.q, args.nu, args.mu, args.cutoff,
                       args.processes).rows()


def kernel_regions(args: Namespace) -> Rows:
    rho = _rho(args)
    results = sweep(region_integrals,
                    [(mu, args.q, rho, args.alpha0) for mu in args.mu],
                    args.processes, desc='regions')
    return [row for result in results for row in result.rows()]


def kernel_doubleregions(args: Namespace) -> Rows:
    rho = _rho(args)
    results = sweep(double_region_integrals,
                    [(mu, args.q, rho, args.alpha0) for mu in args.mu],
                    args.processes, desc='double regions')
    return [row for result in results for row in result.rows()]


def kernel_intop(args: Namespace) -> Rows:
    return intop_sup(args.nu, args.p, args.l_max, args.cutoff,
                     args.processes).rows()


def bs_matrix_rows(args: Namespace) -> Rows:
    V = _radial_potential(args)
    energy = Negative(args.lam) if args.negative else PositiveLimit(args.lam)
    spec = KernelSpec(ChannelIndex(args.l, args.nu), energy)
    matrix = bs_matrix(V, spec, bs_grid(V, spec, args.rmax, args.scale))
    if args.entries:
        return [{'i': i, 'j': j, 'r_i': matrix.nodes[i], 'r_j': matrix.nodes[j],
                 'M': complex(matrix.entries[i, j])}
                for i in range(matrix.size) for j in range(matrix.size)]
    sigma = op_norm(matrix, args.tol, seed=args.seed)
    return [{'lam': args.lam, 'negative': args.negative, 'l': args.l,
             'size': matrix.size, 'sigma_max': sigma, 'eigenvalue': sigma >= 1}]


def bs_scan_rows(args: Namespace) -> Rows:
    return bs_scan(_radial_potential(args), args.nu, args.lam, args.l_max,
                   args.rmax, args.scale, args.tol, args.processes,
                   args.seed).rows


def keller_quotient_rows(args: Namespace) -> Rows:
    """
    The quotient of the square well ``-v0 1_[-a, a]`` on the line (``even``)
    or of the ball of radius _a_ in three dimensions (``odd``).
    """
    rows = []
    for v0 in args.v0:
        E = square_well_ground_state(v0, args.a, args.parity)
        if args.parity == 'even':
            nu, volume = 1, 2 * args.a
        else:
            nu, volume = 3, sphere_area(2) * args.a ** 3 / 3
        norm = v0 ** (args.gamma + nu / 2) * volume
        rows.append({'v0': v0, 'a': args.a, 'parity': args.parity,
                     'gamma': args.gamma, 'E': E, 'norm': norm,
                     'quotient': keller_quotient(E, norm, args.gamma)})
    return rows


def decay_slope_rows(args: Namespace) -> Rows:
    V = make_family(args.family, args.nu, min(args.n), args.alpha)
    slope = decay_slope(V, args.p, args.n, args.processes)
    return [{**row, 'exponent': slope.exponent,
             'corrected': slope.corrected, 'expected': slope.expected,
             'rms': slope.rms} for row in slope.rows()]


# ---------------------------------- arguments -------------------------------

def _common_parser() -> ArgumentParser:
    writers = get_subclasses_of('Writer', 'eigenbounds.reports')
    common = ArgumentParser(add_help=False)
    common.add_argument('--output', '-o', default='-',
                        help='the output file; - (the default) is stdout.')
    common.add_argument('--format', '-f', default='csv',
                        choices=sorted(writers.keys()),
                        help='the output format (default: csv).')
    common.add_argument('--seed', type=int, default=0,
                        help='the seed of the random start vectors (default: 0).')
    common.add_argument('--processes', '-P', type=int, default=1,
                        help='number of worker processes to use (max is the '
                             'num of cores, default: 1)')
    common.add_argument('--log-level', '-L', type=str, default='info',
                        choices=['debug', 'info', 'warning', 'error', 'critical'],
                        help='the logging level.')
    return common


def _add_family(parser: ArgumentParser, n_type: Callable = float,
                n_default: Any = 1.0):
    parser.add_argument('--family', default='wvn', choices=['ij', 'wvn'],
                        help='the potential family (default: wvn).')
    parser.add_argument('--nu', type=int, required=True,
                        help='the dimension.')
    parser.add_argument('--n', type=n_type, default=n_default,
                        help='the scale parameter n >= 1.')
    parser.add_argument('--alpha', type=float,
                        help='the exponent of the eigenfunction (default: '
                             'slightly above nu/4).')


def _add_kernel(parser: ArgumentParser, rho: bool = True):
    parser.add_argument('--q', type=float, required=True,
                        help='the exponent of the kernel norm.')
    parser.add_argument('--nu', type=float, default=3.0,
                        help='the dimension that fixes the weight (default: 3).')
    parser.add_argument('--mu', type=partial(float_list, arg='--mu'),
                        required=True,
                        help='comma-separated list of Bessel orders.')
    if rho:
        parser.add_argument('--rho', type=float,
                            help='the weight exponent; by default that of the '
                                 'dimension --nu.')


def _add_radial(parser: ArgumentParser):
    parser.add_argument('--nu', type=int, default=3,
                        help='the dimension of the channels (default: 3).')
    parser.add_argument('--n', type=float, default=1.0,
                        help='the scale of the radial potential.')
    parser.add_argument('--alpha', type=float,
                        help='the exponent of the radial potential.')
    parser.add_argument('--well', type=partial(float_list, arg='--well'),
                        help='use the square well v0,a instead of the radial '
                             'family.')
    parser.add_argument('--coupling', type=float, default=1.0,
                        help='multiplies the potential (default: 1).')
    parser.add_argument('--rmax', type=float, default=60.0,
                        help='the radius the potential is cut off at.')
    parser.add_argument('--scale', type=float, default=1.0,
                        help='the length scale of the potential; bounds the '
                             'panel width.')
    parser.add_argument('--tol', type=float, default=1e-8,
                        help='the tolerance of the power iteration.')


def build_parser() -> ArgumentParser:
    common = _common_parser()
    functionals = get_subclasses_of('Functional', 'eigenbounds.norms.functionals')

    parser = ArgumentParser(prog='eigenbounds', description=__doc__)
    commands = parser.add_subparsers(dest='command', metavar='command',
                                     required=True)

    def leaf(group, name: str, handler: Callable, text: str) -> ArgumentParser:
        sub = group.add_parser(name, parents=[common], help=text,
                               description=text)
        sub.set_defaults(handler=handler)
        return sub

    def actions(name: str, text: str):
        return commands.add_parser(name, help=text).add_subparsers(
            dest='action', metavar='action', required=True)

    sub = leaf(actions('potential', 'potential families'), 'sample',
               potential_sample, 'samples V, psi and the decay envelope.')
    _add_family(sub)
    sub.add_argument('--rmax', type=float, required=True,
                     help='the extent of the grid.')
    sub.add_argument('--h', type=float, required=True, help='the grid step.')
    sub.add_argument('--s-extent', type=float,
                     help='the transverse extent of the IJ family.')

    sub = leaf(actions('verify', 'checks of the constructions'), 'residual',
               verify_residual,
               'finite difference residual of the eigenvalue equation at 2h '
               'and h.')
    _add_family(sub)
    sub.add_argument('--h', type=float, required=True, help='the grid step.')
    sub.add_argument('--box', type=partial(float_list, arg='--box'),
                     help='the grid extents x1_max,s_max (IJ) or r_max,0 (WvN).')
    sub.set_defaults(format='json')

    sub = leaf(actions('norms', 'norm functionals'), 'compute', norms_compute,
               'computes a norm functional of a potential.')
    _add_family(sub)
    sub.add_argument('--functional', required=True,
                     choices=sorted(functionals.keys()),
                     help='the functional to compute.')
    sub.add_argument('--p', type=float, default=2.0,
                     help='the exponent of lp, mixed and dyadic.')
    sub.add_argument('--q', type=float,
                     help='the exponent of weak (default: nu/(nu-1)).')
    sub.add_argument('--inner', default='linf', choices=['l2', 'linf'],
                     help='the inner norm of mixed.')
    sub.add_argument('--method', default='sort', choices=['sort', 'levels'],
                     help='the method of lorentz.')
    sub.add_argument('--eps', type=float, default=0.0,
                     help='the weight exponent of weighted.')
    sub.add_argument('--rmin', type=float, default=1e-3,
                     help='the first radius of the profile grid.')
    sub.add_argument('--rmax', type=float,
                     help='the last radius of the profile grid.')
    sub.add_argument('--points', type=int, default=2000,
                     help='the number of radii in the profile grid.')

    bessel = actions('bessel', 'Bessel functions and their envelopes')
    sub = leaf(bessel, 'eval', bessel_eval,
               'evaluates J, Y, H1, I and K with error bounds.')
    sub.add_argument('--mu', type=partial(float_list, arg='--mu'),
                     required=True, help='comma-separated list of orders.')
    sub.add_argument('--r', type=partial(float_range, arg='--r'), required=True,
                     help='the arguments as start:stop:count (geometric).')
    sub = leaf(bessel, 'certify', bessel_certify,
               'empirical constants of the uniform envelopes.')
    sub.add_argument('--mu', type=partial(float_list, arg='--mu'),
                     required=True, help='comma-separated list of orders.')
    sub.add_argument('--samples', type=int, default=200,
                     help='sample points per region.')
    sub.add_argument('--alpha0', type=float, default=DEFAULT_ALPHA0,
                     help='the parameter of the region partition.')

    kernel = actions('kernel', 'kernel norms of the channel resolvents')
    sub = leaf(kernel, 'qnorm', kernel_qnorm_rows, 'the kernel norm Q.')
    _add_kernel(sub)
    sub.add_argument('--cutoff', type=float, help='the outer grid cutoff.')
    sub = leaf(kernel, 'supmu', kernel_supmu, 'the kernel norm over orders.')
    _add_kernel(sub, rho=False)
    sub.add_argument('--cutoff', type=float, help='the outer grid cutoff.')
    for name, handler, text in (
            ('regions', kernel_regions, 'the integrals over the six regions.'),
            ('doubleregions', kernel_doubleregions,
             'the double integrals below the turning point.')):
        sub = leaf(kernel, name, handler, text)
        _add_kernel(sub)
        sub.add_argument('--alpha0', type=float, default=DEFAULT_ALPHA0,
                         help='the parameter of the region partition.')
    sub = leaf(kernel, 'intop', kernel_intop,
               'the L^p -> L^p\' majorant per channel.')
    sub.add_argument('--nu', type=float, required=True, help='the dimension.')
    sub.add_argument('--p', type=float, required=True,
                     help='the exponent of the domain.')
    sub.add_argument('--l-max', type=int, default=10,
                     help='the largest angular momentum.')
    sub.add_argument('--cutoff', type=float, help='the outer grid cutoff.')

    bs = actions('bs', 'Birman-Schwinger operators')
    sub = leaf(bs, 'matrix', bs_matrix_rows,
               'the norm (or the entries) of one discretized operator.')
    _add_radial(sub)
    sub.add_argument('--lam', type=float, required=True,
                     help='the energy (its modulus with --negative).')
    sub.add_argument('--negative', action='store_true',
                     help='use z = -lam instead of lam + i0.')
    sub.add_argument('--l', type=int, default=0, help='the angular momentum.')
    sub.add_argument('--entries', action='store_true',
                     help='write the matrix entries instead of its norm.')
    sub = leaf(bs, 'scan', bs_scan_rows,
               'the norm over energies and channels.')
    _add_radial(sub)
    sub.add_argument('--lam', type=partial(float_range, arg='--lam'),
                     required=True,
                     help='the energies as start:stop:count (geometric).')
    sub.add_argument('--l-max', type=int, default=10,
                     help='the largest angular momentum.')

    sub = leaf(actions('keller', 'Keller type inequalities'), 'quotient',
               keller_quotient_rows, 'the quotient of the square well.')
    sub.add_argument('--v0', type=partial(float_list, arg='--v0'),
                     required=True, help='comma-separated list of depths.')
    sub.add_argument('--a', type=float, default=1.0,
                     help='the half width (radius) of the well.')
    sub.add_argument('--gamma', type=float, default=0.5,
                     help='the exponent of |E|.')
    sub.add_argument('--parity', default='even', choices=PARITIES,
                     help='even: the well on the line; odd: the '
                          'three dimensional ball.')

    sub = leaf(actions('decay', 'decay of the potential families'), 'slope',
               decay_slope_rows, 'the exponent of ||V_n||_p against n.')
    _add_family(sub, partial(int_list, arg='--n'), [1, 2, 4, 8, 16, 32, 64])
    sub.add_argument('--p', type=float, required=True,
                     help='the exponent of the norm.')
    return parser


def parse_arguments(argv: Sequence[str] = None) -> Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)

    num_procs = len(os.sched_getaffinity(0))
    if args.processes < 1 or args.processes > num_procs:
        parser.error(f'Number of processes must be between 1 and {num_procs}')
    if getattr(args, 'well', None) is not None and len(args.well) != 2:
        parser.error('--well needs exactly two values: v0,a')
    if getattr(args, 'box', None) is not None and len(args.box) != 2:
        parser.error('--box needs exactly two values')
    for name in ('h', 'rmax', 'tol', 'cutoff', 'a'):
        value = getattr(args, name, None)
        if value is not None and not (math.isfinite(value) and value > 0):
            parser.error(f'--{name} must be positive')
    return args


def run_config(args: Namespace) -> Dict[str, Any]:
    """The resolved configuration recorded in the output."""
    return {key: value for key, value in sorted(vars(args).items())
            if key != 'handler'}


def run(argv: Sequence[str] = None) -> int:
    """Runs the command in _argv_ and returns the exit code."""
    try:
        args = parse_arguments(argv)
    except SystemExit as se:
        return se.code if isinstance(se.code, int) else 2

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format='%(asctime)s - %(process)s - %(levelname)s - %(message)s'
    )
    if args.processes > 1:
        install_mp_handler()
    logging.info(f'Script: {__file__}, args: {args}')

    writers = get_subclasses_of('Writer', 'eigenbounds.reports')
    try:
        rows = args.handler(args)
    except EigenboundsError as ee:
        sys.stderr.write(f'eigenbounds {args.command} {args.action}: '
                         f'error: {ee}\n')
        return ee.exit_code
    with open_output(args.output) as outf:
        writers[args.format]().write(rows, run_config(args), outf)
    logging.info('Done.')
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
