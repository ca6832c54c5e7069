import argparse
import json
import logging
import sys

from tomojoint import settings
from tomojoint.cli.commands import COMMANDS
from tomojoint.cli.config import METHOD_CHOICES, RunConfig
from tomojoint.cli.errors import UsageError
from tomojoint.cli.verify import cmd_verify
from tomojoint.dynamics.evolution import PATH_CHOICES
from tomojoint.dynamics.models import CHECK_CHOICES
from tomojoint.errors import NumericFailure, TomojointError
from tomojoint.tomography.models import REPRESENTATION_CHOICES

logger = logging.getLogger('tomojoint')

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

EPILOG = """exit codes:
  0  success
  1  verify ran and at least one check failed
  2  usage error: bad flag, spec string, configuration or output path
  3  numeric failure: prior underflow, NaN or blow-up during evolution
"""


class Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; route that through UsageError too"""

    def error(self, message):
        raise UsageError(message)


def common_flags():
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('global options')
    group.add_argument('--config', help='JSON configuration; flags given here override it')
    group.add_argument('--out', help='Output directory (default: current directory)')
    group.add_argument('--hbar', type=float, help='Planck constant (default 1)')
    group.add_argument('--mass', type=float, help='Oscillator mass (default 1)')
    group.add_argument('--omega', type=float, help='Oscillator frequency (default 1)')
    group.add_argument('--grid', action='append', metavar='AXIS:MIN,MAX,N',
                       help='Grid override for X, mu, nu, theta, q or p; repeatable')
    group.add_argument('--tol', action='append', dest='tolerances', metavar='CHECK=VALUE',
                       help='Tolerance override for a verify check; repeatable')
    group.add_argument('--json', action='store_true', dest='json_output', default=None,
                       help='Print the machine-readable record only')
    group.add_argument('--seed', type=int, help='Seed for the random test functions of verify')
    group.add_argument('--plot', action='store_true', default=None, help='Also write SVG heatmaps')
    group.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    return common


def physics_flags(parser):
    parser.add_argument('--state', help='fock:n=0, coherent:re=1,im=0 or gauss:q=0,p=0,s=1')
    parser.add_argument('--rep', dest='representation', choices=[key for key, _ in REPRESENTATION_CHOICES])
    parser.add_argument('--prior', help='p1-default, p2-default, p1:mu0=0,nu0=0,xi=1,zeta=1 '
                                        'or p2:[{"q":1,"f":1.57,"phi":1}]')
    parser.add_argument('--potential', help='Coefficients c0,c1,c2,... of V(q) (default harmonic)')


def build_parser():
    parser = Parser(prog='tomojoint', description='Tomographic joint distributions of the quantum oscillator',
                    epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers()
    common = [common_flags()]

    tomogram = subparsers.add_parser('tomogram', parents=common, help='Tabulate a tomogram and its joint distribution')
    physics_flags(tomogram)
    tomogram.add_argument('--method', choices=[key for key, _ in METHOD_CHOICES])
    tomogram.set_defaults(func=COMMANDS['tomogram'], command='tomogram')

    expect = subparsers.add_parser('expect', parents=common, help='Average an observable with a dual symbol')
    physics_flags(expect)
    expect.add_argument('--op', help='one, q, p, q2, p2, qp, pq or n')
    expect.add_argument('--symbol', help='regular, singular, alt or monomial:k,l')
    expect.add_argument('--method', choices=[key for key, _ in METHOD_CHOICES])
    expect.set_defaults(func=COMMANDS['expect'], command='expect')

    residual = subparsers.add_parser('residual', parents=common,
                                     help='Residual of an evolution or stationary equation')
    physics_flags(residual)
    residual.add_argument('--check', choices=[key for key, _ in CHECK_CHOICES])
    residual.add_argument('--energy', type=float, help='Energy of the stationary equation (default: <H> of the state)')
    residual.add_argument('--time', type=float, help='Time along the coherent trajectory (evolution check)')
    residual.add_argument('--printed-form', action='store_true', default=None,
                          help='Also evaluate the closed-form symplectic kinetic operator')
    residual.add_argument('--single-peak', action='store_true', default=None,
                          help='Use the single-peak optical stationary operator')
    residual.add_argument('--path', choices=[key for key, _ in PATH_CHOICES])
    residual.add_argument('--method', choices=[key for key, _ in METHOD_CHOICES])
    residual.set_defaults(func=COMMANDS['residual'], command='residual')

    evolve = subparsers.add_parser('evolve', parents=common, help='Step the evolution equation and write frames')
    physics_flags(evolve)
    evolve.add_argument('--dt', type=float)
    evolve.add_argument('--steps', type=int)
    evolve.add_argument('--snapshot-every', type=int, metavar='K', help='Write every K-th frame (default 1)')
    evolve.add_argument('--path', choices=[key for key, _ in PATH_CHOICES])
    evolve.add_argument('--method', choices=[key for key, _ in METHOD_CHOICES])
    evolve.set_defaults(func=COMMANDS['evolve'], command='evolve')

    reconstruct = subparsers.add_parser('reconstruct', parents=common,
                                        help='Wigner function back from a symplectic joint distribution')
    physics_flags(reconstruct)
    reconstruct.set_defaults(func=COMMANDS['reconstruct'], command='reconstruct')

    verify = subparsers.add_parser('verify', parents=common, help='Run the acceptance suite')
    verify.add_argument('--energy', type=float, help='Energy used for the Fock(0) stationary check')
    verify.set_defaults(func=cmd_verify, command='verify')
    return parser


def configure_logging(verbose):
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def emit(record, json_output):
    table = record.pop('table', None)
    if table is not None and not json_output:
        print(table)
    else:
        print(json.dumps(record, sort_keys=True, indent=2))


def run(argv=None):
    """
    Parse `argv`, run the command and return the exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write('tomojoint: error: {}\n'.format(e.message))
        return EXIT_USAGE
    configure_logging(getattr(args, 'verbose', False))

    # Python 3 lost the default behaviour to fall back to printing
    # help if a subparser is not selected.
    # See: https://bugs.python.org/issue16308
    func = getattr(args, 'func', None)
    if func is None:
        parser.print_help()
        return EXIT_OK

    try:
        config = RunConfig.from_args(args)
        record = func(config)
    except NumericFailure as e:
        logger.error('Numeric failure: %s', e.message)
        return EXIT_NUMERIC
    except TomojointError as e:
        logger.error(e.message)
        return EXIT_USAGE
    emit(record, config.json_output)
    if record.get('passed') is False:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
