"""
Run configuration

Values come from the command line, then from a JSON file given with
--config, then from tomojoint.settings. The effective configuration is
written into the header of every output.
"""
import dataclasses
import json
import logging
from dataclasses import dataclass, field

from tomojoint import settings
from tomojoint.cli.errors import UsageError
from tomojoint.dynamics.errors import DynamicsError
from tomojoint.dynamics.evolution import PATH_CHOICES, PRINTED
from tomojoint.dynamics.potentials import PolynomialPotential
from tomojoint.gridcalc.errors import GridError
from tomojoint.gridcalc.grid import Axis
from tomojoint.jointdist.errors import PriorError
from tomojoint.jointdist.utils import parse_prior
from tomojoint.states.errors import StateError
from tomojoint.states.models import OscillatorParams
from tomojoint.states.utils import parse_state
from tomojoint.tomography.models import OPTICAL, PARAMETER_NAMES, REPRESENTATION_CHOICES, SYMPLECTIC

logger = logging.getLogger(__name__)

ANALYTIC = 'analytic'
RADON = 'radon'
METHOD_CHOICES = (
    (ANALYTIC, 'Closed-form tomogram'),
    (RADON, 'Radon transform of the analytic Wigner function'),
)

DEFAULT_AXES = {
    'X': settings.X_AXIS,
    'mu': settings.MU_AXIS,
    'nu': settings.NU_AXIS,
    'theta': settings.THETA_AXIS,
    'q': settings.Q_AXIS,
    'p': settings.P_AXIS,
}

DEFAULT_PRIORS = {
    SYMPLECTIC: 'p1-default',
    OPTICAL: 'p2-default',
}


def _axis_name(name):
    name = name.strip()
    return 'X' if name.lower() == 'x' else name.lower()


def parse_grid_override(text):
    """
    'x:-8,8,161' -> ('X', (-8.0, 8.0, 161))
    """
    name, sep, body = text.partition(':')
    name = _axis_name(name)
    if not sep or name not in DEFAULT_AXES:
        raise UsageError("Grid override '{}' must look like <axis>:min,max,n with axis one of {}".format(
            text, ', '.join(DEFAULT_AXES)))
    try:
        lower, upper, count = body.split(',')
        spec = (float(lower), float(upper), int(count))
    except ValueError:
        raise UsageError("Cannot read min,max,n from '{}'".format(text))
    return name, spec


def parse_tolerance(text):
    """'stationary-fock0=0.05' -> ('stationary-fock0', 0.05)"""
    name, sep, value = text.partition('=')
    try:
        if not sep or not name.strip():
            raise ValueError
        return name.strip(), float(value)
    except ValueError:
        raise UsageError("Tolerance override '{}' must look like <check>=<value>".format(text))


@dataclass
class RunConfig(object):
    command: str = None
    state: str = None
    prior: str = None
    representation: str = SYMPLECTIC
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    grid: dict = field(default_factory=dict)
    # coefficients c0, c1, ... of V(q); harmonic when unset
    potential: tuple = None
    out: str = '.'
    op: str = None
    symbol: str = 'regular'
    check: str = None
    energy: float = None
    time: float = 0.0
    printed_form: bool = False
    single_peak: bool = False
    path: str = PRINTED
    method: str = ANALYTIC
    dt: float = None
    steps: int = None
    snapshot_every: int = 1
    seed: int = settings.DEFAULT_SEED
    json_output: bool = False
    plot: bool = False
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.representation not in PARAMETER_NAMES:
            raise UsageError("Unknown representation '{}' (choose from {})".format(
                self.representation, ', '.join(key for key, _ in REPRESENTATION_CHOICES)))
        if self.method not in dict(METHOD_CHOICES):
            raise UsageError("Unknown tomogram method '{}' (choose from {})".format(
                self.method, ', '.join(key for key, _ in METHOD_CHOICES)))
        if self.path not in dict(PATH_CHOICES):
            raise UsageError("Unknown construction path '{}' (choose from {})".format(
                self.path, ', '.join(key for key, _ in PATH_CHOICES)))
        grid = {}
        for name, spec in (self.grid or {}).items():
            key = _axis_name(name)
            if key not in DEFAULT_AXES:
                raise UsageError("Unknown grid axis '{}'".format(name))
            grid[key] = tuple(spec)
        self.grid = grid
        if isinstance(self.potential, str):
            self.potential = self.potential.split(',')
        if self.potential is not None:
            try:
                self.potential = tuple(float(c) for c in self.potential)
            except (TypeError, ValueError):
                raise UsageError("Cannot read potential coefficients from '{}'".format(self.potential))
        self.tolerances = dict(self.tolerances or {})

    @classmethod
    def field_names(cls):
        return [f.name for f in dataclasses.fields(cls)]

    def to_dict(self):
        data = dataclasses.asdict(self)
        data['grid'] = {name: list(spec) for name, spec in sorted(self.grid.items())}
        if self.potential is not None:
            data['potential'] = list(self.potential)
        return data

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(cls.field_names())
        if unknown:
            raise UsageError('Unknown configuration keys {}'.format(sorted(unknown)))
        return cls(**data)

    @classmethod
    def load(cls, path):
        try:
            with open(path) as handle:
                data = json.load(handle)
        except (OSError, ValueError) as e:
            raise UsageError('Cannot read configuration {}: {}'.format(path, e))
        if not isinstance(data, dict):
            raise UsageError('Configuration {} must hold a JSON object'.format(path))
        return cls.from_dict(data)

    def dump(self, path):
        with open(path, 'w') as handle:
            json.dump(self.to_dict(), handle, sort_keys=True, indent=2)
            handle.write('\n')

    @classmethod
    def from_args(cls, args):
        """
        Overlay the flags that were given on the --config file (if any) and
        the defaults. argparse defaults are None so unset flags fall through.
        """
        base = cls.load(args.config) if getattr(args, 'config', None) else cls()
        data = base.to_dict()
        for name in cls.field_names():
            value = getattr(args, name, None)
            if value is None or name in ('grid', 'tolerances'):
                continue
            data[name] = value
        for text in getattr(args, 'grid', None) or ():
            name, spec = parse_grid_override(text)
            data['grid'][name] = list(spec)
        for text in getattr(args, 'tolerances', None) or ():
            name, value = parse_tolerance(text)
            data['tolerances'][name] = value
        config = cls.from_dict(data)
        logger.debug('Effective configuration %s', config.to_dict())
        return config

    def axis(self, name, default=None):
        """The axis `name` from the overrides, else `default`, else settings"""
        try:
            return Axis.from_tuple(name, self.grid.get(name, default or DEFAULT_AXES[name]))
        except GridError as e:
            raise UsageError(e.message)

    @property
    def X_axis(self):
        return self.axis('X')

    @property
    def parameter_axes(self):
        return tuple(self.axis(name) for name in PARAMETER_NAMES[self.representation])

    def params(self):
        try:
            return OscillatorParams(self.mass, self.omega, self.hbar)
        except StateError as e:
            raise UsageError(e.message)

    def state_spec(self):
        if not self.state:
            raise UsageError('Missing state spec (use --state, e.g. fock:n=0)')
        try:
            return parse_state(self.state)
        except StateError as e:
            raise UsageError(e.message)

    def prior_spec(self):
        """The configured prior, or the default prior of the representation"""
        try:
            prior = parse_prior(self.prior or DEFAULT_PRIORS[self.representation])
        except PriorError as e:
            raise UsageError(e.message)
        if prior.representation != self.representation:
            raise UsageError('Prior {} is for {} joints, not {}'.format(
                prior, prior.representation, self.representation))
        return prior

    def potential_spec(self):
        """The configured polynomial potential, harmonic by default"""
        try:
            if self.potential is None:
                return PolynomialPotential.harmonic(self.params())
            return PolynomialPotential(self.potential)
        except DynamicsError as e:
            raise UsageError(e.message)

    def tolerance(self, name, default):
        return self.tolerances.get(name, default)
