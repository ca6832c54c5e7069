"""
Oscillator constants, the catalog of test states and Wigner functions
"""
import math
from dataclasses import dataclass

import numpy as np

from tomojoint import settings
from tomojoint.gridcalc.calculus import integrate, interpolate
from tomojoint.states.errors import StateError


@dataclass(frozen=True)
class OscillatorParams(object):
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ('mass', 'omega', 'hbar'):
            value = float(getattr(self, name))
            if not value > 0:
                raise StateError('{} must be positive, got {}'.format(name, value))
            object.__setattr__(self, name, value)

    @property
    def k(self):
        """Inverse length scale sqrt(m omega / hbar)"""
        return math.sqrt(self.mass * self.omega / self.hbar)

    @property
    def ground_variances(self):
        return self.hbar / (2 * self.mass * self.omega), self.hbar * self.mass * self.omega / 2

    def to_dict(self):
        return {'mass': self.mass, 'omega': self.omega, 'hbar': self.hbar}


class StateSpec(object):
    FOCK = 'fock'
    COHERENT = 'coherent'
    GAUSS = 'gauss'
    STATE_KINDS = ((FOCK, 'Fock state'),
                   (COHERENT, 'Coherent state'),
                   (GAUSS, 'Squeezed Gaussian'))

    kind = None

    @property
    def is_gaussian(self):
        return True

    def moments(self, params):
        """(mean q, mean p, var q, var p) of a Gaussian-class state"""
        raise StateError('{} is not a Gaussian state'.format(self))

    def second_moments(self, params):
        """<q^2> and <p^2>"""
        q, p, var_q, var_p = self.moments(params)
        return var_q + q ** 2, var_p + p ** 2

    def expectation(self, name, params):
        """
        Closed-form expectation of one of the catalog observables
        one, q, p, q2, p2, qp, n. qp is the operator product (complex).
        """
        if name == 'one':
            return 1.0
        if name == 'n':
            return self.number_mean(params)
        q, p, var_q, var_p = self.moments(params)
        values = {
            'q': q,
            'p': p,
            'q2': var_q + q ** 2,
            'p2': var_p + p ** 2,
            'qp': complex(q * p, params.hbar / 2),
        }
        try:
            return values[name]
        except KeyError:
            raise StateError('No closed form for <{}>'.format(name))

    def number_mean(self, params):
        q2, p2 = self.second_moments(params)
        return 0.5 * (params.mass * params.omega * q2 / params.hbar
                      + p2 / (params.hbar * params.mass * params.omega) - 1.0)

    def energy(self, params):
        """<H> for the harmonic potential m omega^2 q^2 / 2"""
        q2, p2 = self.second_moments(params)
        return p2 / (2 * params.mass) + params.mass * params.omega ** 2 * q2 / 2

    def position_spread(self, params):
        q, _, var_q, _ = self.moments(params)
        return q, math.sqrt(var_q)


@dataclass(frozen=True)
class Fock(StateSpec):
    n: int = 0

    kind = StateSpec.FOCK

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise StateError('Fock number must be a non-negative integer, got {}'.format(self.n))
        if self.n > settings.MAX_FOCK_N:
            raise StateError('Fock n={} exceeds the cap of {}'.format(self.n, settings.MAX_FOCK_N))
        object.__setattr__(self, 'n', int(self.n))

    @property
    def is_gaussian(self):
        return self.n == 0

    def moments(self, params):
        if self.n == 0:
            var_q, var_p = params.ground_variances
            return 0.0, 0.0, var_q, var_p
        return super(Fock, self).moments(params)

    def second_moments(self, params):
        var_q, var_p = params.ground_variances
        return var_q * (2 * self.n + 1), var_p * (2 * self.n + 1)

    def expectation(self, name, params):
        values = {'q': 0.0, 'p': 0.0, 'qp': complex(0.0, params.hbar / 2)}
        if name in values:
            return values[name]
        if name in ('q2', 'p2'):
            return dict(zip(('q2', 'p2'), self.second_moments(params)))[name]
        return super(Fock, self).expectation(name, params)

    def number_mean(self, params):
        return float(self.n)

    def position_spread(self, params):
        return 0.0, math.sqrt(self.second_moments(params)[0])

    def __str__(self):
        return 'fock:n={}'.format(self.n)


@dataclass(frozen=True)
class Coherent(StateSpec):
    alpha: complex = 0j

    kind = StateSpec.COHERENT

    def __post_init__(self):
        object.__setattr__(self, 'alpha', complex(self.alpha))

    def mean(self, params):
        q = math.sqrt(2 * params.hbar / (params.mass * params.omega)) * self.alpha.real
        p = math.sqrt(2 * params.hbar * params.mass * params.omega) * self.alpha.imag
        return q, p

    def moments(self, params):
        var_q, var_p = params.ground_variances
        return self.mean(params) + (var_q, var_p)

    def number_mean(self, params):
        return abs(self.alpha) ** 2

    def at_time(self, t, params):
        """Harmonic evolution alpha(t) = alpha exp(-i omega t)"""
        return Coherent(self.alpha * np.exp(-1j * params.omega * t))

    def __str__(self):
        return 'coherent:re={},im={}'.format(self.alpha.real, self.alpha.imag)


@dataclass(frozen=True)
class SqueezedGaussian(StateSpec):
    q: float = 0.0
    p: float = 0.0
    s: float = 1.0

    kind = StateSpec.GAUSS

    def __post_init__(self):
        if not self.s > 0:
            raise StateError('Squeezing s must be positive, got {}'.format(self.s))
        for name in ('q', 'p', 's'):
            object.__setattr__(self, name, float(getattr(self, name)))

    def moments(self, params):
        var_q, var_p = params.ground_variances
        return self.q, self.p, self.s * var_q, var_p / self.s

    def __str__(self):
        return 'gauss:q={},p={},s={}'.format(self.q, self.p, self.s)


@dataclass(frozen=True, eq=False)
class WignerFn(object):
    """
    A real Wigner function tabulated on (q, p)
    """
    grid: object
    params: OscillatorParams

    @property
    def q_axis(self):
        return self.grid.axis('q')

    @property
    def p_axis(self):
        return self.grid.axis('p')

    def normalization(self):
        return integrate(self.grid)

    def moment(self, k, l):
        """Phase-space moment of q^k p^l against W"""
        weight = self.grid.coordinates('q') ** k * self.grid.coordinates('p') ** l
        return integrate(self.grid * weight)

    def marginal(self, variable):
        """Position ('q') or momentum ('p') distribution"""
        other = 'p' if variable == 'q' else 'q'
        return integrate(self.grid, [other])

    def value(self, q, p):
        return interpolate(self.grid, {'q': q, 'p': p})
