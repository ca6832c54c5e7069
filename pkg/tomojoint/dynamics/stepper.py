"""
Explicit classic Runge-Kutta stepping of the evolution equation
"""
import dataclasses
import logging
import math

import numpy as np

from tomojoint import settings
from tomojoint.dynamics.errors import BlowUp, DynamicsError
from tomojoint.dynamics.evolution import PRINTED, evolution_rhs
from tomojoint.gridcalc.calculus import integrate

logger = logging.getLogger(__name__)

# Largest dt * rho for which the scheme is stable on the imaginary axis (2 sqrt 2, rounded down)
RK4_STABILITY_LIMIT = 2.8

# Iteration cap and settling tolerance of the stability probe
PROBE_ITERATIONS = 300
PROBE_TOLERANCE = 1e-3

# Growth of the largest value over the initial one that counts as a blow-up
BLOWUP_FACTOR = 1e3


def _right_hand_side(distribution, prior, potential, path):
    grid = distribution.grid

    def rhs(values):
        state = dataclasses.replace(distribution, grid=grid.with_values(values))
        return evolution_rhs(state, prior, potential, path).values
    return rhs


def stability_probe(distribution, prior, potential, path=PRINTED, iterations=None, seed=None):
    """
    Spectral radius estimate of the right-hand side operator.

    Power iteration from a seeded random vector, two applications per
    iteration so that conjugate eigenvalue pairs do not make the estimate
    oscillate. Stops once the estimate changes by less than PROBE_TOLERANCE
    or after `iterations` (default PROBE_ITERATIONS) rounds.
    """
    rhs = _right_hand_side(distribution, prior, potential, path)
    random = np.random.RandomState(settings.DEFAULT_SEED if seed is None else seed)
    vector = random.standard_normal(distribution.grid.shape)
    vector /= np.linalg.norm(vector)
    rate = 0.0
    for iteration in range(1, (iterations or PROBE_ITERATIONS) + 1):
        image = rhs(rhs(vector))
        norm = float(np.linalg.norm(image))
        if norm == 0 or not math.isfinite(norm):
            break
        previous, rate = rate, math.sqrt(norm)
        vector = image / norm
        if previous and abs(rate - previous) <= PROBE_TOLERANCE * rate:
            break
    logger.debug('Stability probe: spectral radius about %.4g after %d iterations, dt <= %.4g', rate, iteration,
                 RK4_STABILITY_LIMIT / rate if rate else math.inf)
    return rate


def stable_time_step(distribution, prior, potential, path=PRINTED):
    rate = stability_probe(distribution, prior, potential, path)
    return RK4_STABILITY_LIMIT / rate if rate else math.inf


def _check_schedule(dt, steps, params):
    if not dt > 0:
        raise DynamicsError('Time step must be positive, got {}'.format(dt))
    if int(steps) != steps or steps < 1:
        raise DynamicsError('Step count must be a positive integer, got {}'.format(steps))
    if dt * steps > 2 * math.pi / params.omega + 1e-12:
        raise DynamicsError('{} steps of {} run past one period 2 pi / omega'.format(steps, dt))


def evolve(distribution, prior, potential, dt, steps, path=PRINTED, probe=True):
    """
    Yield (step, time, distribution) after every step, starting from step 0.

    Raises BlowUp as soon as a value stops being finite or grows past
    BLOWUP_FACTOR times the initial maximum.
    """
    _check_schedule(dt, steps, distribution.params)
    if probe:
        bound = stable_time_step(distribution, prior, potential, path)
        if dt > bound:
            raise DynamicsError('Time step {} exceeds the stability bound {:.4g}'.format(dt, bound))
    rhs = _right_hand_side(distribution, prior, potential, path)
    grid = distribution.grid
    y = np.array(grid.values, dtype=float)
    ceiling = BLOWUP_FACTOR * max(float(np.max(np.abs(y))), settings.RESIDUAL_EPS)
    yield 0, 0.0, distribution
    for step in range(1, int(steps) + 1):
        k1 = rhs(y)
        k2 = rhs(y + dt / 2 * k1)
        k3 = rhs(y + dt / 2 * k2)
        k4 = rhs(y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        time = step * dt
        if not np.all(np.isfinite(y)):
            raise BlowUp('Non-finite values after step {} (t={:g})'.format(step, time), step, time)
        if np.max(np.abs(y)) > ceiling:
            raise BlowUp('Values grew past {:.3g} after step {} (t={:g})'.format(ceiling, step, time), step, time)
        yield step, time, dataclasses.replace(distribution, grid=grid.with_values(y.copy()))


def step_evolution(distribution, prior, potential, dt, steps, path=PRINTED, probe=True):
    """
    Integrate `steps` steps of size dt and return the final distribution.
    The drift of the total mass is logged, and flagged on the result when it
    exceeds JOINT_NORM_TOL.
    """
    initial = integrate(distribution.grid)
    for step, time, current in evolve(distribution, prior, potential, dt, steps, path, probe):
        if step % 10 == 0:
            logger.debug('step %d, t=%g', step, time)
    drift = abs(integrate(current.grid) - initial)
    logger.info('Evolved %d steps to t=%g, total mass drift %.3e', steps, steps * dt, drift)
    if drift > settings.JOINT_NORM_TOL:
        message = 'total mass drifted by {:.3e} over {} steps'.format(drift, steps)
        logger.warning(message)
        current = dataclasses.replace(current, flags=tuple(current.flags) + (message,))
    return current
