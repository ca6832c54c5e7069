"""
Analytic harmonic-oscillator trajectories used as time-derivative oracles
"""
import logging

from tomojoint.dynamics.errors import DynamicsError
from tomojoint.jointdist.joint import make_joint
from tomojoint.states.models import Coherent
from tomojoint.tomography.analytic import tomogram_analytic

logger = logging.getLogger(__name__)

# Half step of the centered time difference
TIME_DELTA = 1e-4


def coherent_joint_trajectory(alpha0, t, representation, prior, params, X_axis, parameter_axes):
    """
    Joint distribution of the coherent state alpha0 exp(-i omega t) under
    V = m omega^2 q^2 / 2. Without a prior the bare tomogram is returned.
    """
    state = Coherent(alpha0).at_time(t, params)
    tomogram = tomogram_analytic(state, representation, params, X_axis, parameter_axes)
    if prior is None:
        return tomogram
    return make_joint(tomogram, prior)


def coherent_time_derivative(alpha0, t, representation, prior, params, X_axis, parameter_axes, delta=None):
    """(M~(t + delta) - M~(t - delta)) / 2 delta as a GridFn"""
    delta = TIME_DELTA if delta is None else delta
    if not delta > 0:
        raise DynamicsError('Time difference step must be positive, got {}'.format(delta))
    later, earlier = (coherent_joint_trajectory(alpha0, t + sign * delta, representation, prior, params,
                                                X_axis, parameter_axes) for sign in (1, -1))
    logger.debug('Finite difference oracle for coherent:%s at t=%g', alpha0, t)
    return (later.grid - earlier.grid) * (0.5 / delta)
