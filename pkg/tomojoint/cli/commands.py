"""
Command implementations. Each takes a RunConfig, writes its files under
config.out and returns a JSON-serializable record.
"""
import dataclasses
import json
import logging
import os

import numpy as np

from tomojoint.cli import plots
from tomojoint.cli.config import RADON
from tomojoint.cli.errors import UsageError
from tomojoint.dynamics.evolution import evolution_residual
from tomojoint.dynamics.models import CHECK_CHOICES, CONDITION, EVOLUTION, STATIONARY
from tomojoint.dynamics.potentials import PolynomialPotential
from tomojoint.dynamics.stationary import (
    stationarity_condition_optical,
    stationarity_condition_symplectic,
    stationary_residual_optical,
    stationary_residual_symplectic,
)
from tomojoint.dynamics.stepper import evolve
from tomojoint.dynamics.trajectory import coherent_joint_trajectory, coherent_time_derivative
from tomojoint.gridcalc.calculus import integrate, restrict
from tomojoint.gridcalc.io import write_grid
from tomojoint.jointdist.joint import make_joint, recover_conditional
from tomojoint.states.errors import StateError
from tomojoint.states.models import Coherent
from tomojoint.states.wigner import state_wigner
from tomojoint.symbols.pairing import pair
from tomojoint.symbols.utils import build_symbol, parse_symbol_kind
from tomojoint.tomography.analytic import state_tomogram
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC
from tomojoint.tomography.radon import optical_tomogram, symplectic_tomogram
from tomojoint.tomography.reconstruct import reconstruct_symplectic

logger = logging.getLogger(__name__)

# Axes the reconstruct command uses unless --grid overrides them: slices at
# |mu| ~ 4 are several units wide, so X has to reach well past the q range
RECONSTRUCTION_AXES = {
    'X': (-14.0, 14.0, 141),
    'mu': (-4.4, 4.4, 45),
    'nu': (-4.4, 4.4, 45),
    'q': (-6.0, 6.0, 121),
    'p': (-6.0, 6.0, 121),
}


def output_path(config, *parts):
    directory = os.path.join(config.out, *parts[:-1])
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise UsageError('Cannot create output directory {}: {}'.format(directory, e))
    return os.path.join(directory, parts[-1])


def write_json(record, path):
    try:
        with open(path, 'w') as handle:
            json.dump(record, handle, sort_keys=True, indent=2)
            handle.write('\n')
    except OSError as e:
        raise UsageError('Cannot write {}: {}'.format(path, e))
    return path


def _write_grid(f, path, **metadata):
    """write_grid, returning the CSV path"""
    try:
        write_grid(f, path, **metadata)
    except OSError as e:
        raise UsageError('Cannot write {}: {}'.format(path, e))
    return path


def complex_record(value):
    value = complex(value)
    return {'re': value.real, 'im': value.imag}


def build_tomogram(config, state, params):
    """Closed form, or the Radon transform of the state's Wigner function"""
    X_axis = config.X_axis
    parameter_axes = config.parameter_axes
    if config.method != RADON:
        return state_tomogram(state, config.representation, params, X_axis, parameter_axes)
    wigner = state_wigner(state, params, config.axis('q'), config.axis('p'))
    if config.representation == SYMPLECTIC:
        return symplectic_tomogram(wigner, X_axis, *parameter_axes)
    return optical_tomogram(wigner, X_axis, *parameter_axes)


def build_joint(config, state=None, params=None):
    state = state or config.state_spec()
    params = params or config.params()
    return make_joint(build_tomogram(config, state, params), config.prior_spec())


def slice_norm_summary(tomogram):
    norms = tomogram.slice_norms().values
    return {
        'min': float(np.min(norms)),
        'max': float(np.max(norms)),
        'max_deviation': float(np.max(np.abs(norms - 1.0))),
    }


def position_slice_peak(tomogram):
    """
    Where the slice measuring q peaks: (mu, nu) = (1, 0) or theta = 0.
    None when that slice is off the grid.
    """
    grid = tomogram.grid
    point = {'mu': 1.0, 'nu': 0.0} if tomogram.representation == SYMPLECTIC else {'theta': 0.0}
    for name, value in point.items():
        if not grid.axis(name).contains(value):
            return None
        grid = restrict(grid, name, value)
    return dict(point, X=float(tomogram.X_axis.points[int(np.argmax(grid.values))]))


def cmd_tomogram(config):
    state = config.state_spec()
    params = config.params()
    prior = config.prior_spec()
    tomogram = build_tomogram(config, state, params)
    joint = make_joint(tomogram, prior)
    norms = slice_norm_summary(tomogram)
    base_header = {'config': config.to_dict(), 'state': str(state)}
    files = [
        _write_grid(tomogram.grid, output_path(config, 'tomogram.csv'), slice_norms=norms, **dict(
            base_header, **tomogram.header())),
        _write_grid(joint.grid, output_path(config, 'joint.csv'), total=joint.total(), **dict(
            base_header, **joint.header())),
    ]
    if config.plot:
        files.append(plots.plot_slices(tomogram, output_path(config, 'tomogram.svg')))
        files.append(plots.plot_slices(joint, output_path(config, 'joint.svg'), label='joint distribution'))
    logger.info('Wrote %s tomogram of %s', config.representation, state)
    return {
        'command': 'tomogram',
        'state': str(state),
        'representation': config.representation,
        'method': config.method,
        'slice_norms': norms,
        'joint_total': joint.total(),
        'position_slice_peak': position_slice_peak(tomogram),
        'flags': list(tomogram.flags),
        'files': files,
        'config': config.to_dict(),
    }


def cmd_expect(config):
    if not config.op:
        raise UsageError('Missing operator (use --op, e.g. q, p2, qp or n)')
    state = config.state_spec()
    params = config.params()
    kind, orders = parse_symbol_kind(config.symbol)
    joint = build_joint(config, state, params)
    symbol = build_symbol(kind, config.op, config.representation, joint.prior, params, orders)
    value = pair(symbol, joint)
    try:
        oracle = state.expectation(config.op, params) if orders is None else None
    except StateError:
        oracle = None
    record = {
        'command': 'expect',
        'op': config.op,
        'symbol': config.symbol,
        'state': str(state),
        'representation': config.representation,
        'value': complex_record(value),
        'oracle': None if oracle is None else complex_record(oracle),
        'deviation': None if oracle is None else abs(value - oracle),
        'config': config.to_dict(),
    }
    record['files'] = [write_json(record, output_path(config, 'expect.json'))]
    return record


def _is_harmonic(potential, params):
    return potential == PolynomialPotential.harmonic(params)


def residual_report(config):
    """The ResidualReport of the configured check"""
    checks = dict(CHECK_CHOICES)
    if config.check not in checks:
        raise UsageError("Missing or unknown check '{}' (use --check with one of {})".format(
            config.check, ', '.join(checks)))
    state = config.state_spec()
    params = config.params()
    prior = config.prior_spec()
    potential = config.potential_spec()
    representation = config.representation
    if config.printed_form and (config.check != STATIONARY or representation != SYMPLECTIC):
        raise UsageError('--printed-form applies to the symplectic stationary check only')
    if config.single_peak and (config.check != STATIONARY or representation != OPTICAL):
        raise UsageError('--single-peak applies to the optical stationary check only')

    if config.check == EVOLUTION:
        if isinstance(state, Coherent) and _is_harmonic(potential, params):
            axes = (representation, prior, params, config.X_axis, config.parameter_axes)
            joint = coherent_joint_trajectory(state.alpha, config.time, *axes)
            oracle = coherent_time_derivative(state.alpha, config.time, *axes)
            report = evolution_residual(joint, prior, potential, oracle=oracle, path=config.path,
                                        state=state.at_time(config.time, params))
            return dataclasses.replace(report, metadata=dict(report.metadata, time=config.time))
        # no analytic trajectory: test whether the state is stationary
        return evolution_residual(build_joint(config, state, params), prior, potential, path=config.path,
                                  state=state)

    joint = build_joint(config, state, params)
    if config.check == CONDITION:
        if representation == SYMPLECTIC:
            return stationarity_condition_symplectic(joint, prior, potential, state=state)
        return stationarity_condition_optical(joint, prior, potential, state=state)

    energy = state.energy(params) if config.energy is None else config.energy
    if representation == SYMPLECTIC:
        report = stationary_residual_symplectic(joint, prior, potential, energy, printed_form=config.printed_form,
                                                state=state)
    else:
        report = stationary_residual_optical(joint, prior, potential, energy, single_peak=config.single_peak,
                                             state=state)
    source = 'mean energy of the state' if config.energy is None else 'config'
    return dataclasses.replace(report, metadata=dict(report.metadata, energy_source=source))


def cmd_residual(config):
    report = residual_report(config)
    record = dict(report.to_dict(), command='residual', check=config.check, config=config.to_dict())
    record['files'] = [write_json(record, output_path(config, 'residual.json'))]
    return record


def cmd_evolve(config):
    if config.dt is None or config.steps is None:
        raise UsageError('evolve needs --dt and --steps')
    every = int(config.snapshot_every)
    if every < 1:
        raise UsageError('--snapshot-every must be at least 1, got {}'.format(config.snapshot_every))
    state = config.state_spec()
    prior = config.prior_spec()
    potential = config.potential_spec()
    joint = build_joint(config, state)
    initial = joint.total()
    frames = []
    final = None
    for step, time, current in evolve(joint, prior, potential, config.dt, config.steps, path=config.path):
        final = current
        if step % every and step != config.steps:
            continue
        name = 'frame_{:05d}.csv'.format(step)
        total = current.total()
        _write_grid(current.grid, output_path(config, 'frames', name), step=step, time=time, total=total,
                    **current.header())
        frames.append({'step': step, 'time': time, 'total': total, 'file': os.path.join('frames', name)})
        logger.debug('Frame %d at t=%g', step, time)
    drift = abs(final.total() - initial)
    index = {
        'state': str(state),
        'potential': str(potential),
        'frames': frames,
        'mass_drift': drift,
        'config': config.to_dict(),
    }
    write_json(index, output_path(config, 'frames.json'))
    return dict(index, command='evolve', final_time=frames[-1]['time'],
                files=[output_path(config, 'frames.json')] + [os.path.join(config.out, f['file']) for f in frames])


def _central(values):
    rows, columns = values.shape
    return values[rows // 4:rows - rows // 4, columns // 4:columns - columns // 4]


def cmd_reconstruct(config):
    """
    Wigner function -> symplectic tomogram by the Radon transform -> joint ->
    prior divided back out -> inverse map, compared with the starting Wigner
    function on the central half of the (q, p) grid
    """
    if config.representation != SYMPLECTIC:
        raise UsageError('Reconstruction runs from symplectic joints only')
    state = config.state_spec()
    params = config.params()
    axes = {name: config.axis(name, default) for name, default in RECONSTRUCTION_AXES.items()}
    wigner = state_wigner(state, params, axes['q'], axes['p'])
    tomogram = symplectic_tomogram(wigner, axes['X'], axes['mu'], axes['nu'])
    joint = make_joint(tomogram, config.prior_spec())
    result = reconstruct_symplectic(recover_conditional(joint), axes['q'], axes['p'])
    error = float(np.max(np.abs(_central(result.wigner.grid.values) - _central(wigner.grid.values))))
    record = {
        'command': 'reconstruct',
        'state': str(state),
        'raw_normalization': result.raw_normalization,
        'normalization_drift': result.drift,
        'imaginary_residue': result.imaginary_residue,
        'central_max_error': error,
        'reconstructed_total': float(integrate(result.wigner.grid)),
        'axes': {name: axis.to_dict() for name, axis in sorted(axes.items())},
        'config': config.to_dict(),
    }
    header = {key: value for key, value in record.items() if key != 'command'}
    files = [_write_grid(result.wigner.grid, output_path(config, 'wigner.csv'), **header)]
    record['files'] = files
    logger.info('Reconstructed %s: central error %.3e, raw normalization %.6f', state, error,
                result.raw_normalization)
    return record


COMMANDS = {
    'tomogram': cmd_tomogram,
    'expect': cmd_expect,
    'residual': cmd_residual,
    'evolve': cmd_evolve,
    'reconstruct': cmd_reconstruct,
}
