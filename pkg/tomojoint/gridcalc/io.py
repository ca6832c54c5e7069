"""
CSV dumps of grid functions with a JSON header describing the axes
"""
import json
import logging

import numpy as np

from tomojoint.gridcalc.errors import GridError
from tomojoint.gridcalc.grid import COMPLEX, Axis, GridFn

logger = logging.getLogger(__name__)

CSV_FORMAT = '%.12e'


def header_path(path):
    return '{}.json'.format(path)


def grid_header(f, **metadata):
    header = {
        'axes': [axis.to_dict() for axis in f.axes],
        'scalar_kind': f.scalar_kind,
        'warnings': list(f.warnings),
    }
    header.update(metadata)
    return header


def grid_rows(f):
    """One row per grid point: the coordinates, then the value (re, im for complex)"""
    mesh = np.meshgrid(*[axis.points for axis in f.axes], indexing='ij')
    columns = [m.ravel() for m in mesh]
    if f.scalar_kind == COMPLEX:
        columns += [np.real(f.values).ravel(), np.imag(f.values).ravel()]
    else:
        columns.append(f.values.ravel())
    return np.column_stack(columns)


def column_names(f):
    names = list(f.names)
    return names + (['re', 'im'] if f.scalar_kind == COMPLEX else ['value'])


def write_grid(f, path, **metadata):
    """
    Write f to `path` as CSV and its header to `path`.json.
    Returns the header dict.
    """
    header = grid_header(f, **metadata)
    np.savetxt(path, grid_rows(f), fmt=CSV_FORMAT, delimiter=',',
               header=','.join(column_names(f)), comments='')
    with open(header_path(path), 'w') as handle:
        json.dump(header, handle, sort_keys=True, indent=2)
        handle.write('\n')
    logger.debug('Wrote %s (%d rows)', path, int(np.prod(f.shape)))
    return header


def read_grid(path):
    """Read a grid function written by write_grid; returns (GridFn, header)"""
    with open(header_path(path)) as handle:
        header = json.load(handle)
    axes = tuple(Axis.from_dict(data) for data in header['axes'])
    rows = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    expected = int(np.prod([axis.count for axis in axes]))
    if rows.shape[0] != expected:
        raise GridError('{} has {} rows, header says {}'.format(path, rows.shape[0], expected))
    if header['scalar_kind'] == COMPLEX:
        values = rows[:, len(axes)] + 1j * rows[:, len(axes) + 1]
    else:
        values = rows[:, len(axes)]
    return GridFn(axes, values, tuple(header.get('warnings', ()))), header
