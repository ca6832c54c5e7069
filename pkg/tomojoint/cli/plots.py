"""
SVG heatmaps of tomogram and joint-distribution slices
"""
import logging

from tomojoint.cli.errors import UsageError
from tomojoint.gridcalc.calculus import restrict
from tomojoint.tomography.models import SYMPLECTIC

logger = logging.getLogger(__name__)

SVG_HASH_SALT = 'tomojoint'


def _pyplot():
    try:
        import matplotlib
    except ImportError:
        raise UsageError('Plots need matplotlib; install it or drop --plot')
    matplotlib.use('Agg')
    matplotlib.rcParams['svg.hashsalt'] = SVG_HASH_SALT
    import matplotlib.pyplot as plt
    return plt


def heatmap(values, x_axis, y_axis, path, title):
    """values[i, j] over (x_axis[i], y_axis[j]), written as SVG"""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 5))
    image = ax.imshow(values.T, origin='lower', aspect='auto', cmap='viridis',
                      extent=(x_axis.min, x_axis.max, y_axis.min, y_axis.max))
    ax.set_xlabel(x_axis.name)
    ax.set_ylabel(y_axis.name)
    ax.set_title(title)
    fig.colorbar(image, ax=ax)
    fig.tight_layout()
    # no creation date, so reruns only differ where the data does
    fig.savefig(path, format='svg', metadata={'Date': None})
    plt.close(fig)
    logger.debug('Wrote %s', path)
    return path


def plot_slices(distribution, path, nu=0.0, label='tomogram'):
    """
    X against theta for optical distributions, X against mu at fixed nu for
    symplectic ones.
    """
    grid = distribution.grid
    if distribution.representation == SYMPLECTIC:
        grid = restrict(grid, 'nu', nu)
        title = '{} {} at nu = {:g}'.format(distribution.representation, label, nu)
    else:
        title = '{} {}'.format(distribution.representation, label)
    X_axis, parameter_axis = grid.axes
    return heatmap(grid.values, X_axis, parameter_axis, path, title)
