"""
Residual reports for evolution and stationary-state equations
"""
from dataclasses import dataclass, field

import numpy as np

from tomojoint import settings

EVOLUTION = 'evolution'
STATIONARY = 'stationary'
CONDITION = 'condition'
CHECK_CHOICES = (
    (EVOLUTION, 'Evolution right-hand side against a time-derivative oracle'),
    (STATIONARY, 'Stationary-state equation with a trial energy'),
    (CONDITION, 'Stationarity condition'),
)


@dataclass(frozen=True)
class ResidualReport(object):
    """
    `relative` is ||LHS - RHS|| / max(||LHS||, ||RHS||, eps) over the interior
    mask. `scaled` measures the same difference against hbar omega ||M~||
    where an energy sets the scale, and equals `relative` otherwise.
    """
    equation: str
    state: str
    relative: float
    max_abs: float
    scaled: float = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scaled is None:
            object.__setattr__(self, 'scaled', self.relative)

    def to_dict(self):
        return {
            'equation': self.equation,
            'state': self.state,
            'relative': self.relative,
            'scaled': self.scaled,
            'max_abs': self.max_abs,
            'metadata': self.metadata,
        }


def interior_mask(grid, margin=None, radius=None):
    """
    Drop `margin` of every axis at both ends and, on (mu, nu) grids, the
    disc sqrt(mu^2 + nu^2) < radius where slices are narrower than X cells.
    """
    margin = settings.INTERIOR_MARGIN if margin is None else margin
    radius = settings.ORIGIN_EXCLUSION_RADIUS if radius is None else radius
    mask = np.ones(grid.shape, dtype=bool)
    for index, axis in enumerate(grid.axes):
        cut = int(np.floor(margin * axis.count))
        if cut:
            edges = np.zeros(axis.count, dtype=bool)
            edges[:cut] = edges[-cut:] = True
            shape = [1] * grid.ndim
            shape[index] = axis.count
            mask &= ~edges.reshape(shape)
    if radius and grid.has_axis('mu') and grid.has_axis('nu'):
        mu = grid.coordinates('mu')
        nu = grid.coordinates('nu')
        mask &= np.broadcast_to(np.sqrt(mu ** 2 + nu ** 2) >= radius, grid.shape)
    return mask


def masked_norm(values, mask):
    values = getattr(values, 'values', values)
    return float(np.sqrt(np.sum(np.abs(np.asarray(values)[mask]) ** 2)))


def relative_residual(lhs, rhs, mask):
    difference = masked_norm(lhs.values - rhs.values, mask)
    return difference / max(masked_norm(lhs, mask), masked_norm(rhs, mask), settings.RESIDUAL_EPS)


def condition_residual(first, second, mask):
    """||A + B|| / max(||A||, ||B||, eps) for an equation A + B = 0"""
    total = masked_norm(first.values + second.values, mask)
    return total / max(masked_norm(first, mask), masked_norm(second, mask), settings.RESIDUAL_EPS)


def grid_metadata(grid):
    return {'axes': [axis.to_dict() for axis in grid.axes]}
