from dataclasses import dataclass

from tomojoint.jointdist.priors import UniformPrior
from tomojoint.opalg.errors import OperatorError
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

WIGNER = 'wigner'


@dataclass(frozen=True, eq=False)
class Representation(object):
    """
    Which distribution an operator acts on. Joint kinds carry the prior the
    tomographic rules are conjugated with.
    """
    SYMPLECTIC_TOMOGRAM = 'symplectic-tomogram'
    SYMPLECTIC_JOINT = 'symplectic-joint'
    OPTICAL_TOMOGRAM = 'optical-tomogram'
    OPTICAL_JOINT = 'optical-joint'
    WIGNER = 'wigner'
    KIND_CHOICES = (
        (SYMPLECTIC_TOMOGRAM, 'Symplectic tomogram M(X, mu, nu)'),
        (SYMPLECTIC_JOINT, 'Symplectic joint distribution M~(X, mu, nu)'),
        (OPTICAL_TOMOGRAM, 'Optical tomogram w(X, theta)'),
        (OPTICAL_JOINT, 'Optical joint distribution w~(X, theta)'),
        (WIGNER, 'Wigner function W(q, p)'),
    )
    FAMILIES = {
        SYMPLECTIC_TOMOGRAM: SYMPLECTIC,
        SYMPLECTIC_JOINT: SYMPLECTIC,
        OPTICAL_TOMOGRAM: OPTICAL,
        OPTICAL_JOINT: OPTICAL,
        WIGNER: WIGNER,
    }
    AXES = {
        SYMPLECTIC: ('X', 'mu', 'nu'),
        OPTICAL: ('X', 'theta'),
        WIGNER: ('q', 'p'),
    }

    kind: str
    params: object
    prior: object = None

    def __post_init__(self):
        if self.kind not in self.FAMILIES:
            raise OperatorError("Unknown representation '{}' (choose from {})".format(
                self.kind, ', '.join(kind for kind, _ in self.KIND_CHOICES)))
        if self.is_joint:
            if self.prior is None:
                raise OperatorError('{} needs a prior'.format(self.kind))
            if self.prior.representation != self.family:
                raise OperatorError('A {} prior cannot define a {} representation'.format(
                    self.prior.representation, self.kind))
        elif self.prior is not None:
            raise OperatorError('{} takes no prior'.format(self.kind))

    @classmethod
    def joint(cls, family, params, prior):
        kind = cls.SYMPLECTIC_JOINT if family == SYMPLECTIC else cls.OPTICAL_JOINT
        return cls(kind, params, prior)

    @classmethod
    def tomographic_kind(cls, family):
        if family == SYMPLECTIC:
            return cls.SYMPLECTIC_TOMOGRAM
        if family == OPTICAL:
            return cls.OPTICAL_TOMOGRAM
        raise OperatorError("No tomographic representation for '{}'".format(family))

    @classmethod
    def for_distribution(cls, distribution):
        """The representation a Tomogram or JointDistribution lives in"""
        prior = getattr(distribution, 'prior', None)
        if prior is None:
            return cls(cls.tomographic_kind(distribution.representation), distribution.params)
        return cls.joint(distribution.representation, distribution.params, prior)

    @property
    def family(self):
        return self.FAMILIES[self.kind]

    @property
    def is_joint(self):
        return self.kind in (self.SYMPLECTIC_JOINT, self.OPTICAL_JOINT)

    @property
    def axes(self):
        return self.AXES[self.family]

    @property
    def parameter_variables(self):
        return self.axes[1:] if self.family != WIGNER else ()

    def tomographic(self):
        """The same representation with the prior dropped"""
        return Representation(self.tomographic_kind(self.family), self.params)

    def uniform(self):
        """Joint representation under a constant prior"""
        return Representation.joint(self.family, self.params, UniformPrior(self.family))

    def __str__(self):
        if self.is_joint:
            return '{}({})'.format(self.kind, self.prior)
        return self.kind
