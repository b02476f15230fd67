GATE = 1e-8  # "condition holds" verdicts
INTERNAL = 1e-12  # internal consistency (validators, dual paths)
EIGEN = 1e-12  # Jacobi convergence
CLUSTER = 1e-8  # equal-eigenvalue clustering
FRAME = 1e-10  # orthonormal / totally real frame checks
DEPENDENCE = 1e-8  # Gram-Schmidt linear dependence rejection
MAX_SWEEPS = 100
DUAL_PATH = 1e-10  # disagreement that is reported as a consistency failure

NAMES = ('gate', 'internal', 'eigen', 'cluster', 'frame')


class Tolerances:
    """Immutable set of tolerances shared by every "approximately zero" test

    Args:
        gate (float): condition gates (flags of verdicts)
        internal (float): internal consistency checks
        eigen (float): Jacobi eigensolver convergence
        cluster (float): equal-eigenvalue clustering
        frame (float): orthonormality and total reality of frames
    """

    __slots__ = NAMES

    def __init__(self, gate=GATE, internal=INTERNAL, eigen=EIGEN,
                 cluster=CLUSTER, frame=FRAME):
        for name, value in zip(NAMES, (gate, internal, eigen, cluster, frame)):
            value = float(value)
            if not value > 0:
                raise ValueError(f'Tolerance {name} must be positive: {value}')
            object.__setattr__(self, name, value)

    def __setattr__(self, key, value):
        raise AttributeError(f'Tolerances are immutable: {key}')

    def update(self, **overrides):
        """New Tolerances with some values replaced, None values are ignored"""
        unknown = set(overrides) - set(NAMES)
        if unknown:
            raise KeyError(f'Unknown tolerances: {sorted(unknown)}')
        kwargs = self.to_dict()
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return Tolerances(**kwargs)

    def to_dict(self):
        return {x: getattr(self, x) for x in NAMES}

    def __eq__(self, other):
        return isinstance(other, Tolerances) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(tuple(self.to_dict().items()))

    def __repr__(self):
        items = ', '.join(f'{k}={v!r}' for k, v in self.to_dict().items())
        return f'Tolerances({items})'


DEFAULT = Tolerances()
