"""Demonstration containers."""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import EmptyDemoSet


class DemoPoint(NamedTuple):
    y: np.ndarray
    q: np.ndarray
    f: float
    t: float


@dataclass(frozen=True)
class DemoTrajectory:
    """Timestamped positions, orientations and normal forces.

    Attributes
    ----------
    t : array, shape (n,)
        Seconds.
    y : array, shape (n, 3)
        Meters.
    q : array, shape (n, 4)
        Unit quaternions, scalar first.
    f : array, shape (n,)
        Normal force in newtons.
    """
    t: np.ndarray
    y: np.ndarray
    q: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        n = len(self.t)
        if self.y.shape != (n, 3) or self.q.shape != (n, 4) or self.f.shape != (n,):
            raise ValueError("inconsistent trajectory field shapes")

    def __len__(self):
        return len(self.t)

    def __getitem__(self, k):
        return DemoPoint(self.y[k], self.q[k], float(self.f[k]), float(self.t[k]))

    @classmethod
    def from_arrays(cls, t, y, q, f):
        return cls(t=np.asarray(t, dtype=float), y=np.asarray(y, dtype=float),
                   q=np.asarray(q, dtype=float), f=np.asarray(f, dtype=float))


def concat(demos):
    """Pool several demos into one point set (timestamps are concatenated as-is)."""
    demos = list(demos)
    if not demos:
        raise EmptyDemoSet("no demonstrations given")
    return DemoTrajectory(t=np.concatenate([d.t for d in demos]),
                          y=np.concatenate([d.y for d in demos]),
                          q=np.concatenate([d.q for d in demos]),
                          f=np.concatenate([d.f for d in demos]))
