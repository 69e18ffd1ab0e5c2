"""Limiting rescaled densities of the two cyclic transposition shuffles.

All four densities are views of one kernel

    D(u, v) = e^(u-1) + e^(-v) - [v < u] e^(u-v-1)

read in (param, var) order: f_card and h_pos give D(param, var) while
f_pos and h_card give D(var, param).
Every density has a jump of size e^(-1) where its variable meets its parameter.
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd
from django.core.exceptions import ValidationError

JUMP = math.exp(-1.0)


class DensityKind(str, Enum):
    F_CARD = 'f_card'
    F_POS = 'f_pos'
    H_CARD = 'h_card'
    H_POS = 'h_pos'

    @classmethod
    def parse(cls, value) -> 'DensityKind':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ', '.join(kind.value for kind in cls)
            raise ValidationError(f"Unknown density {value!r}; expected one of {choices}")

    @property
    def parameter_first(self) -> bool:
        """True when the density is D(param, var), False when it is D(var, param)"""
        return self in (DensityKind.F_CARD, DensityKind.H_POS)


class Side(str, Enum):
    LEFT = 'left'
    RIGHT = 'right'
    AUTO = 'auto'

    @classmethod
    def parse(cls, value) -> 'Side':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"Unknown side {value!r}; expected left, right or auto")


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class DensityQuery:
    """One density at one point; ``side`` picks the one-sided limit when ``var == param``"""
    which: DensityKind
    param: float
    var: float
    side: Side = Side.AUTO

    def __post_init__(self):
        object.__setattr__(self, 'which', DensityKind.parse(self.which))
        object.__setattr__(self, 'side', Side.parse(self.side))
        object.__setattr__(self, 'param', _check_unit('param', self.param))
        object.__setattr__(self, 'var', _check_unit('var', self.var))
        if self.var == self.param and self.side is Side.AUTO:
            raise ValidationError("The density jumps at var == param; choose side left or right")


def kernel(u, v, corrected):
    """D(u, v) with the jump correction switched on where ``corrected`` holds"""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return np.exp(u - 1.0) + np.exp(-v) - np.where(corrected, np.exp(u - v - 1.0), 0.0)


def corrected_on(which: DensityKind, side: Side) -> bool:
    """Whether the branch on the given side of the jump carries the correction term"""
    below = side is Side.LEFT
    return below if which.parameter_first else not below


def density_values(which, param: float, var, side=Side.AUTO) -> np.ndarray:
    """Vectorized density over ``var``; points equal to ``param`` take the ``side`` limit"""
    which, side = DensityKind.parse(which), Side.parse(side)
    param = _check_unit('param', param)
    var = np.asarray(var, dtype=float)
    if np.any((var < 0.0) | (var > 1.0)):
        raise ValidationError("var must lie in [0, 1]")
    at_jump = var == param
    if side is Side.AUTO and np.any(at_jump):
        raise ValidationError("The density jumps at var == param; choose side left or right")

    if which.parameter_first:
        corrected = var < param
        u, v = param, var
    else:
        corrected = var > param
        u, v = var, param
    if side is not Side.AUTO:
        corrected = np.where(at_jump, corrected_on(which, side), corrected)
    return kernel(u, v, corrected)


def branch(which, param: float, side):
    """The smooth branch of the density on one side of the jump, as a scalar function"""
    which, side = DensityKind.parse(which), Side.parse(side)
    corrected = corrected_on(which, side)
    if which.parameter_first:
        return lambda t: float(kernel(param, t, corrected))
    return lambda t: float(kernel(t, param, corrected))


def limit_density(q: DensityQuery) -> float:
    return float(density_values(q.which, q.param, q.var, q.side))


def density_grid(which, param: float, grid: int) -> pd.DataFrame:
    """Columns ``t, density`` on ``grid + 1`` equally spaced points of [0, 1].

    A grid point that falls exactly on the jump shows the right-hand limit.
    """
    if grid < 1:
        raise ValidationError(f"Grid needs at least one interval, got {grid}")
    t = np.linspace(0.0, 1.0, grid + 1)
    return pd.DataFrame({'t': t, 'density': density_values(which, param, t, Side.RIGHT)})
