"""Integrals, expectations and extrema of the limiting densities."""
import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np
from django.core.exceptions import ValidationError
from scipy import integrate, optimize

from .densities import JUMP, DensityKind, Side, branch, density_values

logger = logging.getLogger(__name__)

QUAD_OPTIONS = {'epsabs': 1e-12, 'epsrel': 1e-12, 'limit': 200}
SCAN_POINTS = 10001
TV_GRID = 1001

LOG_2 = math.log(2.0)


class ExpectationKind(str, Enum):
    E_POS_CARD = 'E_pos_card'
    E_CARD_CARD = 'E_card_card'
    E_POS_POS = 'E_pos_pos'
    E_CARD_POS = 'E_card_pos'

    @classmethod
    def parse(cls, value) -> 'ExpectationKind':
        if isinstance(value, cls):
            return value
        for kind in cls:
            if kind.value.lower() == str(value).lower():
                return kind
        choices = ', '.join(kind.value for kind in cls)
        raise ValidationError(f"Unknown expectation {value!r}; expected one of {choices}")

    @property
    def density(self) -> DensityKind:
        """Density whose first moment this expectation is"""
        return {
            ExpectationKind.E_POS_CARD: DensityKind.F_CARD,
            ExpectationKind.E_CARD_CARD: DensityKind.H_CARD,
            ExpectationKind.E_POS_POS: DensityKind.F_POS,
            ExpectationKind.E_CARD_POS: DensityKind.H_POS,
        }[self]


def _check_unit(value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"Parameter must lie in [0, 1], got {value}")
    return value


def _integrate(function, param: float, which: DensityKind) -> float:
    """Integrate ``function(t, density(t))`` over [0, 1], one smooth branch on each side of ``param``"""
    pieces = []
    if param > 0.0:
        left = branch(which, param, Side.LEFT)
        pieces.append(integrate.quad(lambda t: function(t, left(t)), 0.0, param, **QUAD_OPTIONS)[0])
    if param < 1.0:
        right = branch(which, param, Side.RIGHT)
        pieces.append(integrate.quad(lambda t: function(t, right(t)), param, 1.0, **QUAD_OPTIONS)[0])
    return math.fsum(pieces)


def density_integral(which, param: float) -> float:
    """Total mass of the density; 1 up to quadrature error"""
    which, param = DensityKind.parse(which), _check_unit(param)
    return _integrate(lambda t, value: value, param, which)


def expected_position(which, s: float) -> float:
    which, s = ExpectationKind.parse(which), _check_unit(s)
    if which in (ExpectationKind.E_POS_CARD, ExpectationKind.E_CARD_POS):
        return 1.0 - 0.5 * math.exp(s - 1.0) - (1.0 - s) * JUMP
    return 0.5 * math.exp(-s) + s * JUMP


def expected_position_quadrature(which, s: float) -> float:
    """The same expectation as the first moment of the density, by quadrature"""
    which, s = ExpectationKind.parse(which), _check_unit(s)
    return _integrate(lambda t, value: t * value, s, which.density)


@dataclass(frozen=True)
class ExpectationExtrema:
    argmax: float
    max_value: float
    argmin: float
    min_value: float


def expectation_extrema(which) -> ExpectationExtrema:
    """Extrema of an expectation curve over [0, 1]: bounded search plus both endpoints"""
    which = ExpectationKind.parse(which)

    def curve(s):
        return expected_position(which, min(max(s, 0.0), 1.0))

    options = {'xatol': 1e-12}
    peak = optimize.minimize_scalar(lambda s: -curve(s), bounds=(0.0, 1.0), method='bounded', options=options)
    trough = optimize.minimize_scalar(curve, bounds=(0.0, 1.0), method='bounded', options=options)

    candidates = [0.0, 1.0, float(peak.x), float(trough.x)]
    argmax = max(candidates, key=curve)
    argmin = min(candidates, key=curve)
    return ExpectationExtrema(argmax, curve(argmax), argmin, curve(argmin))


@dataclass(frozen=True)
class ExtremaReport:
    """Supremum and infimum of one density over its variable.

    ``jump_inf`` is the smaller one-sided limit at the discontinuity; it is
    the infimum whenever ``inf_location`` names the discontinuity and lies
    above an endpoint minimum otherwise.
    """
    sup_value: float
    sup_approach: str
    inf_value: float
    inf_location: str
    jump_inf: float
    scanned_sup: float
    scanned_inf: float

    def to_dict(self) -> Dict:
        return asdict(self)


def scan_extrema(which, param: float, points: int = SCAN_POINTS) -> Tuple[float, float]:
    """Max and min over a uniform grid of the variable plus both one-sided limits at the jump"""
    grid = np.linspace(0.0, 1.0, points)
    grid = grid[grid != param]
    values = np.concatenate([
        density_values(which, param, grid),
        density_values(which, param, [param], Side.LEFT),
        density_values(which, param, [param], Side.RIGHT),
    ])
    return float(values.max()), float(values.min())


def density_extrema(which, param: float) -> ExtremaReport:
    which, s = DensityKind.parse(which), _check_unit(param)
    sup_value = math.exp(s - 1.0) + math.exp(-s)
    jump_inf = sup_value - JUMP
    if which.parameter_first:
        # D(s, var): sup from the right; the endpoint candidate sits at var = 1
        sup_approach = 'var -> param from the right'
        jump_side, endpoint, endpoint_value = 'left', 'var = 1', math.exp(s - 1.0) + JUMP
        jump_wins = s >= 1.0 - LOG_2
    else:
        # D(var, s): sup from the left; the endpoint candidate sits at var = 0
        sup_approach = 'var -> param from the left'
        jump_side, endpoint, endpoint_value = 'right', 'var = 0', JUMP + math.exp(-s)
        jump_wins = s <= LOG_2

    if jump_wins:
        inf_value, inf_location = jump_inf, f'approach discontinuity from the {jump_side}'
    else:
        inf_value, inf_location = endpoint_value, endpoint
    scanned_sup, scanned_inf = scan_extrema(which, s)
    return ExtremaReport(sup_value, sup_approach, inf_value, inf_location, jump_inf, scanned_sup, scanned_inf)


@dataclass(frozen=True)
class GlobalExtrema:
    max_sup: float
    min_jump_inf: float
    min_inf: float


def global_density_extrema(points: int = TV_GRID) -> GlobalExtrema:
    """Extremes of ``density_extrema`` over a uniform parameter grid and all four densities"""
    reports: List[ExtremaReport] = [
        density_extrema(which, float(s)) for which in DensityKind for s in np.linspace(0.0, 1.0, points)
    ]
    return GlobalExtrema(
        max_sup=max(report.sup_value for report in reports),
        min_jump_inf=min(report.jump_inf for report in reports),
        min_inf=min(report.inf_value for report in reports),
    )


def tv_distance(param: float, which=DensityKind.F_CARD) -> float:
    """Half the L1 distance between the density and the uniform density on [0, 1]"""
    which, param = DensityKind.parse(which), _check_unit(param)
    cuts = {0.0, param, 1.0}
    # the smooth branches cross 1 only where e^(-t) = 1 - e^(s-1) (or its mirror)
    level = 1.0 - math.exp(param - 1.0)
    if level > 0.0:
        crossing = -math.log(level)
        if 0.0 < crossing < 1.0:
            cuts.add(crossing)
    level = 1.0 - math.exp(-param)
    if level > 0.0:
        crossing = 1.0 + math.log(level)
        if 0.0 < crossing < 1.0:
            cuts.add(crossing)

    edges = sorted(cuts)
    pieces = []
    for low, high in zip(edges, edges[1:]):
        side = Side.LEFT if high <= param else Side.RIGHT
        smooth = branch(which, param, side)
        pieces.append(integrate.quad(lambda t: abs(smooth(t) - 1.0), low, high, **QUAD_OPTIONS)[0])
    return 0.5 * math.fsum(pieces)


def tv_lower_bound(which=DensityKind.F_CARD, grid: int = TV_GRID) -> Tuple[float, float]:
    """Maximize ``tv_distance`` over the parameter: coarse grid, then golden-section refinement.

    Returns ``(value, argmax_param)``.
    """
    which = DensityKind.parse(which)
    if grid < 3:
        raise ValidationError(f"The parameter grid needs at least 3 points, got {grid}")
    params = np.linspace(0.0, 1.0, grid)
    values = np.array([tv_distance(float(b), which) for b in params])
    best = int(np.argmax(values))
    low, high = params[max(best - 1, 0)], params[min(best + 1, grid - 1)]

    def objective(b):
        return -tv_distance(min(max(b, 0.0), 1.0), which)

    refined = None
    if 0 < best < grid - 1:
        try:
            refined = optimize.minimize_scalar(objective, bracket=(low, params[best], high), method='golden')
        except ValueError:
            # no strict three-point bracket
            refined = None
    if refined is None:
        refined = optimize.minimize_scalar(objective, bounds=(low, high), method='bounded')
    candidates = [(float(values[best]), float(params[best]))]
    refined_b = min(max(float(refined.x), 0.0), 1.0)
    candidates.append((tv_distance(refined_b, which), refined_b))
    value, argmax = max(candidates)
    logger.info("TV lower bound for %s: %.6f at %.6f", which.value, value, argmax)
    return value, argmax
