"""Exact and simulated odds that random stick pieces form a polygon."""

from .closed_form import (
    binomial,
    broken_brick_prob,
    broken_stick_prob,
    convergence_gap,
    pickup_bricks_prob,
    pickup_sticks_prob,
)
from .errors import BudgetExceeded, InvalidInventory, InvalidParams, NotPolygonal, PolygonOddsError
from .montecarlo import SimConfig, SimEstimate, confidence_interval, simulate_brick_lambda, simulate_stick_lambda
from .oracle import (
    ExactCount,
    Partition,
    broken_brick_oracle,
    count_bad_set,
    enumerate_compositions,
    pickup_bricks_oracle,
    stick_lambda_brick_oracle,
)
from .polygon import (
    DiagonalInterval,
    PolygonRealization,
    construct_polygon,
    diagonal_interval,
    is_polygonal,
    max_violator,
)

__version__ = "0.1.0"
