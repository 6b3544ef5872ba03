"""Exhaustive sensor-allocation search for the three-subarray geometry.

For a total sensor budget N, the search sweeps the subarray-1 size N1,
fills N2/N3 with the closed-form tail allocation, and scores each split
with the hole-free consecutive-lag count.  The DOF surface in N1 is
cubic-like with multiple local extrema, hence the exhaustive sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .geometry import FognaParams

__all__ = [
    "TraceRow",
    "OptimizerResult",
    "tail_allocation",
    "optimize",
    "dof_quadratic",
    "dof_bound_ratio",
]


@dataclass(frozen=True)
class TraceRow:
    n1: int
    n2: int
    n3: int
    m1: int
    m2: int
    e1: int
    e2: int
    dof: int


@dataclass(frozen=True)
class OptimizerResult:
    best_params: FognaParams
    dof_star: int
    trace: Tuple[TraceRow, ...]


def tail_allocation(n: int, n1: int) -> Tuple[int, int]:
    """Allocate the remaining n - n1 sensors to subarrays 2 and 3.

    N2 = ceil((2(n-n1)-1)/4), N3 = floor((2(n-n1)+1)/4).  N3 lands within
    one of the real maximizer of the per-N1 DOF quadratic; see
    dof_quadratic for the exact objective.
    """
    rest = n - n1
    n2 = math.ceil((2 * rest - 1) / 4)
    n3 = (2 * rest + 1) // 4
    return n2, n3


def optimize(n: int) -> OptimizerResult:
    """Search N1 = 2..N-2 for the split maximizing the consecutive-lag count.

    Returns the argmax split (ties broken by the smallest N1, keeping the
    dense subarray minimal) together with the full scored trace.
    """
    if n < 4:
        raise ValueError(f"need at least 4 sensors (N1>=2, N2>=1, N3>=1), got {n}")
    best: FognaParams | None = None
    rows: List[TraceRow] = []
    for n1 in range(2, n - 1):
        n2, n3 = tail_allocation(n, n1)
        if n2 < 1 or n3 < 1:
            continue
        params = FognaParams.from_split(n1, n2, n3)
        rows.append(TraceRow(n1, n2, n3, params.m1, params.m2, params.e1, params.e2, params.dof))
        if best is None or params.dof > best.dof:
            best = params
    assert best is not None
    return OptimizerResult(best, best.dof, tuple(rows))


def dof_quadratic(n: int, n1: int, n3: int) -> int:
    """DOF as the quadratic in N3 at fixed N1 (with N2 = n - n1 - n3 implied).

    f(N3) = 2[-2*N3^2*(2E1+1) + (4E1 + 2(n-n1)(2E1+1) - (2E1+1))*N3
            + 2E1 + (n-n1)(2E1+1)] + 1
    """
    e1 = FognaParams.from_split(n1, 1, 1).e1
    a = 2 * e1 + 1
    rest = n - n1
    return 2 * (-2 * n3 * n3 * a + (4 * e1 + 2 * rest * a - a) * n3 + 2 * e1 + rest * a) + 1


def dof_bound_ratio(n: int) -> Fraction:
    """Ratio of the optimized DOF to the N^4/2 upper bound (N multiple of 4).

    The bound holds for every feasible design; the ratio is returned
    exactly as a Fraction in (0, 1].
    """
    if n % 4 != 0 or n < 8:
        raise ValueError(f"bound is stated for N >= 8 with N % 4 == 0, got {n}")
    return Fraction(optimize(n).dof_star, n**4 // 2)
