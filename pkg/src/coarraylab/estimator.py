"""Fourth-order cumulant estimation and co-array MUSIC.

The pipeline: sample the three conjugation-case cumulant tensors from
snapshots, average all entries sharing a virtual lag (across quadruples
and cases, with equal weights; the BPSK source model makes the three
case cumulants identical so cross-case pooling is unbiased), then run
spatial-smoothing MUSIC on the resulting single-snapshot virtual-ULA
measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .coarray import analyze_segment, case_virtual_positions, foeca
from .geometry import SensorArray
from .signalsim import SnapshotMatrix

__all__ = [
    "CumulantBank",
    "FoecaMeasurement",
    "DoaEstimate",
    "sample_cumulants",
    "assemble_foeca",
    "ss_music",
    "match_nearest",
    "rmse",
]


@dataclass
class CumulantBank:
    """Sample fourth-order cumulant tensors, one N^4 tensor per case.

    Case 3 is the elementwise conjugate of case 1 (its conjugation
    pattern conjugates every case-1 argument), which holds exactly at
    the sample level and is exploited rather than recomputed.
    """

    case1: np.ndarray
    case2: np.ndarray
    case3: np.ndarray
    n_snapshots: int

    @property
    def n_sensors(self) -> int:
        return self.case1.shape[0]

    def case(self, j: int) -> np.ndarray:
        return {1: self.case1, 2: self.case2, 3: self.case3}[j]


def sample_cumulants(snapshots) -> CumulantBank:
    """Estimate the three case cumulant tensors from an N x K snapshot block.

    Each entry is the empirical fourth moment minus the three
    pairwise-product second-moment terms, with the conjugations placed
    so the derived steering phase of entry (l1,l2,l3,l4) matches the
    case's virtual position:

        case 1: cum(x1, x2, x3, x4*)   ->  p1 + p2 + p3 - p4
        case 2: cum(x1, x2*, x3, x4*)  ->  p1 - p2 + p3 - p4
        case 3: cum(x1*, x2*, x3*, x4) -> -p1 - p2 - p3 + p4

    Moments use the biased 1/K normalization.
    """
    x = snapshots.data if isinstance(snapshots, SnapshotMatrix) else np.asarray(snapshots)
    if x.ndim != 2:
        raise ValueError("snapshots must form an N x K matrix")
    n, k = x.shape
    if k < 2:
        raise ValueError(f"need at least 2 snapshots, got {k}")
    xc = x.conj()
    ra = (x @ x.T) / k          # E[x_a x_b]
    rb = (x @ xc.T) / k         # E[x_a conj(x_b)]
    u = (x[:, None, :] * x[None, :, :]).reshape(n * n, k)    # x_a x_b per snapshot
    v = (x[:, None, :] * xc[None, :, :]).reshape(n * n, k)   # x_a conj(x_b)
    m1 = (u @ v.T / k).reshape(n, n, n, n)                   # E[x1 x2 x3 x4*]
    m2 = (v @ v.T / k).reshape(n, n, n, n)                   # E[x1 x2* x3 x4*]
    c1 = (
        m1
        - ra[:, :, None, None] * rb[None, None, :, :]
        - ra[:, None, :, None] * rb[None, :, None, :]
        - rb[:, None, None, :] * ra[None, :, :, None]
    )
    c2 = (
        m2
        - rb[:, :, None, None] * rb[None, None, :, :]
        - ra[:, None, :, None] * ra.conj()[None, :, None, :]
        - rb[:, None, None, :] * rb.T[None, :, :, None]
    )
    return CumulantBank(c1, c2, c1.conj(), k)


@dataclass
class FoecaMeasurement:
    """Redundancy-averaged cumulant value per lag of the central segment.

    ``values[i]`` is the averaged measurement at lag ``lags[i]``, with
    ``counts[i]`` contributing (case, quadruple) entries.  Conjugate
    symmetry value(-m) = conj(value(m)) is enforced by symmetrization.
    """

    lags: np.ndarray
    values: np.ndarray
    counts: np.ndarray

    @property
    def lc(self) -> int:
        return int(self.lags[-1])

    def value_at(self, lag: int) -> complex:
        return complex(self.values[lag + self.lc])


def assemble_foeca(bank: CumulantBank, array: SensorArray, lc: Optional[int] = None) -> FoecaMeasurement:
    """Average all cumulant entries sharing a virtual lag over [-Lc, Lc].

    Lc defaults to the measured hole-free half-length of the array's
    extended co-array.  A zero-contributor lag inside that segment would
    contradict the segment analysis and raises.
    """
    if bank.n_sensors != array.n_sensors:
        raise ValueError("cumulant bank and array sensor counts differ")
    if lc is None:
        lc = analyze_segment(foeca(array)).lc
    width = 2 * lc + 1
    sums = np.zeros(width, dtype=complex)
    counts = np.zeros(width, dtype=np.int64)
    for case in (1, 2, 3):
        lags = case_virtual_positions(array, case)
        vals = bank.case(case).ravel()
        sel = np.abs(lags) <= lc
        idx = (lags[sel] + lc).astype(np.intp)
        np.add.at(sums, idx, vals[sel])
        np.add.at(counts, idx, 1)
    if np.any(counts == 0):
        missing = np.flatnonzero(counts == 0) - lc
        raise AssertionError(
            f"lags {missing.tolist()} have no contributors inside the claimed "
            "consecutive segment; co-array bookkeeping is inconsistent"
        )
    values = sums / counts
    values = 0.5 * (values + values[::-1].conj())
    return FoecaMeasurement(np.arange(-lc, lc + 1), values, counts)


@dataclass
class DoaEstimate:
    """Estimated angles plus the pseudo-spectrum they were picked from."""

    angles_deg: np.ndarray
    grid_deg: np.ndarray
    spectrum: np.ndarray
    rank_ok: bool = True


def _pick_peaks(grid: np.ndarray, spec: np.ndarray, n_sources: int, min_sep_cells: int) -> List[float]:
    inner = np.flatnonzero((spec[1:-1] > spec[:-2]) & (spec[1:-1] >= spec[2:])) + 1
    order = inner[np.argsort(spec[inner])[::-1]]
    chosen: List[int] = []
    for i in order:
        if all(abs(i - j) >= min_sep_cells for j in chosen):
            chosen.append(i)
        if len(chosen) == n_sources:
            break
    step = grid[1] - grid[0]
    refined = []
    for i in chosen:
        # three-point parabolic refinement on the log spectrum
        l0, l1, l2 = np.log(spec[i - 1]), np.log(spec[i]), np.log(spec[i + 1])
        denom = l0 - 2 * l1 + l2
        offset = 0.5 * (l0 - l2) / denom if denom != 0 else 0.0
        refined.append(float(grid[i] + np.clip(offset, -1.0, 1.0) * step))
    return refined


def ss_music(
    meas: FoecaMeasurement,
    n_sources: int,
    grid_step_deg: float = 0.05,
    subarray_len: Optional[int] = None,
    min_peak_sep_deg: float = 0.5,
) -> DoaEstimate:
    """Spatial-smoothing MUSIC over the virtual-ULA measurement.

    The length-(2Lc+1) measurement is cut into overlapping subvectors of
    length ``subarray_len`` (default Lc+1, the maximum, which fixes the
    resolvable-source capacity at Lc); their outer products are averaged
    into a smoothed covariance whose noise subspace drives the MUSIC
    pseudo-spectrum.  Returns the ``n_sources`` largest well-separated
    spectrum peaks, parabolic-refined off the grid.
    """
    lc = meas.lc
    if n_sources < 1:
        raise ValueError("need at least one source")
    if n_sources > lc:
        raise ValueError(f"{n_sources} sources exceed the capacity Lc = {lc}")
    if grid_step_deg <= 0:
        raise ValueError("grid step must be positive")
    sub = lc + 1 if subarray_len is None else int(subarray_len)
    if not (n_sources < sub <= 2 * lc + 1):
        raise ValueError(f"subarray length must lie in ({n_sources}, {2 * lc + 1}], got {sub}")
    windows = np.lib.stride_tricks.sliding_window_view(meas.values, sub)
    r = (windows[:, :, None] * windows.conj()[:, None, :]).mean(axis=0)
    eigvals, eigvecs = np.linalg.eigh(r)
    rank = int(np.sum(eigvals > max(1e-12 * eigvals[-1], 0.0)))
    noise = eigvecs[:, : sub - n_sources]
    grid = np.arange(-90.0 + grid_step_deg, 90.0, grid_step_deg)
    steering = np.exp(1j * np.pi * np.arange(sub)[:, None] * np.sin(np.deg2rad(grid))[None, :])
    denom = np.sum(np.abs(noise.conj().T @ steering) ** 2, axis=0)
    spec = 1.0 / np.maximum(denom, 1e-300)
    min_sep_cells = max(1, int(round(min_peak_sep_deg / grid_step_deg)))
    peaks = _pick_peaks(grid, spec, n_sources, min_sep_cells)
    return DoaEstimate(np.sort(np.asarray(peaks)), grid, spec, rank_ok=rank >= n_sources)


def match_nearest(estimates: Sequence[float], truths: Sequence[float]) -> np.ndarray:
    """Greedy nearest-angle assignment; returns signed errors per truth angle."""
    pool = list(estimates)
    errors = []
    for t in truths:
        if not pool:
            raise ValueError("fewer estimates than truth angles")
        j = int(np.argmin([abs(t - e) for e in pool]))
        errors.append(t - pool.pop(j))
    return np.asarray(errors)


def rmse(trials: Sequence[Tuple[Sequence[float], Sequence[float]]]) -> float:
    """Root-mean-square DOA error over trials, estimates matched to truths.

    sqrt( (1/(T*D)) * sum_t sum_i (theta_hat - theta)^2 ) with greedy
    nearest-angle matching inside each trial.
    """
    if not trials:
        raise ValueError("need at least one trial")
    sq = []
    for estimates, truths in trials:
        if len(estimates) != len(truths):
            raise ValueError("each trial needs matched estimate/truth lengths")
        sq.extend(match_nearest(estimates, truths) ** 2)
    return math.sqrt(float(np.mean(sq)))
