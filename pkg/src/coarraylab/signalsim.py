"""Far-field narrowband snapshot simulator for non-Gaussian sources.

Sources are mutually uncorrelated and i.i.d. across snapshots.  The
default source model is real BPSK (+/- sqrt(power) equiprobable): a
circular constellation would zero out two of the three fourth-order
cumulant cases and silently collapse the extended co-array to its
difference-only part, while BPSK gives the same cumulant, -2*power^2,
in all three cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .geometry import SensorArray

__all__ = [
    "SourceScene",
    "SnapshotMatrix",
    "steering_vector",
    "manifold",
    "simulate",
    "complex_gaussian_sampler",
    "save_snapshots",
    "load_snapshots",
]


def complex_gaussian_sampler(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """Unit-variance circular complex Gaussian draws (for null tests)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


@dataclass(frozen=True)
class SourceScene:
    """Source angles, constellation, per-source power and RNG seed.

    ``kind`` is "bpsk" or "custom"; a custom scene supplies ``sampler``,
    a callable (rng, shape) -> unit-power samples which are scaled by
    sqrt(power).
    """

    angles_deg: Tuple[float, ...]
    power: float = 1.0
    kind: str = "bpsk"
    seed: int = 0
    sampler: Optional[Callable[[np.random.Generator, Tuple[int, ...]], np.ndarray]] = None

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles_deg)
        if len(angles) == 0:
            raise ValueError("scene needs at least one source")
        if len(set(angles)) != len(angles):
            raise ValueError("source angles must be distinct")
        if any(abs(a) >= 90.0 for a in angles):
            raise ValueError("source angles must lie in (-90, 90) degrees")
        if self.power <= 0:
            raise ValueError("source power must be positive")
        if self.kind not in ("bpsk", "custom"):
            raise ValueError(f"kind must be 'bpsk' or 'custom', got {self.kind!r}")
        if self.kind == "custom" and self.sampler is None:
            raise ValueError("custom scenes need a sampler")
        object.__setattr__(self, "angles_deg", angles)

    @property
    def n_sources(self) -> int:
        return len(self.angles_deg)

    def draw_sources(self, rng: np.random.Generator, n_snapshots: int) -> np.ndarray:
        shape = (self.n_sources, n_snapshots)
        if self.kind == "bpsk":
            return rng.choice([-1.0, 1.0], size=shape) * math.sqrt(self.power)
        return self.sampler(rng, shape) * math.sqrt(self.power)


@dataclass
class SnapshotMatrix:
    """Complex N x K received-signal samples plus provenance."""

    data: np.ndarray
    array: SensorArray
    snr_db: float
    coupled: bool = False

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ValueError("snapshot data must be an N x K matrix")
        if self.data.shape[0] != self.array.n_sensors:
            raise ValueError("row count must match the sensor count")
        if self.data.shape[1] < 1:
            raise ValueError("need at least one snapshot")

    @property
    def n_snapshots(self) -> int:
        return self.data.shape[1]


def steering_vector(array: SensorArray, theta_deg: float) -> np.ndarray:
    """Steering vector exp(1j*pi*p_n*sin(theta)) under d = lambda/2."""
    if abs(theta_deg) >= 90.0:
        raise ValueError(f"angle must lie in (-90, 90) degrees, got {theta_deg}")
    p = np.asarray(array.positions)
    return np.exp(1j * np.pi * p * math.sin(math.radians(theta_deg)))


def manifold(array: SensorArray, thetas_deg: Sequence[float]) -> np.ndarray:
    """N x D matrix of steering vectors."""
    return np.stack([steering_vector(array, t) for t in thetas_deg], axis=1)


def simulate(
    array: SensorArray,
    scene: SourceScene,
    snr_db: float,
    n_snapshots: int,
    coupling: Optional[np.ndarray] = None,
) -> SnapshotMatrix:
    """Generate X = (C.)A.S + noise snapshots.

    Noise is circular complex Gaussian, independent of the sources, with
    per-sensor variance power * 10^(-snr_db/10); snr_db = inf disables
    it.  The draw is deterministic given scene.seed (sources first, then
    noise, in a fixed order).

    ``coupling`` is an optional N x N matrix applied to the steering
    side only, so the noise stays sensor-local.
    """
    if n_snapshots < 1:
        raise ValueError("need at least one snapshot")
    rng = np.random.default_rng(scene.seed)
    a = manifold(array, scene.angles_deg)
    s = scene.draw_sources(rng, n_snapshots)
    if math.isinf(snr_db):
        noise = 0.0
    else:
        sigma2 = scene.power * 10.0 ** (-snr_db / 10.0)
        noise = complex_gaussian_sampler(rng, (array.n_sensors, n_snapshots)) * math.sqrt(sigma2)
    if coupling is not None:
        a = np.asarray(coupling) @ a
    return SnapshotMatrix(a @ s + noise, array, snr_db, coupled=coupling is not None)


def save_snapshots(path, snap: SnapshotMatrix) -> None:
    """Dump snapshots as CSV: an 'N,K,snr_db,coupled' header line, then one
    row per sensor with K re,im pairs (2K floats, row-major)."""
    n, k = snap.data.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{n},{k},{snap.snr_db!r},{int(snap.coupled)}\n")
        for row in snap.data:
            pairs = np.column_stack([row.real, row.imag]).ravel()
            fh.write(",".join(repr(float(x)) for x in pairs) + "\n")


def load_snapshots(path, array: SensorArray) -> SnapshotMatrix:
    """Inverse of save_snapshots; the array metadata is supplied by the caller."""
    with open(path, "r", encoding="utf-8") as fh:
        n_s, k_s, snr_s, coupled_s = fh.readline().strip().split(",")
        n, k = int(n_s), int(k_s)
        data = np.empty((n, k), dtype=complex)
        for i in range(n):
            vals = np.array(fh.readline().split(","), dtype=float)
            if vals.size != 2 * k:
                raise ValueError(f"row {i} carries {vals.size} floats, expected {2 * k}")
            data[i] = vals[0::2] + 1j * vals[1::2]
    return SnapshotMatrix(data, array, float(snr_s), coupled=bool(int(coupled_s)))
