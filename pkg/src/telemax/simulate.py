"""Event-driven Monte Carlo for asymmetric telegraph trajectories.

Paths are piecewise linear, so every extremum is attained at a vertex:
realized maxima come from the switch epochs and the endpoint with no
discretisation.  Three sampling regimes:

* constant rate: exponential inter-switch times truncated at the horizon;
* conditional on the switch count: epochs are sorted uniforms on [0, t];
* rate alpha/t: the clock starts at a small fraction of the horizon
  (the process switches infinitely often near 0), and successive epochs
  follow the exact inverse survival function (s_next = s * U^(-1/alpha)).

Bulk sampling partitions work into fixed-size chunks, one RNG sub-stream
per chunk, so results are bitwise reproducible regardless of how many
workers run the chunks.  TELEMAX_THREADS caps the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import MotionParams, Velocity


@dataclass(frozen=True)
class RngStream:
    """Named entropy stream: identical (seed, stream_id) means identical draws."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed,
                                     spawn_key=(self.stream_id,))
        return np.random.default_rng(seq)


@dataclass(frozen=True)
class PathSample:
    """One simulated trajectory summarised by its vertices."""

    v0: Velocity
    switch_times: tuple[float, ...]
    horizon: float
    realized_max: float
    endpoint: float


def _velocities(p: MotionParams, v0: Velocity, segments: int) -> np.ndarray:
    pair = (p.c1, -p.c2) if v0 is Velocity.PLUS else (-p.c2, p.c1)
    return np.array([pair[i % 2] for i in range(segments)])


def assemble_path(p: MotionParams, t: float, v0: Velocity,
                  switch_times) -> PathSample:
    """Build the path for given switch epochs and extract its exact maximum."""
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    times = np.asarray(switch_times, dtype=float)
    if times.size and (np.any(np.diff(times) <= 0.0)
                       or times[0] <= 0.0 or times[-1] >= t):
        raise DomainError("switch times must be strictly increasing in (0, t)")
    edges = np.concatenate(([0.0], times, [t]))
    deltas = np.diff(edges)
    positions = np.cumsum(deltas * _velocities(p, v0, deltas.size))
    realized = max(0.0, float(positions.max()))
    return PathSample(v0, tuple(times.tolist()), t, realized,
                      float(positions[-1]))


def sample_path(p: MotionParams, t: float, v0: Velocity,
                rng: np.random.Generator) -> PathSample:
    """One constant-rate path: exponential inter-switch times up to t."""
    times = []
    if p.rate > 0.0:
        s = rng.exponential(1.0 / p.rate)
        while s < t:
            times.append(s)
            s += rng.exponential(1.0 / p.rate)
    return assemble_path(p, t, v0, times)


def sample_path_given_count(p: MotionParams, t: float, v0: Velocity, n: int,
                            rng: np.random.Generator) -> PathSample:
    """One path with exactly n switches: epochs are n sorted uniforms."""
    if n < 0:
        raise DomainError("switch count must be >= 0")
    times = np.sort(rng.random(n)) * t
    return assemble_path(p, t, v0, times)


def sample_path_epd_rate(p: MotionParams, alpha: float, t: float, v0: Velocity,
                         rng: np.random.Generator,
                         start_fraction: float = 1e-9) -> PathSample:
    """One path under the rate alpha/t, clock started at start_fraction * t.

    The exact start at 0 is unreachable (the switch count diverges), so
    the initial direction is pinned at s0 = start_fraction * t and epochs
    follow P{next > s | current} = (s / current)^(-alpha).
    """
    if alpha <= 0.0:
        raise DomainError("alpha must be positive")
    if not 0.0 < start_fraction < 1.0:
        raise DomainError("start_fraction must lie in (0, 1)")
    times = []
    s = start_fraction * t * rng.random() ** (-1.0 / alpha)
    while s < t:
        times.append(s)
        s *= rng.random() ** (-1.0 / alpha)
    return assemble_path(p, t, v0, times)


# --------------------------------------------------------------------------
# Bulk sampling
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PathBatch:
    """Vectorised per-path summaries from a bulk run."""

    maxima: np.ndarray
    endpoints: np.ndarray
    counts: np.ndarray


def _group_stats(p: MotionParams, t: float, v0: Velocity,
                 epochs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m, n = epochs.shape
    edges = np.empty((m, n + 2))
    edges[:, 0] = 0.0
    edges[:, 1:n + 1] = epochs
    edges[:, -1] = t
    deltas = np.diff(edges, axis=1)
    positions = np.cumsum(deltas * _velocities(p, v0, n + 1), axis=1)
    maxima = np.maximum(positions.max(axis=1), 0.0)
    return maxima, positions[:, -1]


def _chunk(p: MotionParams, t: float, v0: Velocity, m: int,
           rng: np.random.Generator, count: int | None,
           alpha: float | None, start_fraction: float) -> PathBatch:
    if count is not None:
        counts = np.full(m, count, dtype=np.int64)
    elif alpha is None:
        counts = rng.poisson(p.rate * t, m)
    else:
        counts = rng.poisson(alpha * math.log(1.0 / start_fraction), m)
    maxima = np.empty(m)
    endpoints = np.empty(m)
    for n in np.unique(counts):
        mask = counts == n
        rows = int(mask.sum())
        sorted_u = np.sort(rng.random((rows, int(n))), axis=1)
        if alpha is None:
            epochs = sorted_u * t
        else:
            # uniform order statistics in log-time: rate alpha/s on
            # (start*t, t] is homogeneous after s -> log s
            epochs = start_fraction * t * (1.0 / start_fraction) ** sorted_u
        mx, ep = _group_stats(p, t, v0, epochs)
        maxima[mask] = mx
        endpoints[mask] = ep
    return PathBatch(maxima, endpoints, counts)


def simulate_batch(p: MotionParams, t: float, v0: Velocity, n_paths: int,
                   seed: int = 0, count: int | None = None,
                   alpha: float | None = None, start_fraction: float = 1e-9,
                   chunk_size: int = 1 << 16,
                   threads: int | None = None) -> PathBatch:
    """Sample n_paths trajectories and return their vectorised summaries.

    Chunk i always consumes RngStream(seed, i); outputs are concatenated
    in chunk order, so the batch is independent of the worker count.
    """
    if n_paths < 1:
        raise DomainError("need at least one path")
    if count is not None and alpha is not None:
        raise DomainError("choose either a fixed count or an alpha rate")
    sizes = [chunk_size] * (n_paths // chunk_size)
    if n_paths % chunk_size:
        sizes.append(n_paths % chunk_size)

    def run(i: int) -> PathBatch:
        rng = RngStream(seed, i).generator()
        return _chunk(p, t, v0, sizes[i], rng, count, alpha, start_fraction)

    if threads is None:
        threads = int(os.environ.get("TELEMAX_THREADS", "1"))
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    return PathBatch(np.concatenate([b.maxima for b in parts]),
                     np.concatenate([b.endpoints for b in parts]),
                     np.concatenate([b.counts for b in parts]))


def sample_maxima(p: MotionParams, t: float, v0: Velocity, n_paths: int,
                  seed: int = 0, count: int | None = None,
                  alpha: float | None = None, **kwargs) -> np.ndarray:
    """Realized maxima only; see simulate_batch for the sampling scheme."""
    return simulate_batch(p, t, v0, n_paths, seed, count, alpha,
                          **kwargs).maxima


# --------------------------------------------------------------------------
# Empirical distribution of the maximum
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalMaxCdf:
    """Empirical CDF of realized maxima on a grid, both inequality senses.

    weak[i] estimates P{max <= beta_i}, strict[i] estimates P{max < beta_i};
    the distinction matters at the atoms (beta = 0 and beta = c1*t).
    Standard errors are the binomial sqrt(p(1-p)/N) per point.
    """

    beta_grid: np.ndarray
    weak: np.ndarray
    strict: np.ndarray
    weak_se: np.ndarray
    strict_se: np.ndarray
    n_samples: int


def empirical_max_cdf(samples, beta_grid) -> EmpiricalMaxCdf:
    """Empirical CDF from an array of maxima or an iterable of PathSample."""
    if isinstance(samples, np.ndarray):
        maxima = samples
    else:
        maxima = np.array([s.realized_max if isinstance(s, PathSample) else s
                           for s in samples], dtype=float)
    if maxima.size == 0:
        raise DomainError("empirical CDF needs a nonempty sample set")
    grid = np.asarray(beta_grid, dtype=float)
    n = maxima.size
    srt = np.sort(maxima)
    weak = np.searchsorted(srt, grid, side="right") / n
    strict = np.searchsorted(srt, grid, side="left") / n
    return EmpiricalMaxCdf(grid, weak, strict,
                           np.sqrt(weak * (1.0 - weak) / n),
                           np.sqrt(strict * (1.0 - strict) / n), n)
