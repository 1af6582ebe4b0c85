"""Exact simulation of symmetric stable variables and vectors.

The one-dimensional generator is the Chambers-Mallows-Stuck transform of a
uniform angle and a unit exponential, specialized to the symmetric case and
normalized so that E exp(itZ) = exp(-|t|^q).  The Gaussian (q = 2) and
Cauchy (q = 1) endpoints take dedicated closed-form paths.

Multivariate draws combine independent one-dimensional draws along the
atoms of a SpectralRep,

    X = sum_j w_j^(1/q) Z_j a_j,

which reproduces the target characteristic function exactly.

Reproducibility contract: draws are produced in fixed-size chunks whose RNG
streams depend only on (seed, stream_id, chunk index).  Batches are
therefore bit-identical for any worker count and scheduling order.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectral import SpectralRep, check_stable_index, rep_hash

__all__ = [
    "CHUNK",
    "SampleBatch",
    "Seed",
    "default_workers",
    "empirical_char_fn",
    "sample_batch",
    "sample_standard",
    "sample_vector",
]

# Fixed chunk size of the deterministic stream partition.
CHUNK = 1 << 16

_WORKER_ENV = "STABLECOMP_WORKERS"


@dataclass(frozen=True)
class Seed:
    """Root seed plus a stream id; distinct pairs give independent streams."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if int(self.stream_id) != self.stream_id or self.stream_id < 0:
            raise ValueError(f"stream_id must be a nonnegative integer, got {self.stream_id}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "stream_id", int(self.stream_id))

    def to_json_dict(self) -> dict:
        return {"seed": self.seed, "stream_id": self.stream_id}


def as_seed(seed) -> Seed:
    if isinstance(seed, Seed):
        return seed
    if isinstance(seed, (tuple, list)):
        return Seed(*seed)
    return Seed(int(seed))


def default_workers() -> int:
    env = os.environ.get(_WORKER_ENV)
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{_WORKER_ENV} must be an integer, got {env!r}") from None
    return min(4, os.cpu_count() or 1)


def _chunk_rng(seed: Seed, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed.seed,
                                spawn_key=(seed.stream_id, chunk_index))
    return np.random.Generator(np.random.PCG64(ss))


def _draw_standard(rng: np.random.Generator, q: float, size):
    """CMS draws with characteristic function exp(-|t|^q)."""
    if q == 1.0:
        # standard Cauchy
        u = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size)
        return np.tan(u)
    u = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size)
    w = rng.standard_exponential(size)
    if q == 2.0:
        # centered Gaussian with variance 2
        return 2.0 * np.sqrt(w) * np.sin(u)
    cu = np.cos(u)
    return (np.sin(q * u) / cu ** (1.0 / q)) * (np.cos((1.0 - q) * u) / w) ** ((1.0 - q) / q)


def sample_standard(q, seed, size=None):
    """Draw from the standard symmetric q-stable law, cf exp(-|t|^q).

    Returns a scalar when ``size`` is None, else an ndarray.  For q = 2 this
    is a centered Gaussian with variance 2; for q = 1 a standard Cauchy.
    """
    q = check_stable_index(q)
    rng = _chunk_rng(as_seed(seed), 0)
    if size is None:
        return float(_draw_standard(rng, q, 1)[0])
    return _draw_standard(rng, q, size)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """I.i.d. draws from a SpectralRep law, with provenance."""

    points: np.ndarray
    rep_hash: str
    seed: Seed

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def header_dict(self) -> dict:
        return {
            "dtype": "<f8",
            "order": "C",
            "shape": list(self.points.shape),
            "rep_hash": self.rep_hash,
            "seed": self.seed.to_json_dict(),
        }

    def to_csv(self, path) -> None:
        header = ",".join(f"x{i + 1}" for i in range(self.n))
        np.savetxt(path, self.points, delimiter=",", header=header,
                   comments="", fmt="%.17g")

    def to_binary(self, path) -> None:
        """Row-major little-endian float64 dump plus a JSON sidecar header."""
        path = Path(path)
        self.points.astype("<f8").tofile(path)
        with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
            json.dump(self.header_dict(), fh, sort_keys=True)

    @classmethod
    def from_binary(cls, path) -> "SampleBatch":
        path = Path(path)
        with open(path.with_suffix(path.suffix + ".json")) as fh:
            header = json.load(fh)
        pts = np.fromfile(path, dtype="<f8").reshape(header["shape"])
        return cls(points=pts, rep_hash=header["rep_hash"],
                   seed=Seed(**header["seed"]))


def _chunk_points(rep: SpectralRep, mix: np.ndarray, seed: Seed,
                  chunk_index: int, count: int) -> np.ndarray:
    rng = _chunk_rng(seed, chunk_index)
    z = _draw_standard(rng, rep.q, (count, rep.m))
    return z @ mix


def sample_batch(rep: SpectralRep, N: int, seed, workers=None) -> SampleBatch:
    """N i.i.d. draws with characteristic function char_fn(rep, .).

    Output is bit-identical for fixed (rep, N, seed) regardless of the
    worker count.
    """
    if int(N) != N or N < 1:
        raise ValueError(f"sample count must be a positive integer, got {N}")
    N = int(N)
    seed = as_seed(seed)
    nbytes = N * rep.n * 8
    if nbytes > 8 << 30:
        raise ValueError(f"requested batch needs {nbytes / 2**30:.1f} GiB; "
                         "split into streams instead")
    mix = (rep.weights ** (1.0 / rep.q))[:, None] * rep.atoms  # (m, n)
    try:
        out = np.empty((N, rep.n), dtype=float)
    except MemoryError as exc:
        raise RuntimeError(f"cannot allocate sample batch of shape ({N}, {rep.n})") from exc
    n_chunks = -(-N // CHUNK)
    workers = workers if workers is not None else default_workers()

    def fill(ci):
        lo = ci * CHUNK
        hi = min(N, lo + CHUNK)
        out[lo:hi] = _chunk_points(rep, mix, seed, ci, hi - lo)

    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(n_chunks)))
    else:
        for ci in range(n_chunks):
            fill(ci)
    return SampleBatch(points=out, rep_hash=rep_hash(rep), seed=seed)


def sample_vector(rep: SpectralRep, seed) -> np.ndarray:
    """A single draw; equals the first row of sample_batch(rep, 1, seed)."""
    return sample_batch(rep, 1, seed).points[0]


def empirical_char_fn(points: np.ndarray, xis: np.ndarray) -> np.ndarray:
    """Empirical characteristic function mean cos(<xi, X_i>) at each row of xis.

    The imaginary part vanishes in expectation for symmetric laws, so the
    cosine mean is the natural estimator of the (real) target.
    """
    points = np.atleast_2d(points)
    xis = np.atleast_2d(xis)
    return np.cos(points @ xis.T).mean(axis=0)
