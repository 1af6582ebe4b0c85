"""Moments of stable variables and expectations of homogeneous functionals.

The absolute moment c(p, q) = E|Z|^p of the standard symmetric q-stable
variable is evaluated two independent ways:

* ``c_pq`` evaluates the moment identities in closed form (gamma/sine
  factors; for q = 2 the Gaussian moment formula), and

* ``c_pq_oracle`` integrates the defining identities numerically,

      E|Z|^p  = C_p * int_0^inf (1 - exp(-t^q)) t^(-1-p) dt,   0 < p < 2,
      E|Z|^-s = (Gamma(s) cos(pi s / 2))^-1
                * int_0^inf t^(s-1) exp(-t^q) dt,              0 < s < 1,

  with C_p = (2/pi) sin(pi p / 2) Gamma(1 + p) the cosine-integral
  normalization.  The closed forms are gated by agreement tests against
  this oracle.

``levy_expectation`` turns a finite spherical measure representing a norm
into the exact finite-sum value of E||X||^p, and ``mc_expectation``
estimates E f(X) for arbitrary homogeneous descriptors, switching to a
median-of-means estimator in the infinite-variance regime.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gamma as _gamma

from .sampling import CHUNK, Seed, as_seed, _chunk_points, default_workers
from .spectral import SpectralRep, _qsum, check_stable_index, rep_hash

__all__ = [
    "LevyMeasure",
    "MCEstimate",
    "MomentExistenceError",
    "QuadratureFailure",
    "c_pq",
    "c_pq_oracle",
    "levy_expectation",
    "mc_expectation",
    "norm_from_levy",
]


class MomentExistenceError(ValueError):
    """Requested moment does not exist for the given (p, q)."""


class QuadratureFailure(RuntimeError):
    """A numerical quadrature did not converge to the requested tolerance."""


@dataclass(frozen=True, eq=False)
class LevyMeasure:
    """Finite nonnegative measure on the unit sphere representing a norm.

    N(x) = (sum_m c_m |<x, xi_m>|^p)^(1/p) with homogeneity exponent p > 0.
    Entries need not span R^n; spanning is required only where the
    represented norm must be positive definite (see norm_from_levy).
    """

    p: float
    weights: np.ndarray
    xis: np.ndarray

    def __post_init__(self):
        p = float(self.p)
        if not (p > 0) or not np.isfinite(p):
            raise ValueError(f"homogeneity exponent must be positive, got {p}")
        w = np.atleast_1d(np.asarray(self.weights, dtype=float)).copy()
        x = np.atleast_2d(np.asarray(self.xis, dtype=float)).copy()
        if w.size == 0:
            raise ValueError("at least one entry is required")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ValueError("entry weights must be finite and positive")
        if x.shape[0] != w.size or not np.all(np.isfinite(x)):
            raise ValueError("xis must be a finite (m, n) array matching the weights")
        norms = np.linalg.norm(x, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("entries must be unit vectors (|xi| = 1 within 1e-12)")
        w.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "xis", x)

    @property
    def n(self) -> int:
        return self.xis.shape[1]

    @property
    def m(self) -> int:
        return self.weights.size

    def spans(self) -> bool:
        return np.linalg.matrix_rank(self.xis) == self.n

    def norm_values(self, x) -> np.ndarray:
        """Evaluate the represented (semi)norm at x of shape (n,) or (K, n)."""
        x = np.asarray(x, dtype=float)
        proj = np.abs(x @ self.xis.T)
        return (proj**self.p @ self.weights) ** (1.0 / self.p)

    def to_json_dict(self) -> dict:
        return {"p": self.p,
                "entries": [{"c": float(c), "xi": [float(v) for v in xi]}
                            for c, xi in zip(self.weights, self.xis)]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "LevyMeasure":
        entries = d["entries"]
        return cls(p=float(d["p"]),
                   weights=np.array([e["c"] for e in entries], dtype=float),
                   xis=np.array([e["xi"] for e in entries], dtype=float).reshape(len(entries), -1))

    @classmethod
    def from_json(cls, s: str) -> "LevyMeasure":
        return cls.from_json_dict(json.loads(s))


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo value with its uncertainty and estimator provenance.

    ``stderr`` is set for the plain-mean estimator; the median-of-means
    path reports ``dev_bound`` instead (a robust scale of the block-mean
    median, MAD-based).
    """

    value: float
    n_samples: int
    estimator: str
    stderr: float | None = None
    dev_bound: float | None = None
    blocks: int | None = None
    rep_hash: str | None = None
    seed: Seed | None = None

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("an estimate needs at least two samples")
        if self.estimator not in ("plain", "median-of-means"):
            raise ValueError(f"unknown estimator kind {self.estimator!r}")

    @property
    def uncertainty(self) -> float:
        return self.stderr if self.stderr is not None else self.dev_bound

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "n_samples": self.n_samples,
            "estimator": self.estimator,
            "stderr": self.stderr,
            "dev_bound": self.dev_bound,
            "blocks": self.blocks,
            "rep_hash": self.rep_hash,
            "seed": self.seed.to_json_dict() if self.seed is not None else None,
        }


def _check_existence(p: float, q: float) -> None:
    if p <= -1.0:
        raise MomentExistenceError(
            f"E|Z|^p diverges at the origin for p <= -1 (got p={p})")
    if q < 2.0 and p >= q:
        raise MomentExistenceError(
            f"E|Z|^p does not exist for p >= q when q < 2 (got p={p}, q={q})")


def c_pq(p, q) -> float:
    """E|Z|^p for the standard symmetric q-stable Z (cf exp(-|t|^q)).

    Exists for -1 < p < q when q < 2 and for every p > -1 when q = 2.
    Closed-form evaluation of the moment identities; cross-validated
    against ``c_pq_oracle``.
    """
    q = check_stable_index(q)
    p = float(p)
    _check_existence(p, q)
    if p == 0.0:
        return 1.0
    if q == 2.0:
        # Z ~ N(0, 2)
        return float(2.0**p * _gamma((p + 1.0) / 2.0) / np.sqrt(np.pi))
    if p > 0:
        return float((2.0 / np.pi) * np.sin(np.pi * p / 2.0) * _gamma(p)
                     * _gamma(1.0 - p / q))
    s = -p
    return float(_gamma(s / q) / (q * _gamma(s) * np.cos(np.pi * s / 2.0)))


def _quad(fn, a, b, rel=1e-11):
    out = integrate.quad(fn, a, b, epsabs=1e-14, epsrel=rel,
                         limit=400, full_output=1)
    if len(out) > 3:
        raise QuadratureFailure(f"quadrature did not converge: {out[3]}")
    val, err = out[0], out[1]
    if err > 1e-7 * max(1.0, abs(val)):
        raise QuadratureFailure(
            f"quadrature error estimate {err:.3e} too large for value {val:.6e}")
    return val


def c_pq_oracle(p, q) -> float:
    """E|Z|^p by numerical quadrature of the defining identities.

    Independent of the closed forms in c_pq; target relative accuracy 1e-8.
    Nonconvergence raises QuadratureFailure rather than truncating.
    """
    q = check_stable_index(q)
    p = float(p)
    _check_existence(p, q)
    if p == 0.0:
        return 1.0
    if p < 0:
        # E|Z|^-s = (Gamma(s) cos(pi s/2))^-1 * int_0^inf t^(s-1) e^(-t^q) dt,
        # integrated with the substitution t = u^(1/s) that removes the
        # endpoint singularity.
        s = -p
        upper = 45.0 ** (s / q)
        val = _quad(lambda u: np.exp(-u ** (q / s)), 0.0, upper) / s
        return float(val / (_gamma(s) * np.cos(np.pi * s / 2.0)))
    if q == 2.0 and p >= 2.0:
        # direct quadrature against the explicit N(0, 2) density
        dens = 1.0 / np.sqrt(4.0 * np.pi)

        def integrand(z):
            return 2.0 * dens * z**p * np.exp(-z * z / 4.0)

        return float(_quad(integrand, 0.0, 20.0 + 4.0 * p))
    # 0 < p < min(q, 2):  C_p * int_0^inf (1 - e^(-t^q)) t^(-1-p) dt.
    # On [0, 1] substitute t = u^(1/(q-p)) to remove the origin singularity;
    # on [1, inf) split off the exactly integrable 1/p piece.
    qp = q - p

    def near(u):
        t = u ** (1.0 / qp)
        tq = t**q
        return np.where(tq > 1e-250, -np.expm1(-tq) / np.where(tq > 0, tq, 1.0), 1.0)

    near_val = _quad(near, 0.0, 1.0) / qp
    far_cut = 45.0 ** (1.0 / q)
    far_val = 1.0 / p - _quad(lambda t: np.exp(-t**q) * t ** (-1.0 - p), 1.0, far_cut)
    C_p = (2.0 / np.pi) * np.sin(np.pi * p / 2.0) * _gamma(1.0 + p)
    return float(C_p * (near_val + far_val))


def levy_expectation(rep: SpectralRep, gamma: LevyMeasure, p) -> float:
    """Exact E||X||^p for the norm represented by gamma, via the finite sum

        c(p, q) * sum_m c_m * scale_q(rep, xi_m)^p.

    Valid for 0 < p <= q, and for q = 2 with p > 2 (the reversed regime).
    Deterministic: no sampling is involved.
    """
    p = float(p)
    if abs(gamma.p - p) > 1e-12:
        raise ValueError(f"measure represents exponent {gamma.p}, requested p={p}")
    if gamma.n != rep.n:
        raise ValueError(f"dimension mismatch: measure n={gamma.n}, rep n={rep.n}")
    if not (0.0 < p <= rep.q or (rep.q == 2.0 and p > 2.0)):
        raise MomentExistenceError(
            f"levy_expectation needs 0 < p <= q or q = 2 with p > 2; got p={p}, q={rep.q}")
    qsums = _qsum(rep, gamma.xis)  # scale^q at each entry
    return float(c_pq(p, rep.q) * (gamma.weights @ qsums ** (p / rep.q)))


def _mc_values(f, rep: SpectralRep, N: int, seed: Seed, workers: int) -> np.ndarray:
    """f evaluated on the same deterministic chunk stream as sample_batch."""
    from .homogeneous import evaluate_many  # deferred: moments <-> homogeneous

    mix = (rep.weights ** (1.0 / rep.q))[:, None] * rep.atoms
    values = np.empty(N, dtype=float)
    n_chunks = -(-N // CHUNK)

    def fill(ci):
        lo = ci * CHUNK
        hi = min(N, lo + CHUNK)
        pts = _chunk_points(rep, mix, seed, ci, hi - lo)
        values[lo:hi] = evaluate_many(f, pts)

    if workers > 1 and n_chunks > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(n_chunks)))
    else:
        for ci in range(n_chunks):
            fill(ci)
    return values


def mc_expectation(f, rep: SpectralRep, N: int, seed,
                   estimator: str = "auto", blocks: int = 32,
                   workers=None) -> MCEstimate:
    """Monte Carlo estimate of E f(X) for a homogeneous descriptor f.

    The plain mean (with standard error) is used when the second moment of
    f(X) exists, i.e. when 2p lies inside the existence range; otherwise a
    median-of-means estimate over ``blocks`` contiguous blocks is returned,
    flagged through ``estimator`` so callers can widen tolerances.
    """
    if f.n != rep.n:
        raise ValueError(f"descriptor dimension {f.n} does not match rep n={rep.n}")
    p, q, n = f.p, rep.q, rep.n
    if not (p > -n and (q == 2.0 or p < q)):
        raise MomentExistenceError(
            f"E f(X) does not exist for exponent p={p} with n={n}, q={q}")
    variance_ok = (2.0 * p > -n) and (q == 2.0 or 2.0 * p < q)
    if estimator == "auto":
        estimator = "plain" if variance_ok else "median-of-means"
    if estimator == "plain" and not variance_ok:
        raise ValueError(
            "plain mean has infinite variance here (2p outside the existence "
            "range); use the median-of-means estimator")
    if estimator not in ("plain", "median-of-means"):
        raise ValueError(f"unknown estimator kind {estimator!r}")
    N = int(N)
    min_n = 2 if estimator == "plain" else 2 * blocks
    if N < min_n:
        raise ValueError(f"N={N} too small for the {estimator} estimator (need >= {min_n})")
    seed = as_seed(seed)
    workers = workers if workers is not None else default_workers()
    values = _mc_values(f, rep, N, seed, workers)

    if estimator == "plain":
        value = float(values.mean())
        stderr = float(values.std(ddof=1) / np.sqrt(N))
        return MCEstimate(value=value, n_samples=N, estimator="plain",
                          stderr=stderr, rep_hash=rep_hash(rep), seed=seed)

    block_means = np.array([b.mean() for b in np.array_split(values, blocks)])
    value = float(np.median(block_means))
    mad = float(np.median(np.abs(block_means - value)))
    if mad == 0.0:
        scale = float(block_means.std(ddof=1)) if blocks > 1 else 0.0
    else:
        scale = 1.4826 * mad
    # normal-theory standard error of a median with a robust scale estimate
    dev = float(1.2533 * scale / np.sqrt(blocks))
    return MCEstimate(value=value, n_samples=N, estimator="median-of-means",
                      dev_bound=dev, blocks=blocks,
                      rep_hash=rep_hash(rep), seed=seed)


def norm_from_levy(gamma: LevyMeasure):
    """The 1-homogeneous norm represented by gamma, as an evaluable descriptor.

    Rejects measures whose entries fail to span R^n (the represented
    functional would vanish on a nontrivial subspace).
    """
    from .homogeneous import HomogeneousFn, LevyBase  # deferred import

    if not gamma.spans():
        raise ValueError("entries do not span R^n; the represented norm is degenerate")
    return HomogeneousFn(base=LevyBase(measure=gamma), p=1.0)
