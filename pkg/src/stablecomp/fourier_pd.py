"""Numerical positive-definiteness checks for homogeneous functions.

For an even, continuous, positive f homogeneous of order p in (-n, 0), the
pairing of its distributional Fourier transform with a nonnegative rapidly
decreasing test function phi factorizes in spherical coordinates:

    (f^, phi) = integral f(x) phi^(x) dx
             = (1/2) * int_S f(theta) [ int_R |r|^(n+p-1) phi^(r theta) dr ] dtheta.

``pd_action`` evaluates that factorization with a singularity-aware radial
rule (Gauss-Jacobi near the origin, oscillation-limited Gauss-Legendre
panels outside) and tensor Gauss-Legendre angular grids for n in {2, 3};
``pd_check`` scans a family of test functions for a sign violation.

Test functions are Gaussians modulated to a center xi0 (their Fourier
transforms are analytic, which removes one quadrature layer) or, for the
away-from-origin mode, compactly supported bumps whose support excludes
the origin.

A verdict of "violation" is only reported when the minimum action is below
minus its quadrature error bound; anything in [-bound, 0) is inconclusive,
so a theorem is never contradicted by quadrature noise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.special import gamma as _gamma
from scipy.special import i0e, j0, roots_jacobi

from .homogeneous import (DiagEuclideanBase, HomogeneousFn, LevyBase,
                          LrMatrixBase, evaluate_many)
from .moments import QuadratureFailure

__all__ = [
    "ActionResult",
    "PDReport",
    "TestFunction",
    "bump_family",
    "euclidean_reference_action",
    "gaussian_family",
    "pd_action",
    "pd_check",
    "radial_fourier_weight",
    "radon_action",
    "subordination_norm_power",
]


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Nonnegative rapidly decreasing test function.

    kind "gaussian": normalization * exp(-|xi - center|^2 / (2 width^2)).
    kind "bump": normalization * exp(1 - 1/(1 - s^2)), s = |xi - center|/width,
    supported in the ball of radius ``width`` around ``center``; for the
    away-from-origin mode the support must avoid 0, i.e. |center| > width.
    """

    kind: str
    center: np.ndarray
    width: float
    normalization: float = 1.0

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.kind not in ("gaussian", "bump"):
            raise ValueError(f"unknown test function kind {self.kind!r}")
        c = np.atleast_1d(np.asarray(self.center, dtype=float)).copy()
        c.setflags(write=False)
        if not np.all(np.isfinite(c)):
            raise ValueError("center must be finite")
        if not (self.width > 0) or not (self.normalization > 0):
            raise ValueError("width and normalization must be positive")
        if self.kind == "bump" and np.linalg.norm(c) <= self.width:
            raise ValueError("bump support must avoid the origin (|center| > width)")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "normalization", float(self.normalization))

    @property
    def n(self) -> int:
        return self.center.size

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "center": [float(v) for v in self.center],
                "width": self.width, "normalization": self.normalization}


@dataclass(frozen=True)
class ActionResult:
    value: float
    error_bound: float

    def __iter__(self):
        return iter((self.value, self.error_bound))


@dataclass(frozen=True, eq=False)
class PDReport:
    """Outcome of a pd_check scan.

    ``verdict`` is "violation" only if min_action < -quadrature_error_bound;
    a minimum in [-bound, 0) yields "inconclusive-within-tolerance".
    """

    min_action: float
    witness: TestFunction
    verdict: str
    quadrature_error_bound: float
    mode: str
    family_size: int
    evaluations: int

    def to_json_dict(self) -> dict:
        return {
            "min_action": self.min_action,
            "witness": self.witness.to_json_dict(),
            "verdict": self.verdict,
            "quadrature_error_bound": self.quadrature_error_bound,
            "mode": self.mode,
            "family_size": self.family_size,
            "evaluations": self.evaluations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def radial_fourier_weight(n: int, p: float) -> float:
    """The positive constant relating |r|^(n+p-1) to |t|^(-n-p) under the
    one-dimensional Fourier transform, for n + p - 1 in (-1, 0):

        2^(n+p) sqrt(pi) Gamma((n+p)/2) / Gamma((1-n-p)/2).
    """
    a = n + p - 1.0
    if not (-1.0 < a < 0.0):
        raise ValueError(f"requires p in (-n, -n+1); got n={n}, p={p}")
    return float(2.0 ** (n + p) * np.sqrt(np.pi)
                 * _gamma((n + p) / 2.0) / _gamma((1.0 - n - p) / 2.0))


# ---------------------------------------------------------------------------
# quadrature grids


@lru_cache(maxsize=64)
def _leggauss(m: int):
    return np.polynomial.legendre.leggauss(m)


@lru_cache(maxsize=64)
def _jacobi(m: int, beta: float):
    x, w = roots_jacobi(m, 0.0, beta)
    return x, w


@lru_cache(maxsize=64)
def _sphere_grid(n: int, spec: tuple):
    """Direction matrix and quadrature weights; weights sum to |S^(n-1)|."""
    if n == 2:
        panels, nodes = spec
        x, w = _leggauss(nodes)
        edges = np.linspace(0.0, 2.0 * np.pi, panels + 1)
        theta = np.concatenate([(e0 + e1) / 2 + (e1 - e0) / 2 * x
                                for e0, e1 in zip(edges[:-1], edges[1:])])
        wq = np.concatenate([(e1 - e0) / 2 * w
                             for e0, e1 in zip(edges[:-1], edges[1:])])
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        return dirs, wq
    if n == 3:
        nmu, nphi = spec
        mu, wmu = _leggauss(nmu)
        phi_x, wphi = _leggauss(nphi)
        phi = np.pi * (phi_x + 1.0)
        wphi = np.pi * wphi
        smu = np.sqrt(1.0 - mu**2)
        dirs = np.empty((nmu * nphi, 3))
        dirs[:, 0] = np.outer(smu, np.cos(phi)).ravel()
        dirs[:, 1] = np.outer(smu, np.sin(phi)).ravel()
        dirs[:, 2] = np.repeat(mu, nphi)
        return dirs, np.outer(wmu, wphi).ravel()
    raise ValueError(f"spherical grids are provided for n in {{2, 3}}, got n={n}")


def _panel_nodes(r_lo: float, r_hi: float, h: float, gl: int):
    npan = max(1, int(np.ceil((r_hi - r_lo) / h)))
    edges = np.linspace(r_lo, r_hi, npan + 1)
    x, w = _leggauss(gl)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _radial_modulated(a: float, kernel, r0: float, rmax: float, h: float,
                      cabs: np.ndarray, nj: int, gl: int):
    """2 * int_0^rmax r^(a-1) kernel(r) cos(r c) dr for each c in cabs.

    Gauss-Jacobi with weight r^(a-1) on [0, r0], oscillation-limited
    Gauss-Legendre panels on [r0, rmax].
    """
    xj, wj = _jacobi(nj, a - 1.0)
    rj = r0 * (xj + 1.0) / 2.0
    near_w = (r0 / 2.0) ** a * wj * kernel(rj)
    rf, wf = _panel_nodes(r0, rmax, h, gl)
    far_w = wf * kernel(rf) * rf ** (a - 1.0)
    nodes = np.concatenate([rj, rf])
    node_w = np.concatenate([near_w, far_w])
    return 2.0 * (np.cos(np.outer(cabs, nodes)) @ node_w)


@lru_cache(maxsize=4)
def _bump_profile(n: int):
    """Radial profile of the Fourier transform of the unit bump in R^n.

    Returns (spline on [0, s_cut], s_cut, tail magnitude estimate).
    """
    x, w = _leggauss(1600)
    r = (x + 1.0) / 2.0
    w = w / 2.0
    with np.errstate(divide="ignore", over="ignore"):
        psi = np.where(r < 1.0, np.exp(1.0 - 1.0 / np.maximum(1.0 - r**2, 1e-300)), 0.0)
    s = np.linspace(0.0, 400.0, 8001)
    rs = np.outer(s, r)
    if n == 2:
        vals = 2.0 * np.pi * (j0(rs) * (psi * r * w)[None, :]).sum(axis=1)
    elif n == 3:
        vals = 4.0 * np.pi * (np.sinc(rs / np.pi) * (psi * r**2 * w)[None, :]).sum(axis=1)
    else:
        raise ValueError(f"bump profiles are provided for n in {{2, 3}}, got n={n}")
    peak = abs(vals[0])
    big = np.nonzero(np.abs(vals) > 1e-12 * peak)[0]
    cut_idx = min(len(s) - 1, int(big[-1]) + 50)
    s_cut = float(s[cut_idx])
    tail = float(np.abs(vals[max(cut_idx - 100, 0):]).max())
    spline = CubicSpline(s[:cut_idx + 1], vals[:cut_idx + 1], extrapolate=False)
    return spline, s_cut, tail


def _radial_profile(f_p: float, n: int, phi: TestFunction, cabs: np.ndarray,
                    nj: int, gl: int):
    """Inner radial integral of the spherical factorization, per direction.

    Returns (values per direction, truncation bound per direction).
    """
    a = n + f_p
    cmax = float(cabs.max()) if cabs.size else 0.0
    c_h = 2.4 / cmax if cmax > 0 else np.inf
    if phi.kind == "gaussian":
        sigma = phi.width
        K = phi.normalization * (2.0 * np.pi * sigma**2) ** (n / 2.0)
        rmax = (9.5 + np.sqrt(max(a, 1.0))) / sigma
        r0 = min(0.6 / sigma, rmax / 6.0, 0.78 / cmax if cmax > 0 else np.inf)
        h = min(c_h, 1.1 / sigma)

        def kernel(r):
            return K * np.exp(-0.5 * (sigma * r) ** 2)

        vals = _radial_modulated(a, kernel, r0, rmax, h, cabs, nj, gl)
        trunc = 2.0 * K * np.exp(-0.5 * (sigma * rmax) ** 2) \
            * rmax ** (a - 1.0) / (sigma**2 * rmax)
        return vals, float(trunc)

    spline, s_cut, tail = _bump_profile(n)
    rho = phi.width
    K = phi.normalization * rho**n
    rmax = s_cut / rho
    r0 = min(0.5 / rho, rmax / 6.0, 0.78 / cmax if cmax > 0 else np.inf)
    h = min(c_h, 1.5 / rho)

    def kernel(r):
        out = spline(rho * r)
        return K * np.nan_to_num(out, nan=0.0)

    vals = _radial_modulated(a, kernel, r0, rmax, h, cabs, nj, gl)
    trunc = 2.0 * K * tail * rmax ** max(a - 1.0, 0.0) * 10.0
    return vals, float(trunc)


def _angular_spec(n: int, phi: TestFunction, fine: bool):
    hard = phi.width < 0.5 or np.linalg.norm(phi.center) > 2.5
    if n == 2:
        if hard:
            return (32, 12) if fine else (32, 8)
        return (16, 10) if fine else (16, 6)
    if hard:
        return (44, 88) if fine else (32, 64)
    return (26, 52) if fine else (18, 36)


def _single_action(f: HomogeneousFn, phi: TestFunction, fine: bool):
    n = f.n
    dirs, w = _sphere_grid(n, _angular_spec(n, phi, fine))
    fv = evaluate_many(f, dirs) * w
    cabs = np.abs(dirs @ phi.center)
    nj, gl = (28, 14) if fine else (16, 10)
    radial, trunc = _radial_profile(f.p, n, phi, cabs, nj, gl)
    value = 0.5 * float(fv @ radial)
    scale = 0.5 * float(fv @ np.abs(radial))
    return value, 0.5 * float(fv.sum()) * trunc, scale


def _validate_action_args(f: HomogeneousFn, phis):
    if f.n not in (2, 3):
        raise ValueError("spherical quadrature is implemented for n in {2, 3}; "
                         "higher dimensions rely on certificate windows instead")
    if not (-f.n < f.p < 0.0):
        raise ValueError(f"action requires exponent p in (-n, 0); got p={f.p}, n={f.n}")
    for phi in phis:
        if phi.n != f.n:
            raise ValueError(f"test function dimension {phi.n} != descriptor dimension {f.n}")


def pd_action(f: HomogeneousFn, phi) -> ActionResult:
    """The pairing (f^, phi) = int f(x) phi^(x) dx with an error bound.

    ``phi`` may be a single TestFunction or a sequence (interpreted as the
    sum, so the action is additive); an empty sequence gives exactly 0.
    """
    phis = [phi] if isinstance(phi, TestFunction) else list(phi)
    if not phis:
        return ActionResult(0.0, 0.0)
    _validate_action_args(f, phis)
    base = fine = trunc = scale = 0.0
    for one in phis:
        vb, _, _ = _single_action(f, one, fine=False)
        vf, tb, sc = _single_action(f, one, fine=True)
        base += vb
        fine += vf
        trunc += tb
        scale += sc
    bound = abs(fine - base) + trunc + 1e-14 * scale
    return ActionResult(float(fine), float(bound))


def _center_directions(n: int) -> np.ndarray:
    if n == 2:
        ang = np.arange(8) * (np.pi / 4.0)
        return np.column_stack([np.cos(ang), np.sin(ang)])
    axes = np.vstack([np.eye(3), -np.eye(3)])
    diag = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1)
                     for sz in (-1, 1)], dtype=float) / np.sqrt(3.0)
    return np.vstack([axes, diag])


def gaussian_family(n: int, widths=(0.25, 0.5, 1.0, 2.0, 4.0),
                    radii=(1.5, 4.0)) -> list:
    """Default full-space family: centered Gaussians on a log width grid plus
    modulated ones with centers on a sphere-radius grid."""
    fam = [TestFunction("gaussian", np.zeros(n), w) for w in widths]
    dirs = _center_directions(n)
    for w in widths:
        for rad in radii:
            for d in dirs:
                fam.append(TestFunction("gaussian", rad * d, w))
    return fam


def bump_family(n: int, widths=(0.5, 1.0), radii=(1.5, 3.0, 6.0)) -> list:
    """Default away-from-origin family: bumps whose support avoids 0."""
    fam = []
    dirs = _center_directions(n)
    for w in widths:
        for rad in radii:
            if rad <= w:
                continue
            for d in dirs:
                fam.append(TestFunction("bump", rad * d, w))
    return fam


def _refine_neighbors(phi: TestFunction) -> list:
    out = []
    for ws in (0.71, 1.41):
        out.append(replace(phi, width=phi.width * ws))
    rad = np.linalg.norm(phi.center)
    if rad > 0:
        for rs in (0.7, 1.35):
            cand = phi.center * rs
            if phi.kind == "bump" and np.linalg.norm(cand) <= phi.width:
                continue
            out.append(replace(phi, center=cand))
    elif phi.kind == "gaussian":
        c = np.zeros(phi.n)
        c[0] = phi.width
        out.append(replace(phi, center=c))
    return out


def pd_check(f: HomogeneousFn, family=None, mode: str = "full-space",
             refine_rounds: int = 2) -> PDReport:
    """Scan a test family for a negative action; grid search plus local
    refinement of widths and center radii around the running minimum."""
    if mode not in ("full-space", "away-from-origin"):
        raise ValueError(f"unknown mode {mode!r}")
    if family is None:
        family = gaussian_family(f.n) if mode == "full-space" else bump_family(f.n)
    family = list(family)
    if not family:
        raise ValueError("test family must be nonempty")
    if mode == "away-from-origin" and any(phi.kind != "bump" for phi in family):
        raise ValueError("away-from-origin mode admits only compact bumps")
    _validate_action_args(f, family)

    evaluations = 0
    best = None
    for phi in family:
        res = pd_action(f, phi)
        evaluations += 1
        if best is None or res.value < best[0].value:
            best = (res, phi)
    for _ in range(refine_rounds):
        improved = False
        for cand in _refine_neighbors(best[1]):
            res = pd_action(f, cand)
            evaluations += 1
            if res.value < best[0].value:
                best = (res, cand)
                improved = True
        if not improved:
            break

    min_action, bound = best[0].value, best[0].error_bound
    if min_action < -bound:
        verdict = "violation"
    elif min_action < 0.0:
        verdict = "inconclusive-within-tolerance"
    else:
        verdict = "consistent-with-pd"
    return PDReport(min_action=min_action, witness=best[1], verdict=verdict,
                    quadrature_error_bound=bound, mode=mode,
                    family_size=len(family), evaluations=evaluations)


# ---------------------------------------------------------------------------
# independent reference routes


def radon_action(f: HomogeneousFn, phi: TestFunction) -> float:
    """Independent evaluation of the action through slice integrals.

    Valid only for p in (-n, -n+1), where the radial factor pairs with
    |t|^(-n-p) against the (nonnegative) slice integrals of phi:

        inner(theta) = c_{n+p-1} * int |t|^(-n-p) R_phi(theta, t) dt.

    Gaussian test functions only; used as a cross-check oracle for
    pd_action inside that window.
    """
    if phi.kind != "gaussian":
        raise ValueError("slice-integral route is implemented for gaussian tests")
    n, p = f.n, f.p
    cnp = radial_fourier_weight(n, p)  # validates the window
    b = n + p  # weight |t|^(-b), b in (0, 1)
    sigma = phi.width
    amp = phi.normalization * (2.0 * np.pi * sigma**2) ** ((n - 1) / 2.0)
    dirs, w = _sphere_grid(n, _angular_spec(n, phi, fine=True))
    fv = evaluate_many(f, dirs) * w
    c = dirs @ phi.center

    t0 = min(0.3 * sigma, 0.5)
    xj, wj = _jacobi(24, -b)
    tj = t0 * (xj + 1.0) / 2.0
    tmax = np.abs(c).max() + 9.0 * sigma
    tf, wf = _panel_nodes(t0, tmax, 0.5 * sigma, 12)

    def halfline(tnodes, tweights, sign):
        # sum over directions of the integral over t > 0 of t^(-b) g(sign t)
        z = (tnodes[None, :] - sign * c[:, None]) / sigma
        g = amp * np.exp(-0.5 * z**2)
        return g @ tweights

    near = (t0 / 2.0) ** (1.0 - b) * (halfline(tj, wj, +1) + halfline(tj, wj, -1))
    far = halfline(tf, wf * tf ** (-b), +1) + halfline(tf, wf * tf ** (-b), -1)
    inner = cnp * (near + far)
    return 0.5 * float(fv @ inner)


def euclidean_reference_action(n: int, p: float, phi: TestFunction) -> float:
    """Closed-form radial route for f = Euclidean^p against a Gaussian test:

        (f^, phi) = c(n, p) * int |xi|^(-n-p) phi(xi) dxi,
        c(n, p) = 2^(n+p) pi^(n/2) Gamma((n+p)/2) / Gamma(-p/2),

    reduced to one radial quadrature via the spherical average of phi.
    """
    if phi.kind != "gaussian":
        raise ValueError("reference action is implemented for gaussian tests")
    if not (-n < p < 0.0):
        raise ValueError(f"requires p in (-n, 0); got {p}")
    sigma = phi.width
    b = float(np.linalg.norm(phi.center))
    cnp = 2.0 ** (n + p) * np.pi ** (n / 2.0) * _gamma((n + p) / 2.0) / _gamma(-p / 2.0)
    area = 2.0 * np.pi if n == 2 else 4.0 * np.pi

    def sphere_avg(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if b == 0.0:
            return np.exp(-0.5 * (s / sigma) ** 2)
        x = s * b / sigma**2
        if n == 2:
            return i0e(x) * np.exp(-0.5 * ((s - b) / sigma) ** 2)
        small = x < 30.0
        out = np.empty_like(s)
        out[small] = (np.sinh(x[small]) / np.maximum(x[small], 1e-300)
                      * np.exp(-(s[small]**2 + b**2) / (2.0 * sigma**2)))
        zs = s[~small]
        out[~small] = (sigma**2 / (2.0 * zs * b)
                       * (np.exp(-0.5 * ((zs - b) / sigma) ** 2)
                          - np.exp(-0.5 * ((zs + b) / sigma) ** 2)))
        # sinh(x)/x -> 1 as s -> 0
        out[s == 0.0] = np.exp(-b**2 / (2.0 * sigma**2))
        return out

    upper = (b + 9.0 * sigma) ** (-p)

    def integrand(v):
        return float(sphere_avg(float(v) ** (-1.0 / p))[0])

    out = integrate.quad(integrand, 0.0, upper, epsabs=1e-13, epsrel=1e-11,
                         limit=400, full_output=1)
    if len(out) > 3:
        raise QuadratureFailure(f"reference quadrature failed: {out[3]}")
    radial = out[0] / (-p)
    return float(phi.normalization * cnp * area * radial)


_BASE_EXPONENT = {
    LrMatrixBase: lambda b: b.r,
    DiagEuclideanBase: lambda b: 2.0,
    LevyBase: lambda b: b.measure.p,
}


def subordination_norm_power(f: HomogeneousFn, x, r=None) -> float:
    """Reconstruct N(x)^p for p < 0 through the exponential subordination

        N(x)^p = (r / Gamma(-p/r)) * int_0^inf t^(-1-p) exp(-t^r N(x)^r) dt,

    evaluated by quadrature (substitution t = e^u).  Agreement with direct
    evaluation validates the same integral that transports positive
    definiteness of exp(-N^r) to N^p.
    """
    p = f.p
    if p >= 0:
        raise ValueError("subordination reconstruction applies to negative exponents")
    if r is None:
        getter = _BASE_EXPONENT.get(type(f.base))
        if getter is None:
            raise ValueError("no natural subordination exponent for this base; pass r")
        r = getter(f.base)
    r = float(r)
    if r <= 0:
        raise ValueError(f"subordination exponent must be positive, got {r}")
    x = np.asarray(x, dtype=float)
    nval = float(f.base.values(x))
    if nval <= 0:
        raise ValueError("norm vanishes; reconstruction undefined at the origin")
    c = nval**r
    u_star = math.log(-p / (c * r)) / r
    u_lo = u_star - 45.0 / (-p) - 3.0
    u_hi = math.log(50.0 / c) / r
    u_hi = math.log((50.0 + max(0.0, -p * u_hi)) / c) / r + 2.0

    def integrand(u):
        return np.exp(-p * u - c * np.exp(r * u))

    out = integrate.quad(integrand, u_lo, u_hi, epsabs=1e-300, epsrel=1e-12,
                         limit=400, full_output=1)
    if len(out) > 3:
        raise QuadratureFailure(f"subordination quadrature failed: {out[3]}")
    return float(r / _gamma(-p / r) * out[0])
