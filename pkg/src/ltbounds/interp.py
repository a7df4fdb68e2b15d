"""Sharp constants of the two coth-type interpolation inequalities.

The two inequalities bound ||u||_inf^2 by the geometric mean of an H^1-type
quadratic form and the L^2 norm on a circle.  Their sharp constants have the
closed forms

    K1(beta) = sup_{lam>0} sqrt(lam) * coth(pi*sqrt(beta+lam)) / sqrt(beta+lam)
    K2(beta) = sup_{lam>0} sqrt(lam) * (h(lam-beta) - 1/pi) / (lam-beta)

with h the sqrt-coth kernel from :mod:`ltbounds.special`.  Both objectives
tend to 1 as lam -> inf, so each constant equals max(1, interior maximum).
K1 is non-increasing in beta and equals 1 above a threshold beta_star; K2 is
non-decreasing and equals 1 below a threshold beta_star_star.  The two
thresholds are located by bisection on the interior maximum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import special

__all__ = [
    "SolverOptions",
    "ConstantResult",
    "CurveTable",
    "g_objective",
    "f_objective",
    "k1",
    "k2",
    "beta_star",
    "beta_star_star",
    "series_bound_check",
    "export_curve",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the sup-over-lambda search.

    The logarithmic grid guards against missed peaks near the origin; the
    golden-section pass refines the best grid point to refine_rel_tol
    relative accuracy in lambda.
    """

    lambda_min: float = 1e-10
    lambda_max: float = 1e8
    grid_points: int = 2000
    refine: bool = True
    refine_rel_tol: float = 1e-12
    # Interior maxima within this distance of 1 still get a reported argmax:
    # at the K2 threshold the sup is attained at a finite point and at
    # infinity simultaneously, and the finite maximizer is the useful datum.
    argmax_tie_tol: float = 1e-9


DEFAULT_OPTS = SolverOptions()


@dataclass(frozen=True)
class ConstantResult:
    """A sharp-constant value together with solver diagnostics.

    value = max(1, interior_max).  argmax_lambda is None when the supremum
    is attained only in the lam -> inf limit.
    """

    beta: float
    value: float
    argmax_lambda: float | None
    interior_max: float
    grid_points: int
    refined: bool


def g_objective(lam, beta):
    """sqrt(lam) * coth(pi*sqrt(beta+lam)) / sqrt(beta+lam)  for lam, beta > 0.

    Equals twice sqrt(lam) times the diagonal Green's function of
    -d^2/dx^2 + beta + lam on the unit circle (after rescaling the period
    away).  Accepts scalars or arrays in lam.
    """
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise ValueError("g_objective requires lambda > 0")
    if beta <= 0:
        raise ValueError("g_objective requires beta > 0")
    s = beta + lam_arr
    out = np.sqrt(lam_arr) * np.asarray(special.xcoth_kernel(s)) / s
    return float(out) if lam_arr.ndim == 0 else out


def f_objective(lam, beta):
    """sqrt(lam) * (h(lam-beta) - 1/pi) / (lam-beta)  for lam > 0, 0 <= beta < 1.

    The zero-mean-subspace analogue of :func:`g_objective`; the argument
    lam - beta may be negative (down to -beta > -1) and crosses zero
    smoothly.
    """
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise ValueError("f_objective requires lambda > 0")
    if not 0.0 <= beta < 1.0:
        raise ValueError("f_objective requires beta in [0, 1)")
    out = np.sqrt(lam_arr) * np.asarray(special.xcoth_excess(lam_arr - beta))
    return float(out) if lam_arr.ndim == 0 else out


def _golden_max(fn, log_lo: float, log_hi: float, tol: float) -> tuple[float, float]:
    # Golden-section maximization on log-lambda.
    a, b = log_lo, log_hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = fn(math.exp(c))
    fd = fn(math.exp(d))
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(math.exp(d))
    return (math.exp(c), fc) if fc >= fd else (math.exp(d), fd)


def _interior_max(fn, opts: SolverOptions) -> tuple[float, float, bool]:
    """Locate the maximum of fn over the lambda grid.

    Returns (lam_best, value_best, interior) where interior is False when
    the best grid point sits on the grid boundary, i.e. the scan found no
    interior peak and the 'maximum' is really the approach to a limit.
    """
    grid = np.geomspace(opts.lambda_min, opts.lambda_max, opts.grid_points)
    vals = fn(grid)
    i = int(np.argmax(vals))
    interior = 0 < i < opts.grid_points - 1
    lam_best, v_best = float(grid[i]), float(vals[i])
    if opts.refine:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, opts.grid_points - 1)]
        tol = math.log1p(opts.refine_rel_tol)
        lam_ref, v_ref = _golden_max(fn, math.log(lo), math.log(hi), tol)
        if v_ref > v_best:
            lam_best, v_best = lam_ref, v_ref
    return lam_best, v_best, interior


def _constant(fn, beta: float, opts: SolverOptions) -> ConstantResult:
    lam_best, v_best, interior = _interior_max(fn, opts)
    value = max(1.0, v_best)
    report_argmax = interior and v_best > 1.0 - opts.argmax_tie_tol
    return ConstantResult(
        beta=float(beta),
        value=float(value),
        argmax_lambda=float(lam_best) if report_argmax else None,
        interior_max=float(v_best),
        grid_points=opts.grid_points,
        refined=opts.refine,
    )


def k1(beta: float, opts: SolverOptions = DEFAULT_OPTS) -> ConstantResult:
    """Sharp constant of the mass-added inequality: 2 sup sqrt(lam) g_beta(lam)."""
    if beta <= 0:
        raise ValueError("k1 requires beta > 0")
    return _constant(lambda lam: g_objective(lam, beta), beta, opts)


def k2(beta: float, opts: SolverOptions = DEFAULT_OPTS) -> ConstantResult:
    """Sharp constant of the mass-subtracted (zero-mean) inequality."""
    if not 0.0 <= beta < 1.0:
        raise ValueError("k2 requires beta in [0, 1)")
    return _constant(lambda lam: f_objective(lam, beta), beta, opts)


def beta_star(tol: float = 1e-6, opts: SolverOptions = DEFAULT_OPTS) -> float:
    """Smallest beta with K1(beta) = 1, by bisection on the interior maximum.

    K1 is monotone non-increasing, so the excess (interior max - 1) changes
    sign exactly once on the bracket [1e-4, 1].
    """
    if not 0.0 < tol <= 0.01:
        raise ValueError("tol must lie in (0, 0.01]")
    lo, hi = 1e-4, 1.0

    def excess(b: float) -> float:
        return k1(b, opts).interior_max - 1.0

    if not (excess(lo) > 0.0 and excess(hi) < 0.0):
        raise RuntimeError("beta_star bracket failure: excess does not change sign")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def beta_star_star(tol: float = 1e-6, opts: SolverOptions = DEFAULT_OPTS) -> float:
    """Largest beta with K2(beta) = 1; mirror image of :func:`beta_star`.

    K2 is monotone non-decreasing; bracket [0, 1 - 1e-6].
    """
    if not 0.0 < tol <= 0.01:
        raise ValueError("tol must lie in (0, 0.01]")
    lo, hi = 0.0, 1.0 - 1e-6

    def excess(b: float) -> float:
        return k2(b, opts).interior_max - 1.0

    if not (excess(lo) < 0.0 and excess(hi) > 0.0):
        raise RuntimeError("beta_star_star bracket failure: excess does not change sign")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _tail_integral(c: float, x: float) -> float:
    # int_x^inf dt / (t^2 + c); c may be negative provided x > sqrt(-c).
    if c > 0:
        rc = math.sqrt(c)
        return (0.5 * math.pi - math.atan(x / rc)) / rc
    if c == 0:
        return 1.0 / x
    a = math.sqrt(-c)
    if x <= a:
        raise ValueError("tail integral diverges for x <= sqrt(-c)")
    return 0.5 / a * math.log((x + a) / (x - a))


def series_bound_check(
    beta: float, lam: float, which: str, terms: int = 100_000
) -> tuple[float, float]:
    """Direct lattice-sum side of the defining inequality of K1/K2.

    Returns (series value with integral tail correction, K * pi / sqrt(lam)).
    The first must not exceed the second; callers assert it.  The tail
    sum_{|k|>K} 1/(k^2+c) is sandwiched between integrals from K and K+1,
    and their mean is used as the correction.
    """
    if lam <= 0:
        raise ValueError("series_bound_check requires lambda > 0")
    k = np.arange(1, terms + 1, dtype=float)
    if which == "k1":
        if beta <= 0:
            raise ValueError("which='k1' requires beta > 0")
        c = beta + lam
        partial = 1.0 / c + 2.0 * float(np.sum(1.0 / (k * k + c)))
        const = k1(beta).value
    elif which == "k2":
        if not 0.0 <= beta < 1.0:
            raise ValueError("which='k2' requires beta in [0, 1)")
        c = lam - beta
        partial = 2.0 * float(np.sum(1.0 / (k * k + c)))
        const = k2(beta).value
    else:
        raise ValueError(f"which must be 'k1' or 'k2', got {which!r}")
    tail = 2.0 * 0.5 * (_tail_integral(c, terms) + _tail_integral(c, terms + 1))
    return partial + tail, const * math.pi / math.sqrt(lam)


@dataclass(frozen=True)
class CurveTable:
    """Sampled constant-vs-beta curve, ready for CSV/JSON export."""

    which: str
    rows: tuple  # of (beta, value, argmax_lambda or None)

    def to_csv(self) -> str:
        lines = ["beta,K,argmax_lambda"]
        for beta, value, argmax in self.rows:
            sentinel = "inf" if argmax is None else repr(argmax)
            lines.append(f"{beta!r},{value!r},{sentinel}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "which": self.which,
            "rows": [
                {"beta": b, "K": v, "argmax_lambda": a} for b, v, a in self.rows
            ],
        }
        return json.dumps(payload, sort_keys=True)


def export_curve(
    which: str,
    beta_min: float,
    beta_max: float,
    n: int,
    opts: SolverOptions = DEFAULT_OPTS,
) -> CurveTable:
    """Sample K1 or K2 on n equispaced betas and enforce monotonicity.

    K1 must be non-increasing and K2 non-decreasing; a violation beyond
    solver noise indicates a sup-search bug, hence the assertion.
    """
    if n < 2:
        raise ValueError("need at least 2 sample points")
    if beta_min >= beta_max:
        raise ValueError("beta_min must be < beta_max")
    if which == "k1":
        solve = k1
    elif which == "k2":
        solve = k2
    else:
        raise ValueError(f"which must be 'k1' or 'k2', got {which!r}")
    betas = np.linspace(beta_min, beta_max, n)
    rows = []
    for b in betas:
        res = solve(float(b), opts)
        rows.append((res.beta, res.value, res.argmax_lambda))
    values = [r[1] for r in rows]
    sign = -1.0 if which == "k1" else 1.0
    for prev, cur in zip(values, values[1:]):
        assert sign * (cur - prev) >= -1e-10, f"{which} curve failed monotonicity"
    return CurveTable(which=which, rows=tuple(rows))
