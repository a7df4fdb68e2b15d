"""Projected Schrödinger operators on d-dimensional tori with period ratios.

The torus has periods 2*pi/alpha_1 >= ... >= 2*pi/alpha_d = 2*pi; the
projection removes the mean along the shortest coordinate, which is what
keeps the eigenvalue-moment constants bounded as the torus elongates.  The
constant in the final bound factorizes as

    (pi/sqrt3)^d * prod_j K1(beta_j) * K2(delta) * L_cl(gamma, d),

where the auxiliary masses beta_j > 0 must keep delta = sum alpha_j^2 beta_j
below 1.  With beta_j at the K1 threshold, delta stays below the K2
threshold for every geometry up to d = 19, and the K-factor product is
exactly 1 (the unit regime).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import interp, special
from .reports import BoundReport
from .spectral1d import negative_spectrum, riesz_mean

__all__ = [
    "TorusGeometry",
    "BetaSelection",
    "ScalarPotentialD",
    "choose_betas",
    "lt_constant_bound",
    "assemble_torus_operator",
    "potential_power_integral",
    "verify_bound_torus",
    "MODE_BUDGET",
]

MODE_BUDGET = 20_000
_THRESHOLD_TOL = 1e-6
_DELTA_CAP = 1.0 - 1e-6


@dataclass(frozen=True)
class TorusGeometry:
    """Period ratios alpha_1 <= ... <= alpha_d = 1 (d >= 2)."""

    alphas: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.alphas)
        object.__setattr__(self, "alphas", a)
        if len(a) < 2:
            raise ValueError("torus geometry needs d >= 2")
        if any(v <= 0 for v in a):
            raise ValueError("period ratios must be positive")
        if any(x > y + 1e-15 for x, y in zip(a, a[1:])):
            raise ValueError("period ratios must be non-decreasing")
        if a[-1] != 1.0:
            raise ValueError("the shortest-coordinate ratio must be exactly 1")

    @property
    def d(self) -> int:
        return len(self.alphas)

    @property
    def periods(self) -> tuple:
        return tuple(2.0 * math.pi / a for a in self.alphas)

    @property
    def volume(self) -> float:
        return float(np.prod(self.periods))


@dataclass(frozen=True)
class BetaSelection:
    """Auxiliary masses, their weighted sum delta, and the K-factor product."""

    betas: tuple
    delta: float
    constant_factor: float
    in_unit_regime: bool

    def __post_init__(self):
        if not self.delta < 1.0:
            raise ValueError("delta must stay below 1")
        if self.in_unit_regime and self.constant_factor != 1.0:
            raise ValueError("unit regime implies factor exactly 1")


@lru_cache(maxsize=None)
def _thresholds(tol: float) -> tuple[float, float]:
    return interp.beta_star(tol), interp.beta_star_star(tol)


@lru_cache(maxsize=None)
def _k1_value(beta: float) -> float:
    return interp.k1(beta).value


@lru_cache(maxsize=None)
def _k2_value(delta: float) -> float:
    return interp.k2(delta).value


def choose_betas(geom: TorusGeometry, threshold_tol: float = _THRESHOLD_TOL) -> BetaSelection:
    """Pick the auxiliary masses for a geometry.

    Working values sit one bisection tolerance inside the K1 = 1 / K2 = 1
    regions, so the unit-regime claim is conservative.  Outside the unit
    regime the K factors are evaluated and reported; if even delta < 1 fails
    at the threshold masses, all of them shrink uniformly until delta hits
    the cap just below 1.
    """
    bs, bss = _thresholds(threshold_tol)
    beta_work = bs + threshold_tol
    bss_work = bss - threshold_tol
    ssq = sum(a * a for a in geom.alphas[:-1])
    delta0 = beta_work * ssq
    if delta0 <= bss_work:
        return BetaSelection(
            betas=(beta_work,) * (geom.d - 1),
            delta=delta0,
            constant_factor=1.0,
            in_unit_regime=True,
        )
    if delta0 < _DELTA_CAP:
        factor = _k1_value(beta_work) ** (geom.d - 1) * _k2_value(delta0)
        return BetaSelection(
            betas=(beta_work,) * (geom.d - 1),
            delta=delta0,
            constant_factor=factor,
            in_unit_regime=False,
        )
    shrink = _DELTA_CAP / delta0
    beta_small = shrink * beta_work
    factor = _k1_value(beta_small) ** (geom.d - 1) * _k2_value(_DELTA_CAP)
    return BetaSelection(
        betas=(beta_small,) * (geom.d - 1),
        delta=_DELTA_CAP,
        constant_factor=factor,
        in_unit_regime=False,
    )


def lt_constant_bound(gamma: float, sel: BetaSelection, d: int) -> float:
    """(pi/sqrt3)^d * K-factor * semiclassical constant in dimension d."""
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    return (
        (math.pi / math.sqrt(3.0)) ** d
        * sel.constant_factor
        * special.semiclassical_constant(gamma, d)
    )


@dataclass(frozen=True)
class ScalarPotentialD:
    """Scalar band-limited potential on the d-torus, conjugate-symmetric
    coefficients indexed by k + band per axis (so V is real)."""

    bands: tuple
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        bands = tuple(int(b) for b in self.bands)
        object.__setattr__(self, "bands", bands)
        expected = tuple(2 * b + 1 for b in bands)
        if self.coeffs.shape != expected:
            raise ValueError(f"coeffs shape {self.coeffs.shape} != {expected}")

    @property
    def d(self) -> int:
        return len(self.bands)

    @classmethod
    def constant(cls, d: int, value: float) -> "ScalarPotentialD":
        if value < 0:
            raise ValueError("constant potential must be >= 0")
        coeffs = np.zeros((1,) * d, dtype=complex)
        coeffs[(0,) * d] = value
        return cls(bands=(0,) * d, coeffs=coeffs)

    @classmethod
    def random(cls, d: int, band: int, scale: float, seed: int) -> "ScalarPotentialD":
        """V = |w|^2 for a random band-limited w; output band doubles."""
        if band < 0 or scale <= 0:
            raise ValueError("invalid potential parameters")
        rng = np.random.default_rng(seed)
        shape = (2 * band + 1,) * d
        w = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
        out_band = 2 * band
        out_shape = (2 * out_band + 1,) * d
        coeffs = np.zeros(out_shape, dtype=complex)
        # autocorrelation v_m = sum_k w_k conj(w_{k-m}) over the overlap box
        for m in itertools.product(range(-out_band, out_band + 1), repeat=d):
            if m < tuple([0] * d):
                continue  # fill the lexicographically negative half by mirroring
            src = []
            dst = []
            for mj in m:
                lo = max(0, mj)
                hi = min(2 * band, 2 * band + mj)
                src.append(slice(lo, hi + 1))
                dst.append(slice(lo - mj, hi - mj + 1))
            val = complex(np.sum(w[tuple(src)] * np.conj(w[tuple(dst)])))
            idx = tuple(mj + out_band for mj in m)
            mirror = tuple(-mj + out_band for mj in m)
            if idx == mirror:
                coeffs[idx] = val.real
            else:
                coeffs[idx] = val
                coeffs[mirror] = val.conjugate()
        pot = cls(bands=(out_band,) * d, coeffs=coeffs)
        pot.validate()
        return pot

    def validate(self, samples: int = 48) -> None:
        """Conjugate symmetry and pointwise non-negativity on a phase grid."""
        flipped = self.coeffs
        for axis in range(self.d):
            flipped = np.flip(flipped, axis=axis)
        if float(np.max(np.abs(flipped.conj() - self.coeffs))) != 0.0:
            raise ValueError("coefficients are not exactly conjugate-symmetric")
        nodes = [min(samples, 4 * (2 * b + 1)) for b in self.bands]
        vals = self.values_on_grid(nodes)
        if float(vals.min()) < -1e-10 * max(1.0, float(np.abs(vals).max())):
            raise ValueError("potential is not pointwise non-negative")

    def values_on_grid(self, nodes) -> np.ndarray:
        """Real values on the uniform phase grid with nodes[j] points per axis."""
        out = self.coeffs
        for axis, (b, n) in enumerate(zip(self.bands, nodes)):
            theta = 2.0 * math.pi * np.arange(n) / n
            phases = np.exp(1j * np.outer(theta, np.arange(-b, b + 1)))
            out = np.moveaxis(np.tensordot(phases, out, axes=([1], [axis])), 0, axis)
        return out.real


def _mode_list(geom: TorusGeometry, n_modes, include_q_block: bool) -> np.ndarray:
    ranges = [np.arange(-n, n + 1) for n in n_modes]
    mesh = np.meshgrid(*ranges, indexing="ij")
    modes = np.stack([m.ravel() for m in mesh], axis=-1)
    if not include_q_block:
        modes = modes[modes[:, -1] != 0]
    return modes


def assemble_torus_operator(
    potential: ScalarPotentialD,
    geom: TorusGeometry,
    n_modes,
    include_q_block: bool = False,
) -> np.ndarray:
    """Galerkin matrix of -Laplacian - P V P on tensor Fourier modes.

    The basis is the range of the mean-removing projection (modes with
    k_d != 0); include_q_block=True appends the complementary k_d = 0 modes,
    on which the operator acts as the bare Laplacian (the projection kills
    the potential coupling there).
    """
    n_modes = tuple(int(n) for n in n_modes)
    if len(n_modes) != geom.d:
        raise ValueError("one truncation per axis required")
    if any(n < b for n, b in zip(n_modes, potential.bands)):
        raise ValueError("truncation must cover the potential band")
    if n_modes[-1] < 1:
        raise ValueError("need at least one mode pair along the projected axis")
    modes = _mode_list(geom, n_modes, include_q_block)
    size = len(modes)
    if size > MODE_BUDGET:
        raise ValueError(f"mode count {size} exceeds budget {MODE_BUDGET}")
    alphas = np.asarray(geom.alphas)
    kinetic = np.sum((alphas * modes) ** 2, axis=1)
    a = np.diag(kinetic.astype(complex))
    bands = np.asarray(potential.bands)
    flat = potential.coeffs.ravel()
    dims = np.asarray(potential.coeffs.shape)
    in_p = modes[:, -1] != 0
    chunk = max(1, 2_000_000 // max(size, 1))
    for start in range(0, size, chunk):
        stop = min(size, start + chunk)
        diff = modes[start:stop, None, :] - modes[None, :, :]
        mask = np.all(np.abs(diff) <= bands, axis=-1)
        mask &= in_p[start:stop, None] & in_p[None, :]
        idx = np.ravel_multi_index(
            tuple((diff[mask] + bands).T), tuple(dims)
        )
        block = np.zeros((stop - start, size), dtype=complex)
        block[mask] = flat[idx]
        a[start:stop, :] -= block
    return a


def potential_power_integral(
    potential: ScalarPotentialD, geom: TorusGeometry, p: float, grid=None
) -> float:
    """Tensor rectangle rule for int V^p, with V clipped to >= 0 pointwise."""
    if p < 1:
        raise ValueError("power p must be >= 1")
    nodes = (
        tuple(int(g) for g in grid)
        if grid is not None
        else tuple(8 * (2 * b + 1) for b in potential.bands)
    )
    vals = np.clip(potential.values_on_grid(nodes), 0.0, None)
    cell = geom.volume / float(np.prod(nodes))
    return float(cell * np.sum(vals**p))


def verify_bound_torus(
    potential: ScalarPotentialD,
    geom: TorusGeometry,
    gamma: float,
    n_modes=None,
    grid=None,
    seed: int | None = None,
) -> BoundReport:
    """Check the eigenvalue-moment bound on the projected torus operator.

    lhs: gamma-moment of the Galerkin negative spectrum (lower bound);
    rhs: unit-regime-aware constant times int V^(gamma + d/2).
    """
    if n_modes is None:
        n_modes = tuple(b + 12 for b in potential.bands)
    sel = choose_betas(geom)
    const = lt_constant_bound(gamma, sel, geom.d)
    a = assemble_torus_operator(potential, geom, n_modes)
    rep = negative_spectrum(a, operator="torus", truncation=max(n_modes))
    lhs = riesz_mean(rep, gamma)
    quad_nodes = (
        tuple(int(g) for g in grid)
        if grid is not None
        else tuple(8 * (2 * b + 1) for b in potential.bands)
    )
    rhs = const * potential_power_integral(potential, geom, gamma + 0.5 * geom.d, quad_nodes)
    meta = {
        "operator": "torus",
        "gamma": gamma,
        "d": geom.d,
        "alphas": list(geom.alphas),
        "betas": list(sel.betas),
        "delta": sel.delta,
        "unit_regime": sel.in_unit_regime,
        "truncation": list(n_modes),
        "quadrature": list(quad_nodes),
        "negative_count": len(rep.negatives),
        "lhs_is_lower_bound": True,
    }
    if seed is not None:
        meta["seed"] = seed
    return BoundReport.build(lhs, rhs, constant_used=const, **meta)
