"""Orthonormal families of periodic vector functions and trace inequalities.

A family is stored by its Fourier coefficients in the orthonormal basis
sqrt(alpha/2pi) exp(i k alpha x), so the Gram matrix, the L2 norms and the
kinetic quadratic forms are all exact finite sums (Parseval).  Only the
cubed-density integral needs quadrature.

The verifiers check

    int Tr[U(x,x)^3] dx <= K^2 * sum_n sum_j (kinetic form of member n,j)

with U(x,y) the rank-N kernel sum phi_n(x) phi_n(y)^H, K = K1(beta) for the
(+ a^2 beta) form and K = K2(beta) for the zero-mean (- beta) form.  The
inequalities remain valid for suborthonormal families, so the verifiers do
not insist on an exactly orthonormal input.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import interp
from .reports import BoundReport, ConvergenceError

__all__ = [
    "OrthonormalFamily",
    "random_orthonormal_family",
    "density_and_kinetic",
    "verify_trace1",
    "verify_trace2",
    "verify_interpolation",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class OrthonormalFamily:
    """coeffs[n, k+band, j] is member n's coefficient of mode k, component j."""

    n_members: int
    m_dim: int
    band: int
    period: float
    zero_mean: bool
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = (self.n_members, 2 * self.band + 1, self.m_dim)
        if self.coeffs.shape != expected:
            raise ValueError(f"coeffs shape {self.coeffs.shape} != {expected}")

    @property
    def alpha(self) -> float:
        return TWO_PI / self.period

    def gram_matrix(self) -> np.ndarray:
        flat = self.coeffs.reshape(self.n_members, -1)
        return flat @ flat.conj().T

    def gram_defect(self) -> float:
        return float(
            np.max(np.abs(self.gram_matrix() - np.eye(self.n_members)))
        ) if self.n_members else 0.0

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Member values at nodes; shape (n_members, len(x), m_dim)."""
        ks = np.arange(-self.band, self.band + 1)
        phases = np.exp(1j * self.alpha * np.outer(np.asarray(x, float), ks))
        basis = math.sqrt(self.alpha / TWO_PI)
        return basis * np.einsum("xk,nkj->nxj", phases, self.coeffs)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_members": self.n_members,
                "m_dim": self.m_dim,
                "band": self.band,
                "period": self.period,
                "zero_mean": self.zero_mean,
                "coeffs_re": self.coeffs.real.tolist(),
                "coeffs_im": self.coeffs.imag.tolist(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, payload: str) -> "OrthonormalFamily":
        data = json.loads(payload)
        coeffs = np.asarray(data["coeffs_re"]) + 1j * np.asarray(data["coeffs_im"])
        return cls(
            n_members=data["n_members"],
            m_dim=data["m_dim"],
            band=data["band"],
            period=data["period"],
            zero_mean=data["zero_mean"],
            coeffs=coeffs,
        )


def random_orthonormal_family(
    n_members: int,
    m_dim: int,
    band: int,
    period: float,
    zero_mean: bool,
    seed: int,
) -> OrthonormalFamily:
    """Gaussian coefficients orthonormalized by QR in coefficient space.

    With zero_mean the k = 0 coefficients are excluded from the working
    space, so they come out exactly zero.  Retries up to 3 fresh draws on
    (numerically impossible but cheap to guard) rank deficiency.
    """
    capacity = m_dim * (2 * band if zero_mean else 2 * band + 1)
    if n_members < 0 or n_members > capacity:
        raise ValueError(f"cannot fit {n_members} orthonormal members in dimension {capacity}")
    shape = (n_members, 2 * band + 1, m_dim)
    if n_members == 0:
        return OrthonormalFamily(0, m_dim, band, period, zero_mean, np.zeros(shape, complex))
    keep = np.ones(2 * band + 1, dtype=bool)
    if zero_mean:
        keep[band] = False
    rng = np.random.default_rng(seed)
    for _ in range(3):
        x = rng.standard_normal((capacity, n_members)) + 1j * rng.standard_normal(
            (capacity, n_members)
        )
        q, r = np.linalg.qr(x)
        if float(np.min(np.abs(np.diag(r)))) > 1e-10:
            coeffs = np.zeros(shape, dtype=complex)
            coeffs[:, keep, :] = q.T.reshape(n_members, int(keep.sum()), m_dim)
            fam = OrthonormalFamily(n_members, m_dim, band, period, zero_mean, coeffs)
            defect = fam.gram_defect()
            if defect > 1e-12:
                raise AssertionError(f"Gram defect {defect:.3e} exceeds 1e-12")
            return fam
    raise RuntimeError("rank-deficient draws three times in a row")


def _mode_weights(fam: OrthonormalFamily, beta: float, mode: str) -> np.ndarray:
    ks = np.arange(-fam.band, fam.band + 1, dtype=float)
    if mode == "add":
        return (fam.alpha * ks) ** 2 + fam.alpha**2 * beta
    if mode == "subtract":
        return ks**2 - beta
    raise ValueError(f"mode must be 'add' or 'subtract', got {mode!r}")


def _check_mode_preconditions(fam: OrthonormalFamily, beta: float, mode: str) -> None:
    if mode == "subtract":
        if not fam.zero_mean:
            raise ValueError("subtract mode requires a zero-mean family")
        if not 0.0 <= beta < 1.0:
            raise ValueError("subtract mode requires beta in [0, 1)")
        if abs(fam.period - TWO_PI) > 1e-9 * TWO_PI:
            raise ValueError("subtract mode lives on period 2*pi")
    elif mode == "add":
        if beta <= 0:
            raise ValueError("add mode requires beta > 0")
    else:
        raise ValueError(f"mode must be 'add' or 'subtract', got {mode!r}")


def density_and_kinetic(
    fam: OrthonormalFamily,
    beta: float,
    mode: str,
    grid: int | None = None,
    check: bool = True,
) -> tuple[float, float]:
    """(integral of Tr[U(x,x)^3], kinetic quadratic form) for the family.

    The kinetic sum is exact by Parseval; the cubed-density integral uses a
    uniform grid with a doubling convergence check (the integrand is a trig
    polynomial of total degree 6*band, so the default grid is alias-free and
    the check is belt and braces).
    """
    _check_mode_preconditions(fam, beta, mode)
    n = grid if grid is not None else 8 * (2 * fam.band + 1)
    if n < 4 * (2 * fam.band + 1):
        raise ValueError("quadrature grid below minimum")

    def rho_cubed(nodes: int) -> float:
        x = np.arange(nodes) * (fam.period / nodes)
        vals = fam.evaluate(x)
        u = np.einsum("nxa,nxb->xab", vals, vals.conj())
        tr3 = np.einsum("xab,xbc,xca->x", u, u, u).real
        return float(fam.period / nodes * np.sum(tr3))

    value = rho_cubed(n)
    if check:
        refined = rho_cubed(2 * n)
        if abs(refined - value) > 1e-8 * max(1.0, abs(refined)):
            raise ConvergenceError("cubed-density integral moved under grid doubling")
        value = refined
    weights = _mode_weights(fam, beta, mode)
    kinetic = float(np.einsum("k,nkj->", weights, np.abs(fam.coeffs) ** 2).real)
    return value, kinetic


def verify_trace1(fam: OrthonormalFamily, alpha: float, beta: float, seed: int | None = None) -> BoundReport:
    """Cubed-density trace bound with the mass-added kinetic form and K1^2."""
    if abs(fam.period - TWO_PI / alpha) > 1e-9 * fam.period:
        raise ValueError("family period does not match 2*pi/alpha")
    lhs, kinetic = density_and_kinetic(fam, beta, "add")
    k_const = interp.k1(beta).value
    rhs = k_const**2 * kinetic
    meta = {
        "kind": "trace_add",
        "beta": beta,
        "alpha": alpha,
        "n_members": fam.n_members,
        "m_dim": fam.m_dim,
        "band": fam.band,
    }
    if seed is not None:
        meta["seed"] = seed
    return BoundReport.build(lhs, rhs, constant_used=k_const**2, **meta)


def verify_trace2(fam: OrthonormalFamily, beta: float, seed: int | None = None) -> BoundReport:
    """Zero-mean mirror of :func:`verify_trace1`, with K2(beta)^2."""
    lhs, kinetic = density_and_kinetic(fam, beta, "subtract")
    k_const = interp.k2(beta).value
    rhs = k_const**2 * kinetic
    meta = {
        "kind": "trace_subtract",
        "beta": beta,
        "n_members": fam.n_members,
        "m_dim": fam.m_dim,
        "band": fam.band,
    }
    if seed is not None:
        meta["seed"] = seed
    return BoundReport.build(lhs, rhs, constant_used=k_const**2, **meta)


def verify_interpolation(
    coeffs: np.ndarray,
    which: str,
    beta: float,
    alpha: float = 1.0,
) -> BoundReport:
    """Single-function inequality ||u||_inf^2 <= K * sqrt(Q(u)) * sqrt(||u||^2).

    coeffs are the mode coefficients of u in the orthonormal exponential
    basis, length 2*band+1.  The sup norm is taken from a dense grid of
    |u|^2 plus one Newton step at the best node, which slightly
    under-estimates the true sup; Q is the mode-weighted quadratic form,
    exact by Parseval.  Complex u is allowed (the inequality survives the
    real/imaginary split).
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or len(c) % 2 == 0:
        raise ValueError("coeffs must be a 1D array of odd length")
    band = (len(c) - 1) // 2
    ks = np.arange(-band, band + 1, dtype=float)
    if which == "subtract":
        if not 0.0 <= beta < 1.0:
            raise ValueError("subtract mode requires beta in [0, 1)")
        if abs(alpha - 1.0) > 1e-12:
            raise ValueError("subtract mode lives on the period-2*pi circle")
        if abs(c[band]) > 1e-12 * max(1.0, float(np.linalg.norm(c))):
            raise ValueError("subtract mode requires a zero-mean function")
        weights = ks**2 - beta
        k_const = interp.k2(beta).value
    elif which == "add":
        if beta <= 0:
            raise ValueError("add mode requires beta > 0")
        weights = (alpha * ks) ** 2 + alpha**2 * beta
        k_const = interp.k1(beta).value
    else:
        raise ValueError(f"which must be 'add' or 'subtract', got {which!r}")

    period = TWO_PI / alpha
    n = 16 * (2 * band + 1)
    x = np.arange(n) * (period / n)
    basis = math.sqrt(alpha / TWO_PI)
    phases = np.exp(1j * alpha * np.outer(x, ks))
    u = basis * phases @ c
    q = np.abs(u) ** 2
    i0 = int(np.argmax(q))
    sup2 = float(q[i0])

    # one Newton step on |u|^2 at the best node
    du = basis * phases @ (1j * alpha * ks * c)
    d2u = basis * phases @ (-((alpha * ks) ** 2) * c)
    g1 = 2.0 * float((u[i0].conjugate() * du[i0]).real)
    g2 = 2.0 * float((np.abs(du[i0]) ** 2 + (u[i0].conjugate() * d2u[i0]).real))
    if g2 < 0.0:
        step = -g1 / g2
        if abs(step) <= period / n:
            xr = x[i0] + step
            ur = basis * np.exp(1j * alpha * xr * ks) @ c
            sup2 = max(sup2, float(np.abs(ur) ** 2))

    norm2 = float(np.sum(np.abs(c) ** 2))
    quad_form = float(np.sum(weights * np.abs(c) ** 2))
    rhs = k_const * math.sqrt(max(quad_form, 0.0)) * math.sqrt(norm2)
    return BoundReport.build(
        sup2,
        rhs,
        constant_used=k_const,
        kind=f"interpolation_{which}",
        beta=beta,
        alpha=alpha,
        band=band,
        grid=n,
        lhs_is_lower_bound=True,
    )
