"""Hermite functions, their sampled vectors, and the convergence diagnostic.

The Hermite function psi_n is evaluated through normalized Hermite
polynomials h_n = (2^n n!)^(-1/2) H_n, which satisfy

    h_0 = 1,  h_1(x) = sqrt(2) x,
    h_{n+1}(x) = sqrt(2/(n+1)) x h_n(x) - sqrt(n/(n+1)) h_{n-1}(x),

so psi_n(x) = pi^(-1/4) e^(-x^2/2) h_n(x).  This route is stable and O(n)
per point; no derivatives or large factorials appear.

The sampled vector on I_N is

    Psi_n(k) = omega^(1/4) psi_n(sqrt(omega) k),   omega = 2 pi / N,

which is a unit DFT eigenvector up to exponentially small corrections, and
the basis vectors T_n converge to Psi_n at rate O(N^(-1+eps)) once signs are
aligned.  ``convergence_report`` measures e_n(N) = min over sign of
||T_n - Psi_n|| across a grid of dimensions and fits the decay exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mp

from .core import IndexSet, PeriodicVector, PrecisionContext, default_digits, norm_diff
from .basis import SeedFormulaError, _recurrence_vectors
from .seeds import SeedFamily

__all__ = [
    "HermiteEvaluator", "SampledHermite", "psi", "sample_psi",
    "gaussian_vector", "align_sign", "convergence_report", "ConvergenceReport",
]

CONVERGENCE_MIN_DIGITS = 300


class HermiteEvaluator:
    """Evaluator for psi_0..psi_max_order at a fixed working precision."""

    def __init__(self, max_order: int, ctx: PrecisionContext):
        if max_order < 0:
            raise ValueError("max_order must be nonnegative")
        self.max_order = max_order
        self.ctx = ctx
        with ctx.workdps():
            self._quarter_root_pi = mp.pi ** mp.mpf("-0.25")
            # recurrence coefficients sqrt(2/(m+1)), sqrt(m/(m+1))
            self._c = [(mp.sqrt(mp.mpf(2) / (m + 1)), mp.sqrt(mp.mpf(m) / (m + 1)))
                       for m in range(max_order + 1)]

    def h_all(self, x) -> list:
        """Normalized Hermite polynomials h_0(x)..h_max(x)."""
        with self.ctx.workdps():
            out = [mp.mpf(1)]
            if self.max_order >= 1:
                out.append(mp.sqrt(2) * x)
            for m in range(1, self.max_order):
                cu, cd = self._c[m]
                out.append(cu * x * out[m] - cd * out[m - 1])
            return out

    def psi_all(self, x) -> list:
        """psi_0(x)..psi_max(x), sharing one Gaussian evaluation."""
        with self.ctx.workdps():
            g = self._quarter_root_pi * mp.exp(-x * x / 2)
            return [g * h for h in self.h_all(x)]

    def psi(self, n: int, x):
        if not 0 <= n <= self.max_order:
            raise ValueError(f"order {n} outside evaluator range 0..{self.max_order}")
        return self.psi_all(x)[n]


def psi(n: int, x, ctx: PrecisionContext):
    """Hermite function psi_n(x) at working precision."""
    return HermiteEvaluator(n, ctx).psi(n, x)


@dataclass
class SampledHermite:
    """Psi_n on I_N: the Hermite function sampled at sqrt(omega) k and scaled
    by omega^(1/4); carries parity of n exactly by construction."""

    order: int
    n_dim: int
    vector: PeriodicVector


def sample_psi_upto(max_order: int, n_dim: int,
                    ctx: PrecisionContext) -> List[SampledHermite]:
    """All of Psi_0..Psi_max in one sweep (one psi recurrence per grid point).

    Entries are evaluated for k >= 0 and mirrored with the parity sign, so
    the sampled vectors are exactly even/odd entrywise.
    """
    idx = IndexSet(n_dim)
    ev = HermiteEvaluator(max_order, ctx)
    with ctx.workdps():
        omega = 2 * mp.pi / n_dim
        scale = omega ** mp.mpf("0.25")
        root = mp.sqrt(omega)
        by_abs = {k: ev.psi_all(root * k) for k in range(0, idx.hi + 1)}
        out = []
        for n in range(max_order + 1):
            sgn = -1 if n % 2 else 1
            vals = [scale * (by_abs[k][n] if k >= 0 else sgn * by_abs[-k][n])
                    for k in idx]
            out.append(SampledHermite(n, n_dim, PeriodicVector(idx, vals)))
    return out


def sample_psi(n: int, n_dim: int, ctx: PrecisionContext) -> SampledHermite:
    return sample_psi_upto(n, n_dim, ctx)[n]


def gaussian_vector(n_dim: int, ctx: PrecisionContext) -> PeriodicVector:
    """G(k) = (omega/pi)^(1/4) e^(-omega k^2 / 2), the direct form of Psi_0."""
    idx = IndexSet(n_dim)
    with ctx.workdps():
        omega = 2 * mp.pi / n_dim
        c = (omega / mp.pi) ** mp.mpf("0.25")
        by_abs = {k: c * mp.exp(-omega * k * k / 2) for k in range(0, idx.hi + 1)}
        return PeriodicVector(idx, [by_abs[abs(k)] for k in idx])


def align_sign(t: PeriodicVector, psi_vec: SampledHermite) -> Tuple[PeriodicVector, int]:
    """Flip t so it best matches Psi_n; returns (s*t, s) with s in {+1, -1}."""
    plus = norm_diff(t, psi_vec.vector)
    minus = norm_diff(-t, psi_vec.vector)
    return (t, 1) if plus <= minus else (-t, -1)


@dataclass
class ConvergenceReport:
    """e_n(N) table plus decay diagnostics for T_n -> Psi_n."""

    orders: List[int]
    dims: List[int]
    digits: int
    errors: Dict[int, List[object]]        # order -> e_n(N) per dim, mpf
    ratios: Dict[int, List[object]]        # order -> e_n(N_i)/e_n(N_{i+1})
    monotone: Dict[int, bool]
    exponents: Dict[int, Optional[float]]  # least-squares log-log slope
    fit_residuals: Dict[int, Optional[float]]

    def as_dict(self) -> dict:
        return {
            "schema_version": 1,
            "orders": self.orders,
            "dims": self.dims,
            "digits": self.digits,
            "errors": {n: [mp.nstr(e, 12) for e in row]
                       for n, row in self.errors.items()},
            "ratios": {n: [mp.nstr(r, 8) for r in row]
                       for n, row in self.ratios.items()},
            "monotone": self.monotone,
            "exponents": self.exponents,
            "fit_residuals": self.fit_residuals,
        }


def _loglog_fit(dims: Sequence[int], errors: Sequence) -> Tuple[Optional[float], Optional[float]]:
    """Least-squares slope of log e against log N, with RMS residual.

    Needs at least three points to be meaningful; returns (None, None) below.
    """
    if len(dims) < 3:
        return None, None
    xs = [math.log(n) for n in dims]
    ys = [float(mp.log(e)) for e in errors]
    xm = sum(xs) / len(xs)
    ym = sum(ys) / len(ys)
    sxx = sum((x - xm) ** 2 for x in xs)
    slope = sum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / sxx
    icept = ym - slope * xm
    rms = math.sqrt(sum((y - (icept + slope * x)) ** 2
                        for x, y in zip(xs, ys)) / len(xs))
    return slope, rms


def convergence_report(orders: Sequence[int], dims: Sequence[int],
                       ctx: Optional[PrecisionContext] = None) -> ConvergenceReport:
    """Measure e_n(N) = min-sign ||T_n - Psi_n|| over the given grid.

    Only the basis columns up to max(orders) are built for each N.  The
    default precision floor is 300 digits: far more than these shallow
    columns need, cheap at this scale, and generous headroom for the
    subtraction of near-equal unit vectors.
    """
    orders = sorted(set(orders))
    dims = sorted(set(dims))
    if not orders or not dims:
        raise ValueError("orders and dims must be nonempty")
    if any(n < 0 for n in orders):
        raise ValueError("orders must be nonnegative")
    max_order = orders[-1]
    for n_dim in dims:
        if max_order >= n_dim:
            raise ValueError(f"order {max_order} does not exist for N={n_dim}")
    if ctx is None:
        ctx = PrecisionContext(
            digits=max(CONVERGENCE_MIN_DIGITS, default_digits(max(dims))))

    errors: Dict[int, List] = {n: [] for n in orders}
    for n_dim in dims:
        family = SeedFamily(n_dim, ctx)
        vectors, _, _, _ = _recurrence_vectors(family, ctx, max_order=max_order)
        sampled = sample_psi_upto(max_order, n_dim, ctx)
        with ctx.workdps():
            for n in orders:
                if n not in vectors:
                    raise SeedFormulaError(
                        f"T_{n} unavailable for N={n_dim}")
                aligned, _ = align_sign(vectors[n], sampled[n])
                errors[n].append(norm_diff(aligned, sampled[n].vector))

    ratios = {n: [errors[n][i] / errors[n][i + 1] for i in range(len(dims) - 1)]
              for n in orders}
    monotone = {n: all(errors[n][i] > errors[n][i + 1] for i in range(len(dims) - 1))
                for n in orders}
    fits = {n: _loglog_fit(dims, errors[n]) for n in orders}
    return ConvergenceReport(
        orders=list(orders),
        dims=list(dims),
        digits=ctx.digits,
        errors=errors,
        ratios=ratios,
        monotone=monotone,
        exponents={n: fits[n][0] for n in orders},
        fit_residuals={n: fits[n][1] for n in orders},
    )
