"""Scalar seed sequences and the Gaussian-type vector families.

For a fixed dimension N (omega = 2 pi / N) this module builds

    S(k)    = prod_{j=1..k} 2 sin(omega j / 2),  S(0) = 1,
    alpha_n, beta_n   (normalization scalars, branching on the parity of N),
    t_k     = (2/sqrt(omega)) sin(omega k / 2),

and from them the even vectors u_n (0 <= n <= floor(N/2)) and odd vectors
v_n (0 < n < ceil(N/2)).  Each family member has width exactly n and maps to
another member under the centered DFT:

    F u_n = u_{floor(N/2)-n},        F v_n = -i v_{ceil(N/2)-n}.

Two independent evaluation routes are kept on purpose: the production path
uses closed forms built from the S table (O(n) per entry, entries outside
|k| <= n set to exact zero), while the defining products over (1-(t_k/t_j)^2)
serve as a brute-force oracle for verification.

S(k) for 2k >= N is computed by the reflection S(k) = N / S(N-1-k) rather
than by extending the product, which avoids multiplying many near-zero
factors.  alpha_n and beta_n are stored premultiplied by S(n)^2, the
combination the closed forms actually consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from mpmath import mp

from .core import (IndexSet, PeriodicVector, PrecisionContext, DftOperator,
                   norm, norm_diff)

__all__ = ["SeedFamily", "FourierPairReport", "check_fourier_pairs"]


# ---------------------------------------------------------------------------
# context-generic kernels (mctx is mpmath's mp, or iv under error tracking)

def s_table(n_dim: int, mctx=mp) -> list:
    """S(0..N-1); direct product while 2k < N, reflection N/S(N-1-k) after."""
    omega = 2 * mctx.pi / n_dim
    tab = [mctx.mpf(1)] * n_dim
    for k in range(1, n_dim):
        if 2 * k >= n_dim:
            break
        tab[k] = tab[k - 1] * (2 * mctx.sin(omega * k / 2))
    for k in range(n_dim - 1, 0, -1):
        if 2 * k >= n_dim:
            tab[k] = n_dim / tab[n_dim - 1 - k]
    return tab


def alpha_s2(n: int, n_dim: int, s_tab: list, mctx=mp):
    """alpha_n * S(n)^2."""
    if n == 0:
        return mctx.mpf(1) if n_dim % 2 else mctx.mpf(0.5)
    omega = 2 * mctx.pi / n_dim
    if n_dim % 2:
        return mctx.sqrt(s_tab[2 * n])
    return mctx.sqrt(s_tab[2 * n - 1] * mctx.sin(omega * n / 2))


def beta_s2(n: int, n_dim: int, s_tab: list, mctx=mp):
    """beta_n * S(n)^2."""
    omega = 2 * mctx.pi / n_dim
    if n_dim % 2:
        return mctx.sqrt(s_tab[2 * n - 1])
    return mctx.sqrt(s_tab[2 * n - 1] * mctx.cos(omega * n / 2))


def u_entries(n: int, n_dim: int, s_tab: list, mctx=mp) -> list:
    """Closed-form entries of u_n in index order; exact zeros for |k| > n.

    Entries are computed once per |k| and mirrored, so the vector is even
    entry-for-entry (evaluating k and -k separately would swap the two S
    factors and rounding could differ in the last ulp).
    """
    idx = IndexSet(n_dim)
    omega = 2 * mctx.pi / n_dim
    nsq = n_dim * n_dim
    zero = mctx.mpf(0)
    if n_dim % 2 == 0 and n == n_dim // 2:
        c = 1 / (2 * mctx.sqrt(mctx.mpf(n_dim)))
        return [c for _ in idx]
    a = alpha_s2(n, n_dim, s_tab, mctx)
    by_abs = {}
    for a_k in range(0, min(n, idx.hi) + 1):
        val = a * s_tab[n_dim - n - 1 - a_k] * s_tab[n_dim - n - 1 + a_k] / nsq
        if n_dim % 2 == 0:
            val *= mctx.cos(omega * a_k / 2)
        by_abs[a_k] = val
    return [by_abs[abs(k)] if abs(k) <= n else zero for k in idx]


def v_entries(n: int, n_dim: int, s_tab: list, mctx=mp) -> list:
    """Closed-form entries of v_n in index order; exact zeros for |k| > n
    and an exactly odd entry pattern (one evaluation per |k|, mirrored with
    the sign)."""
    idx = IndexSet(n_dim)
    omega = 2 * mctx.pi / n_dim
    nsq = n_dim * n_dim
    zero = mctx.mpf(0)
    b = beta_s2(n, n_dim, s_tab, mctx)
    by_abs = {}
    for a_k in range(0, min(n, idx.hi) + 1):
        if n_dim % 2:
            s = mctx.sin(omega * a_k)
        else:
            s = 2 * mctx.sin(omega * a_k / 2)
        by_abs[a_k] = b * s_tab[n_dim - n - 1 - a_k] * s_tab[n_dim - n - 1 + a_k] * s / nsq
    return [(by_abs[k] if k >= 0 else -by_abs[-k]) if abs(k) <= n else zero
            for k in idx]


# ---------------------------------------------------------------------------

class SeedFamily:
    """All seed objects for one dimension N at one working precision.

    Eagerly builds the S and t tables; u_n / v_n vectors are built on demand
    and memoized (the basis seeds and the Gram-Schmidt reference reuse them
    heavily).  Immutable after construction apart from the caches.
    """

    def __init__(self, n_dim: int, ctx: PrecisionContext):
        self.index = IndexSet(n_dim)
        self.n_dim = n_dim
        self.ctx = ctx
        self.half_floor = n_dim // 2
        self.half_ceil = (n_dim + 1) // 2
        with ctx.workdps():
            self._s = s_table(n_dim, mp)
            omega = 2 * mp.pi / n_dim
            self.omega = omega
            c = 2 / mp.sqrt(omega)
            t_half = [c * mp.sin(omega * k / 2) for k in range(self.index.hi + 1)]
            self._t = [t_half[k] if k >= 0 else -t_half[-k] for k in self.index]
        self._u_cache: Dict[int, PeriodicVector] = {}
        self._v_cache: Dict[int, PeriodicVector] = {}

    # -- scalar sequences ---------------------------------------------------

    def s(self, k: int):
        """S(k) for 0 <= k <= N-1."""
        if not 0 <= k < self.n_dim:
            raise IndexError(f"S(k) defined for 0 <= k < N, got k={k}")
        return self._s[k]

    def t(self, k: int):
        """t_k = (2/sqrt(omega)) sin(omega k/2) for k in I_N."""
        return self._t[self.index.position(k)]

    def _check_u_index(self, n: int) -> None:
        if not 0 <= n <= self.half_floor:
            raise IndexError(f"u_n defined for 0 <= n <= floor(N/2), got n={n}")

    def _check_v_index(self, n: int) -> None:
        if not 0 < n < self.half_ceil:
            raise IndexError(f"v_n defined for 0 < n < ceil(N/2), got n={n}")

    def alpha(self, n: int):
        """alpha_n (1 for n=0 with N odd, 1/2 with N even)."""
        self._check_u_index(n)
        with self.ctx.workdps():
            return alpha_s2(n, self.n_dim, self._s, mp) / self._s[n] ** 2

    def beta(self, n: int):
        self._check_v_index(n)
        with self.ctx.workdps():
            return beta_s2(n, self.n_dim, self._s, mp) / self._s[n] ** 2

    # -- vector families ----------------------------------------------------

    def u(self, n: int) -> PeriodicVector:
        """Gaussian-type vector u_n (closed form, cached)."""
        self._check_u_index(n)
        if n not in self._u_cache:
            with self.ctx.workdps():
                self._u_cache[n] = PeriodicVector(
                    self.index, u_entries(n, self.n_dim, self._s, mp))
        return self._u_cache[n]

    def v(self, n: int) -> PeriodicVector:
        """Modified Gaussian-type vector v_n (closed form, cached)."""
        self._check_v_index(n)
        if n not in self._v_cache:
            with self.ctx.workdps():
                self._v_cache[n] = PeriodicVector(
                    self.index, v_entries(n, self.n_dim, self._s, mp))
        return self._v_cache[n]

    def u_product(self, n: int) -> PeriodicVector:
        """u_n from the defining product over (1 - (t_k/t_j)^2): the oracle
        route, evaluated term by term with no reuse of the closed forms."""
        self._check_u_index(n)
        with self.ctx.workdps():
            a = self.alpha(n)

            def entry(k):
                p = a
                tk = self.t(k)
                for j in range(n + 1, self.half_floor + 1):
                    p *= 1 - (tk / self.t(j)) ** 2
                return p

            return PeriodicVector.from_function(self.index, entry)

    def v_product(self, n: int) -> PeriodicVector:
        """v_n from the defining product; oracle route."""
        self._check_v_index(n)
        with self.ctx.workdps():
            b = self.beta(n)

            def entry(k):
                p = b * mp.sin(self.omega * k)
                tk = self.t(k)
                for j in range(n + 1, self.half_ceil):
                    p *= 1 - (tk / self.t(j)) ** 2
                return p

            return PeriodicVector.from_function(self.index, entry)

    # -- identity checks ----------------------------------------------------

    def reflection_residual(self):
        """max_k |S(k) S(N-1-k) - N| / N."""
        with self.ctx.workdps():
            return max(abs(self._s[k] * self._s[self.n_dim - 1 - k] - self.n_dim)
                       for k in range(self.n_dim)) / self.n_dim

    def product_split_residual(self):
        """Relative residual of the S-product split identities.

        For N odd both S(floor(N/2)-k)S(floor(N/2)+k) and the ceil variant
        equal N; for N even they equal 2N cos(omega k/2) and N/(2 cos(omega
        k/2)).  Checked over the k for which all S indices stay in [0, N-1].
        """
        n, M, Mc = self.n_dim, self.half_floor, self.half_ceil
        s = self._s
        res = mp.mpf(0)
        with self.ctx.workdps():
            if n % 2:
                for k in range(0, M + 1):
                    res = max(res, abs(s[M - k] * s[M + k] - n) / n)
            else:
                for k in range(0, Mc):
                    target = 2 * n * mp.cos(self.omega * k / 2)
                    res = max(res, abs(s[M - k] * s[M + k] - target) / (2 * n))
                for k in range(0, Mc):
                    target = n / (2 * mp.cos(self.omega * k / 2))
                    res = max(res, abs(s[Mc - 1 - k] * s[Mc - 1 + k] - target) / abs(target))
        return res

    def closed_vs_product_residual(self):
        """Worst entrywise |closed - product| over every admissible u_n and
        v_n, scaled by each member's largest entry (the alpha_n normalization
        makes family members differ in magnitude by many orders).

        The product route is evaluated for all n at once by accumulating the
        suffix products of (1 - (t_k/t_j)^2) backward in j, which stays
        independent of the closed forms while avoiding the O(N^3) cost of
        one defining-product evaluation per member.
        """
        M, Mc = self.half_floor, self.half_ceil
        res = mp.mpf(0)
        with self.ctx.workdps():
            alphas = [self.alpha(n) for n in range(M + 1)]
            betas = [None] + [self.beta(n) for n in range(1, Mc)]
            u_scale = [max(abs(x) for x in self.u(n)) for n in range(M + 1)]
            v_scale = [None] + [max(abs(x) for x in self.v(n)) for n in range(1, Mc)]
            for pos, k in enumerate(self.index):
                tk = self.t(k)
                sfx = mp.mpf(1)
                u_prod = [None] * (M + 1)
                u_prod[M] = alphas[M]
                for n in range(M - 1, -1, -1):
                    sfx *= 1 - (tk / self.t(n + 1)) ** 2
                    u_prod[n] = alphas[n] * sfx
                for n in range(M + 1):
                    res = max(res, abs(self.u(n)._vals[pos] - u_prod[n]) / u_scale[n])
                if Mc > 1:
                    sk = mp.sin(self.omega * k)
                    sfx = mp.mpf(1)
                    v_prod = [None] * Mc
                    v_prod[Mc - 1] = betas[Mc - 1] * sk
                    for n in range(Mc - 2, 0, -1):
                        sfx *= 1 - (tk / self.t(n + 1)) ** 2
                        v_prod[n] = betas[n] * sk * sfx
                    for n in range(1, Mc):
                        res = max(res, abs(self.v(n)._vals[pos] - v_prod[n]) / v_scale[n])
        return res


@dataclass
class FourierPairReport:
    """Residual maxima of the DFT pairing within the u and v families."""

    n_dim: int
    max_u_residual: object
    max_v_residual: object
    # norms of the largest family member, for relative interpretation
    max_u_norm: object
    max_v_norm: object

    def max_residual(self):
        return max(self.max_u_residual, self.max_v_residual)


def check_fourier_pairs(family: SeedFamily, ctx: PrecisionContext) -> FourierPairReport:
    """Verify F u_n = u_{floor(N/2)-n} and F v_n = -i v_{ceil(N/2)-n}.

    Reports the maximum Hermitian-norm residual over all admissible n.  The
    residual for n and for its partner index are equal (the DFT is unitary
    and squares to the parity operator on these families), so only the lower
    half of each range is transformed.
    """
    M, Mc = family.half_floor, family.half_ceil
    op = DftOperator(family.n_dim, ctx)
    max_u = mp.mpf(0)
    max_v = mp.mpf(0)
    nu = mp.mpf(0)
    nv = mp.mpf(0)
    with ctx.workdps():
        for n in range(0, M // 2 + 1):
            fu = op.transform_parity_real(family.u(n), odd=False)
            max_u = max(max_u, norm_diff(fu, family.u(M - n)))
            nu = max(nu, norm(family.u(n)), norm(family.u(M - n)))
        for n in range(1, Mc // 2 + 1):
            # F v_n = -i v_{Mc-n}; the reduced transform returns s with F v = -i s
            fv = op.transform_parity_real(family.v(n), odd=True)
            max_v = max(max_v, norm_diff(fv, family.v(Mc - n)))
            nv = max(nv, norm(family.v(n)), norm(family.v(Mc - n)))
    return FourierPairReport(family.n_dim, max_u, max_v, nu, nv)
