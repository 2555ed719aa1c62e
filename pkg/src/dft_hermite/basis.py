"""Construction and verification of the minimal Hermite-type DFT eigenbasis.

The basis {T_n} for R^N is the unique (up to signs) orthonormal set with

    F T_n = lambda_n T_n,   lambda_n = (-i)^n  (n < N-1),
    width(T_n) = floor((N + n + 2) / 4),

where for even N the last vector instead satisfies F T_{N-1} = (-i)^N T_{N-1}.
Two independent constructions are provided:

* the production path seeds T_0..T_3 from the u/v families and extends each
  residue class n, n+4, n+8, ... by the three-term recurrence

      T_{n+4} = (L T_n - a_n T_n - b_{n-4} T_{n-4}) / b_n,
      a_n = <L T_n, T_n>,   b_n = ||L T_n - a_n T_n - b_{n-4} T_{n-4}||;

* the reference path orthogonalizes the four eigenvector families
  w_n = u_n + u_{floor(N/2)-n}, x_n = v_n + v_{ceil(N/2)-n},
  y_n = u_n - u_{floor(N/2)-n}, z_n = v_n - v_{ceil(N/2)-n}
  (eigenvalues +1, -i, -1, +i) by modified Gram-Schmidt and interleaves them
  by increasing width.

Agreement of the two paths up to sign is the working embodiment of the
uniqueness statement, and is exercised by the verification suite.

Index bookkeeping: along each residue class the index advances by four, and
for even N the vector produced at nominal index N is stored as T_{N-1} (the
"ghost" alias T_N = T_{N-1}), which is why T_{N-1} always has a real
eigenvalue.  For N in {2, 3, 4} some seed formulas reference family members
outside their admissible range (one eigenspace can be empty), so construction
falls back to the reference path there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from mpmath import mp

from .core import (DftOperator, IndexSet, PeriodicVector, PrecisionContext,
                   apply_L, dot, norm, norm_diff, two_cos_table, width)
from .seeds import SeedFamily

__all__ = [
    "EigenspaceDims", "BasisSet", "VerificationReport",
    "eigenspace_dims", "seed_vectors", "recurrence_step",
    "build_basis", "gram_schmidt_reference", "verify_basis", "compare_bases",
    "SeedFormulaError", "DegenerateStepError",
]

SEED_MIN_DIM = 5  # smallest N for which all four seed formulas are admissible


class SeedFormulaError(ValueError):
    """The closed seed formulas reference an inadmissible u/v index."""


class DegenerateStepError(ArithmeticError):
    """A recurrence step produced a residual too small to normalize, which
    signals an exhausted column or insufficient working precision."""

    def __init__(self, index: int, b_value, digits: int):
        self.index = index
        self.b_value = b_value
        super().__init__(
            f"degenerate recurrence step at n={index}: |b_n| = {mp.nstr(b_value, 5)} "
            f"is below the noise floor at {digits} digits")


def k_threshold(m: int, n_dim: int) -> int:
    """K_m = floor((N + 2 + m)/4), the smallest width present in E_m."""
    return (n_dim + 2 + m) // 4


def width_bound(n: int, n_dim: int) -> int:
    """floor((N + n + 2)/4), the exact width of T_n."""
    return (n_dim + n + 2) // 4


@dataclass(frozen=True)
class EigenspaceDims:
    """Dimensions of the four DFT eigenspaces E_m = ker(F - (-i)^m)."""

    n_dim: int
    d0: int
    d1: int
    d2: int
    d3: int
    k_thresholds: Tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if self.d0 + self.d1 + self.d2 + self.d3 != self.n_dim:
            raise AssertionError("eigenspace dimensions must sum to N")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.d0, self.d1, self.d2, self.d3)

    def __getitem__(self, m: int) -> int:
        return self.as_tuple()[m]


def eigenspace_dims(n_dim: int) -> EigenspaceDims:
    """Eigenvalue multiplicities (Schur's counts) from the closed formulas."""
    idx = IndexSet(n_dim)  # validates n_dim >= 2
    M, Mc = n_dim // 2, (n_dim + 1) // 2
    ks = tuple(k_threshold(m, n_dim) for m in range(4))
    return EigenspaceDims(
        n_dim=idx.n_dim,
        d0=M - ks[0] + 1,
        d1=Mc - ks[1],
        d2=M - ks[2] + 1,
        d3=Mc - ks[3],
        k_thresholds=ks,
    )


@dataclass
class BasisSet:
    """A complete minimal Hermite-type basis with its construction record.

    ``eigen_exponents[n]`` is the residue m with F T_n = (-i)^m T_n; it equals
    n mod 4 except at n = N-1 for even N, where it is N mod 4.  ``recur_a`` and
    ``recur_b`` hold the recurrence coefficients keyed by the source index n
    (b_n > 0 always; both are empty for the Gram-Schmidt path).
    """

    n_dim: int
    digits: int
    vectors: List[PeriodicVector]
    eigen_exponents: List[int]
    recur_a: Dict[int, object] = field(default_factory=dict)
    recur_b: Dict[int, object] = field(default_factory=dict)
    construction: str = "recurrence"
    sign_convention: str = "leading-entry-positive"
    ghost_used: bool = False
    precision_loss_estimate: Optional[float] = None  # b^2 cross-check proxy, digits
    interval_loss_digits: Optional[float] = None     # from error tracking, if run

    def __len__(self) -> int:
        return self.n_dim

    def eigenvalue(self, n: int):
        """lambda_n as an exact small complex number."""
        return mp.mpc(0, -1) ** self.eigen_exponents[n]

    def column(self, m: int) -> List[int]:
        """Stored indices of the residue-m column, in recurrence order."""
        return [n for n in range(self.n_dim) if self.eigen_exponents[n] == m]


@dataclass
class VerificationReport:
    """Residual maxima for the defining conditions of a BasisSet."""

    n_dim: int
    digits: int
    construction: str
    max_ortho_residual: object
    max_eigen_residual: object
    width_violations: List[Tuple[int, int, int]]  # (n, measured, expected)
    dims_match: bool
    column_widths_ok: bool
    recurrence_symmetry_residual: Optional[object] = None
    oracle_deviation: Optional[object] = None
    precision_loss_digits: Optional[float] = None
    loss_is_interval: bool = False

    def residual_bound(self):
        """Acceptable residual: 10^-(digits - loss - 20).

        The interval-measured loss is used when error tracking ran.  The b^2
        cross-check proxy only reflects per-step cancellation (a few digits),
        not the accumulated loss of ~0.43 digits per recurrence step, so
        without tracking the loss is floored at the linear envelope N/2 that
        also sizes the default precision policy.  The bound never loosens
        beyond 1e-10: below that the verdict would be meaningless.
        """
        loss = self.precision_loss_digits or 0.0
        if not self.loss_is_interval:
            loss = max(loss, 0.5 * self.n_dim)
        return mp.mpf(10) ** -max(10, self.digits - loss - 20)

    def passed(self, bound=None) -> bool:
        if bound is None:
            bound = self.residual_bound()
        ok = (self.max_ortho_residual <= bound
              and self.max_eigen_residual <= bound
              and not self.width_violations
              and self.dims_match
              and self.column_widths_ok)
        if self.oracle_deviation is not None:
            ok = ok and self.oracle_deviation <= bound
        return ok


# ---------------------------------------------------------------------------
# seeds and recurrence

def seed_indices(n_dim: int) -> List[Tuple[int, int, str, int, int]]:
    """(m, sign, family, first index, partner index) for T_0..T_3."""
    M, Mc = n_dim // 2, (n_dim + 1) // 2
    k = [k_threshold(m, n_dim) for m in range(4)]
    return [
        (0, +1, "u", k[0], M - k[0]),
        (1, +1, "v", k[1], Mc - k[1]),
        (2, -1, "u", k[2], M - k[2]),
        (3, -1, "v", k[3], Mc - k[3]),
    ]


def seed_vectors(family: SeedFamily) -> List[PeriodicVector]:
    """The four unit seed vectors

        T_0 = c_0 (u_{K_0} + u_{floor(N/2)-K_0}),
        T_1 = c_1 (v_{K_1} + v_{ceil(N/2)-K_1}),
        T_2 = c_2 (u_{K_2} - u_{floor(N/2)-K_2}),
        T_3 = c_3 (v_{K_3} - v_{ceil(N/2)-K_3}).

    Requires N >= 5: below that some v index leaves its admissible range
    (N=4 has an empty E_3), and callers must use the reference construction.
    """
    n_dim = family.n_dim
    if n_dim < SEED_MIN_DIM:
        raise SeedFormulaError(
            f"seed formulas need N >= {SEED_MIN_DIM} (got N={n_dim}); "
            "use the Gram-Schmidt reference construction")
    out = []
    with family.ctx.workdps():
        for m, sign, fam, first, partner in seed_indices(n_dim):
            pick = family.u if fam == "u" else family.v
            vec = pick(first) + sign * pick(partner)
            out.append(vec / norm(vec))
    return out


@dataclass
class RecurrenceStep:
    """One application of the three-term recurrence."""

    vector: PeriodicVector   # T_{n+4}
    a: object                # a_n = <L T_n, T_n>
    b: object                # b_n = ||residual||, taken positive
    b_sq_discrepancy: object  # |b_n^2 - (||L T_n||^2 - a_n^2 - b_{n-4}^2)| / b_n^2
    loss_estimate: float     # digits of precision consumed, from the discrepancy


def recurrence_step(t_n: PeriodicVector,
                    t_prev: Optional[PeriodicVector],
                    b_prev,
                    ctx: PrecisionContext,
                    mctx=mp,
                    two_cos: Optional[list] = None,
                    index: int = -1) -> RecurrenceStep:
    """Compute T_{n+4} from T_n and T_{n-4} (pass None/0 for n < 4).

    Also evaluates b_n^2 through the alternative formula
    ||L T_n||^2 - a_n^2 - b_{n-4}^2 and records the relative discrepancy of
    the two routes; the discrepancy exposes the cancellation that makes this
    recurrence lose precision.
    """
    LT = apply_L(t_n, mctx, two_cos)
    a_n = dot(LT, t_n, mctx)
    # scalars kept on the right: interval scalars do not dispatch to __rmul__
    r = LT - t_n * a_n
    bp2 = 0
    if t_prev is not None and b_prev is not None:
        r = r - t_prev * b_prev
        bp2 = b_prev * b_prev
    b_n = norm(r, mctx)
    # under interval tracking, compare the certain lower endpoint
    b_lo = getattr(b_n, "a", b_n)
    if b_lo <= mp.mpf(10) ** (-(ctx.digits - 20)):
        raise DegenerateStepError(index, b_lo, ctx.digits)
    bsq = b_n * b_n
    alt = dot(LT, LT, mctx) - a_n * a_n - bp2
    rel = abs(bsq - alt) / bsq
    disc = mp.mpf(getattr(rel, "b", rel))
    loss = float(ctx.digits + mp.log10(disc)) if disc > 0 else 0.0
    return RecurrenceStep(r / b_n, a_n, b_n, disc, max(loss, 0.0))


def _column_lengths(dims: EigenspaceDims, max_order: Optional[int]) -> List[int]:
    """How many vectors to build per residue column."""
    out = []
    for m in range(4):
        want = dims[m]
        if max_order is not None:
            want = min(want, max(0, (max_order - m) // 4 + 1))
        out.append(want)
    return out


def _recurrence_vectors(family: SeedFamily,
                        ctx: PrecisionContext,
                        max_order: Optional[int] = None
                        ) -> Tuple[Dict[int, PeriodicVector], Dict, Dict, float]:
    """Seed-and-recurse, returning vectors keyed by nominal index (the ghost
    remap to N-1 is left to the caller), plus coefficients and the loss proxy."""
    n_dim = family.n_dim
    dims = eigenspace_dims(n_dim)
    counts = _column_lengths(dims, max_order)
    with ctx.workdps():
        seeds = seed_vectors(family)
        two_cos = two_cos_table(n_dim, mp)
        vectors: Dict[int, PeriodicVector] = {}
        a_coef: Dict[int, object] = {}
        b_coef: Dict[int, object] = {}
        max_loss = 0.0
        for m in range(4):
            if counts[m] == 0:
                continue
            vectors[m] = seeds[m]
            t_prev, b_prev = None, None
            for step_no in range(counts[m] - 1):
                n = m + 4 * step_no
                step = recurrence_step(vectors[n], t_prev, b_prev, ctx,
                                       two_cos=two_cos, index=n)
                vectors[n + 4] = step.vector
                a_coef[n] = step.a
                b_coef[n] = step.b
                max_loss = max(max_loss, step.loss_estimate)
                t_prev, b_prev = vectors[n], step.b
    return vectors, a_coef, b_coef, max_loss


def _canonical_sign(vec: PeriodicVector, ctx: PrecisionContext) -> int:
    """+1 if the first significant entry at k = 0, 1, 2, ... is positive.

    Odd vectors have T(0) = 0, so their sign is fixed at the smallest
    positive index; returns +1 for a numerically zero vector.
    """
    thr = ctx.zero_tol() * norm(vec)
    for k in range(0, vec.index.hi + 1):
        x = mp.re(vec[k])
        if abs(x) > thr:
            return 1 if x > 0 else -1
    return 1


def _apply_sign_convention(vectors: Dict[int, PeriodicVector],
                           ctx: PrecisionContext) -> Dict[int, PeriodicVector]:
    out = {}
    for n, vec in vectors.items():
        out[n] = vec if _canonical_sign(vec, ctx) > 0 else -vec
    return out


def _ghost_remap(vectors: Dict[int, PeriodicVector], n_dim: int) -> bool:
    """Store the vector produced at nominal index N as T_{N-1} (even N)."""
    if n_dim % 2 == 0 and n_dim in vectors:
        vectors[n_dim - 1] = vectors.pop(n_dim)
        return True
    return False


def _eigen_exponents(n_dim: int) -> List[int]:
    exps = [n % 4 for n in range(n_dim)]
    if n_dim % 2 == 0:
        exps[n_dim - 1] = n_dim % 4
    return exps


def build_basis(n_dim: int,
                ctx: Optional[PrecisionContext] = None,
                construction: str = "recurrence",
                sign_convention: bool = True,
                family: Optional[SeedFamily] = None) -> BasisSet:
    """Build the complete basis T_0..T_{N-1}.

    ``construction`` selects the production path ("recurrence") or the
    orthogonalization oracle ("gram-schmidt").  For N in {2, 3, 4} the
    recurrence path is inapplicable and silently delegates to the reference
    construction.  With ``ctx.track_error`` set, the interval-arithmetic
    pipeline is run as well and its measured precision loss attached.
    """
    if ctx is None:
        ctx = PrecisionContext.for_dim(n_dim)
    if family is None:
        family = SeedFamily(n_dim, ctx)
    if construction not in ("recurrence", "gram-schmidt"):
        raise ValueError(f"unknown construction {construction!r}")

    if construction == "recurrence" and n_dim >= SEED_MIN_DIM:
        vectors, a_coef, b_coef, loss = _recurrence_vectors(family, ctx)
        ghost = _ghost_remap(vectors, n_dim)
        used = "recurrence"
    else:
        vectors = _gram_schmidt_vectors(family, ctx)
        ghost = _ghost_remap(vectors, n_dim)
        a_coef, b_coef, loss = {}, {}, None
        used = "gram-schmidt"

    if sign_convention:
        with ctx.workdps():
            vectors = _apply_sign_convention(vectors, ctx)

    basis = BasisSet(
        n_dim=n_dim,
        digits=ctx.digits,
        vectors=[vectors[n] for n in range(n_dim)],
        eigen_exponents=_eigen_exponents(n_dim),
        recur_a=a_coef,
        recur_b=b_coef,
        construction=used,
        sign_convention="leading-entry-positive" if sign_convention else "raw",
        ghost_used=ghost,
        precision_loss_estimate=loss,
    )
    if ctx.track_error:
        from .tracking import measure_precision_loss
        basis.interval_loss_digits = measure_precision_loss(n_dim, ctx).loss_digits
    return basis


# ---------------------------------------------------------------------------
# Gram-Schmidt reference construction

def _family_ranges(n_dim: int):
    """(m, sign, family, index range) for the w/x/y/z eigenvector families."""
    M, Mc = n_dim // 2, (n_dim + 1) // 2
    k = [k_threshold(m, n_dim) for m in range(4)]
    return [
        (0, +1, "u", range(k[0], M + 1)),
        (1, +1, "v", range(k[1], Mc)),
        (2, -1, "u", range(k[2], M + 1)),
        (3, -1, "v", range(k[3], Mc)),
    ]


def _gram_schmidt_vectors(family: SeedFamily,
                          ctx: PrecisionContext) -> Dict[int, PeriodicVector]:
    """Orthogonalize each eigenvector family in increasing width and place
    member n of family m at nominal index 4*(n - K_m) + m."""
    n_dim = family.n_dim
    M, Mc = family.half_floor, family.half_ceil
    reorth_thr = mp.mpf(10) ** (-(ctx.digits // 2))
    vectors: Dict[int, PeriodicVector] = {}
    with ctx.workdps():
        for m, sign, fam, rng in _family_ranges(n_dim):
            pick = family.u if fam == "u" else family.v
            partner = (lambda n: M - n) if fam == "u" else (lambda n: Mc - n)
            done: List[PeriodicVector] = []
            for n in rng:
                vec = pick(n) + sign * pick(partner(n))
                vec = vec / norm(vec)
                # modified Gram-Schmidt; a second pass only when the first
                # one left a correction above the reorthogonalization threshold
                for attempt in range(2):
                    worst = mp.mpf(0)
                    for q in done:
                        c = dot(vec, q)
                        worst = max(worst, abs(c))
                        vec = vec - q * c
                    vec = vec / norm(vec)
                    if worst <= reorth_thr:
                        break
                done.append(vec)
                vectors[4 * (n - rng.start) + m] = vec
    return vectors


def gram_schmidt_reference(family: SeedFamily, ctx: PrecisionContext,
                           sign_convention: bool = True) -> BasisSet:
    """The orthogonalization construction as a complete BasisSet."""
    n_dim = family.n_dim
    vectors = _gram_schmidt_vectors(family, ctx)
    ghost = _ghost_remap(vectors, n_dim)
    if sign_convention:
        with ctx.workdps():
            vectors = _apply_sign_convention(vectors, ctx)
    return BasisSet(
        n_dim=n_dim,
        digits=ctx.digits,
        vectors=[vectors[n] for n in range(n_dim)],
        eigen_exponents=_eigen_exponents(n_dim),
        construction="gram-schmidt",
        sign_convention="leading-entry-positive" if sign_convention else "raw",
        ghost_used=ghost,
    )


# ---------------------------------------------------------------------------
# verification

def _eigen_residual(basis: BasisSet, op: DftOperator, n: int):
    """||F T_n - lambda_n T_n|| using the parity-reduced transform when the
    vector is exactly even/odd (it is, by construction), else the full DFT."""
    vec = basis.vectors[n]
    m = basis.eigen_exponents[n]
    odd = bool(m % 2)
    exact_parity = all(
        vec[k] == (-vec[-k] if odd else vec[-k]) for k in vec.index)
    if exact_parity:
        s = op.transform_parity_real(vec, odd=odd)
        # even: F T = s,    lambda in {1, -1};  residual ||s - lambda T||
        # odd:  F T = -i s, lambda in {-i, i};  residual ||s -+ T||
        sign = 1 if m in (0, 1) else -1
        return norm_diff(s, sign * vec)
    ft = op.transform(vec)
    return norm_diff(ft, vec * basis.eigenvalue(n))


def verify_basis(basis: BasisSet, ctx: PrecisionContext,
                 oracle: Optional[BasisSet] = None) -> VerificationReport:
    """Check the three defining conditions plus the structural bookkeeping.

    Computes max |<T_i, T_j> - delta_ij| over all pairs, the eigen-equation
    residuals, exact width equality, eigenvalue multiplicities against the
    closed-form dimensions, and the per-column width ladder (widths along a
    residue class increase by exactly one per step, which is what makes the
    width-filtered spans have dimension n - K_m + 1).  When ``oracle`` is
    given, also records the worst per-vector sign-insensitive deviation.
    """
    n_dim = basis.n_dim
    vecs = basis.vectors
    with ctx.workdps():
        one = mp.mpf(1)
        max_ortho = mp.mpf(0)
        for i in range(n_dim):
            vi = vecs[i]
            for j in range(i, n_dim):
                g = dot(vi, vecs[j])
                max_ortho = max(max_ortho, abs(g - one) if i == j else abs(g))

        op = DftOperator(n_dim, ctx)
        max_eigen = mp.mpf(0)
        for n in range(n_dim):
            max_eigen = max(max_eigen, _eigen_residual(basis, op, n))

        widths = [width(v, ctx) for v in vecs]
        width_violations = [
            (n, widths[n], width_bound(n, n_dim))
            for n in range(n_dim) if widths[n] != width_bound(n, n_dim)
        ]

        dims = eigenspace_dims(n_dim)
        counts = [basis.eigen_exponents.count(m) for m in range(4)]
        dims_match = tuple(counts) == dims.as_tuple()

        column_ok = True
        for m in range(4):
            col = basis.column(m)
            ladder = [widths[n] for n in col]
            if ladder != list(range(dims.k_thresholds[m],
                                    dims.k_thresholds[m] + len(col))):
                column_ok = False

        sym = None
        if basis.recur_b:
            two_cos = two_cos_table(n_dim, mp)
            sym = mp.mpf(0)
            for n, b_n in basis.recur_b.items():
                hi_idx = n + 4 if n + 4 < n_dim else n_dim - 1
                t_lo, t_hi = vecs[n], vecs[hi_idx]
                fwd = dot(apply_L(t_lo, mp, two_cos), t_hi)
                bwd = dot(apply_L(t_hi, mp, two_cos), t_lo)
                sym = max(sym, abs(abs(fwd) - b_n), abs(fwd - bwd))

        deviation = compare_bases(basis, oracle) if oracle is not None else None

    tracked = basis.interval_loss_digits is not None
    loss = basis.interval_loss_digits if tracked else basis.precision_loss_estimate
    return VerificationReport(
        n_dim=n_dim,
        digits=ctx.digits,
        construction=basis.construction,
        max_ortho_residual=max_ortho,
        max_eigen_residual=max_eigen,
        width_violations=width_violations,
        dims_match=dims_match,
        column_widths_ok=column_ok,
        recurrence_symmetry_residual=sym,
        oracle_deviation=deviation,
        precision_loss_digits=loss,
        loss_is_interval=tracked,
    )


def compare_bases(a: BasisSet, b: BasisSet):
    """max_n min(||T_n - T'_n||, ||T_n + T'_n||), the sign-insensitive
    disagreement of two constructions."""
    if a.n_dim != b.n_dim:
        raise ValueError("cannot compare bases of different dimension")
    worst = mp.mpf(0)
    for x, y in zip(a.vectors, b.vectors):
        worst = max(worst, min(norm_diff(x, y), norm(x + y)))
    return worst
