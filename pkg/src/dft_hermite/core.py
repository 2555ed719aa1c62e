"""Arbitrary-precision primitives: index sets, periodic vectors, the centered DFT
and the second-difference-plus-cosine operator that commutes with it.

All numerics are mpmath-based.  Vectors live on the symmetric index set

    I_N = { k : -ceil(N/2)+1 <= k <= floor(N/2) }

and are treated as N-periodic functions on the integers, so any integer index
is reduced mod N before lookup.  The dot product is bilinear (no conjugation),
matching the convention ||a|| = sqrt(<a, conj(a)>); a Hermitian variant is
provided for residual norms of complex vectors.

Most functions accept an optional mpmath context (``mctx``) so that the same
code paths run under the interval context for error tracking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from mpmath import mp


class InvalidDimensionError(ValueError):
    """Raised when a vector dimension N < 2 is requested."""


class DimensionMismatchError(ValueError):
    """Raised when two vectors of different dimension are combined."""


def default_digits(n_dim: int) -> int:
    """Default working precision for dimension N.

    The recurrence loses roughly 0.43 decimal digits per step, so a linear
    envelope of half a digit per dimension plus fixed headroom is safe.
    """
    return max(64, math.ceil(0.5 * n_dim) + 60)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits) and zero-detection policy.

    ``zero_threshold`` is the relative magnitude below which an entry counts
    as zero in width detection; ``None`` means the default 10^(-digits/2),
    which separates constructed exact zeros from accumulated rounding noise.
    ``track_error`` additionally runs the interval-arithmetic pipeline to
    measure precision loss (see :mod:`dft_hermite.tracking`).
    """

    digits: int = 64
    zero_threshold: Optional[float] = None
    track_error: bool = False

    def __post_init__(self) -> None:
        if self.digits < 30:
            raise ValueError(f"working precision must be >= 30 digits, got {self.digits}")
        if self.zero_threshold is not None and not 0 < self.zero_threshold < 1:
            raise ValueError("zero_threshold must lie in (0, 1)")

    @classmethod
    def for_dim(cls, n_dim: int, **kw) -> "PrecisionContext":
        return cls(digits=default_digits(n_dim), **kw)

    def workdps(self):
        """Context manager setting mpmath's working precision."""
        return mp.workdps(self.digits)

    def zero_tol(self):
        """The relative zero threshold as an mpf."""
        if self.zero_threshold is not None:
            return mp.mpf(self.zero_threshold)
        return mp.mpf(10) ** (-(self.digits // 2))


@dataclass(frozen=True)
class IndexSet:
    """The centered index set I_N = [-ceil(N/2)+1, floor(N/2)]."""

    n_dim: int
    lo: int = field(init=False)
    hi: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n_dim < 2:
            raise InvalidDimensionError(f"need N >= 2, got {self.n_dim}")
        object.__setattr__(self, "lo", -((self.n_dim + 1) // 2) + 1)
        object.__setattr__(self, "hi", self.n_dim // 2)

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        return self.n_dim

    def __contains__(self, k: int) -> bool:
        return self.lo <= k <= self.hi

    def reduce(self, k: int) -> int:
        """Reduce an arbitrary integer index into I_N modulo N."""
        return (k - self.lo) % self.n_dim + self.lo

    def position(self, k: int) -> int:
        """Storage offset of index k (after periodic reduction)."""
        return (k - self.lo) % self.n_dim


def make_index_set(n_dim: int) -> IndexSet:
    return IndexSet(n_dim)


class PeriodicVector:
    """Complex N-periodic vector indexed over I_N.

    Entries are mpmath scalars (mpf/mpc, or interval numbers under the
    tracking context).  Instances are immutable by convention: all arithmetic
    returns new vectors.  Indexing accepts any integer and reduces it mod N.
    """

    __slots__ = ("index", "_vals")

    def __init__(self, index: IndexSet, values: Sequence):
        if len(values) != index.n_dim:
            raise DimensionMismatchError(
                f"expected {index.n_dim} entries, got {len(values)}")
        self.index = index
        self._vals = list(values)

    @classmethod
    def from_function(cls, index: IndexSet, f: Callable[[int], object]) -> "PeriodicVector":
        return cls(index, [f(k) for k in index])

    @classmethod
    def zeros(cls, index: IndexSet) -> "PeriodicVector":
        return cls(index, [mp.mpf(0)] * index.n_dim)

    @classmethod
    def delta(cls, index: IndexSet, at: int = 0) -> "PeriodicVector":
        v = [mp.mpf(0)] * index.n_dim
        v[index.position(at)] = mp.mpf(1)
        return cls(index, v)

    @property
    def n_dim(self) -> int:
        return self.index.n_dim

    def __getitem__(self, k: int):
        return self._vals[(k - self.index.lo) % self.index.n_dim]

    def values(self) -> list:
        """Entries in index order k = lo..hi (a copy)."""
        return list(self._vals)

    def __iter__(self):
        return iter(self._vals)

    def __len__(self) -> int:
        return self.index.n_dim

    def _check(self, other: "PeriodicVector") -> None:
        if self.index.n_dim != other.index.n_dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.index.n_dim} vs {other.index.n_dim}")

    def __add__(self, other: "PeriodicVector") -> "PeriodicVector":
        self._check(other)
        return PeriodicVector(self.index, [x + y for x, y in zip(self._vals, other._vals)])

    def __sub__(self, other: "PeriodicVector") -> "PeriodicVector":
        self._check(other)
        return PeriodicVector(self.index, [x - y for x, y in zip(self._vals, other._vals)])

    def __mul__(self, c) -> "PeriodicVector":
        return PeriodicVector(self.index, [x * c for x in self._vals])

    __rmul__ = __mul__

    def __truediv__(self, c) -> "PeriodicVector":
        return PeriodicVector(self.index, [x / c for x in self._vals])

    def __neg__(self) -> "PeriodicVector":
        return PeriodicVector(self.index, [-x for x in self._vals])

    def conjugate(self) -> "PeriodicVector":
        return PeriodicVector(self.index, [mp.conj(x) for x in self._vals])

    def real_part(self) -> "PeriodicVector":
        return PeriodicVector(self.index, [mp.re(x) for x in self._vals])

    def is_real(self, ctx: PrecisionContext) -> bool:
        tol = ctx.zero_tol() * norm(self)
        return all(abs(mp.im(x)) <= tol for x in self._vals)

    def is_even(self, ctx: PrecisionContext) -> bool:
        tol = ctx.zero_tol() * norm(self)
        return all(abs(self[k] - self[-k]) <= tol for k in self.index)

    def is_odd(self, ctx: PrecisionContext) -> bool:
        tol = ctx.zero_tol() * norm(self)
        return all(abs(self[k] + self[-k]) <= tol for k in self.index)

    def __repr__(self) -> str:
        ent = ", ".join(mp.nstr(x, 6) for x in self._vals[:4])
        more = ", ..." if self.n_dim > 4 else ""
        return f"PeriodicVector(N={self.n_dim}, [{ent}{more}])"


def dot(a: PeriodicVector, b: PeriodicVector, mctx=mp):
    """Bilinear pairing <a, b> = sum_k a(k) b(k), no conjugation."""
    a._check(b)
    return mctx.fdot(zip(a._vals, b._vals))


def hdot(a: PeriodicVector, b: PeriodicVector, mctx=mp):
    """Hermitian pairing sum_k a(k) conj(b(k)), used for complex residuals."""
    a._check(b)
    return mctx.fdot(zip(a._vals, b._vals), conjugate=True)


def norm(a: PeriodicVector, mctx=mp):
    """||a|| = sqrt(<a, conj(a)>) = sqrt(sum |a(k)|^2).

    Squares via ** so that interval entries enclosing zero square to
    [0, hi^2] rather than a sign-indefinite product.
    """
    return mctx.sqrt(mctx.fsum(x ** 2 if isinstance(x, mctx.mpf) else abs(x) ** 2
                               for x in a._vals))


def norm_diff(a: PeriodicVector, b: PeriodicVector, mctx=mp):
    """Hermitian norm of a - b without building the intermediate vector."""
    a._check(b)
    return mctx.sqrt(mctx.fsum(abs(x - y) ** 2 for x, y in zip(a._vals, b._vals)))


def is_zero_vector(a: PeriodicVector) -> bool:
    """True when every entry is exactly zero (constructed zeros are exact)."""
    return all(x == 0 for x in a._vals)


def width(a: PeriodicVector, ctx: PrecisionContext) -> int:
    """Localization width len(a): the largest |k| <= floor(N/2) carrying a
    nonzero entry, where "nonzero" means exceeding the relative zero threshold.

    Returns 0 for the zero vector (see :func:`is_zero_vector`).
    """
    nrm = norm(a)
    if nrm == 0:
        return 0
    thr = ctx.zero_tol() * nrm
    for n in range(a.index.hi, 0, -1):
        if abs(a[n]) > thr or abs(a[-n]) > thr:
            return n
    return 0


def two_cos_table(n_dim: int, mctx=mp) -> list:
    """[2 cos(omega k)]_{k=lo..hi} with omega = 2 pi / N, mirror-symmetric so
    that the table is exactly even in k."""
    idx = IndexSet(n_dim)
    omega = 2 * mctx.pi / n_dim
    by_abs = {k: 2 * mctx.cos(omega * k) for k in range(0, idx.hi + 1)}
    return [by_abs[abs(k)] for k in idx]


def apply_L(a: PeriodicVector, mctx=mp, two_cos: Optional[list] = None) -> PeriodicVector:
    """The DFT-commuting operator (La)(k) = a(k+1) + a(k-1) + 2 cos(omega k) a(k).

    Real input gives real output; width grows by at most one.
    """
    n = a.index.n_dim
    if two_cos is None:
        two_cos = two_cos_table(n, mctx)
    vals = a._vals
    return PeriodicVector(
        a.index,
        [vals[(i + 1) % n] + vals[(i - 1) % n] + two_cos[i] * vals[i]
         for i in range(n)],
    )


class DftOperator:
    """Centered N-point DFT, direct O(N^2) summation at working precision.

    b(l) = N^(-1/2) sum_{k in I_N} e^(-i omega k l) a(k),  omega = 2 pi / N.

    Twiddles are tabulated once per instance as cos/sin values of omega*m for
    m = 0..N-1, built mirror-symmetrically so the kernel is exactly symmetric
    under k -> -k.  The operator is unitary; the inverse is the conjugate
    transform.  Instances are immutable and safe to share.
    """

    def __init__(self, n_dim: int, ctx: PrecisionContext):
        self.index = IndexSet(n_dim)
        self.ctx = ctx
        n = n_dim
        with ctx.workdps():
            omega = 2 * mp.pi / n
            cos_half = [mp.cos(omega * m) for m in range(n // 2 + 1)]
            sin_half = [mp.sin(omega * m) for m in range(n // 2 + 1)]
            self._cos = [cos_half[m] if 2 * m <= n else cos_half[n - m] for m in range(n)]
            self._sin = [sin_half[m] if 2 * m <= n else -sin_half[n - m] for m in range(n)]
            self._twiddle = [mp.mpc(c, -s) for c, s in zip(self._cos, self._sin)]
            self._invroot = 1 / mp.sqrt(n)

    @property
    def n_dim(self) -> int:
        return self.index.n_dim

    @property
    def omega(self):
        with self.ctx.workdps():
            return 2 * mp.pi / self.n_dim

    def transform(self, a: PeriodicVector) -> PeriodicVector:
        if a.index.n_dim != self.n_dim:
            raise DimensionMismatchError("operator/vector dimension mismatch")
        n = self.n_dim
        ks = list(a.index)
        vals = a._vals
        with self.ctx.workdps():
            out = []
            if all(isinstance(x, mp.mpf) for x in vals):
                # real input: two real accumulations per output entry
                cos, sin = self._cos, self._sin
                for l in a.index:
                    re = mp.fdot((vals[i], cos[(k * l) % n]) for i, k in enumerate(ks))
                    im = mp.fdot((vals[i], sin[(k * l) % n]) for i, k in enumerate(ks))
                    out.append(mp.mpc(re, -im) * self._invroot)
            else:
                tw = self._twiddle
                for l in a.index:
                    s = mp.fdot((vals[i], tw[(k * l) % n]) for i, k in enumerate(ks))
                    out.append(s * self._invroot)
        return PeriodicVector(a.index, out)

    def inverse(self, b: PeriodicVector) -> PeriodicVector:
        """F^(-1) = conj . F . conj (the kernel is symmetric)."""
        return self.transform(b.conjugate()).conjugate()

    def transform_parity_real(self, a: PeriodicVector, odd: bool) -> PeriodicVector:
        """Reduced transform of an exactly even/odd real vector.

        Returns the real vector s with F a = s (even input) or F a = -i s
        (odd input).  Uses the half-range cosine/sine sum, about 4x cheaper
        than the full transform.
        """
        if a.index.n_dim != self.n_dim:
            raise DimensionMismatchError("operator/vector dimension mismatch")
        n = self.n_dim
        half = (n - 1) // 2
        vals = a._vals
        pos = a.index.position
        tab = self._sin if odd else self._cos
        with self.ctx.workdps():
            pairs = [(2 * vals[pos(k)], k) for k in range(1, half + 1)]
            out = []
            for l in a.index:
                s = mp.fdot((c, tab[(k * l) % n]) for c, k in pairs)
                if not odd:
                    s += vals[pos(0)]
                    if n % 2 == 0:
                        s += vals[pos(n // 2)] * tab[(n // 2) * l % n]
                out.append(s * self._invroot)
        return PeriodicVector(a.index, out)


def dft(a: PeriodicVector, ctx: PrecisionContext) -> PeriodicVector:
    """Centered DFT of a (convenience wrapper constructing the operator)."""
    return DftOperator(a.index.n_dim, ctx).transform(a)
