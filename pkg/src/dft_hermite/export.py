"""Deterministic table export of basis vectors.

One row per vector T_0..T_{N-1}; columns run over k = -ceil(N/2)+1..floor(N/2).
Entries are printed in scientific notation ``mantissa e exponent`` (lowercase
e, no plus sign, mantissa in [1, 10)), with a fixed number of significant
digits.  Entries of magnitude below the zero-print threshold are printed as
the single character ``0`` — the constructed basis has exact zero entries
outside each vector's width, and printing them as tiny scientific-notation
values would misrepresent them.

Every printed digit must be faithful: before writing, the available accuracy
(working digits minus measured precision loss, minus a safety margin) is
checked against what the smallest printed entry needs, and export aborts
rather than emit digits that a higher-precision rerun could contradict.
"""

from __future__ import annotations

import json
from typing import List, Optional, Sequence

from mpmath import mp

from .basis import BasisSet

__all__ = [
    "InsufficientPrecisionError", "format_entry", "format_basis_rows",
    "write_table", "parse_table", "check_faithful",
]

SAFETY_MARGIN_DIGITS = 5


class InsufficientPrecisionError(RuntimeError):
    """Printing the requested digits would exceed the faithful accuracy."""


def format_entry(x, sig_digits: int, zero_exponent: int) -> str:
    """Render one scalar: '0' below the threshold, else e.g. '-1.2345e-5'.

    Trailing zeros of the mantissa are stripped (so at most ``sig_digits``
    significant digits appear), and exponents carry no '+'.
    """
    ax = abs(x)
    if ax < mp.mpf(10) ** zero_exponent:
        return "0"
    neg = x < 0
    s = mp.nstr(ax, sig_digits, strip_zeros=True)
    if "e" in s:
        mant, _, exp = s.partition("e")
        exp10 = int(exp)
    else:
        mant, exp10 = s, 0
    digits = mant.replace(".", "")
    point = mant.index(".") if "." in mant else len(mant)
    first = 0
    while digits[first] == "0":
        first += 1
    # exponent of the leading significant digit
    exp10 += point - first - 1
    digits = digits[first:].rstrip("0") or "0"
    mant = digits[0] + ("." + digits[1:] if len(digits) > 1 else "")
    return ("-" if neg else "") + mant + "e" + str(exp10)


def parse_entry(s: str):
    """Inverse of :func:`format_entry` at working precision."""
    return mp.mpf(0) if s == "0" else mp.mpf(s)


def check_faithful(rows: Sequence[Sequence], digits: int, loss: float,
                   sig_digits: int, zero_exponent: int) -> None:
    """Abort unless every nonzero-printed entry has ``sig_digits`` faithful
    significant digits.

    Entry errors are absolute at scale 10^-(digits - loss) (the vectors are
    unit norm), so an entry of magnitude 10^e carries digits - loss + e
    faithful significant digits.
    """
    available = digits - loss - SAFETY_MARGIN_DIGITS
    zero_thr = mp.mpf(10) ** zero_exponent
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            ax = abs(x)
            if ax < zero_thr:
                continue
            magnitude = mp.floor(mp.log10(ax)) + 1
            if available + magnitude < sig_digits:
                raise InsufficientPrecisionError(
                    f"entry ({i},{j}) of magnitude ~10^{int(magnitude) - 1} has only "
                    f"{float(available + magnitude):.0f} faithful digits at "
                    f"{digits}-digit precision (loss {loss:.1f}); "
                    f"cannot print {sig_digits} digits")


def format_basis_rows(basis: BasisSet, sig_digits: int,
                      zero_exponent: int) -> List[List[str]]:
    rows = [vec.values() for vec in basis.vectors]
    loss = basis.interval_loss_digits
    if loss is None:
        # without interval tracking only the per-step cancellation proxy is
        # known; floor it at the accumulated-loss envelope of half a digit
        # per recurrence step (building with track_error gives the measured
        # figure and therefore tighter faithful exports)
        loss = max(basis.precision_loss_estimate or 0.0, 0.5 * basis.n_dim)
    with mp.workdps(basis.digits):
        check_faithful(rows, basis.digits, loss, sig_digits, zero_exponent)
        return [[format_entry(x, sig_digits, zero_exponent) for x in row]
                for row in rows]


def write_table(basis: BasisSet, path: str, fmt: str, sig_digits: int,
                zero_exponent: int) -> None:
    """Write the basis as TSV (tab-separated, LF), CSV, or JSON."""
    cells = format_basis_rows(basis, sig_digits, zero_exponent)
    if fmt == "tsv":
        body = "".join("\t".join(row) + "\n" for row in cells)
    elif fmt == "csv":
        body = "".join(",".join(row) + "\n" for row in cells)
    elif fmt == "json":
        body = json.dumps({
            "schema_version": 1,
            "n_dim": basis.n_dim,
            "digits": basis.digits,
            "construction": basis.construction,
            "sign_convention": basis.sign_convention,
            "columns": list(basis.vectors[0].index),
            "rows": cells,
        }, indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(body)


def parse_table(path: str, fmt: Optional[str] = None) -> List[List]:
    """Read a table back as rows of mpf values (at current precision)."""
    if fmt is None:
        fmt = "json" if path.endswith(".json") else (
            "csv" if path.endswith(".csv") else "tsv")
    with open(path) as fh:
        if fmt == "json":
            cells = json.load(fh)["rows"]
        else:
            sep = "," if fmt == "csv" else "\t"
            cells = [line.rstrip("\n").split(sep) for line in fh if line.strip()]
    return [[parse_entry(s) for s in row] for row in cells]
