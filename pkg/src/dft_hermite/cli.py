"""Command-line interface: generate, verify, convergence, seeds.

Precedence for every setting is: explicit flag > config file (TOML, via
``--config``) > the ``DFT_HERMITE_DIGITS`` environment variable (working
precision only) > built-in defaults.  The default working precision follows
the dimension-aware policy in :func:`dft_hermite.core.default_digits`.

Exit status is 0 on success, 1 when a verification invariant is violated or
the requested output cannot be printed faithfully, and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional

try:
    import tomllib  # py311+
except ImportError:  # pragma: no cover
    import tomli as tomllib

from mpmath import mp

from . import __version__
from .core import PrecisionContext, default_digits
from .seeds import SeedFamily, check_fourier_pairs
from .basis import (build_basis, gram_schmidt_reference, verify_basis,
                    eigenspace_dims, DegenerateStepError)
from .hermite import convergence_report, CONVERGENCE_MIN_DIGITS
from .export import write_table, InsufficientPrecisionError

ENV_DIGITS = "DFT_HERMITE_DIGITS"
DEFAULT_MAX_OUTPUT = 100
DEFAULT_ZERO_EXPONENT = -100


@dataclass
class RunConfig:
    """Resolved settings for one CLI invocation."""

    command: str
    n_dim: int = 0
    digits: int = 0
    max_output_digits: int = DEFAULT_MAX_OUTPUT
    zero_print_threshold: int = DEFAULT_ZERO_EXPONENT
    output: Optional[str] = None
    fmt: str = "tsv"
    sign_convention: bool = True
    construction: str = "recurrence"
    track_error: bool = False
    orders: List[int] = field(default_factory=list)
    dims: List[int] = field(default_factory=list)

    def context(self) -> PrecisionContext:
        return PrecisionContext(digits=self.digits, track_error=self.track_error)


def _parse_int_list(text: str) -> List[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dft-hermite",
        description="Minimal Hermite-type eigenbasis of the centered DFT "
                    "at arbitrary working precision.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_n=True):
        if need_n:
            sp.add_argument("--n-dim", "-n", type=int, required=False,
                            help="dimension N >= 2")
        sp.add_argument("--digits", "-d", type=int, default=None,
                        help="working precision in decimal digits "
                             f"(default: policy max(64, N/2 + 60); env {ENV_DIGITS} overrides)")
        sp.add_argument("--output", "-o", default=None, help="output file path")
        sp.add_argument("--format", dest="fmt", choices=("tsv", "csv", "json"),
                        default=None, help="output format (default tsv)")
        sp.add_argument("--config", default=None,
                        help="TOML config file; explicit flags win")
        sp.add_argument("--track-error", action="store_true", default=None,
                        help="also run the interval-arithmetic pipeline and "
                             "report measured precision loss")

    g = sub.add_parser("generate", help="export the basis as a table")
    common(g)
    g.add_argument("--construction", choices=("recurrence", "gram-schmidt"),
                   default=None)
    g.add_argument("--max-output-digits", type=int, default=None,
                   help=f"significant digits per entry (default {DEFAULT_MAX_OUTPUT}, "
                        "clamped to digits - 10)")
    g.add_argument("--zero-print-threshold", type=int, default=None,
                   help="entries below 10^this print as '0' "
                        f"(default {DEFAULT_ZERO_EXPONENT})")
    g.add_argument("--no-sign-convention", dest="sign_convention",
                   action="store_false", default=None,
                   help="keep raw construction signs")

    v = sub.add_parser("verify", help="build and verify the defining conditions")
    common(v)
    v.add_argument("--construction", choices=("recurrence", "gram-schmidt", "both"),
                   default=None)

    c = sub.add_parser("convergence", help="measure ||T_n - Psi_n|| over a grid of N")
    common(c, need_n=False)
    c.add_argument("--orders", default=None,
                   help="comma-separated orders n (default 0-7)")
    c.add_argument("--dims", default=None,
                   help="comma-separated dimensions N (default 64,128,256)")

    s = sub.add_parser("seeds", help="dump S, alpha, beta, t and the u/v families")
    common(s)
    return p


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg_file = {}
    if getattr(args, "config", None):
        with open(args.config, "rb") as fh:
            cfg_file = tomllib.load(fh)

    def pick(name, default):
        explicit = getattr(args, name, None)
        if explicit is not None:
            return explicit
        if name in cfg_file:
            return cfg_file[name]
        return default

    command = args.command
    n_dim = pick("n_dim", None)
    if command != "convergence":
        if n_dim is None:
            raise SystemExit("error: --n-dim is required")
        if n_dim < 2:
            raise SystemExit(f"error: need N >= 2, got {n_dim}")

    orders = pick("orders", None)
    dims = pick("dims", None)
    if isinstance(orders, str):
        orders = _parse_int_list(orders)
    if isinstance(dims, str):
        dims = _parse_int_list(dims)
    if command == "convergence":
        orders = orders or list(range(8))
        dims = dims or [64, 128, 256]

    digits = pick("digits", None)
    if digits is None and os.environ.get(ENV_DIGITS):
        digits = int(os.environ[ENV_DIGITS])
    if digits is None:
        if command == "convergence":
            digits = max(CONVERGENCE_MIN_DIGITS, default_digits(max(dims)))
        else:
            digits = default_digits(n_dim)
    if digits < 30:
        raise SystemExit(f"error: need at least 30 digits, got {digits}")

    max_out = pick("max_output_digits", None)
    if max_out is None:
        # default printing budget, clamped so printed digits stay faithful
        max_out = min(DEFAULT_MAX_OUTPUT, digits - 10)
    elif max_out > digits - 10:
        raise SystemExit(
            f"error: max-output-digits {max_out} exceeds digits - 10 = {digits - 10}; "
            "printed digits could not be faithful")

    return RunConfig(
        command=command,
        n_dim=n_dim or 0,
        digits=digits,
        max_output_digits=max_out,
        zero_print_threshold=pick("zero_print_threshold", DEFAULT_ZERO_EXPONENT),
        output=pick("output", None),
        fmt=pick("fmt", "tsv"),
        sign_convention=pick("sign_convention", True),
        construction=pick("construction",
                          "both" if command == "verify" else "recurrence"),
        track_error=bool(pick("track_error", False)),
        orders=orders or [],
        dims=dims or [],
    )


def _nstr(x, n=12) -> str:
    return mp.nstr(mp.mpf(x), n) if x is not None else "n/a"


# ---------------------------------------------------------------------------

def cmd_generate(cfg: RunConfig) -> int:
    ctx = cfg.context()
    try:
        basis = build_basis(cfg.n_dim, ctx, construction=cfg.construction,
                            sign_convention=cfg.sign_convention)
    except DegenerateStepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = cfg.output or f"basis_N{cfg.n_dim}_d{cfg.digits}.{cfg.fmt}"
    try:
        write_table(basis, out, cfg.fmt, cfg.max_output_digits,
                    cfg.zero_print_threshold)
    except InsufficientPrecisionError as exc:
        print(f"error: insufficient precision: {exc}", file=sys.stderr)
        print("hint: raise --digits (with --track-error for a measured loss "
              "figure) or lower --max-output-digits", file=sys.stderr)
        return 1
    print(f"wrote {basis.n_dim} x {basis.n_dim} table ({cfg.fmt}, "
          f"{cfg.max_output_digits} significant digits) to {out}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    ctx = cfg.context()
    family = SeedFamily(cfg.n_dim, ctx)
    try:
        if cfg.construction == "both":
            basis = build_basis(cfg.n_dim, ctx, family=family)
            oracle = gram_schmidt_reference(family, ctx)
        elif cfg.construction == "gram-schmidt":
            basis = gram_schmidt_reference(family, ctx)
            oracle = None
        else:
            basis = build_basis(cfg.n_dim, ctx, family=family)
            oracle = None
    except DegenerateStepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = verify_basis(basis, ctx, oracle=oracle)
    pairs = check_fourier_pairs(family, ctx)
    pair_bound = mp.mpf(10) ** (-(cfg.digits - 30))
    ok = report.passed() and pairs.max_residual() <= pair_bound

    dims = eigenspace_dims(cfg.n_dim)
    print(f"minimal Hermite-type basis  N={cfg.n_dim}  digits={cfg.digits}  "
          f"construction={cfg.construction}")
    print(f"  orthonormality   max |<T_i,T_j> - delta_ij| = {_nstr(report.max_ortho_residual)}")
    print(f"  eigen-equation   max ||F T_n - lambda_n T_n|| = {_nstr(report.max_eigen_residual)}")
    wv = "all exact" if not report.width_violations else f"VIOLATED {report.width_violations}"
    print(f"  widths           floor((N+n+2)/4): {wv}")
    print(f"  multiplicities   {tuple(dims.as_tuple())}: "
          f"{'match' if report.dims_match else 'MISMATCH'}")
    print(f"  width ladders    {'ok' if report.column_widths_ok else 'BROKEN'}")
    if report.recurrence_symmetry_residual is not None:
        print(f"  recurrence       |<L T_n, T_n+4>| vs b_n: "
              f"{_nstr(report.recurrence_symmetry_residual)}")
    print(f"  fourier pairs    u: {_nstr(pairs.max_u_residual)}   "
          f"v: {_nstr(pairs.max_v_residual)}")
    if report.oracle_deviation is not None:
        print(f"  oracle agreement max min-sign ||T - T'|| = {_nstr(report.oracle_deviation)}")
    if report.precision_loss_digits is not None:
        kind = "interval" if basis.interval_loss_digits is not None else "proxy"
        print(f"  precision loss   {report.precision_loss_digits:.1f} digits ({kind})")
    print(f"{'PASS' if ok else 'FAIL'} (residual bound {_nstr(report.residual_bound(), 5)})")

    if cfg.output:
        payload = {
            "schema_version": 1,
            "command": "verify",
            "n_dim": cfg.n_dim,
            "digits": cfg.digits,
            "construction": cfg.construction,
            "max_ortho_residual": _nstr(report.max_ortho_residual),
            "max_eigen_residual": _nstr(report.max_eigen_residual),
            "width_violations": report.width_violations,
            "dims_match": report.dims_match,
            "column_widths_ok": report.column_widths_ok,
            "recurrence_symmetry_residual": _nstr(report.recurrence_symmetry_residual),
            "fourier_pair_u_residual": _nstr(pairs.max_u_residual),
            "fourier_pair_v_residual": _nstr(pairs.max_v_residual),
            "oracle_deviation": _nstr(report.oracle_deviation),
            "precision_loss_digits": report.precision_loss_digits,
            "passed": bool(ok),
        }
        with open(cfg.output, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        print(f"report written to {cfg.output}")
    return 0 if ok else 1


def cmd_convergence(cfg: RunConfig) -> int:
    ctx = PrecisionContext(digits=cfg.digits)
    report = convergence_report(cfg.orders, cfg.dims, ctx)
    header = ["n"] + [f"e_n({N})" for N in report.dims] + ["exponent", "monotone"]
    rows = []
    for n in report.orders:
        exp = report.exponents[n]
        rows.append([str(n)]
                    + [mp.nstr(e, 8) for e in report.errors[n]]
                    + ["n/a" if exp is None else f"{exp:.4f}",
                       "yes" if report.monotone[n] else "NO"])
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(s.ljust(w) for s, w in zip(r, widths)))

    if cfg.output:
        if cfg.fmt == "json" or cfg.output.endswith(".json"):
            with open(cfg.output, "w") as fh:
                json.dump(report.as_dict(), fh, indent=1)
                fh.write("\n")
        else:
            sep = "," if cfg.fmt == "csv" else "\t"
            with open(cfg.output, "w", newline="") as fh:
                fh.write(sep.join(header) + "\n")
                for r in rows:
                    fh.write(sep.join(r) + "\n")
        print(f"table written to {cfg.output}")
    return 0


def cmd_seeds(cfg: RunConfig) -> int:
    ctx = cfg.context()
    family = SeedFamily(cfg.n_dim, ctx)
    tol = mp.mpf(10) ** (-(cfg.digits - 20))
    refl = family.reflection_residual()
    split = family.product_split_residual()
    closed = family.closed_vs_product_residual()
    pairs = check_fourier_pairs(family, ctx)
    pair_bound = mp.mpf(10) ** (-(cfg.digits - 30))

    def flag(val, bound):
        return "ok" if val <= bound else "VIOLATED"

    show = min(cfg.max_output_digits, 30)
    print(f"seed family  N={cfg.n_dim}  digits={cfg.digits}")
    print(f"  S reflection identity    {_nstr(refl)}  [{flag(refl, tol)}]")
    print(f"  S product-split identity {_nstr(split)}  [{flag(split, tol)}]")
    print(f"  closed vs product forms  {_nstr(closed)}  [{flag(closed, tol)}]")
    print(f"  fourier pairs u / v      {_nstr(pairs.max_u_residual)} / "
          f"{_nstr(pairs.max_v_residual)}  "
          f"[{flag(pairs.max_residual(), pair_bound)}]")
    with ctx.workdps():
        print(f"  S(0..{cfg.n_dim - 1}):")
        for k in range(cfg.n_dim):
            print(f"    S({k}) = {mp.nstr(family.s(k), show)}")
        print("  alpha:", " ".join(
            mp.nstr(family.alpha(n), 12) for n in range(family.half_floor + 1)))
        if family.half_ceil > 1:
            print("  beta: ", " ".join(
                mp.nstr(family.beta(n), 12) for n in range(1, family.half_ceil)))
        print("  t:    ", " ".join(
            mp.nstr(family.t(k), 12) for k in family.index))

    if cfg.output:
        with ctx.workdps():
            payload = {
                "schema_version": 1,
                "command": "seeds",
                "n_dim": cfg.n_dim,
                "digits": cfg.digits,
                "s_table": [mp.nstr(family.s(k), cfg.max_output_digits)
                            for k in range(cfg.n_dim)],
                "alpha": [mp.nstr(family.alpha(n), cfg.max_output_digits)
                          for n in range(family.half_floor + 1)],
                "beta": [mp.nstr(family.beta(n), cfg.max_output_digits)
                         for n in range(1, family.half_ceil)],
                "t": [mp.nstr(family.t(k), cfg.max_output_digits)
                      for k in family.index],
                "u": {n: [mp.nstr(x, cfg.max_output_digits) for x in family.u(n)]
                      for n in range(family.half_floor + 1)},
                "v": {n: [mp.nstr(x, cfg.max_output_digits) for x in family.v(n)]
                      for n in range(1, family.half_ceil)},
                "identity_residuals": {
                    "reflection": _nstr(refl),
                    "product_split": _nstr(split),
                    "closed_vs_product": _nstr(closed),
                    "fourier_pair_u": _nstr(pairs.max_u_residual),
                    "fourier_pair_v": _nstr(pairs.max_v_residual),
                },
            }
        with open(cfg.output, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        print(f"dump written to {cfg.output}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _resolve(args)
    handler = {
        "generate": cmd_generate,
        "verify": cmd_verify,
        "convergence": cmd_convergence,
        "seeds": cmd_seeds,
    }[cfg.command]
    return handler(cfg)


if __name__ == "__main__":
    sys.exit(main())
