"""Interval-arithmetic error tracking for the basis construction.

The three-term recurrence subtracts nearly equal vectors and divides by a
small norm, so rounding errors are amplified steadily (empirically about 0.43
decimal digits per recurrence step).  Running the identical pipeline under
mpmath's interval context makes that loss measurable: every scalar carries an
enclosure, and the final enclosure widths tell how many digits survived.

Loss is reported as

    loss = digits + log10(max absolute interval width over basis entries),

i.e. the number of working digits consumed; the basis vectors are unit norm,
so absolute widths are the scale-free measure (it is also what a print-time
faithfulness check would compare against).  The production path stays on
plain mpf arithmetic; this module is only a measurement instrument.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, Optional

from mpmath import iv, mp

from .core import PeriodicVector, IndexSet, PrecisionContext, norm, two_cos_table
from .basis import (eigenspace_dims, recurrence_step, seed_indices,
                    SEED_MIN_DIM, _column_lengths)
from .seeds import s_table, u_entries, v_entries

__all__ = ["IntervalLossReport", "measure_precision_loss"]


@dataclass
class IntervalLossReport:
    """Measured precision loss of one interval-tracked construction."""

    n_dim: int
    digits: int
    loss_digits: float        # over every basis entry
    loss_last_digits: float   # over the final (deepest) vector only
    max_abs_width: object     # worst enclosure width, mpf
    steps: int
    elapsed_s: float


def _max_width(vec: PeriodicVector):
    w = mp.mpf(0)
    for x in vec:
        w = max(w, mp.mpf(x.delta.a))
    return w


def _interval_seed_vectors(n_dim: int, s_tab: list) -> Dict[int, PeriodicVector]:
    idx = IndexSet(n_dim)
    out = {}
    for m, sign, fam, first, partner in seed_indices(n_dim):
        build = u_entries if fam == "u" else v_entries
        a = PeriodicVector(idx, build(first, n_dim, s_tab, iv))
        b = PeriodicVector(idx, build(partner, n_dim, s_tab, iv))
        vec = a + sign * b
        out[m] = vec / norm(vec, iv)
    return out


def measure_precision_loss(n_dim: int, ctx: PrecisionContext,
                           max_order: Optional[int] = None) -> IntervalLossReport:
    """Rerun the seed-and-recurrence construction in interval arithmetic.

    For N below the seed threshold only the u/v family enclosures are
    measured (there is no recurrence to lose precision in).  Raises
    :class:`DegenerateStepError` when an enclosure of some b_n reaches zero,
    i.e. the working precision has been fully consumed.
    """
    t0 = time.perf_counter()
    old_dps = iv.dps
    iv.dps = ctx.digits
    try:
        s_tab = s_table(n_dim, iv)
        if n_dim < SEED_MIN_DIM:
            idx = IndexSet(n_dim)
            worst = mp.mpf(0)
            for n in range(0, n_dim // 2 + 1):
                worst = max(worst, _max_width(
                    PeriodicVector(idx, u_entries(n, n_dim, s_tab, iv))))
            for n in range(1, (n_dim + 1) // 2):
                worst = max(worst, _max_width(
                    PeriodicVector(idx, v_entries(n, n_dim, s_tab, iv))))
            loss = float(ctx.digits + mp.log10(worst)) if worst > 0 else 0.0
            loss = max(loss, 0.0)
            return IntervalLossReport(n_dim, ctx.digits, loss, loss, worst, 0,
                                      time.perf_counter() - t0)

        vectors = _interval_seed_vectors(n_dim, s_tab)
        two_cos = two_cos_table(n_dim, iv)
        counts = _column_lengths(eigenspace_dims(n_dim), max_order)
        steps = 0
        deepest = max(m + 4 * (counts[m] - 1) for m in range(4) if counts[m])
        worst = mp.mpf(0)
        worst_last = mp.mpf(0)
        for m in range(4):
            if counts[m] == 0:
                continue
            t_prev = None
            b_prev = None
            for step_no in range(counts[m] - 1):
                n = m + 4 * step_no
                step = recurrence_step(vectors[n], t_prev, b_prev, ctx,
                                       mctx=iv, two_cos=two_cos, index=n)
                vectors[n + 4] = step.vector
                t_prev, b_prev = vectors[n], step.b
                steps += 1
            top = m + 4 * (counts[m] - 1)
            for idx_n in range(m, top + 1, 4):
                w = _max_width(vectors[idx_n])
                worst = max(worst, w)
                if idx_n == deepest:
                    worst_last = w
        loss = float(ctx.digits + mp.log10(worst)) if worst > 0 else 0.0
        loss_last = float(ctx.digits + mp.log10(worst_last)) if worst_last > 0 else 0.0
        return IntervalLossReport(n_dim, ctx.digits, max(loss, 0.0),
                                  max(loss_last, 0.0), worst, steps,
                                  time.perf_counter() - t0)
    finally:
        iv.dps = old_dps
