"""Pure-Python sampling kernel.

This module is the reference implementation of the Monte Carlo hot path; the
compiled twin in ``_ckernel.pyx`` performs the same floating-point operations
in the same order and must produce bit-identical results. Keep the two in
lockstep when editing either.

PRNG, written out so results are reproducible across platforms and backends:

* Per-trial seeds come from the splitmix64 finalizer. Trial ``i`` under user
  seed ``s`` uses ``mix64(s + (i + 1) * 0x9E3779B97F4A7C15)`` (the (i+1)-th
  splitmix64 output), so trials are independent streams and the trial loop
  can run in any order.
* Uniforms come from xorshift64*: the state is xorshifted (12, 25, 27), the
  output is ``state * 0x2545F4914F6CDD1D``, and a double in [0, 1) is the top
  53 bits of that output scaled by 2^-53.

Binomial draws invert the CDF with a single uniform. To avoid the underflow
of a left-to-right scan (for n beyond ~1400, (1-p)^n is exactly 0 in double
precision) the scan is anchored at the mode: the mode pmf is computed from
log-gamma, pass A accumulates the left-tail mass downward from the mode, and
the inversion then walks up or down with pmf recurrence ratios. The down-walk
repeats pass A's multiplication sequence exactly so both backends agree to
the last bit. Degenerate draws (n == 0, p <= 0, p >= 1) consume no uniform.
"""

from __future__ import annotations

from math import exp, log, log1p

import numpy as np

from .distributions import log_gamma
from .errors import DegenerateProbabilitiesError

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_SM_MUL1 = 0xBF58476D1CE4E5B9
_SM_MUL2 = 0x94D049BB133111EB
_XS_MUL = 0x2545F4914F6CDD1D
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53, exact

KIND_SQUARED_DENOM = 0
KIND_SUM_NORMALIZED = 1
KIND_MAX_NORMALIZED = 2

BACKEND_NAME = "pure-python"


def mix64(z: int) -> int:
    """splitmix64 finalizer: scrambles a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _SM_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _SM_MUL2) & MASK64
    return z ^ (z >> 31)


def stream_seed(seed: int, index: int) -> int:
    """Seed for independent stream ``index`` derived from a user seed."""
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


class Xorshift64Star:
    """xorshift64* generator; the seed is scrambled through mix64 first."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        s = mix64(seed)
        # the all-zero state is a fixed point of the xorshift map
        self.state = s if s != 0 else GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * _XS_MUL) & MASK64

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53


def prng_doubles(seed: int, count: int) -> list[float]:
    rng = Xorshift64Star(seed)
    return [rng.next_double() for _ in range(count)]


def binomial_inverse(n: int, p: float, rng: Xorshift64Star) -> int:
    """One Binomial(n, p) draw by CDF inversion (one uniform consumed)."""
    if n <= 0:
        return 0
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return n
    u = rng.next_double()
    q = 1.0 - p
    odds = p / q

    mode = int((n + 1) * p)
    if mode > n:
        mode = n
    log_pmf = (
        log_gamma(float(n + 1))
        - log_gamma(float(mode + 1))
        - log_gamma(float(n - mode + 1))
        + mode * log(p)
        + (n - mode) * log1p(-p)
    )
    pmf_mode = exp(log_pmf)

    # pass A: left-tail mass below the mode, largest terms first
    left = 0.0
    pmf = pmf_mode
    k = mode
    while k > 0:
        pmf *= k / ((n - k + 1) * odds)
        if pmf == 0.0:
            break
        left += pmf
        k -= 1

    if u >= left:
        # walk up from the mode
        cdf = left + pmf_mode
        k = mode
        pmf = pmf_mode
        while u >= cdf and k < n:
            pmf *= ((n - k) / (k + 1)) * odds
            k += 1
            if pmf == 0.0:
                break
            cdf += pmf
        return k

    # walk down from the mode; the pmf sequence here repeats pass A exactly
    j = mode - 1
    cdf = left
    pmf = pmf_mode * (mode / ((n - mode + 1) * odds))
    while j > 0:
        if pmf == 0.0:
            return j
        lower = cdf - pmf
        if u >= lower:
            return j
        cdf = lower
        pmf *= j / ((n - j + 1) * odds)
        j -= 1
    return 0


def binomial_draws(n: int, p: float, seed: int, count: int) -> list[int]:
    rng = Xorshift64Star(seed)
    return [binomial_inverse(n, p, rng) for _ in range(count)]


def multinomial_row(total: int, probs, rng: Xorshift64Star) -> list[int]:
    """One multinomial draw as sequential conditional binomials."""
    n_cols = len(probs)
    counts = [0] * n_cols
    remaining = int(total)
    rest = 1.0
    for j in range(n_cols - 1):
        pj = probs[j]
        cond = pj / rest
        draw = binomial_inverse(remaining, cond, rng)
        counts[j] = draw
        remaining -= draw
        rest = rest - pj
    counts[n_cols - 1] = remaining
    return counts


def sample_table_counts(row_totals, probs, rng: Xorshift64Star,
                        max_retries: int = 100) -> list[list[int]]:
    """Sample a full table, resampling while any column is all zero."""
    n_cols = len(probs)
    for _ in range(max_retries):
        counts = [multinomial_row(r, probs, rng) for r in row_totals]
        degenerate = False
        for j in range(n_cols):
            col = 0
            for row in counts:
                col += row[j]
            if col == 0:
                degenerate = True
                break
        if not degenerate:
            return counts
    raise DegenerateProbabilitiesError(
        f"no table with positive column sums after {max_retries} attempts; "
        f"pooled probabilities {tuple(probs)!r} are too close to degenerate"
    )


def sample_table(row_totals, probs, seed: int,
                 max_retries: int = 100) -> list[list[int]]:
    rng = Xorshift64Star(seed)
    return sample_table_counts(row_totals, probs, rng, max_retries)


def table_statistic(kind: int, counts, row_totals) -> float:
    """Statistic of a sampled count table against its own margins.

    kind 0: sum of (O-E)^2 / E^2; kind 1: Pearson sum divided by the grand
    total; kind 2: Pearson sum divided by the largest count.
    """
    n_rows = len(row_totals)
    n_cols = len(counts[0])
    total = 0
    for r in row_totals:
        total += r
    totalf = float(total)

    col_sums = [0] * n_cols
    max_count = 0
    for i in range(n_rows):
        row = counts[i]
        for j in range(n_cols):
            c = row[j]
            col_sums[j] += c
            if c > max_count:
                max_count = c

    acc = 0.0
    for i in range(n_rows):
        row = counts[i]
        ri = row_totals[i]
        for j in range(n_cols):
            e = float(ri * col_sums[j]) / totalf
            d = row[j] - e
            if kind == KIND_SQUARED_DENOM:
                acc += d * d / (e * e)
            else:
                acc += d * d / e

    if kind == KIND_SUM_NORMALIZED:
        return acc / totalf
    if kind == KIND_MAX_NORMALIZED:
        return acc / float(max_count)
    return acc


def null_statistics(kind: int, row_totals, probs, trials: int, seed: int,
                    max_retries: int = 100) -> np.ndarray:
    """Statistics of ``trials`` independent null tables, one stream each."""
    row_totals = [int(r) for r in row_totals]
    probs = [float(p) for p in probs]
    out = np.empty(trials, dtype=np.float64)
    for i in range(trials):
        rng = Xorshift64Star(stream_seed(seed, i))
        counts = sample_table_counts(row_totals, probs, rng, max_retries)
        out[i] = table_statistic(kind, counts, row_totals)
    return out
