# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernel.

Twin of ``_kernel.py``: every floating-point expression here repeats the pure
kernel's operations in the same order, so the two backends produce
bit-identical results (the build deliberately disables FP contraction). Keep
the two files in lockstep when editing either. The algorithms themselves are
documented in ``_kernel.py``.
"""

from libc.math cimport exp, log, log1p
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

import numpy as np

from chi_audit.errors import DegenerateProbabilitiesError

BACKEND_NAME = "compiled"

KIND_SQUARED_DENOM = 0
KIND_SUM_NORMALIZED = 1
KIND_MAX_NORMALIZED = 2

cdef uint64_t _MASK64 = 0xFFFFFFFFFFFFFFFF
cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15
cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _stream_seed(uint64_t seed, uint64_t index) noexcept nogil:
    return _mix64(seed + (index + 1) * _GOLDEN)


cdef inline uint64_t _init_state(uint64_t seed) noexcept nogil:
    cdef uint64_t s = _mix64(seed)
    if s == 0:
        s = _GOLDEN
    return s


cdef inline uint64_t _next_u64(uint64_t* state) noexcept nogil:
    cdef uint64_t x = state[0]
    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    state[0] = x
    return x * <uint64_t>0x2545F4914F6CDD1D


cdef inline double _next_double(uint64_t* state) noexcept nogil:
    return <double>(_next_u64(state) >> 11) * _INV_2_53


cdef inline double _log_gamma(double x) noexcept nogil:
    # Lanczos, g = 7, 9 terms; callers only pass x >= 1 (factorial arguments)
    cdef double z = x - 1.0
    cdef double acc = 0.99999999999980993
    acc += 676.5203681218851 / (z + 1.0)
    acc += -1259.1392167224028 / (z + 2.0)
    acc += 771.32342877765313 / (z + 3.0)
    acc += -176.61502916214059 / (z + 4.0)
    acc += 12.507343278686905 / (z + 5.0)
    acc += -0.13857109526572012 / (z + 6.0)
    acc += 9.9843695780195716e-6 / (z + 7.0)
    acc += 1.5056327351493116e-7 / (z + 8.0)
    cdef double t = z + 7.0 + 0.5
    return 0.9189385332046727 + (z + 0.5) * log(t) - t + log(acc)


cdef int64_t _binomial_inverse(int64_t n, double p, uint64_t* state) noexcept nogil:
    cdef double u, q, odds, log_pmf, pmf_mode, left, pmf, cdf, lower
    cdef int64_t mode, k, j

    if n <= 0:
        return 0
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return n
    u = _next_double(state)
    q = 1.0 - p
    odds = p / q

    mode = <int64_t>(<double>(n + 1) * p)
    if mode > n:
        mode = n
    log_pmf = (
        _log_gamma(<double>(n + 1))
        - _log_gamma(<double>(mode + 1))
        - _log_gamma(<double>(n - mode + 1))
        + <double>mode * log(p)
        + <double>(n - mode) * log1p(-p)
    )
    pmf_mode = exp(log_pmf)

    left = 0.0
    pmf = pmf_mode
    k = mode
    while k > 0:
        pmf *= <double>k / (<double>(n - k + 1) * odds)
        if pmf == 0.0:
            break
        left += pmf
        k -= 1

    if u >= left:
        cdf = left + pmf_mode
        k = mode
        pmf = pmf_mode
        while u >= cdf and k < n:
            pmf *= (<double>(n - k) / <double>(k + 1)) * odds
            k += 1
            if pmf == 0.0:
                break
            cdf += pmf
        return k

    j = mode - 1
    cdf = left
    pmf = pmf_mode * (<double>mode / (<double>(n - mode + 1) * odds))
    while j > 0:
        if pmf == 0.0:
            return j
        lower = cdf - pmf
        if u >= lower:
            return j
        cdf = lower
        pmf *= <double>j / (<double>(n - j + 1) * odds)
        j -= 1
    return 0


cdef void _multinomial_row(int64_t total, double* probs, int n_cols,
                           int64_t* out, uint64_t* state) noexcept nogil:
    cdef int j
    cdef int64_t remaining = total
    cdef double rest = 1.0
    cdef double pj, cond
    cdef int64_t draw
    for j in range(n_cols - 1):
        pj = probs[j]
        cond = pj / rest
        draw = _binomial_inverse(remaining, cond, state)
        out[j] = draw
        remaining -= draw
        rest = rest - pj
    out[n_cols - 1] = remaining


cdef int _sample_table(int64_t* row_totals, int n_rows, double* probs,
                       int n_cols, int64_t* counts, uint64_t* state,
                       int max_retries) noexcept nogil:
    # returns 0 on success, -1 when every attempt had an all-zero column
    cdef int attempt, i, j, ok
    cdef int64_t col
    for attempt in range(max_retries):
        for i in range(n_rows):
            _multinomial_row(row_totals[i], probs, n_cols,
                             counts + i * n_cols, state)
        ok = 1
        for j in range(n_cols):
            col = 0
            for i in range(n_rows):
                col += counts[i * n_cols + j]
            if col == 0:
                ok = 0
                break
        if ok:
            return 0
    return -1


cdef double _table_statistic(int kind, int64_t* counts, int64_t* row_totals,
                             int n_rows, int n_cols,
                             int64_t* col_sums) noexcept nogil:
    cdef int i, j
    cdef int64_t total = 0
    cdef int64_t max_count = 0
    cdef int64_t c, ri
    cdef double totalf, acc, e, d

    for i in range(n_rows):
        total += row_totals[i]
    totalf = <double>total

    for j in range(n_cols):
        col_sums[j] = 0
    for i in range(n_rows):
        for j in range(n_cols):
            c = counts[i * n_cols + j]
            col_sums[j] += c
            if c > max_count:
                max_count = c

    acc = 0.0
    for i in range(n_rows):
        ri = row_totals[i]
        for j in range(n_cols):
            e = <double>(ri * col_sums[j]) / totalf
            d = <double>counts[i * n_cols + j] - e
            if kind == 0:
                acc += d * d / (e * e)
            else:
                acc += d * d / e

    if kind == 1:
        return acc / totalf
    if kind == 2:
        return acc / <double>max_count
    return acc


def mix64(z):
    return _mix64(<uint64_t>(int(z) & 0xFFFFFFFFFFFFFFFF))


def stream_seed(seed, index):
    return _stream_seed(<uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF),
                        <uint64_t>(int(index) & 0xFFFFFFFFFFFFFFFF))


def prng_doubles(seed, count):
    cdef uint64_t state = _init_state(
        <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF))
    cdef int i
    out = []
    for i in range(count):
        out.append(_next_double(&state))
    return out


def binomial_draws(n, p, seed, count):
    cdef uint64_t state = _init_state(
        <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF))
    cdef int64_t cn = n
    cdef double cp = p
    cdef int i
    out = []
    for i in range(count):
        out.append(_binomial_inverse(cn, cp, &state))
    return out


cdef class _Buffers:
    # owns the malloc'd working memory for the python-facing entry points
    cdef int64_t* row_totals
    cdef double* probs
    cdef int64_t* counts
    cdef int64_t* col_sums
    cdef int n_rows
    cdef int n_cols

    def __cinit__(self, row_totals, probs):
        cdef int i
        self.n_rows = len(row_totals)
        self.n_cols = len(probs)
        self.row_totals = <int64_t*>malloc(self.n_rows * sizeof(int64_t))
        self.probs = <double*>malloc(self.n_cols * sizeof(double))
        self.counts = <int64_t*>malloc(self.n_rows * self.n_cols * sizeof(int64_t))
        self.col_sums = <int64_t*>malloc(self.n_cols * sizeof(int64_t))
        if (self.row_totals == NULL or self.probs == NULL
                or self.counts == NULL or self.col_sums == NULL):
            raise MemoryError()
        for i in range(self.n_rows):
            self.row_totals[i] = int(row_totals[i])
        for i in range(self.n_cols):
            self.probs[i] = float(probs[i])

    def __dealloc__(self):
        free(self.row_totals)
        free(self.probs)
        free(self.counts)
        free(self.col_sums)


def sample_table(row_totals, probs, seed, max_retries=100):
    cdef _Buffers buf = _Buffers(row_totals, probs)
    cdef uint64_t state = _init_state(
        <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF))
    cdef int status = _sample_table(buf.row_totals, buf.n_rows, buf.probs,
                                    buf.n_cols, buf.counts, &state,
                                    int(max_retries))
    if status != 0:
        raise DegenerateProbabilitiesError(
            f"no table with positive column sums after {int(max_retries)} "
            f"attempts; pooled probabilities {tuple(probs)!r} are too close "
            f"to degenerate"
        )
    cdef int i, j
    return [
        [buf.counts[i * buf.n_cols + j] for j in range(buf.n_cols)]
        for i in range(buf.n_rows)
    ]


def table_statistic(kind, counts, row_totals):
    probs = [0.0] * len(counts[0])
    cdef _Buffers buf = _Buffers(row_totals, probs)
    cdef int i, j
    for i in range(buf.n_rows):
        row = counts[i]
        for j in range(buf.n_cols):
            buf.counts[i * buf.n_cols + j] = int(row[j])
    return _table_statistic(int(kind), buf.counts, buf.row_totals,
                            buf.n_rows, buf.n_cols, buf.col_sums)


def null_statistics(kind, row_totals, probs, trials, seed, max_retries=100):
    cdef _Buffers buf = _Buffers(row_totals, probs)
    cdef uint64_t seed_u = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int ckind = int(kind)
    cdef int retries = int(max_retries)
    cdef int64_t n_trials = int(trials)
    cdef int64_t i
    cdef int64_t failed_at = -1
    cdef uint64_t state

    out = np.empty(n_trials, dtype=np.float64)
    cdef double[::1] view = out

    with nogil:
        for i in range(n_trials):
            state = _init_state(_stream_seed(seed_u, <uint64_t>i))
            if _sample_table(buf.row_totals, buf.n_rows, buf.probs,
                             buf.n_cols, buf.counts, &state, retries) != 0:
                failed_at = i
                break
            view[i] = _table_statistic(ckind, buf.counts, buf.row_totals,
                                       buf.n_rows, buf.n_cols, buf.col_sums)

    if failed_at >= 0:
        raise DegenerateProbabilitiesError(
            f"no table with positive column sums after {retries} attempts "
            f"(trial {failed_at}); pooled probabilities {tuple(probs)!r} are "
            f"too close to degenerate"
        )
    return out
