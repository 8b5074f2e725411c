"""Independent exact-arithmetic oracles used by the test suite.

Everything here is deliberately written against the textbook definitions in
exact rational arithmetic (fractions.Fraction), sharing no code with the
package, so agreement between the two is meaningful evidence.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


def exact_expected(matrix) -> list[list[Fraction]]:
    """E[i][j] = R_i * C_j / T in exact rationals."""
    rows = [[Fraction(v) for v in row] for row in matrix]
    r = [sum(row) for row in rows]
    c = [sum(col) for col in zip(*rows)]
    t = sum(r)
    return [[r[i] * c[j] / t for j in range(len(c))] for i in range(len(r))]


def exact_pearson(matrix) -> Fraction:
    """Sum over cells of (O - E)^2 / E in exact rationals."""
    rows = [[Fraction(v) for v in row] for row in matrix]
    e = exact_expected(matrix)
    total = Fraction(0)
    for i, row in enumerate(rows):
        for j, o in enumerate(row):
            d = o - e[i][j]
            total += d * d / e[i][j]
    return total


def exact_binomial_cdf(n: int, p: Fraction, k: int) -> Fraction:
    """P(X <= k) for X ~ Binomial(n, p), exact."""
    if k < 0:
        return Fraction(0)
    if k >= n:
        return Fraction(1)
    q = 1 - p
    total = Fraction(0)
    for i in range(k + 1):
        total += comb(n, i) * p**i * q ** (n - i)
    return total


def exact_binomial_inverse(n: int, p: float, u: float) -> int:
    """Smallest k with u < CDF(k), in exact arithmetic.

    ``p`` and ``u`` are converted to their exact binary values, so this is
    the mathematically correct inversion of the same inputs the float
    implementation sees.
    """
    pf = Fraction(p)
    uf = Fraction(u)
    cdf = Fraction(0)
    q = 1 - pf
    pmf = q**n
    for k in range(n + 1):
        cdf += pmf
        if uf < cdf:
            return k
        if k < n:
            pmf = pmf * (n - k) * pf / ((k + 1) * q)
    return n


def exact_sum_normalized_null_quantile(n: int, level: Fraction) -> Fraction:
    """Exact ``level``-quantile of the null distribution of chi2/T.

    Null model: two independent Binomial(n, 1/2) rows (a, n-a) and
    (b, n-b), conditioned on both column sums being positive (tables with a
    zero column are redrawn by the sampler). The statistic is the Pearson
    sum divided by the grand total 2n. Enumerates all (a, b) exactly.
    """
    weights: dict[Fraction, int] = {}
    valid = 0
    for a in range(n + 1):
        wa = comb(n, a)
        for b in range(n + 1):
            if a + b == 0 or (n - a) + (n - b) == 0:
                continue
            w = wa * comb(n, b)
            valid += w
            s = exact_pearson([[a, n - a], [b, n - b]]) / (2 * n)
            weights[s] = weights.get(s, 0) + w
    need = level * valid
    acc = 0
    for s in sorted(weights):
        acc += weights[s]
        if acc >= need:
            return s
    raise AssertionError("level > 1")


def exact_null_exceedance(n: int, threshold: Fraction) -> Fraction:
    """Exact P(statistic > threshold) under the same conditional null."""
    above = 0
    valid = 0
    for a in range(n + 1):
        wa = comb(n, a)
        for b in range(n + 1):
            if a + b == 0 or (n - a) + (n - b) == 0:
                continue
            w = wa * comb(n, b)
            valid += w
            s = exact_pearson([[a, n - a], [b, n - b]]) / (2 * n)
            if s > threshold:
                above += w
    return Fraction(above, valid)
