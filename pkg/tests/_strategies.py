"""Shared hypothesis strategies for random valid tables."""

from __future__ import annotations

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st


@st.composite
def valid_tables(draw, max_dim: int = 6, max_entry: float = 100.0):
    """Random m x n float tables with positive margins."""
    m = draw(st.integers(2, max_dim))
    n = draw(st.integers(2, max_dim))
    entries = draw(
        st.lists(
            st.lists(
                st.floats(0.0, max_entry, allow_nan=False, allow_infinity=False),
                min_size=n,
                max_size=n,
            ),
            min_size=m,
            max_size=m,
        )
    )
    arr = np.asarray(entries, dtype=float)
    assume(arr.sum(axis=1).min() > 1e-6)
    assume(arr.sum(axis=0).min() > 1e-6)
    return arr


def seeded_corpus(seed: int, count: int, max_dim: int = 6,
                  max_entry: float = 100.0) -> list[np.ndarray]:
    """Deterministic corpus of random valid tables."""
    rng = np.random.RandomState(seed)
    out = []
    while len(out) < count:
        m = rng.randint(2, max_dim + 1)
        n = rng.randint(2, max_dim + 1)
        arr = rng.uniform(0.0, max_entry, size=(m, n))
        if arr.sum(axis=1).min() > 1e-6 and arr.sum(axis=0).min() > 1e-6:
            out.append(arr)
    return out


def rank_one_corpus(seed: int, count: int, max_dim: int = 6) -> list[np.ndarray]:
    """Deterministic corpus of outer products of positive vectors."""
    rng = np.random.RandomState(seed)
    out = []
    for _ in range(count):
        m = rng.randint(2, max_dim + 1)
        n = rng.randint(2, max_dim + 1)
        u = rng.uniform(0.1, 10.0, size=m)
        v = rng.uniform(0.1, 10.0, size=n)
        out.append(np.outer(u, v))
    return out
