"""Nonparametric two-sample test, effect size and rank correlation."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

from ..errors import DegenerateData, InvalidArgument

EXACT_MAX_N = 30


class MannWhitneyResult(NamedTuple):
    U: float
    p: float
    method: str


@lru_cache(maxsize=None)
def _u_counts(m: int, n: int) -> tuple:
    """Number of arrangements giving each U = 0..m*n for samples of size m and n.

    Recurrence on whether the largest observation belongs to the first sample:
    c(u; m, n) = c(u - n; m - 1, n) + c(u; m, n - 1).
    """
    if m == 0 or n == 0:
        return (1,)
    a = _u_counts(m - 1, n)
    b = _u_counts(m, n - 1)
    out = [0] * (m * n + 1)
    for u, c in enumerate(a):
        out[u + n] += c
    for u, c in enumerate(b):
        out[u] += c
    return tuple(out)


def mann_whitney_u(a, b, method: str = "auto") -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    U counts pairs with a_i > b_j (ties count one half); the reported U is
    min(U_a, U_b). With method='auto' the exact null distribution is used
    when there are no ties and len(a) + len(b) <= 30, otherwise the normal
    approximation with tie and continuity corrections.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise InvalidArgument("both samples must be non-empty")
    if method not in ("auto", "exact", "normal"):
        raise InvalidArgument(f"unknown method {method!r}")

    ranks = rankdata(np.concatenate([a, b]))
    u_a = ranks[:na].sum() - na * (na + 1) / 2.0
    u_b = na * nb - u_a
    u = min(u_a, u_b)
    _, tie_sizes = np.unique(ranks, return_counts=True)
    has_ties = bool(np.any(tie_sizes > 1))

    if method == "exact" and has_ties:
        raise InvalidArgument("exact test is only available without ties")
    if method == "exact" or (method == "auto" and not has_ties and na + nb <= EXACT_MAX_N):
        counts = _u_counts(na, nb)
        tail = sum(counts[: int(round(u)) + 1]) / math.comb(na + nb, na)
        return MannWhitneyResult(float(u), min(1.0, 2.0 * tail), "exact")

    n = na + nb
    tie_term = float((tie_sizes ** 3 - tie_sizes).sum()) / (n * (n - 1))
    var = na * nb / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return MannWhitneyResult(float(u), 1.0, "normal_approx")
    z = max(abs(u_a - na * nb / 2.0) - 0.5, 0.0) / math.sqrt(var)
    return MannWhitneyResult(float(u), min(1.0, math.erfc(z / math.sqrt(2.0))), "normal_approx")


def cohens_d(a, b) -> float:
    """Standardised mean difference with the pooled unbiased standard deviation."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if len(a) < 2 or len(b) < 2:
        raise InvalidArgument("cohens_d needs at least two values per group")
    pooled = ((len(a) - 1) * a.var(ddof=1) + (len(b) - 1) * b.var(ddof=1)) / (len(a) + len(b) - 2)
    if not pooled > 0:
        raise DegenerateData("pooled variance is zero")
    return float((a.mean() - b.mean()) / math.sqrt(pooled))


def spearman_rho(x, y) -> float:
    """Pearson correlation of average ranks."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if len(x) != len(y):
        raise InvalidArgument(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise InvalidArgument("spearman_rho needs at least 3 pairs")
    rx = rankdata(x) - (len(x) + 1) / 2.0
    ry = rankdata(y) - (len(y) + 1) / 2.0
    denom = math.sqrt((rx * rx).sum() * (ry * ry).sum())
    if denom == 0:
        raise DegenerateData("one of the inputs has constant ranks")
    return float((rx * ry).sum() / denom)
