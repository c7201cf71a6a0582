"""Bivariate joint moments and joint cumulants of arbitrary order.

Two independent moment-to-cumulant conversion routes are provided:

* ``moments_to_cumulants`` -- truncated logarithm of the bivariate moment
  generating series (production path, O(N^4) coefficient arithmetic);
* ``moments_to_cumulants_partition`` -- literal partition sum over block
  types with multiplicity counts (oracle path, capped at total order 12).

Both operate on plug-in sample moments; centering is applied before any
cumulant of a sample is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PARTITION_ORDER_CAP = 12


@dataclass(frozen=True)
class BivariateSample:
    """Two aligned numeric series of equal length n >= 2, all entries finite."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.ndim != 1:
            raise ValueError("x and y must be one-dimensional")
        if x.shape != y.shape:
            raise ValueError(f"x and y lengths differ: {x.size} vs {y.size}")
        if x.size < 2:
            raise ValueError("need at least 2 observations")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("non-finite entries in sample")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size

    def swapped(self) -> "BivariateSample":
        return BivariateSample(self.y, self.x)


@dataclass(frozen=True)
class MomentTable:
    """Raw or central moments m[p, q] = E[x^p y^q] for all p + q <= order."""

    order: int
    m: np.ndarray  # (order+1, order+1), entries with p+q > order are zero
    centered: bool

    def entry(self, p: int, q: int) -> float:
        if p + q > self.order:
            raise ValueError(f"moment ({p},{q}) beyond table order {self.order}")
        return float(self.m[p, q])


@dataclass(frozen=True)
class CumulantTable:
    """Joint cumulants kappa[a, b] for all 1 <= a + b <= order."""

    order: int
    kappa: np.ndarray  # (order+1, order+1); [0, 0] unused (zero)

    def entry(self, a: int, b: int) -> float:
        if a + b > self.order:
            raise ValueError(f"cumulant ({a},{b}) beyond table order {self.order}")
        return float(self.kappa[a, b])

    def swapped(self) -> "CumulantTable":
        """Table with the roles of the two variables exchanged."""
        return CumulantTable(self.order, self.kappa.T.copy())


def compute_moments(sample: BivariateSample, order: int, center: bool = True) -> MomentTable:
    """Plug-in sample moments m[p, q] = (1/n) sum_t x_t^p y_t^q up to total `order`.

    When `center` is set the moments are taken on mean-centered data.
    Accumulation relies on numpy's pairwise-summed means.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    x = sample.x
    y = sample.y
    if center:
        x = x - x.mean()
        y = y - y.mean()
    # power matrices: xp[:, p] = x**p
    xp = np.vander(x, order + 1, increasing=True)
    yq = np.vander(y, order + 1, increasing=True)
    m = np.zeros((order + 1, order + 1))
    for p in range(order + 1):
        row = np.mean(xp[:, p : p + 1] * yq[:, : order + 1 - p], axis=0)
        m[p, : order + 1 - p] = row
    return MomentTable(order=order, m=m, centered=center)


def _truncated_product(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Product of two bivariate polynomials, keeping only total degree <= order."""
    out = np.zeros_like(a)
    for p in range(order + 1):
        for q in range(order + 1 - p):
            if a[p, q] == 0.0:
                continue
            blk = b[: order + 1 - p, : order + 1 - q]
            out[p : p + blk.shape[0], q : q + blk.shape[1]] += a[p, q] * blk
    # drop entries of total degree > order written by the block updates
    rows, cols = np.indices(out.shape)
    out[rows + cols > order] = 0.0
    return out


def moments_to_cumulants(moments: MomentTable) -> CumulantTable:
    """Convert a moment table to cumulants via log of the moment series.

    Works on exponential-generating-function coefficients: with
    M(s,t) = sum m[p,q] s^p t^q / (p! q!), the cumulant series is
    K = log M, truncated at total order N. Exact polynomial identity
    in the moments.
    """
    n = moments.order
    fact = np.array([math.factorial(i) for i in range(n + 1)], dtype=float)
    egf = moments.m / np.outer(fact, fact)
    if not np.isclose(egf[0, 0], 1.0):
        raise ValueError("moment table must have m[0,0] = 1")
    a = egf.copy()
    a[0, 0] = 0.0
    # log(1 + A) = sum_{h>=1} (-1)^(h-1) A^h / h; A has no constant term,
    # so powers beyond h = N vanish under truncation.
    log_coeffs = np.zeros_like(a)
    power = a.copy()
    log_coeffs += power
    for h in range(2, n + 1):
        power = _truncated_product(power, a, n)
        log_coeffs += ((-1) ** (h - 1) / h) * power
    kappa = log_coeffs * np.outer(fact, fact)
    kappa[0, 0] = 0.0
    rows, cols = np.indices(kappa.shape)
    kappa[rows + cols > n] = 0.0
    return CumulantTable(order=n, kappa=kappa)


# alias matching the two-route naming used in tests
moments_to_cumulants_series = moments_to_cumulants


def _vector_partitions(a: int, b: int, max_p: int, max_q: int):
    """Yield partitions of the index vector (a, b) into nonzero parts.

    Parts appear in non-increasing lexicographic order, each part bounded
    by (max_p, max_q), so every multiset of parts is produced once.
    """
    if a == 0 and b == 0:
        yield tuple()
        return
    for p in range(min(a, max_p), -1, -1):
        q_hi = max_q if p == max_p else b
        for q in range(min(b, q_hi), -1, -1):
            if p == 0 and q == 0:
                continue
            for rest in _vector_partitions(a - p, b - q, p, q):
                yield ((p, q),) + rest


@lru_cache(maxsize=None)
def _block_type_multisets(a: int, b: int):
    """Multisets of nonzero index pairs summing to (a, b), as ((p, q), count) runs."""
    collapsed = []
    for parts in _vector_partitions(a, b, a, b):
        counted = []
        for part in parts:
            if counted and counted[-1][0] == part:
                counted[-1] = (part, counted[-1][1] + 1)
            else:
                counted.append((part, 1))
        collapsed.append(tuple(counted))
    return tuple(collapsed)


def _partition_cumulant(moments: MomentTable, a: int, b: int) -> float:
    """kappa[a,b] by the set-partition sum, grouped by block-type multiset.

    A partition of the a+b labeled slots whose blocks have type multiset
    {(p_i, q_i)^{c_i}} occurs  a! b! / (prod p_i!^{c_i} q_i!^{c_i} c_i!)
    times, each contributing (-1)^(h-1) (h-1)! prod m[p_i, q_i]^{c_i}.
    """
    total = 0.0
    norm = math.factorial(a) * math.factorial(b)
    for typed in _block_type_multisets(a, b):
        h = sum(c for _, c in typed)
        mult = norm
        prod = 1.0
        for (p, q), c in typed:
            mult //= (math.factorial(p) * math.factorial(q)) ** c * math.factorial(c)
            prod *= moments.m[p, q] ** c
        total += (-1) ** (h - 1) * math.factorial(h - 1) * mult * prod
    return total


def moments_to_cumulants_partition(moments: MomentTable) -> CumulantTable:
    """Independent oracle conversion via the literal partition sum.

    Capped at total order 12 (Bell-number growth); the series route has
    no such cap and is the production path.
    """
    n = moments.order
    if n > PARTITION_ORDER_CAP:
        raise ValueError(f"partition conversion capped at order {PARTITION_ORDER_CAP}")
    kappa = np.zeros((n + 1, n + 1))
    for a in range(n + 1):
        for b in range(n + 1 - a):
            if a + b == 0:
                continue
            kappa[a, b] = _partition_cumulant(moments, a, b)
    return CumulantTable(order=n, kappa=kappa)


def estimate_cumulants(sample: BivariateSample, order: int) -> CumulantTable:
    """Plug-in joint cumulant table of the sample up to total `order`.

    Centering is always applied; it makes cumulants of order >= 2 shift
    invariant up to rounding.
    """
    return moments_to_cumulants(compute_moments(sample, order, center=True))


def joint_cumulant(sample: BivariateSample, a: int, b: int) -> float:
    """Plug-in estimate of the joint cumulant with x repeated a times, y b times."""
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need a, b >= 0 with a + b >= 1")
    return estimate_cumulants(sample, a + b).entry(a, b)


def univariate_cumulants(values: np.ndarray, order: int) -> np.ndarray:
    """Cumulants kappa_1..kappa_order of a single series (index 0 unused)."""
    values = np.asarray(values, dtype=float)
    sample = BivariateSample(values, np.zeros_like(values))
    table = estimate_cumulants(sample, order)
    out = np.zeros(order + 1)
    out[1] = values.mean()  # centering zeroes the first cumulant in the table
    out[2:] = table.kappa[2 : order + 1, 0]
    return out
