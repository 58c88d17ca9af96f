"""Core configuration, file popularity modelling and shared combinatorics.

Everything in this module is immutable after construction and all functions
are pure, so concurrent use needs no synchronization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

__all__ = [
    "CapExceededError",
    "PlacementParams",
    "PopularityDist",
    "SystemConfig",
    "binom",
    "binomial_pmf",
    "cached_mass",
    "group_size_pmf",
    "load_popularity",
    "zipf_popularity",
]

#: Sum / monotonicity tolerance used when validating probability vectors.
PROB_TOL = 1e-12


class CapExceededError(RuntimeError):
    """An instance exceeds a configured enumeration or simulation cap."""


@dataclass(frozen=True)
class SystemConfig:
    """Global system parameters.

    K: number of cache-equipped fog access points (F-APs).
    N: number of files in the cloud database.
    M: per-F-AP cache capacity in file units.
    F_symbols: file size in abstract symbols (simulation granularity only;
        closed-form rates are expressed in file units and never use it).
    alpha: skew parameter of the Zipf popularity model.
    L: resolution of the code-rate grid {1/L, 2/L, ..., 1} searched by the
        optimizer.
    """

    K: int = 15
    N: int = 100
    M: int = 12
    F_symbols: int = 100_000
    alpha: float = 0.8
    L: int = 100

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not 1 <= self.M <= self.N:
            raise ValueError(f"M must satisfy 1 <= M <= N={self.N}, got {self.M}")
        if self.F_symbols < 1:
            raise ValueError(f"F_symbols must be >= 1, got {self.F_symbols}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")


@dataclass(frozen=True)
class PopularityDist:
    """File request probabilities, most popular first.

    Entries must be nonnegative, sum to 1 within PROB_TOL and be
    nonincreasing; the analysis assumes files are labelled by decreasing
    popularity.
    """

    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("popularity must be a nonempty 1-D vector")
        if np.any(p < 0):
            raise ValueError("popularity entries must be nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"popularity entries must sum to 1 (got {total!r})")
        if np.any(np.diff(p) > 0):
            raise ValueError("popularity entries must be nonincreasing")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def N(self) -> int:
        return int(self.p.size)


@dataclass(frozen=True)
class PlacementParams:
    """A placement strategy: file split point N0 and erasure-code rate r.

    The N0 most popular files form the cached group; every F-AP stores a
    random fraction of each of their rate-r coded versions.  The remaining
    files are never cached.  A strategy is fully determined by (N0, r).
    """

    N0: int
    r: float

    def __post_init__(self) -> None:
        if self.N0 < 1:
            raise ValueError(f"N0 must be >= 1, got {self.N0}")
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"r must lie in (0, 1], got {self.r}")


def zipf_popularity(N: int, alpha: float) -> PopularityDist:
    """Zipf popularity over N files: p[j] proportional to (j+1)**-alpha.

    alpha = 0 yields the uniform distribution.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    ranks = np.arange(1, N + 1, dtype=float)
    weights = ranks ** (-alpha)
    return PopularityDist(weights / weights.sum())


def load_popularity(path: str | Path) -> PopularityDist:
    """Read a popularity vector from a text file.

    Format: one decimal probability per line; '#' starts a comment; blank
    lines are ignored.  Entries are sorted into nonincreasing order before
    validation, so the file may list files in any order.
    """
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not a probability: {line!r}") from None
    if not values:
        raise ValueError(f"{path}: no probabilities found")
    p = np.sort(np.asarray(values, dtype=float))[::-1]
    return PopularityDist(p)


def cached_mass(dist: PopularityDist, N0: int) -> float:
    """Probability that one request falls in the cached group {1..N0}."""
    if not 1 <= N0 <= dist.N:
        raise ValueError(f"N0 must lie in [1, {dist.N}], got {N0}")
    return float(dist.p[:N0].sum())


def binom(n: int, k: int) -> float:
    """Binomial coefficient C(n, k) as a float; 0.0 outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if k < 0 or k > n:
        return 0.0
    return float(math.comb(n, k))


@lru_cache(maxsize=None)
def _comb_row(n: int) -> np.ndarray:
    """Row [C(n, 0), ..., C(n, n)] as a read-only float array."""
    row = np.array([math.comb(n, j) for j in range(n + 1)], dtype=float)
    row.flags.writeable = False
    return row


def binomial_pmf(K: int, p0: float) -> np.ndarray:
    """Probability mass function of Binomial(K, p0) over k = 0..K.

    Evaluated by the multiplicative term recurrence
    term(k+1) = term(k) * ((K-k)/(k+1)) * (p0/(1-p0)), seeded at whichever
    end of the support has the representable seed: k=0 for p0 <= 1/2 and
    k=K otherwise.  This stays in the normal float range for K up to
    several hundred, where a single seed at k=0 would underflow as p0
    approaches 1.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0}")
    out = np.zeros(K + 1)
    if p0 == 0.0:
        out[0] = 1.0
        return out
    if p0 == 1.0:
        out[K] = 1.0
        return out
    if p0 <= 0.5:
        ks = np.arange(K, dtype=float)
        steps = (K - ks) / (ks + 1.0) * (p0 / (1.0 - p0))
        out[0] = (1.0 - p0) ** K
        out[1:] = out[0] * np.cumprod(steps)
    else:
        ks = np.arange(K, 0, -1, dtype=float)
        steps = ks / (K - ks + 1.0) * ((1.0 - p0) / p0)
        out[K] = p0 ** K
        out[:K] = (out[K] * np.cumprod(steps))[::-1]
    return out


def group_size_pmf(K: int, p0: float, k: int) -> float:
    """Probability that exactly k of the K independent requests are for
    cached-group files, i.e. the Binomial(K, p0) mass at k."""
    if not 0 <= k <= K:
        raise ValueError(f"k must lie in [0, {K}], got {k}")
    return float(binomial_pmf(K, p0)[k])
