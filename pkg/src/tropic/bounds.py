"""Closed-form region bounds and combinatorial identities, exact integers.

The workhorse is the elementary symmetric evaluation of sums over unit
subsets: sum over j <= n of e_j applied to the per-unit values, computed by
the one-pass recurrence instead of 2^m subset enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def binom(a: int, b: int) -> int:
    """Binomial with out-of-range arguments defined as 0."""
    if b < 0 or a < 0 or b > a:
        return 0
    out = 1
    for i in range(b):
        out = out * (a - i) // (i + 1)
    return out


def elementary_symmetric(values: Sequence[int], up_to: int) -> list[int]:
    """e_0..e_up_to of the values."""
    e = [0] * (up_to + 1)
    e[0] = 1
    for v in values:
        for j in range(min(up_to, len(e) - 1), 0, -1):
            e[j] += v * e[j - 1]
    return e


@dataclass(frozen=True)
class ShallowQuery:
    n: int
    ranks: tuple[int, ...]
    with_bias: bool = True

    def __post_init__(self):
        if self.n < 1 or not self.ranks or any(k < 1 for k in self.ranks):
            raise ValueError("need n >= 1 and ranks all >= 1")


@dataclass(frozen=True)
class DeepQuery:
    n0: int
    widths: tuple[int, ...]
    ranks: tuple[tuple[int, ...], ...]  # per layer, per unit
    with_bias: bool = True

    def __post_init__(self):
        if self.n0 < 1 or not self.widths or any(w < 1 for w in self.widths):
            raise ValueError("invalid architecture")
        if len(self.ranks) != len(self.widths) or any(
            len(r) != w for r, w in zip(self.ranks, self.widths)
        ):
            raise ValueError("ranks shape must match widths")


@dataclass(frozen=True)
class DeepLowerResult:
    value: int
    n: int  # the replication dimension attaining the maximum


def shallow_formula(n: int, ranks: Sequence[int], with_bias: bool = True) -> int:
    """Maximum number of linear regions of a single layer.

    With biases: sum over j <= n of e_j(k_i - 1).  Without: the binomial
    correction C(m'-1, n-1) plus the same sum truncated at n-1, where m'
    counts the units of rank > 1.
    """
    ShallowQuery(n, tuple(ranks), with_bias)
    vals = [k - 1 for k in ranks]
    if with_bias:
        return sum(elementary_symmetric(vals, n))
    m_eff = sum(1 for k in ranks if k > 1)
    if m_eff == 0:
        return 1
    return binom(m_eff - 1, n - 1) + sum(elementary_symmetric(vals, n - 1))


def trivial_bound(ranks: Sequence[int]) -> int:
    """Product of the ranks: the activation-pattern counting bound."""
    out = 1
    for k in ranks:
        out *= k
    return out


def deep_upper(n0: int, widths: Sequence[int], ranks: Sequence[Sequence[int]], with_bias: bool = True) -> int:
    """Product over layers of the shallow maximum with the input dimension
    capped by the smallest width seen so far."""
    q = DeepQuery(n0, tuple(widths), tuple(tuple(r) for r in ranks), with_bias)
    total = 1
    e = q.n0
    for w, layer_ranks in zip(q.widths, q.ranks):
        vals = [k - 1 for k in layer_ranks]
        if with_bias:
            factor = sum(elementary_symmetric(vals, e))
        else:
            factor = binom(w - 1, e - 1) + sum(elementary_symmetric(vals, e - 1))
        total *= factor
        e = min(e, w)
    return total


def deep_upper_uniform(n0: int, widths: Sequence[int], k: int, with_bias: bool = True) -> int:
    return deep_upper(n0, widths, [[k] * w for w in widths], with_bias)


def _admissible_ns(n0: int, widths: Sequence[int], with_bias: bool):
    hidden = list(widths)[:-1]
    out = []
    max_n = n0
    for n in range(1, max_n + 1):
        if with_bias:
            ok = all(w % n == 0 and (w // n) % 2 == 0 for w in hidden)
        else:
            ok = n >= 2 and all(
                (w - 1) % (n - 1) == 0 and ((w - 1) // (n - 1)) % 2 == 0 for w in hidden
            )
        if ok:
            out.append(n)
    return out


def deep_lower(n0: int, widths: Sequence[int], k: int, with_bias: bool = True) -> DeepLowerResult:
    """Region count realized by the zig-zag construction, maximized over the
    admissible replication dimensions n (reported alongside the value)."""
    if k < 2:
        raise ValueError("rank must be >= 2")
    DeepQuery(n0, tuple(widths), tuple(tuple([k] * w) for w in widths), with_bias)
    hidden = list(widths)[:-1]
    n_last = widths[-1]
    best = None
    for n in _admissible_ns(n0, widths, with_bias):
        if with_bias:
            value = 1
            for w in hidden:
                value *= ((w // n) * (k - 1) + 1) ** n
            value *= sum(binom(n_last, j) * (k - 1) ** j for j in range(n + 1))
        else:
            value = 1
            for w in hidden:
                value *= (((w - 1) // (n - 1)) * (k - 1) + 1) ** (n - 1)
            value *= sum(binom(n_last, j) * (k - 1) ** j for j in range(n))
        if best is None or value > best.value:
            best = DeepLowerResult(value, n)
    if best is None:
        kind = "n_l/n even" if with_bias else "(n_l-1)/(n-1) even"
        raise ValueError(f"no admissible replication dimension ({kind} fails for every n)")
    return best


def identity_inclusion_exclusion(m: int, n: int, r: int) -> int:
    """The alternating binomial sum that collapses to 1 for 0 <= r <= n < m."""
    if not 0 <= r <= n < m:
        raise ValueError("need 0 <= r <= n < m")
    return sum(
        (-1) ** (n - j) * binom(m - 1 - j, n - j) * binom(m - r, j - r)
        for j in range(n + 1)
    )


def identity_reformulation(m: int, n: int, ranks: Sequence[int]):
    """Both sides of the rewrite of the alternating subset sum over products
    of ranks into the plain subset sum over products of (rank - 1)."""
    from .arrangement import IdentityCheck

    if not (m >= n + 1 >= 1):
        raise ValueError("need m >= n+1 >= 1")
    ranks = list(ranks)
    if len(ranks) != m or any(k < 2 for k in ranks):
        raise ValueError("need m ranks, all >= 2")
    ek = elementary_symmetric(ranks, n)
    lhs = sum((-1) ** (n - j) * binom(m - 1 - j, n - j) * ek[j] for j in range(n + 1))
    rhs = sum(elementary_symmetric([k - 1 for k in ranks], n))
    return IdentityCheck(lhs, rhs)


def prior_bounds(n: int, m: int, k: int) -> tuple[int, int]:
    """Previously published lower/upper bounds for m uniform rank-k units,
    kept for comparison tables."""
    lower = k ** min(n, m)
    upper = sum(binom(m * k * (k - 1) // 2, j) for j in range(n + 1))
    return lower, upper
