"""Maxout arrangements: atoms, cell enumeration, the intersection poset with
its counting formulas, simplicity certification, and the subsum identities.

An arrangement's atoms are the nonempty codimension-1 indecision boundaries
between pairs of preactivation features of one unit.  Cells are relatively
open argmax-signature pieces; full-dimensional cells are exactly the regions
(components of the complement carry a constant signature, and each signature
set is convex).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Iterable, Sequence

from . import linalg
from .geometry import (
    ConstraintSystem,
    affine_dimension,
    contains,
    euler_characteristic,
    feasible,
    recession_profile,
    strictly_feasible,
)
from .linprog import BudgetExceededError, lp_call_count
from .network import NO_BIAS, WITH_BIAS, LayerSpec, MaxoutUnitSpec, restrict_layer

DEFAULT_SIGNATURE_BUDGET = 100_000
DEFAULT_LP_BUDGET = 1_000_000

LP_BUDGET_HINT = "--lp-budget (env TROPIC_BUDGET_LP)"
SIGNATURE_BUDGET_HINT = "--max-signatures"


@dataclass(frozen=True)
class Atom:
    unit: int                 # 1-based unit index
    pair: tuple[int, int]     # 1-based feature indices, a < b
    system: ConstraintSystem


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    atoms: tuple[Atom, ...]
    central: bool


@dataclass(frozen=True)
class Cell:
    signature: tuple[frozenset[int], ...]
    dim: int
    bounded: bool
    witness: tuple[Fraction, ...]


@dataclass(frozen=True)
class RegionCount:
    regions: int
    bounded_regions: int


@dataclass(frozen=True)
class SimplicityCertificate:
    simple: bool
    violation: tuple[int, ...] | None  # atom indices of the first violating subset


@dataclass(frozen=True)
class IdentityCheck:
    lhs: int
    rhs: int


@dataclass(frozen=True)
class GapResult:
    r_total: int
    r_slice: int
    gap: int
    floor: int


class _Budget:
    def __init__(self, lp_budget: int):
        self.lp_budget = lp_budget
        self.start = lp_call_count()

    def check(self):
        if lp_call_count() - self.start > self.lp_budget:
            raise BudgetExceededError(f"LP call budget exceeded; raise {LP_BUDGET_HINT}")


def _pair_system(layer: LayerSpec, i: int, a: int, b: int) -> ConstraintSystem:
    feats = layer.units[i].features()
    wa, ba = feats[a]
    wb, bb = feats[b]
    eq = (tuple(x - y for x, y in zip(wa, wb)), bb - ba)
    ineqs = []
    for c, (wc, bc) in enumerate(feats):
        if c in (a, b):
            continue
        ineqs.append((tuple(x - y for x, y in zip(wa, wc)), bc - ba))
    return ConstraintSystem(layer.input_dim, (eq,), tuple(ineqs))


def build_atoms(layer: LayerSpec) -> Arrangement:
    """All nonempty codimension-1 tie boundaries, unit by unit.

    Rank-1 units have no indecision boundaries and contribute nothing.
    """
    n = layer.input_dim
    atoms = []
    for i, u in enumerate(layer.units):
        if u.rank < 2:
            continue
        for a, b in combinations(range(u.rank), 2):
            sys = _pair_system(layer, i, a, b)
            if feasible(sys) is None:
                continue
            if affine_dimension(sys) == n - 1:
                atoms.append(Atom(i + 1, (a + 1, b + 1), sys))
    return Arrangement(n, tuple(atoms), layer.bias_mode == NO_BIAS)


def _nonempty_subsets(k: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(1, k + 1):
        out.extend(combinations(range(k), size))
    return out


def _signature_system(layer: LayerSpec, sig: Sequence[Sequence[int]]):
    """(ties, strict dominances) for {x : argmax set of unit i is exactly sig[i]}."""
    eqs = []
    ineqs = []
    for i, chosen in enumerate(sig):
        feats = layer.units[i].features()
        rep = chosen[0]
        wr, br = feats[rep]
        for c in chosen[1:]:
            wc, bc = feats[c]
            eqs.append((tuple(x - y for x, y in zip(wr, wc)), bc - br))
        rest = set(range(len(feats))) - set(chosen)
        for c in sorted(rest):
            wc, bc = feats[c]
            ineqs.append((tuple(x - y for x, y in zip(wr, wc)), bc - br))
    return eqs, ineqs


def enumerate_cells(
    layer: LayerSpec,
    max_signatures: int = DEFAULT_SIGNATURE_BUDGET,
    lp_budget: int = DEFAULT_LP_BUDGET,
) -> list[Cell]:
    """Every nonempty relatively open argmax-signature cell, with dimension,
    boundedness of the closure, and a rational witness."""
    n = layer.input_dim
    total = prod(2 ** u.rank - 1 for u in layer.units)
    if total > max_signatures:
        raise BudgetExceededError(
            f"{total} signatures exceed the cap {max_signatures}; raise {SIGNATURE_BUDGET_HINT}"
        )
    budget = _Budget(lp_budget)
    per_unit = [_nonempty_subsets(u.rank) for u in layer.units]
    cells = []

    def rec(i, sig):
        if i == len(per_unit):
            budget.check()
            eqs, ineqs = _signature_system(layer, sig)
            sys = ConstraintSystem(n, tuple(eqs), tuple(ineqs))
            w = strictly_feasible(sys)
            if w is None:
                return
            dim = n - linalg.rank([c for c, _ in eqs])
            prof = recession_profile(sys)
            bounded = prof.lineality_dim == 0 and prof.pointed_part_bounded
            cells.append(
                Cell(tuple(frozenset(c + 1 for c in t) for t in sig), dim, bounded, w)
            )
            return
        for choice in per_unit[i]:
            rec(i + 1, sig + [list(choice)])

    rec(0, [])
    return cells


def _decide_region_batch(args):
    layer, patterns = args
    n = layer.input_dim
    out = []
    for pat in patterns:
        eqs, ineqs = _signature_system(layer, [[p] for p in pat])
        sys = ConstraintSystem(n, (), tuple(ineqs))
        w = strictly_feasible(sys)
        if w is None:
            out.append((pat, None, None))
            continue
        prof = recession_profile(sys)
        out.append((pat, w, prof.lineality_dim == 0 and prof.pointed_part_bounded))
    return out


def _dedupe_units(layer: LayerSpec) -> LayerSpec:
    units = []
    for u in layer.units:
        seen = []
        for f in u.features():
            if f not in seen:
                seen.append(f)
        weights = tuple(w for w, _ in seen)
        biases = tuple(b for _, b in seen) if u.biases is not None else None
        units.append(MaxoutUnitSpec(weights, biases))
    return LayerSpec(layer.input_dim, tuple(units), layer.bias_mode)


def count_regions_bruteforce(
    layer: LayerSpec,
    max_signatures: int = DEFAULT_SIGNATURE_BUDGET,
    lp_budget: int = DEFAULT_LP_BUDGET,
    jobs: int = 1,
) -> RegionCount:
    """Region and bounded-region counts by strict-argmax enumeration.

    Regions are the full-dimensional cells, i.e. the strict single-argmax
    patterns with a nonempty interior; duplicate features are collapsed first
    so strict dominance is meaningful.  Sequentially the pattern tree is
    pruned on infeasible prefixes; with jobs > 1 the flat pattern list is
    decided in parallel with an ordered reduce (identical results).
    """
    layer = _dedupe_units(layer)
    n = layer.input_dim
    total = prod(u.rank for u in layer.units)
    if total > max_signatures:
        raise BudgetExceededError(
            f"{total} patterns exceed the cap {max_signatures}; raise {SIGNATURE_BUDGET_HINT}"
        )
    budget = _Budget(lp_budget)

    if jobs > 1:
        patterns = []

        def gen(i, pat):
            if i == len(layer.units):
                patterns.append(tuple(pat))
                return
            for a in range(layer.units[i].rank):
                gen(i + 1, pat + [a])

        gen(0, [])
        chunk = max(1, len(patterns) // (4 * jobs))
        batches = [
            (layer, patterns[i : i + chunk]) for i in range(0, len(patterns), chunk)
        ]
        regions = bounded = 0
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for batch in pool.map(_decide_region_batch, batches):
                for _, w, b in batch:
                    if w is not None:
                        regions += 1
                        bounded += 1 if b else 0
        return RegionCount(regions, bounded)

    regions = 0
    bounded = 0

    def rec(i, ineqs):
        nonlocal regions, bounded
        budget.check()
        sys = ConstraintSystem(n, (), tuple(ineqs))
        if strictly_feasible(sys) is None:
            return
        if i == len(layer.units):
            regions += 1
            prof = recession_profile(sys)
            if prof.lineality_dim == 0 and prof.pointed_part_bounded:
                bounded += 1
            return
        feats = layer.units[i].features()
        for a in range(len(feats)):
            wa, ba = feats[a]
            extra = [
                (tuple(x - y for x, y in zip(wa, wc)), bc - ba)
                for c, (wc, bc) in enumerate(feats)
                if c != a
            ]
            rec(i + 1, ineqs + extra)

    rec(0, [])
    return RegionCount(regions, bounded)


# ---------------------------------------------------------------------------
# Intersection poset


@dataclass(frozen=True)
class PosetElement:
    id: int
    system: ConstraintSystem
    dim: int
    psi: int
    atom_support: frozenset[int]        # indices into Arrangement.atoms
    support: frozenset[int] | None      # 1-based unit indices; None for the
                                        # origin element of a central arrangement


@dataclass(frozen=True)
class Poset:
    arrangement: Arrangement
    elements: tuple[PosetElement, ...]  # elements[0] is the ambient space
    leq: tuple[tuple[bool, ...], ...]   # leq[i][j]: element i <= j (reverse inclusion)
    mobius_from_bottom: tuple[int, ...]

    def mobius(self, i: int, j: int) -> int:
        return self._interval_mobius()[i][j]

    def _interval_mobius(self):
        # mu(i, j) over the interval [i, j]; elements are processed upward in
        # atom-support size, a linear extension of the order.
        if not hasattr(self, "_mu"):
            n = len(self.elements)
            mu = [[0] * n for _ in range(n)]
            order = sorted(range(n), key=lambda i: len(self.elements[i].atom_support))
            pos = {e: k for k, e in enumerate(order)}
            for i in range(n):
                mu[i][i] = 1
                for j in sorted(
                    (j for j in range(n) if j != i and self.leq[i][j]),
                    key=lambda j: pos[j],
                ):
                    mu[i][j] = -sum(
                        mu[i][t] for t in range(n) if self.leq[i][t] and self.leq[t][j] and t != j
                    )
            object.__setattr__(self, "_mu", mu)
        return self._mu


def build_poset(arr: Arrangement, lp_budget: int = DEFAULT_LP_BUDGET) -> Poset:
    """Closure of the atoms under intersection, orderd by reverse inclusion.

    Every element is the intersection of all atoms containing it, so the set
    of containing atoms is a complete canonical key: equal sets of atoms mean
    equal elements (mutual-containment deduplication without pairwise LPs).
    """
    budget = _Budget(lp_budget)
    n = arr.ambient_dim
    ambient = ConstraintSystem(n)
    elements: dict[frozenset[int], ConstraintSystem] = {frozenset(): ambient}
    witnesses: dict[frozenset[int], tuple] = {frozenset(): feasible(ambient)}
    queue = [frozenset()]
    while queue:
        key = queue.pop(0)
        sys = elements[key]
        for ai, atom in enumerate(arr.atoms):
            if ai in key:
                continue
            budget.check()
            cand = sys.intersection(atom.system)
            w = feasible(cand)
            if w is None:
                continue
            support = set(key) | {ai}
            for bi, other in enumerate(arr.atoms):
                if bi in support:
                    continue
                if not other.system.satisfies(w):
                    continue
                if contains(other.system, cand):
                    support.add(bi)
            skey = frozenset(support)
            if skey not in elements:
                elements[skey] = cand
                witnesses[skey] = w
                queue.append(skey)

    keys = sorted(elements, key=lambda s: (len(s), sorted(s)))
    out = []
    for idx, key in enumerate(keys):
        sys = elements[key]
        dim = affine_dimension(sys)
        psi = euler_characteristic(sys)
        units = frozenset(arr.atoms[a].unit for a in key)
        is_central_origin = arr.central and dim == 0
        out.append(
            PosetElement(idx, sys, dim, psi, key, None if is_central_origin else units)
        )
    leq = tuple(
        tuple(out[i].atom_support <= out[j].atom_support for j in range(len(out)))
        for i in range(len(out))
    )
    mu = _mobius_from_bottom(out, leq)
    return Poset(arr, tuple(out), leq, tuple(mu))


def _mobius_from_bottom(elements, leq):
    n = len(elements)
    mu = [0] * n
    order = sorted(range(n), key=lambda i: (len(elements[i].atom_support), sorted(elements[i].atom_support)))
    for i in order:
        below = [j for j in range(n) if j != i and leq[j][i]]
        mu[i] = 1 if not below else -sum(mu[j] for j in below)
    return mu


def count_regions_poset(arr: Arrangement, poset: Poset | None = None) -> int:
    """Region count via the alternating Euler/Mobius sum over the poset."""
    if poset is None:
        poset = build_poset(arr)
    n = arr.ambient_dim
    total = sum(e.psi * m for e, m in zip(poset.elements, poset.mobius_from_bottom))
    return (-1) ** n * total


def count_faces_poset(arr: Arrangement, s: int, poset: Poset | None = None) -> int:
    """Number of s-dimensional faces of the arrangement, 0 <= s < ambient dim."""
    if not 0 <= s < arr.ambient_dim:
        raise ValueError(f"face dimension {s} out of range [0, {arr.ambient_dim})")
    if poset is None:
        poset = build_poset(arr)
    total = 0
    for x in poset.elements:
        if x.dim != s:
            continue
        inner = sum(
            y.psi * poset.mobius(x.id, y.id)
            for y in poset.elements
            if poset.leq[x.id][y.id]
        )
        total += (-1) ** s * inner
    return total


# ---------------------------------------------------------------------------
# Simplicity


def is_simple(arr: Arrangement, lp_budget: int = DEFAULT_LP_BUDGET) -> SimplicityCertificate:
    """Certify that any j atoms of distinct units intersect in codimension j
    (empty allowed; for central arrangements the origin is allowed instead).

    Subset sizes run to n+1 so one-too-many concurrences are caught.
    """
    budget = _Budget(lp_budget)
    n = arr.ambient_dim
    by_unit: dict[int, list[int]] = {}
    for i, a in enumerate(arr.atoms):
        by_unit.setdefault(a.unit, []).append(i)
    units = sorted(by_unit)
    max_j = min(len(units), n + 1)

    def check_subset(idxs: tuple[int, ...]) -> bool:
        budget.check()
        j = len(idxs)
        sys = arr.atoms[idxs[0]].system
        for i in idxs[1:]:
            sys = sys.intersection(arr.atoms[i].system)
        tie_rank = linalg.rank([c for c, _ in sys.equalities])
        if strictly_feasible(sys) is not None:
            dim = n - tie_rank
        else:
            dim = affine_dimension(sys)  # None when empty
        if dim is None:
            return not arr.central  # central atoms all meet at the origin
        if dim == n - j:
            return True
        return arr.central and dim == 0

    violation: list[tuple[int, ...]] = []

    def rec(u_pos, chosen, size_left):
        if violation:
            return
        if chosen and not check_subset(tuple(chosen)):
            violation.append(tuple(chosen))
            return
        if size_left == 0 or u_pos == len(units):
            return
        for next_pos in range(u_pos, len(units)):
            for ai in by_unit[units[next_pos]]:
                rec(next_pos + 1, chosen + [ai], size_left - 1)
                if violation:
                    return

    rec(0, [], max_j)
    if violation:
        return SimplicityCertificate(False, violation[0])
    return SimplicityCertificate(True, None)


# ---------------------------------------------------------------------------
# Subsum identities and the bounded-region gap


def sub_layer(layer: LayerSpec, subset: Iterable[int]) -> LayerSpec:
    """Layer keeping only the (1-based) units in subset."""
    keep = sorted(subset)
    units = tuple(layer.units[i - 1] for i in keep)
    return LayerSpec(layer.input_dim, units, layer.bias_mode)


def _subset_counts(layer: LayerSpec, n: int, counts, lp_budget):
    m = layer.width
    out = {frozenset(): 1}
    for j in range(1, n + 1):
        for S in combinations(range(1, m + 1), j):
            key = frozenset(S)
            if counts and key in counts:
                out[key] = counts[key]
            else:
                out[key] = count_regions_bruteforce(
                    sub_layer(layer, S), lp_budget=lp_budget
                ).regions
    return out


def _alternating_sum(m: int, n: int, counts) -> int:
    total = 0
    for j in range(n + 1):
        coeff = (-1) ** (n - j) * comb(m - 1 - j, n - j)
        inner = sum(counts[frozenset(S)] for S in combinations(range(1, m + 1), j))
        total += coeff * inner
    return total


def _require_units_with_atoms(layer: LayerSpec, arr: Arrangement):
    atom_units = {a.unit for a in arr.atoms}
    missing = [i + 1 for i in range(layer.width) if (i + 1) not in atom_units]
    if missing:
        raise ValueError(
            f"units {missing} contribute no atoms; drop them before applying the identity"
        )


def subsum_identity_noncentral(
    layer: LayerSpec,
    counts=None,
    lp_budget: int = DEFAULT_LP_BUDGET,
    assume_simple: bool = False,
) -> IdentityCheck:
    """Both sides of the region identity for a simple with-bias arrangement:
    the full count against the alternating sum over <=n-unit sub-arrangements."""
    if layer.bias_mode != WITH_BIAS:
        raise ValueError("non-central identity needs a with-bias layer")
    n = layer.input_dim
    m = layer.width
    if m < n + 1:
        raise ValueError(f"identity requires m >= n+1 (m={m}, n={n})")
    arr = build_atoms(layer)
    _require_units_with_atoms(layer, arr)
    if not assume_simple and not is_simple(arr, lp_budget=lp_budget).simple:
        raise ValueError("arrangement is not simple")
    lhs = count_regions_bruteforce(layer, lp_budget=lp_budget).regions
    table = _subset_counts(layer, n, counts, lp_budget)
    return IdentityCheck(lhs, _alternating_sum(m, n, table))


def subsum_identity_central(
    layer: LayerSpec,
    counts=None,
    lp_budget: int = DEFAULT_LP_BUDGET,
    assume_simple: bool = False,
) -> IdentityCheck:
    """Central variant in ambient Q^(n+1): the alternating sum gains the
    binomial correction C(m-1, n)."""
    if layer.bias_mode != NO_BIAS:
        raise ValueError("central identity needs a no-bias layer")
    n = layer.input_dim - 1
    m = layer.width
    if m < n + 1:
        raise ValueError(f"identity requires m >= n+1 (m={m}, n={n})")
    arr = build_atoms(layer)
    _require_units_with_atoms(layer, arr)
    if not assume_simple and not is_simple(arr, lp_budget=lp_budget).simple:
        raise ValueError("arrangement is not simple")
    lhs = count_regions_bruteforce(layer, lp_budget=lp_budget).regions
    table = _subset_counts(layer, n, counts, lp_budget)
    return IdentityCheck(lhs, comb(m - 1, n) + _alternating_sum(m, n, table))


def bounded_region_gap(
    layer: LayerSpec,
    g_normal: Sequence,
    g_rhs=1,
    lp_budget: int = DEFAULT_LP_BUDGET,
) -> GapResult:
    """Regions of a central arrangement minus regions induced on the affine
    hyperplane {<x, w> = rhs}, with the binomial floor of the gap theorem."""
    if layer.bias_mode != NO_BIAS:
        raise ValueError("gap theorem needs a central (no-bias) layer")
    g_rhs = Fraction(g_rhs)
    if g_rhs == 0:
        raise ValueError("the hyperplane must not contain the origin")
    w = tuple(Fraction(v) / g_rhs for v in g_normal)
    if all(v == 0 for v in w):
        raise ValueError("hyperplane normal must be nonzero")
    d = layer.input_dim
    if len(w) != d:
        raise ValueError("hyperplane normal dimension mismatch")
    n = d - 1
    if layer.width < n + 1:
        raise ValueError(f"gap theorem requires m >= n+1 (m={layer.width}, n={n})")
    ww = linalg.dot(w, w)
    p0 = tuple(v / ww for v in w)
    basis = linalg.nullspace_basis([w], d)
    restricted = restrict_layer(layer, p0, basis)
    r_total = count_regions_bruteforce(layer, lp_budget=lp_budget).regions
    r_slice = count_regions_bruteforce(restricted, lp_budget=lp_budget).regions
    m = layer.width
    return GapResult(r_total, r_slice, r_total - r_slice, comb(m - 1, n))
