"""Replayable identity-verification suites over seeded random instances.

Each suite returns a report dict with per-trial outcomes and serialized
counterexamples on failure; the CLI turns a failure into exit code 5.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .arrangement import (
    bounded_region_gap,
    build_atoms,
    is_simple,
    subsum_identity_central,
    subsum_identity_noncentral,
)
from .bounds import identity_inclusion_exclusion, identity_reformulation
from .linalg import rank
from .minkowski import (
    LabeledPointSet,
    point_set,
    serialize_point_set,
    weibel_upper_identity,
)
from .network import (
    NO_BIAS,
    WITH_BIAS,
    LayerSpec,
    sample_generic,
    serialize_network,
    single_layer_network,
)


def _layer_json(layer: LayerSpec) -> str:
    return serialize_network(single_layer_network(layer))


def sample_weibel_family(
    n: int, m: int, max_points: int, seed: int, max_retries: int = 200,
    max_product: int = 200,
) -> tuple[list[LabeledPointSet], int]:
    """Random positive-dimensional point sets in Q^(n+1) certified for the
    upper-face identity: the induced with-bias arrangement is simple, no unit
    has a vertical difference vector, and no two units have parallel
    difference vectors.  The product of the set sizes is capped so the full
    sum stays classifiable directly.  Returns (family, resample count)."""
    rng = random.Random(seed)
    for attempt in range(max_retries):
        sizes = [rng.randint(2, max_points) for _ in range(m)]
        while _prod(sizes) > max_product:
            sizes[sizes.index(max(sizes))] -= 1
        sets = []
        for count in sizes:
            pts = set()
            while len(pts) < count:
                pts.add(tuple(Fraction(rng.randint(-9, 9)) for _ in range(n + 1)))
            sets.append(point_set(sorted(pts)))
        if _weibel_certificate(sets, n):
            return sets, attempt
    raise ValueError(f"no certified family in {max_retries} attempts")


def _prod(values):
    out = 1
    for v in values:
        out *= v
    return out


def _weibel_certificate(sets: list[LabeledPointSet], n: int) -> bool:
    diffs_per_set = []
    for s in sets:
        diffs = [
            tuple(a - b for a, b in zip(p, q)) for p, q in combinations(s.points, 2)
        ]
        if any(all(v == 0 for v in d[:n]) for d in diffs):
            return False  # vertical difference: upper counts become degenerate
        diffs_per_set.append(diffs)
    for (i, di), (j, dj) in combinations(enumerate(diffs_per_set), 2):
        for a in di:
            for b in dj:
                if rank([a, b]) < 2:
                    return False  # parallel cross-unit directions
    from .network import MaxoutUnitSpec

    units = [
        MaxoutUnitSpec(tuple(p[:n] for p in s.points), tuple(p[n] for p in s.points))
        for s in sets
    ]
    layer = LayerSpec(n, tuple(units), WITH_BIAS)
    return is_simple(build_atoms(layer)).simple


def _suite(
    name: str, trials: int, gen: Callable[[int], tuple[bool, dict]]
) -> dict:
    failures = []
    for t in range(trials):
        ok, detail = gen(t)
        if not ok:
            failures.append(detail)
    return {
        "suite": name,
        "trials": trials,
        "passed": trials - len(failures),
        "failures": failures,
    }


def verify_subsum_noncentral(trials: int, seed: int) -> dict:
    grids = [(1, (2, 2)), (2, (2, 2, 2)), (2, (3, 2, 2)), (2, (3, 3, 3)), (1, (3, 2))]

    def gen(t):
        n, ranks = grids[t % len(grids)]
        layer = sample_generic(n, ranks, WITH_BIAS, seed=seed * 10007 + t)
        chk = subsum_identity_noncentral(layer, assume_simple=True)
        return chk.lhs == chk.rhs, {
            "trial": t,
            "lhs": chk.lhs,
            "rhs": chk.rhs,
            "layer": _layer_json(layer),
        }

    return _suite("subsum_noncentral", trials, gen)


def verify_subsum_central(trials: int, seed: int) -> dict:
    grids = [(2, (2, 2)), (2, (3, 2)), (2, (3, 3)), (3, (2, 2, 2)), (3, (3, 2, 2))]

    def gen(t):
        d, ranks = grids[t % len(grids)]
        layer = sample_generic(d, ranks, NO_BIAS, seed=seed * 10009 + t)
        chk = subsum_identity_central(layer, assume_simple=True)
        return chk.lhs == chk.rhs, {
            "trial": t,
            "lhs": chk.lhs,
            "rhs": chk.rhs,
            "layer": _layer_json(layer),
        }

    return _suite("subsum_central", trials, gen)


def verify_weibel(trials: int, seed: int, max_points: int = 4) -> dict:
    grids = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5)]

    def gen(t):
        n, m = grids[t % len(grids)]
        sets, _ = sample_weibel_family(n, m, max_points, seed=seed * 10037 + t)
        chk = weibel_upper_identity(sets)
        return chk.lhs == chk.rhs, {
            "trial": t,
            "lhs": chk.lhs,
            "rhs": chk.rhs,
            "sets": [serialize_point_set(s) for s in sets],
        }

    return _suite("weibel_upper", trials, gen)


def verify_gap(trials: int, seed: int) -> dict:
    grids = [(2, (2, 2)), (2, (3, 2)), (2, (2, 2, 2)), (3, (2, 2, 2)), (2, (3, 3))]

    def gen(t):
        d, ranks = grids[t % len(grids)]
        rng = random.Random(seed * 10039 + t)
        layer = sample_generic(d, ranks, NO_BIAS, seed=seed * 10039 + t)
        normal = [0] * d
        while all(v == 0 for v in normal):
            normal = [rng.randint(-5, 5) for _ in range(d)]
        res = bounded_region_gap(layer, normal)
        return res.gap >= res.floor, {
            "trial": t,
            "gap": res.gap,
            "floor": res.floor,
            "normal": normal,
            "layer": _layer_json(layer),
        }

    return _suite("bounded_gap", trials, gen)


def verify_lemmas(trials: int, seed: int) -> dict:
    rng = random.Random(seed)

    def gen(t):
        if t % 2 == 0:
            m = rng.randint(1, 12)
            n = rng.randint(0, m - 1)
            r = rng.randint(0, n)
            val = identity_inclusion_exclusion(m, n, r)
            return val == 1, {"trial": t, "lemma": "inclusion_exclusion", "m": m, "n": n, "r": r, "value": val}
        m = rng.randint(2, 10)
        n = rng.randint(1, m - 1)
        ranks = [rng.randint(2, 6) for _ in range(m)]
        chk = identity_reformulation(m, n, ranks)
        return chk.lhs == chk.rhs, {
            "trial": t, "lemma": "reformulation", "m": m, "n": n, "ranks": ranks,
            "lhs": chk.lhs, "rhs": chk.rhs,
        }

    return _suite("lemmas", trials, gen)


ALL_SUITES = {
    "subsum-noncentral": verify_subsum_noncentral,
    "subsum-central": verify_subsum_central,
    "weibel": verify_weibel,
    "gap": verify_gap,
    "lemmas": verify_lemmas,
}


def run_suites(trials: int, seed: int, names=None) -> list[dict]:
    chosen = names or list(ALL_SUITES)
    return [ALL_SUITES[name](trials, seed) for name in chosen]
