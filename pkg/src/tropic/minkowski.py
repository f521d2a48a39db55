"""Point-configuration Minkowski sums and exact vertex classification.

A point is a vertex when it lies outside the convex hull of the others; it is
an upper vertex when it stays outside even after the others may drop straight
down (adding the cone spanned by minus the last coordinate direction).  Both
tests are small feasibility LPs in convex-combination form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .arrangement import DEFAULT_LP_BUDGET, count_regions_bruteforce
from .linprog import EQ, INFEASIBLE, solve_lp
from .network import WITH_BIAS, LayerSpec, NetworkParseError
from .rational import format_rational, parse_rational

Vec = tuple[Fraction, ...]


@dataclass(frozen=True)
class LabeledPointSet:
    dim: int
    points: tuple[Vec, ...]
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError("point length != ambient dimension")


def point_set(points: Iterable[Sequence], label: str = "") -> LabeledPointSet:
    pts = tuple(tuple(Fraction(v) for v in p) for p in points)
    seen: list[Vec] = []
    for p in pts:
        if p not in seen:
            seen.append(p)
    return LabeledPointSet(len(seen[0]), tuple(seen), label)


@dataclass(frozen=True)
class VertexClassification:
    points: tuple[Vec, ...]
    is_vertex: tuple[bool, ...]
    is_upper_vertex: tuple[bool, ...]
    is_strict_lower_vertex: tuple[bool, ...]

    @property
    def vertex_count(self) -> int:
        return sum(self.is_vertex)

    @property
    def upper_count(self) -> int:
        return sum(self.is_upper_vertex)

    @property
    def strict_lower_count(self) -> int:
        return sum(self.is_strict_lower_vertex)


@dataclass(frozen=True)
class DualityCheck:
    region_count: int
    upper_vertex_count: int


@dataclass(frozen=True)
class PartialSumBound:
    actual: int
    trivial: int


def lift_layer(l: LayerSpec) -> list[LabeledPointSet]:
    """Per unit, the feature coefficient points: (w, b) in Q^(n+1) for a
    with-bias layer, w in Q^n otherwise; duplicate features collapse."""
    out = []
    for i, u in enumerate(l.units):
        if l.bias_mode == WITH_BIAS:
            pts = [w + (b,) for w, b in u.features()]
        else:
            pts = [w for w, _ in u.features()]
        out.append(point_set(pts, label=f"unit{i + 1}"))
    return out


def minkowski_sum(sets: Sequence[LabeledPointSet]) -> LabeledPointSet:
    if not sets:
        raise ValueError("need at least one point set")
    dim = sets[0].dim
    if any(s.dim != dim for s in sets):
        raise ValueError("ambient dimension mismatch")
    acc = [tuple(Fraction(0) for _ in range(dim))]
    for s in sets:
        acc = [tuple(a + b for a, b in zip(p, q)) for p in acc for q in s.points]
    label = "+".join(s.label for s in sets if s.label)
    return point_set(acc, label=label)


def _in_hull_with_ray(p: Vec, others: Sequence[Vec], ray: Vec | None) -> bool:
    """Feasibility of p in conv(others) (+ cone(ray) when given)."""
    if not others:
        return False
    d = len(p)
    k = len(others)
    nv = k + (1 if ray is not None else 0)
    cons = []
    for coord in range(d):
        row = [q[coord] for q in others]
        if ray is not None:
            row.append(ray[coord])
        cons.append((row, EQ, p[coord]))
    row = [1] * k + ([0] if ray is not None else [])
    cons.append((row, EQ, 1))
    res = solve_lp(nv, [0] * nv, cons, nonneg=[True] * nv)
    return res.status != INFEASIBLE


def classify_vertices(ps: LabeledPointSet) -> VertexClassification:
    """Exact three-way classification of every point.

    A vertex admits a strictly separating direction; its witness cone is an
    open set, so whenever a witness with nonnegative last coordinate exists a
    strictly positive one does too.  Hence a vertex is an upper vertex or a
    strict lower vertex, never horizontal-only; the classification is still
    computed per point, not assumed.
    """
    down = tuple(Fraction(0) for _ in range(ps.dim - 1)) + (Fraction(-1),)
    is_v, is_u, is_l = [], [], []
    # A point proven interior can be dropped from every later hull test: the
    # hull of the remaining points is unchanged, and membership queries with
    # the ray reduce to the true vertices as well.
    alive = list(range(len(ps.points)))
    for i, p in enumerate(ps.points):
        others = [ps.points[j] for j in alive if j != i]
        vertex = not _in_hull_with_ray(p, others, None)
        if not vertex and i in alive:
            alive.remove(i)
        upper = vertex and not _in_hull_with_ray(p, others, down)
        is_v.append(vertex)
        is_u.append(upper)
        is_l.append(vertex and not upper)
    return VertexClassification(ps.points, tuple(is_v), tuple(is_u), tuple(is_l))


def has_lower_witness(ps: LabeledPointSet, index: int) -> bool:
    """Whether point index admits a strict separator with negative last
    coordinate (used to confirm the horizontal-only class is empty)."""
    up = tuple(Fraction(0) for _ in range(ps.dim - 1)) + (Fraction(1),)
    p = ps.points[index]
    others = [q for j, q in enumerate(ps.points) if j != index]
    return not _in_hull_with_ray(p, others, up)


def vertex_count(ps: LabeledPointSet) -> int:
    return classify_vertices(ps).vertex_count


def upper_vertex_count(ps: LabeledPointSet) -> int:
    return classify_vertices(ps).upper_count


def duality_check(l: LayerSpec, lp_budget: int = DEFAULT_LP_BUDGET) -> DualityCheck:
    """Region count of a with-bias layer against the upper-vertex count of the
    Minkowski sum of its lifted coefficient sets (two independent pipelines)."""
    if l.bias_mode != WITH_BIAS:
        raise ValueError("duality check is defined for with-bias layers")
    regions = count_regions_bruteforce(l, lp_budget=lp_budget).regions
    total = minkowski_sum(lift_layer(l))
    return DualityCheck(regions, upper_vertex_count(total))


def weibel_upper_identity(sets: Sequence[LabeledPointSet]):
    """Upper-vertex count of the full sum against the alternating sum over
    partial sums of at most n of the summands (ambient Q^(n+1))."""
    from .arrangement import IdentityCheck

    m = len(sets)
    if not sets:
        raise ValueError("need at least one summand")
    n = sets[0].dim - 1
    if m <= n:
        raise ValueError(f"identity requires m >= n+1 (m={m}, n={n})")
    for s in sets:
        if len(set(s.points)) < 2:
            raise ValueError("summands must be positive-dimensional (>= 2 points)")
    lhs = upper_vertex_count(minkowski_sum(sets))
    rhs = 0
    for j in range(n + 1):
        coeff = (-1) ** (n - j) * comb(m - 1 - j, n - j)
        inner = 0
        for S in combinations(range(m), j):
            if not S:
                inner += 1  # the one-point sum {0} has a single upper vertex
            else:
                inner += upper_vertex_count(minkowski_sum([sets[i] for i in S]))
        rhs += coeff * inner
    return IdentityCheck(lhs, rhs)


def partial_sum_trivial_bound(sets: Sequence[LabeledPointSet], n: int):
    """actual vs trivial vertex counts, f_0(sum over S) vs prod f_0(P_i),
    for every nonempty S with |S| <= n."""
    singles = [vertex_count(s) for s in sets]
    out = {}
    for j in range(1, n + 1):
        for S in combinations(range(len(sets)), j):
            actual = vertex_count(minkowski_sum([sets[i] for i in S]))
            trivial = 1
            for i in S:
                trivial *= singles[i]
            out[frozenset(i + 1 for i in S)] = PartialSumBound(actual, trivial)
    return out


# ---------------------------------------------------------------------------
# JSON


def parse_point_set(text: str) -> LabeledPointSet:
    """Point-set files: { "dim": d, "points": [["p/q", ...], ...], "label": str }."""
    doc = json.loads(text, parse_float=lambda s: (_ for _ in ()).throw(
        NetworkParseError(f"float literal {s!r} not accepted; use 'p/q' strings")
    ))
    if not isinstance(doc, dict):
        raise NetworkParseError("$: expected an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise NetworkParseError("$.dim: expected a positive integer")
    pts_doc = doc.get("points")
    if not isinstance(pts_doc, list) or not pts_doc:
        raise NetworkParseError("$.points: expected a nonempty array")
    pts = []
    for i, row in enumerate(pts_doc):
        if not isinstance(row, list) or len(row) != dim:
            raise NetworkParseError(f"$.points[{i}]: expected an array of length {dim}")
        pts.append(tuple(parse_rational(v, f"$.points[{i}][{j}]") for j, v in enumerate(row)))
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise NetworkParseError("$.label: expected a string")
    return point_set(pts, label)


def serialize_point_set(ps: LabeledPointSet) -> str:
    doc = {
        "dim": ps.dim,
        "points": [[format_rational(v) for v in p] for p in ps.points],
        "label": ps.label,
    }
    return json.dumps(doc, sort_keys=True)


def classification_json(cls: VertexClassification) -> dict:
    """Classification output mirroring the input point order."""
    return {
        "points": [
            {
                "point": [format_rational(v) for v in p],
                "is_vertex": cls.is_vertex[i],
                "is_upper_vertex": cls.is_upper_vertex[i],
                "is_strict_lower_vertex": cls.is_strict_lower_vertex[i],
            }
            for i, p in enumerate(cls.points)
        ],
        "vertices": cls.vertex_count,
        "upper_vertices": cls.upper_count,
        "strict_lower_vertices": cls.strict_lower_count,
    }
