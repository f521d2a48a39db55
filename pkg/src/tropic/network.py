"""Maxout network data model, JSON format, exact evaluation, and the
bound-attaining parameter constructions.

A unit of rank k computes max of k affine preactivation features; a layer is
a tuple of units sharing an input dimension and a bias mode; a network chains
layers.  All parameters are exact rationals.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .linalg import dot
from .rational import format_rational, parse_rational

WITH_BIAS = "bias"
NO_BIAS = "no_bias"

Vec = tuple[Fraction, ...]


class NetworkParseError(ValueError):
    """Schema or dimension violation; the message carries the JSON path."""


@dataclass(frozen=True)
class MaxoutUnitSpec:
    weights: tuple[Vec, ...]
    biases: tuple[Fraction, ...] | None

    @property
    def rank(self) -> int:
        return len(self.weights)

    def features(self) -> list[tuple[Vec, Fraction]]:
        """(weight vector, bias) per preactivation feature; bias 0 when absent."""
        if self.biases is None:
            return [(w, Fraction(0)) for w in self.weights]
        return list(zip(self.weights, self.biases))


@dataclass(frozen=True)
class LayerSpec:
    input_dim: int
    units: tuple[MaxoutUnitSpec, ...]
    bias_mode: str

    def __post_init__(self):
        if self.bias_mode not in (WITH_BIAS, NO_BIAS):
            raise ValueError(f"unknown bias mode {self.bias_mode!r}")
        for u in self.units:
            if u.rank < 1:
                raise ValueError("unit rank must be >= 1")
            for w in u.weights:
                if len(w) != self.input_dim:
                    raise ValueError("weight length != layer input_dim")
            has_bias = u.biases is not None
            if has_bias != (self.bias_mode == WITH_BIAS):
                raise ValueError("unit bias presence inconsistent with layer bias mode")
            if has_bias and len(u.biases) != u.rank:
                raise ValueError("biases length != rank")

    @property
    def width(self) -> int:
        return len(self.units)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(u.rank for u in self.units)


@dataclass(frozen=True)
class NetworkSpec:
    input_dim: int
    layers: tuple[LayerSpec, ...]

    def __post_init__(self):
        if not self.layers:
            raise ValueError("a network needs at least one layer")
        expect = self.input_dim
        for l, layer in enumerate(self.layers):
            if layer.input_dim != expect:
                raise ValueError(f"layer {l} input_dim {layer.input_dim} != {expect}")
            expect = layer.width


def unit(weights: Sequence[Sequence], biases: Sequence | None = None) -> MaxoutUnitSpec:
    w = tuple(tuple(Fraction(v) for v in row) for row in weights)
    b = None if biases is None else tuple(Fraction(v) for v in biases)
    return MaxoutUnitSpec(w, b)


def layer(units: Sequence[MaxoutUnitSpec], input_dim: int | None = None) -> LayerSpec:
    if input_dim is None:
        input_dim = len(units[0].weights[0])
    mode = WITH_BIAS if units[0].biases is not None else NO_BIAS
    return LayerSpec(input_dim, tuple(units), mode)


def single_layer_network(l: LayerSpec) -> NetworkSpec:
    return NetworkSpec(l.input_dim, (l,))


# ---------------------------------------------------------------------------
# JSON format


def _reject_float(s):
    raise NetworkParseError(f"float literal {s!r} not accepted; use 'p/q' strings")


def parse_network(text: str) -> NetworkSpec:
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise NetworkParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkParseError("$: expected an object")
    n0 = doc.get("input_dim")
    if not isinstance(n0, int) or isinstance(n0, bool) or n0 < 1:
        raise NetworkParseError("$.input_dim: expected a positive integer")
    layers_doc = doc.get("layers")
    if not isinstance(layers_doc, list) or not layers_doc:
        raise NetworkParseError("$.layers: expected a nonempty array")
    layers = []
    expect = n0
    for li, ldoc in enumerate(layers_doc):
        lpath = f"$.layers[{li}]"
        if not isinstance(ldoc, dict):
            raise NetworkParseError(f"{lpath}: expected an object")
        mode = ldoc.get("bias_mode")
        if mode not in (WITH_BIAS, NO_BIAS):
            raise NetworkParseError(f"{lpath}.bias_mode: expected 'bias' or 'no_bias'")
        units_doc = ldoc.get("units")
        if not isinstance(units_doc, list) or not units_doc:
            raise NetworkParseError(f"{lpath}.units: expected a nonempty array")
        units = []
        for ui, udoc in enumerate(units_doc):
            upath = f"{lpath}.units[{ui}]"
            if not isinstance(udoc, dict):
                raise NetworkParseError(f"{upath}: expected an object")
            wdoc = udoc.get("weights")
            if not isinstance(wdoc, list) or not wdoc:
                raise NetworkParseError(f"{upath}.weights: expected a nonempty array (rank >= 1)")
            weights = []
            for ri, row in enumerate(wdoc):
                rpath = f"{upath}.weights[{ri}]"
                if not isinstance(row, list) or len(row) != expect:
                    raise NetworkParseError(f"{rpath}: expected an array of length {expect}")
                try:
                    weights.append(tuple(parse_rational(v, f"{rpath}[{ci}]") for ci, v in enumerate(row)))
                except ValueError as exc:
                    raise NetworkParseError(str(exc)) from exc
            bdoc = udoc.get("biases")
            if mode == NO_BIAS:
                if bdoc is not None:
                    raise NetworkParseError(f"{upath}.biases: not allowed in a no_bias layer")
                biases = None
            else:
                if not isinstance(bdoc, list) or len(bdoc) != len(weights):
                    raise NetworkParseError(
                        f"{upath}.biases: expected an array of length {len(weights)}"
                    )
                try:
                    biases = tuple(
                        parse_rational(v, f"{upath}.biases[{bi}]") for bi, v in enumerate(bdoc)
                    )
                except ValueError as exc:
                    raise NetworkParseError(str(exc)) from exc
            units.append(MaxoutUnitSpec(tuple(weights), biases))
        layers.append(LayerSpec(expect, tuple(units), mode))
        expect = len(units)
    return NetworkSpec(n0, tuple(layers))


def serialize_network(net: NetworkSpec) -> str:
    doc = {
        "input_dim": net.input_dim,
        "layers": [
            {
                "bias_mode": l.bias_mode,
                "units": [
                    {
                        "weights": [[format_rational(v) for v in w] for w in u.weights],
                        **(
                            {"biases": [format_rational(b) for b in u.biases]}
                            if u.biases is not None
                            else {}
                        ),
                    }
                    for u in l.units
                ],
            }
            for l in net.layers
        ],
    }
    return json.dumps(doc, sort_keys=True)


def parse_points(text: str) -> list[Vec]:
    """Point-query files: { "points": [["p/q", ...], ...] }."""
    doc = json.loads(text, parse_float=_reject_float)
    pts = doc.get("points") if isinstance(doc, dict) else None
    if not isinstance(pts, list):
        raise NetworkParseError("$.points: expected an array")
    out = []
    for i, row in enumerate(pts):
        if not isinstance(row, list):
            raise NetworkParseError(f"$.points[{i}]: expected an array")
        out.append(tuple(parse_rational(v, f"$.points[{i}][{j}]") for j, v in enumerate(row)))
    return out


# ---------------------------------------------------------------------------
# Evaluation


def evaluate_unit(u: MaxoutUnitSpec, x: Sequence[Fraction]) -> Fraction:
    return max(dot(w, x) + b for w, b in u.features())


def evaluate_layer(l: LayerSpec, x: Sequence[Fraction]) -> Vec:
    if len(x) != l.input_dim:
        raise ValueError("input dimension mismatch")
    return tuple(evaluate_unit(u, x) for u in l.units)


def evaluate(net: NetworkSpec, x: Sequence[Fraction]) -> Vec:
    if len(x) != net.input_dim:
        raise ValueError("input dimension mismatch")
    y = tuple(Fraction(v) for v in x)
    for l in net.layers:
        y = evaluate_layer(l, y)
    return y


def activation_pattern(l: LayerSpec, x: Sequence[Fraction]) -> tuple[frozenset[int], ...]:
    """Per unit, the full 1-based set of features attaining the max at x."""
    if len(x) != l.input_dim:
        raise ValueError("input dimension mismatch")
    out = []
    for u in l.units:
        vals = [dot(w, x) + b for w, b in u.features()]
        top = max(vals)
        out.append(frozenset(i + 1 for i, v in enumerate(vals) if v == top))
    return tuple(out)


# ---------------------------------------------------------------------------
# Bound-attaining constructions


def _int_det(rows: list[list[int]]) -> int:
    # Bareiss fraction-free elimination.
    n = len(rows)
    if n == 0:
        return 1
    m = [r[:] for r in rows]
    prev = 1
    sign = 1
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _primes_above(bound: int, count: int) -> list[int]:
    out = []
    p = max(bound, 2) + 1
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 1
    return out


def _moment_vector(t: int, n: int) -> Vec:
    return tuple(Fraction(t**j) for j in range(n))


def _shift_denominators(n: int, ts: list[int]) -> list[int]:
    """Prime denominators for the per-unit breakpoint shifts.

    Any n+1 breakpoint hyperplanes of distinct units are concurrent only if an
    integer combination of moment-matrix minors cancels against the shifts;
    primes larger than every minor make that impossible.
    """
    m = len(ts)
    bound = 2
    if n >= 1 and m >= 1:
        size = min(n, m)
        for sub in combinations(ts, size):
            rows = [[t**j for j in range(size)] for t in sub]
            bound = max(bound, abs(_int_det(rows)))
    return _primes_above(bound, m)


def construct_shallow_optimal(n: int, ranks: Sequence[int], seed: int) -> LayerSpec:
    """A with-bias layer whose region count attains the shallow maximum.

    Each unit's indecision set is k_i - 1 parallel hyperplanes: features
    r * <w_i, x> - r(r-1)/2 - r*d_i for r = 0..k_i-1, with moment-curve
    normals w_i = (1, t_i, ..., t_i^(n-1)) for distinct positive integers t_i
    (any n of them are linearly independent) and shifts d_i = 1/p_i for large
    primes p_i (no n+1 hyperplanes of distinct units meet).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ranks = list(ranks)
    if any(k < 2 for k in ranks):
        raise ValueError("ranks must all be >= 2 (rank-1 units contribute nothing)")
    m = len(ranks)
    rng = random.Random(seed)
    ts = sorted(rng.sample(range(1, 4 * m + 1), m))
    primes = _shift_denominators(n, ts)
    units = []
    for i, k in enumerate(ranks):
        w = _moment_vector(ts[i], n)
        delta = Fraction(1, primes[i])
        weights = []
        biases = []
        for r in range(k):
            weights.append(tuple(r * c for c in w))
            biases.append(Fraction(-r * (r - 1), 2) - r * delta)
        units.append(MaxoutUnitSpec(tuple(weights), tuple(biases)))
    return LayerSpec(n, tuple(units), WITH_BIAS)


def construct_shallow_optimal_nobias(n: int, ranks: Sequence[int], seed: int) -> LayerSpec:
    """A no-bias layer attaining the no-bias shallow maximum.

    Embeds the (n-1)-input with-bias construction through the last coordinate:
    a feature with weights w and bias b becomes the linear feature (w, b).
    """
    if n < 2:
        raise ValueError("no-bias construction needs n >= 2 (one input allows at most 2 regions)")
    inner = construct_shallow_optimal(n - 1, ranks, seed)
    units = []
    for u in inner.units:
        weights = tuple(w + (b,) for w, b in zip(u.weights, u.biases))
        units.append(MaxoutUnitSpec(weights, None))
    return LayerSpec(n, tuple(units), NO_BIAS)


def _convex_ladder(kinks: list[Fraction], jump: Fraction, init_slope: Fraction, rank: int):
    """Features (slope, intercept) of the convex piecewise-linear function of
    one variable with the given kinks (all with the same slope jump), initial
    slope, and value 0 at the origin; padded with repeats up to rank."""
    slopes = [init_slope]
    intercepts = [Fraction(0)]
    for c in kinks:
        slopes.append(slopes[-1] + jump)
        intercepts.append(intercepts[-1] - jump * c)
    while len(slopes) < rank:
        slopes.append(slopes[-1])
        intercepts.append(intercepts[-1])
    return list(zip(slopes, intercepts))


def construct_deep_lower(n0: int, widths: Sequence[int], rank: int, seed: int) -> NetworkSpec:
    """A with-bias deep network realizing the deep lower-bound formula.

    Hidden layers hold n groups of units whose alternating-sign sums are
    zig-zag maps [0,1] -> [0,1]; the (absorbed) linear folds feed the next
    layer; the final layer is a parallel-hyperplane layer with all breakpoints
    inside the image cube and no zero slopes, so every fold stays visible.
    """
    widths = list(widths)
    if rank < 2:
        raise ValueError("rank must be >= 2")
    if n0 < 1 or not widths or any(w < 1 for w in widths):
        raise ValueError("invalid architecture")
    hidden = widths[:-1]
    n = n0
    for w in hidden:
        n = min(n, w // 2)
    if n < 1:
        raise ValueError("hidden layers need width >= 2")
    for w in hidden:
        p, rem = divmod(w, n)
        if rem or p % 2:
            usable = (w // (2 * n)) * 2 * n
            raise ValueError(
                f"hidden width {w} is not an even multiple of n={n}; "
                f"largest usable even portion is {usable}"
            )

    rng = random.Random(seed)
    k = rank
    layers = []
    # fold_rows[i]: the row vector producing folded coordinate z_i from the
    # previous layer's outputs (for layer 1, from the network input).
    fold_rows: list[Vec] = []
    for i in range(n):
        e = [Fraction(0)] * n0
        e[i] = Fraction(1)
        fold_rows.append(tuple(e))

    for w in hidden:
        p = w // n
        q = p * (k - 1)
        sigma = Fraction(q + 1)
        jump = 2 * sigma
        breakpoints = [Fraction(r, q + 1) for r in range(1, q + 1)]
        units: list[MaxoutUnitSpec] = []
        new_fold: list[list[Fraction]] = [[Fraction(0)] * w for _ in range(n)]
        for i in range(n):
            for j in range(p):  # j even (0-based) -> "+" unit, odd -> "-"
                a = j // 2
                if j % 2 == 0:
                    kinks = [breakpoints[2 * (a * (k - 1) + s) + 1] for s in range(k - 1)]
                    init = sigma if a == 0 else Fraction(0)
                else:
                    kinks = [breakpoints[2 * (a * (k - 1) + s)] for s in range(k - 1)]
                    init = Fraction(0)
                feats = _convex_ladder(kinks, jump, init, k)
                weights = tuple(tuple(s * c for c in fold_rows[i]) for s, _ in feats)
                biases = tuple(g for _, g in feats)
                units.append(MaxoutUnitSpec(weights, biases))
                new_fold[i][len(units) - 1] = Fraction(1 if j % 2 == 0 else -1)
        layers.append(LayerSpec(len(fold_rows[0]), tuple(units), WITH_BIAS))
        fold_rows = [tuple(row) for row in new_fold]

    # Final layer: n_L parallel-hyperplane units over the folded coordinates,
    # slopes (r+1) * w_i (never zero along any active direction), breakpoints
    # interleaved strictly inside the unit cube's image interval.
    n_last = widths[-1]
    ts = sorted(rng.sample(range(1, 4 * n_last + 1), n_last))
    nb = n_last * (k - 1)
    units = []
    for i in range(n_last):
        wvec = _moment_vector(ts[i], n)
        total = sum(wvec, Fraction(0))
        folded = [sum(wvec[d] * fold_rows[d][c] for d in range(n)) for c in range(len(fold_rows[0]))]
        betas = [total * Fraction(i + 1 + r * n_last, nb + 1) for r in range(k - 1)]
        slopes = [Fraction(0)]
        intercepts = [Fraction(0)]
        for r in range(k - 1):
            slopes.append(slopes[-1] + 1)
            intercepts.append(intercepts[-1] - betas[r])
        weights = tuple(tuple((s + 1) * c for c in folded) for s in slopes)
        biases = tuple(intercepts)
        units.append(MaxoutUnitSpec(weights, biases))
    layers.append(LayerSpec(len(fold_rows[0]), tuple(units), WITH_BIAS))
    return NetworkSpec(n0, tuple(layers))


def sample_generic(
    n: int,
    ranks: Sequence[int],
    bias_mode: str,
    seed: int,
    magnitude: int = 12,
    max_retries: int = 60,
) -> LayerSpec:
    """Seeded integer-grid layer certified generic.

    The certificate requires every rank->=2 unit to contribute an indecision
    boundary and the arrangement to be simple; for with-bias layers the
    homogenized central arrangement extended by the hyperplane at infinity
    must be simple as well (affine simplicity alone admits parallel atoms
    across units, which defeat the bounded-region floor).  Resamples until
    the certificate passes; raises after max_retries with a hint to increase
    the magnitude.
    """
    from .arrangement import build_atoms, is_simple

    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    for _ in range(max_retries):
        units = []
        for k in ranks:
            weights = tuple(
                tuple(Fraction(rng.randint(-magnitude, magnitude)) for _ in range(n))
                for _ in range(k)
            )
            biases = (
                tuple(Fraction(rng.randint(-magnitude, magnitude)) for _ in range(k))
                if bias_mode == WITH_BIAS
                else None
            )
            units.append(MaxoutUnitSpec(weights, biases))
        cand = LayerSpec(n, tuple(units), bias_mode)
        arr = build_atoms(cand)
        atom_units = {a.unit for a in arr.atoms}
        if any(k >= 2 and (i + 1) not in atom_units for i, k in enumerate(ranks)):
            continue
        if not is_simple(arr).simple:
            continue
        if bias_mode == WITH_BIAS and not is_simple(build_atoms(_projectivize(cand))).simple:
            continue
        return cand
    raise ValueError(
        f"no simple layer found in {max_retries} samples; try a larger magnitude (B > {magnitude})"
    )


def _projectivize(l: LayerSpec) -> LayerSpec:
    """Homogenization of a with-bias layer plus a unit tying on the
    hyperplane at infinity, as a no-bias layer in Q^(n+1)."""
    units = [
        MaxoutUnitSpec(tuple(w + (b,) for w, b in u.features()), None) for u in l.units
    ]
    infinity = MaxoutUnitSpec(
        (
            tuple(Fraction(0) for _ in range(l.input_dim)) + (Fraction(1),),
            tuple(Fraction(0) for _ in range(l.input_dim + 1)),
        ),
        None,
    )
    return LayerSpec(l.input_dim + 1, tuple(units + [infinity]), NO_BIAS)


# ---------------------------------------------------------------------------
# Restrictions


def restrict_layer(l: LayerSpec, offset: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> LayerSpec:
    """The layer as seen on the affine subspace {offset + basis . u}.

    A linear offset of zero keeps a no-bias layer central; any other offset
    produces a with-bias layer.
    """
    offset = tuple(Fraction(v) for v in offset)
    basis = [tuple(Fraction(v) for v in col) for col in basis]
    if len(offset) != l.input_dim or any(len(col) != l.input_dim for col in basis):
        raise ValueError("restriction dimension mismatch")
    new_dim = len(basis)
    central = all(v == 0 for v in offset) and l.bias_mode == NO_BIAS
    units = []
    for u in l.units:
        weights = []
        biases = []
        for w, b in u.features():
            weights.append(tuple(dot(w, col) for col in basis))
            biases.append(dot(w, offset) + b)
        units.append(
            MaxoutUnitSpec(tuple(weights), None if central else tuple(biases))
        )
    return LayerSpec(new_dim, tuple(units), NO_BIAS if central else WITH_BIAS)


def restrict_network_to_line(net: NetworkSpec, point: Sequence[Fraction], direction: Sequence[Fraction]) -> NetworkSpec:
    """One-input network t -> net(point + t * direction)."""
    first = restrict_layer(net.layers[0], point, [direction])
    return NetworkSpec(1, (first,) + net.layers[1:])


def count_regions_line(net: NetworkSpec) -> int:
    """Exact number of linear regions of a one-input network.

    Collects candidate breakpoints layer by layer (pairwise feature ties over
    each interval of the current subdivision), then counts maximal intervals
    on which the full network is one affine map.
    """
    if net.input_dim != 1:
        raise ValueError("count_regions_line needs a one-input network")
    candidates: list[Fraction] = []

    def representatives(cands: list[Fraction]) -> list[Fraction]:
        if not cands:
            return [Fraction(0)]
        reps = [cands[0] - 1]
        for a, b in zip(cands, cands[1:]):
            reps.append((a + b) / 2)
        reps.append(cands[-1] + 1)
        return reps

    def affine_through(layers, rep):
        # Affine map t -> p + q t of the composition, valid on the interval
        # of rep (ties at rep persist on the whole interval, so any argmax
        # feature yields the same restriction).
        p = [Fraction(0)]
        q = [Fraction(1)]
        for l in layers:
            np_, nq = [], []
            for u in l.units:
                best = None
                for w, b in u.features():
                    c0 = dot(w, p) + b
                    c1 = dot(w, q)
                    val = c0 + c1 * rep
                    if best is None or val > best[0]:
                        best = (val, c0, c1)
                np_.append(best[1])
                nq.append(best[2])
            p, q = np_, nq
        return tuple(p), tuple(q)

    for depth, l in enumerate(net.layers):
        new_pts: set[Fraction] = set()
        for rep in representatives(candidates):
            p, q = affine_through(net.layers[:depth], rep)
            for u in l.units:
                feats = [(dot(w, p) + b, dot(w, q)) for w, b in u.features()]
                for (c0, c1), (d0, d1) in combinations(feats, 2):
                    if c1 != d1:
                        new_pts.add((d0 - c0) / (c1 - d1))
        candidates = sorted(set(candidates) | new_pts)

    reps = representatives(candidates)
    maps = [affine_through(net.layers, r) for r in reps]
    regions = 1
    for a, b in zip(maps, maps[1:]):
        if a != b:
            regions += 1
    return regions
