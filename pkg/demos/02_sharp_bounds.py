"""The sharp shallow bound, its attainment, and the prior-work gap.

For each architecture the table shows the trivial activation-pattern bound,
the previously published bounds, the sharp formula, and the exact region
count of the emitted construction (parallel indecision hyperplanes with
moment-curve normals).
"""

from tropic.arrangement import count_regions_bruteforce
from tropic.bounds import prior_bounds, shallow_formula, trivial_bound
from tropic.network import construct_shallow_optimal, construct_shallow_optimal_nobias

print(f"{'n':>2} {'ranks':>12} {'trivial':>8} {'prior':>12} {'sharp':>6} {'attained':>9}")
for n, ranks in [
    (1, (3, 3)),
    (2, (2, 2, 2)),
    (2, (3, 3)),
    (2, (3, 3, 2)),
    (3, (3, 4)),
    (3, (2, 2, 2, 2)),
]:
    sharp = shallow_formula(n, ranks)
    built = count_regions_bruteforce(construct_shallow_optimal(n, ranks, seed=1)).regions
    if len(set(ranks)) == 1:
        lo, hi = prior_bounds(n, len(ranks), ranks[0])
        prior = f"[{lo}, {hi}]"
    else:
        prior = "-"
    print(f"{n:>2} {str(ranks):>12} {trivial_bound(ranks):>8} {prior:>12} {sharp:>6} {built:>9}")

print("\nwithout biases:")
print(f"{'n':>2} {'ranks':>12} {'sharp':>6} {'attained':>9}")
for n, ranks in [(2, (2, 2, 2)), (2, (3, 3)), (3, (3, 3, 2))]:
    sharp = shallow_formula(n, ranks, with_bias=False)
    built = count_regions_bruteforce(
        construct_shallow_optimal_nobias(n, ranks, seed=1)
    ).regions
    print(f"{n:>2} {str(ranks):>12} {sharp:>6} {built:>9}")
