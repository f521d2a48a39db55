import random
from fractions import Fraction

import pytest

from tropic.geometry import (
    ConstraintSystem,
    EmptyPolyhedronError,
    affine_dimension,
    contains,
    euler_characteristic,
    feasible,
    recession_profile,
    strictly_feasible,
)

from oracles import euler_characteristic_by_decomposition


def sys1(eqs=(), ineqs=()):
    return ConstraintSystem.build(1, eqs, ineqs)


def unit_interval():
    return sys1(ineqs=[((1,), 0), ((-1,), -1)])  # 0 <= x <= 1


SQUARE = ConstraintSystem.build(
    2, inequalities=[((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)]
)
PLANE = ConstraintSystem.build(2)
RAY = ConstraintSystem.build(2, equalities=[((0, 1), 0)], inequalities=[((1, 0), 0)])
LINE = ConstraintSystem.build(2, equalities=[((0, 1), 0)])
POINT = ConstraintSystem.build(2, equalities=[((1, 0), 0), ((0, 1), 0)])


class TestFeasible:
    def test_nonempty_interval(self):
        w = feasible(unit_interval())
        assert w is not None and 0 <= w[0] <= 1

    def test_contradictory_bounds(self):
        assert feasible(sys1(ineqs=[((1,), 1), ((-1,), 0)])) is None

    def test_atom_of_worked_example(self):
        # One indecision ray of the unit max{2y, x+y+1, 2}: feature 1 and 3
        # tie at value 2 while feature 2 stays below.
        atom = ConstraintSystem.build(
            2, equalities=[((0, 2), 2)], inequalities=[((-1, -1), -1)]
        )
        assert atom.satisfies((Fraction(-1), Fraction(1)))
        w = feasible(atom)
        assert w is not None and atom.satisfies(w)

    def test_deterministic_witness(self):
        a = feasible(SQUARE)
        b = feasible(SQUARE)
        assert a == b

    def test_malformed_dimensions(self):
        with pytest.raises(ValueError):
            ConstraintSystem.build(2, inequalities=[((1, 2, 3), 0)])


class TestStrictlyFeasible:
    def test_interval_interior(self):
        w = strictly_feasible(unit_interval())
        assert w is not None and 0 < w[0] < 1

    def test_single_point_is_not_strict(self):
        assert strictly_feasible(sys1(ineqs=[((1,), 0), ((-1,), 0)])) is None

    def test_equality_kept_exact(self):
        s = ConstraintSystem.build(2, equalities=[((0, 1), 0)], inequalities=[((1, 0), 0)])
        w = strictly_feasible(s)
        assert w is not None and w[1] == 0 and w[0] > 0

    def test_empty_system(self):
        assert strictly_feasible(sys1(ineqs=[((1,), 1), ((-1,), 0)])) is None


class TestAffineDimension:
    def test_line_in_plane(self):
        s = ConstraintSystem.build(2, equalities=[((1, -1), 0)])
        assert affine_dimension(s) == 1

    def test_free_plane(self):
        assert affine_dimension(PLANE) == 2

    def test_empty(self):
        assert affine_dimension(sys1(ineqs=[((1,), 1), ((-1,), 0)])) is None

    def test_implicit_equality_detected(self):
        # x >= 0 and x <= 0 force the segment {0} x [0,1]; dimension 1.
        s = ConstraintSystem.build(
            2,
            inequalities=[((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, -1), -1)],
        )
        assert affine_dimension(s) == 1

    def test_adding_equality_never_increases(self):
        rng = random.Random(7)
        for _ in range(20):
            d = rng.choice([2, 3])
            ineqs = [
                (tuple(rng.randint(-3, 3) for _ in range(d)), rng.randint(-2, 2))
                for _ in range(rng.randint(0, 3))
            ]
            s = ConstraintSystem.build(d, inequalities=ineqs)
            if feasible(s) is None:
                continue
            base = affine_dimension(s)
            eq = (tuple(rng.randint(-3, 3) for _ in range(d)), 0)
            s2 = ConstraintSystem.build(d, equalities=[eq], inequalities=ineqs)
            if feasible(s2) is not None:
                assert affine_dimension(s2) <= base


class TestRecessionProfile:
    def test_full_plane(self):
        p = recession_profile(PLANE)
        assert p.lineality_dim == 2 and p.pointed_part_bounded

    def test_ray(self):
        p = recession_profile(RAY)
        assert p.lineality_dim == 0 and not p.pointed_part_bounded

    def test_bounded_square(self):
        p = recession_profile(SQUARE)
        assert p.lineality_dim == 0 and p.pointed_part_bounded

    def test_halfplane(self):
        s = ConstraintSystem.build(2, inequalities=[((0, 1), 0)])
        p = recession_profile(s)
        assert p.lineality_dim == 1 and not p.pointed_part_bounded

    def test_empty_errors(self):
        with pytest.raises(EmptyPolyhedronError):
            recession_profile(sys1(ineqs=[((1,), 1), ((-1,), 0)]))


class TestEulerCharacteristic:
    def test_plane(self):
        assert euler_characteristic(PLANE) == 1

    def test_ray(self):
        assert euler_characteristic(RAY) == 0

    def test_line(self):
        assert euler_characteristic(LINE) == -1

    def test_point(self):
        assert euler_characteristic(POINT) == 1

    def test_bounded_polytope(self):
        assert euler_characteristic(SQUARE) == 1

    def test_pointed_unbounded_cone(self):
        s = ConstraintSystem.build(2, inequalities=[((1, 0), 0), ((0, 1), 0)])
        assert euler_characteristic(s) == 0

    def test_empty_errors(self):
        with pytest.raises(EmptyPolyhedronError):
            euler_characteristic(sys1(ineqs=[((1,), 1), ((-1,), 0)]))


class TestContains:
    def test_nested_intervals(self):
        inner = unit_interval()
        outer = sys1(ineqs=[((1,), 0), ((-1,), -2)])
        assert contains(outer, inner)
        assert not contains(inner, outer)

    def test_line_in_plane(self):
        assert contains(PLANE, LINE)
        assert not contains(LINE, PLANE)

    def test_unbounded_violation(self):
        halfline = sys1(ineqs=[((1,), 0)])
        assert not contains(unit_interval(), halfline)

    def test_mutual_containment_is_set_equality(self):
        a = sys1(ineqs=[((1,), 0), ((-1,), -1)])
        b = sys1(ineqs=[((2,), 0), ((-3,), -3)])  # same interval, scaled rows
        assert contains(a, b) and contains(b, a)


def random_feasible_system(rng, d):
    while True:
        n_eq = rng.randint(0, 1)
        n_in = rng.randint(0, 5)
        eqs = [
            (tuple(rng.randint(-3, 3) for _ in range(d)), rng.randint(-2, 2))
            for _ in range(n_eq)
        ]
        ineqs = [
            (tuple(rng.randint(-3, 3) for _ in range(d)), rng.randint(-3, 3))
            for _ in range(n_in)
        ]
        s = ConstraintSystem.build(d, eqs, ineqs)
        if feasible(s) is not None:
            return s


@pytest.mark.parametrize("seed", range(8))
def test_euler_closed_form_matches_decomposition_oracle(seed):
    # The full 200-instance sweep runs in the acceptance suite; this keeps a
    # fast per-module guard.
    rng = random.Random(300 + seed)
    for _ in range(5):
        d = rng.choice([1, 2, 3])
        s = random_feasible_system(rng, d)
        assert euler_characteristic(s) == euler_characteristic_by_decomposition(s)
