import random
from fractions import Fraction as F

import pytest

from tropcurves.enumeration import (
    IncidenceConstraint,
    condition_system,
    count_curves,
    count_labels,
    count_with_retries,
    enumerate_types,
    kontsevich_oracle,
    make_type,
    point_count_marks,
    random_line_constraints,
    random_point_constraints,
    solve_conditions,
    type_count,
    type_edges,
)
from tropcurves.errors import Degenerate, DimensionMismatch, InvalidInput
from tropcurves.moduli import curve_moduli_point, tev_marked, trop_moduli_point
from tropcurves.puiseux import PuiseuxSeries, parse_series as S
from tropcurves.trees import TropicalDegree, canonical_form, check_balancing, validate_tree
from tropcurves.tropicalize import CurveInput, corresponding_curve, image_membership

LINE = TropicalDegree.projective(2, 1)


def test_type_counts_and_uniqueness():
    for n, expected in [(3, 1), (4, 3), (5, 15), (6, 105), (7, 945)]:
        labels = [str(k) for k in range(n)]
        types = list(enumerate_types(labels))
        assert len(types) == expected == type_count(n)
        assert len({t.splits() for t in types}) == expected
        assert len({repr(t.canonical_form()) for t in types}) == expected
    assert type_count(8) == 10395
    assert type_count(11) == 34459425


def test_type_edges_shape():
    for idx in range(15):
        edges = type_edges(5, idx)
        assert len(edges) == 2 * 5 - 3
    with pytest.raises(IndexError):
        type_edges(5, 15)


def test_line_through_two_points():
    cons = [IncidenceConstraint.point("1", (0, 0)), IncidenceConstraint.point("2", (3, 1))]
    labels = count_labels(LINE, ["1", "2"])
    sols = [s for t in enumerate_types(labels) if (s := solve_conditions(t, LINE, cons))]
    assert len(sols) == 1
    sol = sols[0]
    assert sol.multiplicity == 1
    curve = sol.curve(LINE, ("1", "2"))
    assert (1, 1) in curve.positions.values()
    assert check_balancing(curve) is None and validate_tree(curve.tree) is None
    # mark 1 sits on the s0 side of the trivalent vertex, mark 2 on the s1 side
    assert tev_marked(curve, "1") == (0, 0) and tev_marked(curve, "2") == (3, 1)


def test_adjacent_marks_inconsistent():
    cons = [IncidenceConstraint.point("1", (0, 0)), IncidenceConstraint.point("2", (3, 1))]
    labels = count_labels(LINE, ["1", "2"])
    for t in enumerate_types(labels):
        if t.adjacency[0][0] == t.adjacency[1][0]:
            assert solve_conditions(t, LINE, cons) is None


def test_engineered_degenerate():
    cons = [IncidenceConstraint.point("1", (0, 0)), IncidenceConstraint.point("2", (0, 0))]
    with pytest.raises(Degenerate):
        count_curves(LINE, cons)
    cons = [IncidenceConstraint.point("1", (0, 0)), IncidenceConstraint.point("2", (2, 0))]
    with pytest.raises(Degenerate):
        count_curves(LINE, cons)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        count_curves(LINE, [IncidenceConstraint.point("1", (0, 0))])
    t = make_type(count_labels(LINE, ["1"]), 0)
    with pytest.raises(DimensionMismatch):
        condition_system(t, LINE, [IncidenceConstraint.point("1", (0, 0))])


def test_constraint_validation():
    with pytest.raises(InvalidInput):
        IncidenceConstraint("a", (F(0), F(0)), ((2, 0),))
    with pytest.raises(InvalidInput):
        IncidenceConstraint("a", (F(0), F(0), F(0)), ((1, 0, 0), (-1, 0, 0)))
    c = IncidenceConstraint("a", (F(1), F(2), F(3)), ((1, 1, 0),))
    assert c.codim(TropicalDegree.projective(3, 1)) == 2
    assert IncidenceConstraint.from_json(c.to_json()) == c


def test_counts_small():
    rng = random.Random(0)
    res = count_curves(LINE, random_point_constraints(rng, 2, ["1", "2"]))
    assert res.degree == 1 and res.unlabeled == 1
    r3 = TropicalDegree.projective(3, 1)
    res = count_curves(r3, random_point_constraints(rng, 3, ["1", "2"]))
    assert res.degree == 1
    res, _, _ = count_with_retries(r3, lambda g: random_line_constraints(g, 3, list("abcd")), seed=9)
    assert res.degree == 2
    assert all(s.multiplicity >= 1 and min(s.lengths) > 0 for s in res.solutions)


def test_prefilter_agrees_with_exact():
    rng = random.Random(21)
    r3 = TropicalDegree.projective(3, 1)
    for _ in range(2):
        cons = random_line_constraints(rng, 3, list("abcd"))
        fast = count_curves(r3, cons, prefilter=True)
        slow = count_curves(r3, cons, prefilter=False)
        assert fast.degree == slow.degree
        assert [s.ctype.index for s in fast.solutions] == [s.ctype.index for s in slow.solutions]


def test_threads_deterministic():
    rng = random.Random(8)
    r3 = TropicalDegree.projective(3, 1)
    cons = random_line_constraints(rng, 3, list("abcd"))
    a = count_curves(r3, cons, threads=1, chunk_size=1000)
    b = count_curves(r3, cons, threads=3, chunk_size=1000)
    assert a.to_json() == b.to_json()


def test_point_count_marks():
    assert point_count_marks(2, 1) == 2
    assert point_count_marks(2, 2) == 5
    assert point_count_marks(2, 3) == 8
    assert point_count_marks(3, 1) == 2


def test_kontsevich():
    assert [kontsevich_oracle(d) for d in (1, 2, 3, 4)] == [1, 1, 12, 620]


def test_consistency_with_tropicalize():
    """A lifted line through two points tropicalizes to the enumerated solution."""
    rng = random.Random(17)
    checked = 0
    while checked < 5:
        vals = {lab: S(f"{rng.randint(1, 9)} t^{rng.randint(-3, 3)} + {rng.randint(1, 9)}") for lab in ("(0,1)", "(1,1)", "(2,1)", "2")}
        if len(set(vals.values())) < 4:
            continue
        c = tuple(S(f"t^{rng.randint(-4, 4)}") for _ in range(3))
        inp = CurveInput(LINE, ("1", "2"), "1", vals, c)
        curve = corresponding_curve(inp)
        if any(len(curve.tree.adjacency[v]) != 3 for v in curve.tree.inner):
            continue
        p1, p2 = tev_marked(curve, "1"), tev_marked(curve, "2")
        cons = [IncidenceConstraint("1", p1), IncidenceConstraint("2", p2)]
        try:
            res = count_curves(LINE, cons)
        except Degenerate:
            continue
        assert res.degree == 1
        assert image_membership(curve, p1) is not None and image_membership(curve, p2) is not None
        sol_curve = res.solutions[0].curve(LINE, ("1", "2"))
        assert curve_moduli_point(sol_curve, "1") == trop_moduli_point(inp)
        checked += 1
