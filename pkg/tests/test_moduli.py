import random
from fractions import Fraction as F
from itertools import permutations

import pytest

from tropcurves.errors import AsymmetricInput, ZeroDivisor
from tropcurves.io import worked_example, random_curve_input, random_series
from tropcurves.moduli import (
    AlgPlueckerVector,
    TorusPoint,
    algebraic_pluecker,
    check_moduli_point,
    ev_boundary,
    ev_marked,
    ev_marked_extended,
    phi,
    pluecker_normal_form,
    tev_boundary,
    tev_marked,
    trop_algebraic_pluecker,
    tropical_pluecker,
    verify_commutativity,
)
from tropcurves.puiseux import INF, PuiseuxSeries, parse_series as S
from tropcurves.trees import Edge, MarkedMetricTree, ParametrizedTropCurve, TropicalDegree, leg_distance
from tropcurves.tropicalize import CurveInput, corresponding_curve

LABELS = ["i", "x", "y", "z", "w"]


def random_raw(rng, labels):
    raw = {}
    for a, b in permutations(labels, 2):
        if (b, a) in raw:
            raw[(a, b)] = raw[(b, a)]
        else:
            raw[(a, b)] = F(rng.randint(-9, 9), rng.choice([1, 2]))
    return raw


def test_gauge_kills_image_of_phi():
    rng = random.Random(0)
    for _ in range(20):
        x = {lab: rng.randint(-5, 5) for lab in LABELS}
        assert all(v == 0 for v in pluecker_normal_form(phi(x), "i").coords.values())
    zero = {(a, b): 0 for a, b in permutations(LABELS, 2)}
    assert all(v == 0 for v in pluecker_normal_form(zero, "i").coords.values())


def test_gauge_invariance():
    rng = random.Random(1)
    for _ in range(200):
        raw = random_raw(rng, LABELS)
        y = phi({lab: F(rng.randint(-7, 7), rng.choice([1, 3])) for lab in LABELS})
        shifted = {k: raw[k] + y[k] for k in raw}
        assert pluecker_normal_form(raw, "i") == pluecker_normal_form(shifted, "i")


def test_asymmetric_rejected():
    raw = {(a, b): 0 for a, b in permutations("abc", 2)}
    raw[("a", "b")] = 1
    with pytest.raises(AsymmetricInput):
        pluecker_normal_form(raw, "a")


def caterpillar(length):
    # one bounded edge separating {i, x} from {y, z}
    edges = (Edge(0, 1, F(length)), Edge(0, 2, INF), Edge(0, 3, INF), Edge(1, 4, INF), Edge(1, 5, INF))
    return MarkedMetricTree((0, 1), (2, 3, 4, 5), edges, {"i": 1, "x": 2, "y": 3, "z": 4})


def test_caterpillar_against_gauge_search():
    for length in (1, 2, F(5, 2)):
        t = caterpillar(length)
        nf = tropical_pluecker(t, "i")
        raw = {(a, b): -leg_distance(t, a, b) / 2 for a, b in permutations("ixyz", 2)}
        # search x_i over a fine grid; the i-pair zeros force the other entries
        hits = set()
        for k in range(-40, 41):
            xi = F(k, 8)
            x = {"i": xi, **{m: raw[("i", m)] - xi for m in "xyz"}}
            cand = {key: raw[key] - v for key, v in phi(x).items()}
            if min(v for (a, b), v in cand.items() if "i" not in (a, b)) != 0:
                continue
            hits.add(tuple(sorted(cand.items())))
        assert hits == {tuple(sorted(nf.coords.items()))}
        assert nf[("y", "z")] == length


def test_star_tree_zero():
    edges = tuple(Edge(0, k, INF) for k in range(1, 5))
    t = MarkedMetricTree((0,), (1, 2, 3, 4), edges, dict(zip("abcd", range(4))))
    assert all(v == 0 for v in tropical_pluecker(t, "a").coords.values())


def test_worked_raw_coordinate():
    t = corresponding_curve(worked_example()).tree
    assert -leg_distance(t, "(0,1)", "(1,1)") / 2 == F(-3, 2)


def test_algebraic_pluecker_examples():
    inp = worked_example()
    apl = algebraic_pluecker(inp)
    assert apl[("(1,2)", "2")] == S("-t^4")
    assert apl[("1", "2")] == S("-1") and apl[("2", "1")] == S("1")
    for (a, b), v in apl.coords.items():
        assert apl[(b, a)] == -v
    deg = TropicalDegree.projective(1, 1)
    small = CurveInput(deg, ("i",), "i", {"(0,1)": S("1"), "(1,1)": S("t")}, (S("1"), S("1")))
    assert algebraic_pluecker(small)[("(0,1)", "(1,1)")] == S("t - 1")


def test_moduli_point_consistency():
    assert check_moduli_point(worked_example())
    rng = random.Random(4)
    for _ in range(40):
        assert check_moduli_point(random_curve_input(rng, toric=rng.random() < 0.3))


def test_moduli_point_reparametrization():
    inp = worked_example()
    alpha, beta = S("2t^-1 + 1"), S("t^3")
    moved = CurveInput(inp.degree, inp.marks, inp.i0, {k: alpha * v + beta for k, v in inp.a.items()}, inp.c)
    assert trop_algebraic_pluecker(algebraic_pluecker(moved)) == trop_algebraic_pluecker(algebraic_pluecker(inp))


def test_ev_marked_examples():
    deg = TropicalDegree.projective(1, 1)
    inp = CurveInput(deg, ("i", "m"), "i", {"(0,1)": S("t"), "(1,1)": S("1"), "m": S("t^2")}, (S("1"), S("1")))
    assert ev_marked(inp, "m").cox == (S("t^2 - t"), S("t^2 - 1"))
    assert ev_marked(inp, "i").cox == inp.c
    ob = ev_boundary(inp, "(0,1)")
    assert ob.cox == {1: S("t - 1")}


def test_ev_marked_extended_matches():
    rng = random.Random(6)
    for _ in range(20):
        inp = random_curve_input(rng, n_marks=2, toric=rng.random() < 0.3)
        apl = algebraic_pluecker(inp)
        for m in inp.marks:
            assert ev_marked_extended(apl, inp.c, m, inp.degree) == ev_marked(inp, m)
        x = {lab: random_series(rng) for lab in apl.labels}
        for m in inp.marks:
            assert ev_marked_extended(apl.act(x), inp.c, m, inp.degree) == ev_marked(inp, m)


def test_ev_marked_extended_trivial_and_zero():
    deg = TropicalDegree.projective(2, 1)
    labels = ["i", "m", *deg.labels]
    ones = AlgPlueckerVector({(a, b): S("1") for a, b in permutations(labels, 2)}, "i")
    c = (S("t"), S("2"), S("1 + t"))
    assert ev_marked_extended(ones, c, "m", deg) == TorusPoint.from_cox(c, deg.rays)
    coords = dict(ones.coords)
    coords[("(1,1)", "i")] = PuiseuxSeries()
    with pytest.raises(ZeroDivisor):
        ev_marked_extended(AlgPlueckerVector(coords, "i"), c, "m", deg)


def test_tev_worked():
    curve = corresponding_curve(worked_example())
    assert tev_marked(curve, "1") == (0, 1)
    assert tev_marked(curve, "2") == (4, 3)


def test_tev_boundary_leg_translation():
    curve = corresponding_curve(worked_example())
    j = "(1,2)"
    cls = tev_boundary(curve, j)
    v = curve.tree.leg_vertex(j)
    moved = dict(curve.positions)
    moved[v] = tuple(p + 5 * d for p, d in zip(moved[v], curve.leg_direction(j)))
    other = ParametrizedTropCurve(curve.tree, moved, curve.degree, curve.marks)
    assert tev_boundary(other, j) == cls


def test_verify_worked_and_corrupted():
    inp = worked_example()
    assert verify_commutativity(inp).ok
    curve = corresponding_curve(inp)
    moved = dict(curve.positions)
    v = curve.tree.leg_vertex("2")
    moved[v] = (moved[v][0] + 1, moved[v][1])
    bad = ParametrizedTropCurve(curve.tree, moved, curve.degree, curve.marks)
    report = verify_commutativity(inp, bad)
    assert not report.ok and any(e.label == "2" for e in report.failures)
