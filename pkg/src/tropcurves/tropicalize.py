"""Tropicalization of standard-form rational curves via cluster trees."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import DuplicatePoint, InvalidInput, OnBoundary
from .puiseux import INF, PuiseuxSeries, Valuation, ps_valuation
from .trees import (
    Edge,
    MarkedMetricTree,
    ParametrizedTropCurve,
    TropicalDegree,
    vec_add,
    vec_scale,
    vec_sub,
    zero_vec,
)


@dataclass(frozen=True, eq=False)
class CurveInput:
    """A labeled parametrized marked curve in standard form.

    ``p_{i0} = (0:1)`` and every other point is ``(1 : a[label])``.  ``c``
    holds one nonzero series per ray of the degree: homogeneous coordinates
    of ``f(p_{i0})`` in the projective case, Cox coordinates otherwise.
    """

    degree: TropicalDegree
    marks: tuple[str, ...]
    i0: str
    a: Mapping[str, PuiseuxSeries]
    c: tuple[PuiseuxSeries, ...]

    def __post_init__(self):
        if self.i0 not in self.marks:
            raise InvalidInput(f"anchor mark {self.i0!r} is not a mark")
        if len(set(self.marks)) != len(self.marks):
            raise InvalidInput("duplicate marks")
        clash = set(self.marks) & set(self.degree.labels)
        if clash:
            raise InvalidInput(f"marks and boundary labels overlap: {sorted(clash)}")
        expected = set(self.labels) - {self.i0}
        if set(self.a) != expected:
            missing = sorted(expected - set(self.a))
            extra = sorted(set(self.a) - expected)
            raise InvalidInput(f"coordinates a: missing {missing}, unexpected {extra}")
        if len(self.labels) < 3:
            raise InvalidInput("at least three marks and labels are required")
        if len(self.c) != len(self.degree.rays):
            raise InvalidInput(f"c needs {len(self.degree.rays)} entries, got {len(self.c)}")
        if any(x.is_zero() for x in self.c):
            raise InvalidInput("entries of c must be nonzero")
        seen: dict[PuiseuxSeries, str] = {}
        for lab in sorted(self.a):
            x = self.a[lab]
            if not x.is_exact:
                raise InvalidInput(f"coordinate a[{lab!r}] must be exact")
            if x in seen:
                raise DuplicatePoint(f"labels {seen[x]!r} and {lab!r} have the same coordinate")
            seen[x] = lab

    @property
    def labels(self) -> tuple[str, ...]:
        """``L0``: marks followed by the boundary labels."""
        return tuple(self.marks) + tuple(self.degree.labels)

    @property
    def r(self) -> int:
        return self.degree.r


# cluster families -----------------------------------------------------------


@dataclass(frozen=True)
class ClusterFamily:
    """Laminar family of maximal clusters with their valuations."""

    members: tuple[tuple[frozenset, Valuation], ...]

    @property
    def sets(self) -> set[frozenset]:
        return {m for m, _ in self.members}

    def nu(self, cluster) -> Valuation:
        cluster = frozenset(cluster)
        for m, v in self.members:
            if m == cluster:
                return v
        raise KeyError(cluster)

    def as_dict(self) -> dict[frozenset, Valuation]:
        return dict(self.members)

    def to_json(self) -> list[dict]:
        from .puiseux import rational_json

        return [
            {"labels": sorted(m), "nu": "inf" if v == INF else rational_json(v)}
            for m, v in self.members
        ]


def _sort_members(members: dict[frozenset, Valuation]) -> tuple:
    return tuple(sorted(members.items(), key=lambda kv: (-len(kv[0]), kv[1], sorted(kv[0]))))


def pair_valuations(a: Mapping[str, PuiseuxSeries]) -> dict[tuple[str, str], Valuation]:
    out = {}
    for x, y in combinations(sorted(a), 2):
        v = ps_valuation(a[y] - a[x])
        if v == INF:
            raise DuplicatePoint(f"labels {x!r} and {y!r} have the same coordinate")
        out[(x, y)] = v
    return out


def cluster_tree(a: Mapping[str, PuiseuxSeries]) -> ClusterFamily:
    """Single-linkage merging over pairwise valuations, largest first.

    Every component created while merging at valuation ``v`` is a maximal
    cluster of valuation ``v``; singletons have valuation INF.
    """
    if not a:
        raise InvalidInput("cluster_tree needs at least one point")
    vals = pair_valuations(a)
    parent = {x: x for x in a}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comp = {x: frozenset([x]) for x in a}
    members: dict[frozenset, Valuation] = {frozenset([x]): INF for x in a}
    ordered = sorted(vals.items(), key=lambda kv: kv[1], reverse=True)
    i = 0
    while i < len(ordered):
        level = ordered[i][1]
        touched = set()
        while i < len(ordered) and ordered[i][1] == level:
            (x, y), _ = ordered[i]
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx
                comp[rx] = comp[rx] | comp.pop(ry)
                touched.discard(ry)
                touched.add(rx)
            i += 1
        for root in touched:
            members[comp[root]] = level
    return ClusterFamily(_sort_members(members))


def cluster_tree_bruteforce(a: Mapping[str, PuiseuxSeries]) -> ClusterFamily:
    """Maximal elements of the power set under ``A <= B iff A in B, nu(A) = nu(B)``.

    Exponential; kept as an independent reference for small inputs.
    """
    labels = sorted(a)
    vals = {}
    for x, y in combinations(labels, 2):
        vals[frozenset((x, y))] = ps_valuation(a[y] - a[x])
    nu = {}
    for k in range(1, len(labels) + 1):
        for sub in combinations(labels, k):
            s = frozenset(sub)
            nu[s] = min((vals[frozenset(p)] for p in combinations(sub, 2)), default=INF)
    maximal = {
        s: v
        for s, v in nu.items()
        if not any(s < t and nu[t] == v for t in nu)
    }
    return ClusterFamily(_sort_members(maximal))


def _set_name(s: frozenset) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def anchor_position(inp: CurveInput) -> tuple:
    """``trop(f(p_{i0}))``: the sum of ``nu(c_rho) u_rho``."""
    pos = zero_vec(inp.r)
    for cr, u in zip(inp.c, inp.degree.rays):
        pos = vec_add(pos, vec_scale(ps_valuation(cr), u))
    return pos


def corresponding_curve(inp: CurveInput) -> ParametrizedTropCurve:
    """The parametrized tropical curve built from the cluster family of ``inp.a``."""
    fam = cluster_tree(inp.a).as_dict()
    root = frozenset(inp.a)
    degree = inp.degree

    # parent of each cluster = smallest strictly larger member
    clusters = sorted(fam, key=len)
    parent: dict[frozenset, frozenset] = {}
    for s in clusters:
        if s == root:
            continue
        parent[s] = min((t for t in fam if s < t), key=len)
    children: dict[frozenset, list[frozenset]] = {s: [] for s in fam}
    for s, p in parent.items():
        children[p].append(s)
    order_key = lambda s: (fam[s], sorted(s))  # noqa: E731

    inner_order: list[frozenset] = []
    queue = [root]
    while queue:
        s = queue.pop(0)
        inner_order.append(s)
        queue.extend(sorted((k for k in children[s] if len(k) > 1), key=order_key))
    vid = {s: n for n, s in enumerate(inner_order)}
    n_inner = len(inner_order)

    edges: list[Edge] = []
    legs: dict[str, int] = {}
    feet: list[int] = []
    next_id = n_inner

    def add_leg(v: int, label: str):
        nonlocal next_id
        feet.append(next_id)
        legs[label] = len(edges)
        edges.append(Edge(v, next_id, INF))
        next_id += 1

    add_leg(vid[root], inp.i0)
    positions = {vid[root]: anchor_position(inp)}
    for s in inner_order:
        for k in sorted(children[s], key=order_key):
            if len(k) == 1:
                add_leg(vid[s], next(iter(k)))
                continue
            length = fam[k] - fam[s]
            edges.append(Edge(vid[s], vid[k], length))
            positions[vid[k]] = vec_add(positions[vid[s]], vec_scale(length, degree.s_of(k)))

    tree = MarkedMetricTree(
        inner=tuple(range(n_inner)),
        feet=tuple(feet),
        edges=tuple(edges),
        legs=legs,
        names={vid[s]: _set_name(s) for s in inner_order},
    )
    return ParametrizedTropCurve(tree, positions, degree, tuple(inp.marks))


def cluster_valuations(curve_input: CurveInput) -> dict[str, Valuation]:
    """Valuation of each inner vertex of the corresponding curve, by name."""
    return {_set_name(s): v for s, v in cluster_tree(curve_input.a).members if len(s) > 1}


def trop_image_point(inp: CurveInput, a: PuiseuxSeries) -> tuple:
    """``trop(f(1:a))`` via the nested sets ``D_i`` of labels close to ``a``."""
    vals = {}
    for lab in inp.degree.labels:
        v = ps_valuation(a - inp.a[lab])
        if v == INF:
            raise OnBoundary(f"parameter coincides with boundary label {lab!r}")
        vals[lab] = v
    levels = sorted(set(vals.values()))
    pos = anchor_position(inp)
    for prev, cur in zip(levels, levels[1:]):
        d_i = [lab for lab, v in vals.items() if v >= cur]
        pos = vec_add(pos, vec_scale(cur - prev, inp.degree.s_of(d_i)))
    return pos


def _solve_ray(base: Sequence, direction: Sequence, p: Sequence) -> Fraction | None:
    """``t`` with ``base + t*direction == p``, or None."""
    diff = vec_sub(p, base)
    t = None
    for dx, x in zip(direction, diff):
        if dx != 0:
            t = Fraction(x) / dx
            break
    if t is None:
        return Fraction(0) if not any(diff) else None
    if vec_add(base, vec_scale(t, direction)) != tuple(p):
        return None
    return t


def image_membership(c: ParametrizedTropCurve, p: Sequence) -> tuple[int, Fraction] | None:
    """Locate ``p`` on the image of ``c`` as ``(edge index, parameter)``.

    The parameter is measured from the edge's first endpoint (``Edge.u``)
    for bounded edges and from the inner vertex for legs.
    """
    p = tuple(Fraction(x) for x in p)
    tree = c.tree
    leg_label = {k: lab for lab, k in tree.legs.items()}
    for k, e in enumerate(tree.edges):
        if e.is_leg:
            v = e.u if e.u in c.positions else e.v
            d = c.leg_direction(leg_label[k])
            t = _solve_ray(c.positions[v], d, p)
            if t is not None and t >= 0:
                return k, t
        else:
            base, end = c.positions[e.u], c.positions[e.v]
            d = tuple(x / e.length for x in vec_sub(end, base))
            t = _solve_ray(base, d, p)
            if t is not None and 0 <= t <= e.length:
                return k, t
    return None
