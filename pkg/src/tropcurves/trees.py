"""Abstract rational tropical curves, tropical degrees and parametrized curves.

Points of the tropical torus ``R^{r+1}/R(1,...,1)`` are stored in a fixed
chart: subtract coordinate 0 and drop it.  Under this chart ``s_0`` becomes
``(-1, ..., -1)`` and ``s_i`` the i-th unit vector.  Toric degrees live
directly in ``Q^r`` with explicitly given rays.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Mapping, Sequence

from .errors import InvalidDegree, InvalidInput, NonIntegralDirection, UnknownLabel
from .puiseux import INF, as_fraction, rational_json

Point = tuple  # tuple[Fraction, ...]


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(k, a: Sequence) -> tuple:
    return tuple(k * x for x in a)


def zero_vec(r: int) -> tuple:
    return tuple(Fraction(0) for _ in range(r))


def projective_rays(r: int) -> tuple[tuple[int, ...], ...]:
    """Chart images of ``s_0, ..., s_r``."""
    s0 = tuple(-1 for _ in range(r))
    return (s0,) + tuple(tuple(int(i == k) for i in range(r)) for k in range(r))


def projective_label(i: int, j: int) -> str:
    return f"({i},{j})"


# degrees --------------------------------------------------------------------


@dataclass(frozen=True)
class TropicalDegree:
    """Tangency condition ``(J, pi, omega)`` over a list of primitive rays.

    ``delta(j) = omega[j] * rays[pi[j]]``.  The projective degree ``d`` is
    the special case built by :meth:`projective`.
    """

    rays: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    pi: Mapping[str, int]
    omega: Mapping[str, int]
    d: int | None = None  # set for projective degrees

    def __post_init__(self):
        if not self.rays:
            raise InvalidDegree("a degree needs at least one ray")
        r = len(self.rays[0])
        for u in self.rays:
            if len(u) != r:
                raise InvalidDegree("rays have inconsistent dimension")
            if reduce(math.gcd, (abs(x) for x in u), 0) != 1:
                raise InvalidDegree(f"ray {u} is not primitive")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidDegree("duplicate labels")
        for j in self.labels:
            if j not in self.pi or not 0 <= self.pi[j] < len(self.rays):
                raise InvalidDegree(f"label {j!r} has no valid ray")
            if int(self.omega.get(j, 0)) < 1:
                raise InvalidDegree(f"label {j!r} needs a positive multiplicity")
        total = [0] * r
        for j in self.labels:
            for k, x in enumerate(self.delta(j)):
                total[k] += x
        if any(total):
            raise InvalidDegree(f"directions do not sum to zero: {tuple(total)}")

    @classmethod
    def projective(cls, r: int, d: int) -> "TropicalDegree":
        if r < 1 or d < 1:
            raise InvalidDegree("projective degree needs r >= 1 and d >= 1")
        labels = tuple(projective_label(i, j) for i in range(r + 1) for j in range(1, d + 1))
        pi = {projective_label(i, j): i for i in range(r + 1) for j in range(1, d + 1)}
        return cls(projective_rays(r), labels, pi, {j: 1 for j in labels}, d=d)

    @property
    def r(self) -> int:
        return len(self.rays[0])

    @property
    def is_projective(self) -> bool:
        return self.d is not None

    def delta(self, j: str) -> tuple[int, ...]:
        w = self.omega[j]
        return tuple(w * x for x in self.rays[self.pi[j]])

    def ray_degree(self, rho: int) -> int:
        """``d_rho``: total multiplicity of labels on ray ``rho``."""
        return sum(self.omega[j] for j in self.labels if self.pi[j] == rho)

    def s_of(self, labels: Iterable[str]) -> tuple[Fraction, ...]:
        """Sum of ``delta(j)`` over the labels ``j`` in ``labels`` (marks add 0)."""
        acc = [Fraction(0)] * self.r
        for lab in labels:
            if lab in self.pi:
                for k, x in enumerate(self.delta(lab)):
                    acc[k] += x
        return tuple(acc)

    def to_json(self) -> dict:
        if self.is_projective:
            return {"kind": "projective", "d": self.d}
        return {
            "kind": "toric",
            "rays": [list(u) for u in self.rays],
            "labels": [
                {"ray": self.pi[j], "omega": self.omega[j], "name": j} for j in self.labels
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping, r: int) -> "TropicalDegree":
        kind = obj.get("kind")
        if kind == "projective":
            return cls.projective(int(r), int(obj["d"]))
        if kind == "toric":
            rays = tuple(tuple(int(x) for x in u) for u in obj["rays"])
            if any(len(u) != r for u in rays):
                raise InvalidDegree(f"rays must have length r = {r}")
            labels = tuple(str(e["name"]) for e in obj["labels"])
            pi = {str(e["name"]): int(e["ray"]) for e in obj["labels"]}
            omega = {str(e["name"]): int(e.get("omega", 1)) for e in obj["labels"]}
            return cls(rays, labels, pi, omega)
        raise InvalidDegree(f"unknown degree kind {kind!r}")


# abstract trees -------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    length: Fraction | float  # INF for legs

    @property
    def is_leg(self) -> bool:
        return self.length == INF

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True, eq=False)
class MarkedMetricTree:
    """Genus-0 metric graph whose legs are labeled bijectively by ``legs``.

    ``edges`` is indexed by position; ``legs`` maps each label to the index
    of its leg.  ``names`` optionally gives inner vertices a display name.
    """

    inner: tuple[int, ...]
    feet: tuple[int, ...]
    edges: tuple[Edge, ...]
    legs: Mapping[str, int]
    names: Mapping[int, str] = field(default_factory=dict)

    @cached_property
    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in (*self.inner, *self.feet)}
        for k, e in enumerate(self.edges):
            adj.setdefault(e.u, []).append(k)
            adj.setdefault(e.v, []).append(k)
        return adj

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.legs)

    @property
    def bounded_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if not e.is_leg]

    def leg_vertex(self, label: str) -> int:
        """The inner endpoint of the leg labeled ``label``."""
        if label not in self.legs:
            raise UnknownLabel(f"unknown leg label {label!r}")
        e = self.edges[self.legs[label]]
        return e.u if e.u in self._inner_set else e.v

    def foot(self, label: str) -> int:
        e = self.edges[self.legs[label]]
        return e.v if e.u in self._inner_set else e.u

    @cached_property
    def _inner_set(self) -> frozenset:
        return frozenset(self.inner)

    def path_edges(self, a: int, b: int) -> list[tuple[int, int]]:
        """Edges on the path from vertex ``a`` to ``b`` as ``(edge, from_vertex)``."""
        prev: dict[int, tuple[int, int] | None] = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for k in self.adjacency[x]:
                y = self.edges[k].other(x)
                if y not in prev:
                    prev[y] = (k, x)
                    queue.append(y)
        if b not in prev:
            raise InvalidInput(f"vertices {a} and {b} are not connected")
        out = []
        x = b
        while prev[x] is not None:
            k, p = prev[x]
            out.append((k, p))
            x = p
        out.reverse()
        return out

    def vertex_distance(self, a: int, b: int):
        return sum((self.edges[k].length for k, _ in self.path_edges(a, b)), Fraction(0))

    def to_json(self) -> dict:
        return tree_to_json(self)


def validate_tree(t: MarkedMetricTree) -> Violation | None:
    """Return the first violated invariant of ``t``, or None when valid."""
    inner, feet = set(t.inner), set(t.feet)
    if inner & feet:
        return Violation("vertex-kind", f"vertices both inner and foot: {sorted(inner & feet)}")
    vertices = inner | feet
    if len(vertices) == 2:
        return Violation("pathological", "graphs with exactly two vertices are excluded")
    for k, e in enumerate(t.edges):
        if e.u not in vertices or e.v not in vertices:
            return Violation("dangling-edge", f"edge {k} has an unknown endpoint")
        if e.u == e.v:
            return Violation("loop", f"edge {k} is a loop")
        n_feet = (e.u in feet) + (e.v in feet)
        if n_feet == 2:
            return Violation("foot-foot", f"edge {k} joins two feet")
        if (n_feet == 1) != (e.length == INF):
            return Violation("leg-length", f"edge {k}: legs are exactly the infinite edges")
        if n_feet == 0 and not e.length > 0:
            return Violation("edge-length", f"bounded edge {k} has non-positive length")
    if len(t.edges) != len(vertices) - 1:
        return Violation("not-a-tree", f"{len(t.edges)} edges for {len(vertices)} vertices")
    seen = {next(iter(vertices))} if vertices else set()
    stack = list(seen)
    while stack:
        x = stack.pop()
        for k in t.adjacency.get(x, []):
            y = t.edges[k].other(x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != vertices:
        return Violation("disconnected", "graph is not connected")
    for v in sorted(feet):
        if len(t.adjacency[v]) != 1:
            return Violation("foot-valence", f"foot {v} is not 1-valent")
    for v in sorted(inner):
        val = len(t.adjacency[v])
        if val == 2:
            return Violation("2-valent vertex", f"inner vertex {v} is 2-valent")
        if val < 3:
            return Violation("low-valence", f"inner vertex {v} has valence {val}")
    leg_edges = {k for k, e in enumerate(t.edges) if e.is_leg}
    if set(t.legs.values()) != leg_edges or len(t.legs) != len(leg_edges):
        return Violation("leg-labels", "labels are not a bijection onto the legs")
    return None


def leg_distance(t: MarkedMetricTree, i: str, j: str) -> Fraction:
    """Sum of bounded lengths between the inner endpoints of legs ``i`` and ``j``."""
    for lab in (i, j):
        if lab not in t.legs:
            raise UnknownLabel(f"unknown leg label {lab!r}")
    if i == j:
        raise InvalidInput("leg_distance needs two distinct labels")
    return t.vertex_distance(t.leg_vertex(i), t.leg_vertex(j))


def canonical_form(t: MarkedMetricTree, with_lengths: bool = True):
    """Hashable encoding of ``t`` up to isomorphism respecting labels.

    The tree is rooted at the smallest label's leg; children are sorted.
    """
    root_label = min(t.legs)
    start = t.leg_vertex(root_label)
    root_leg = t.legs[root_label]

    def enc(v: int, via: int):
        kids = []
        for k in t.adjacency[v]:
            if k == via:
                continue
            e = t.edges[k]
            if e.is_leg:
                lab = next(lab for lab, idx in t.legs.items() if idx == k)
                kids.append(("leg", lab))
            else:
                sub = enc(e.other(v), k)
                kids.append((sub, e.length) if with_lengths else (sub,))
        return tuple(sorted(kids, key=repr))

    return (root_label, enc(start, root_leg))


# parametrized curves --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ParametrizedTropCurve:
    tree: MarkedMetricTree
    positions: Mapping[int, tuple]
    degree: TropicalDegree
    marks: tuple[str, ...]

    def position(self, v: int) -> tuple:
        return self.positions[v]

    def leg_direction(self, label: str) -> tuple:
        if label in self.degree.pi:
            return tuple(Fraction(x) for x in self.degree.delta(label))
        return zero_vec(self.degree.r)

    def direction(self, v: int, k: int) -> tuple:
        """``dir(v, e)`` for the edge with index ``k`` at its endpoint ``v``."""
        e = self.tree.edges[k]
        if e.is_leg:
            lab = next(lab for lab, idx in self.tree.legs.items() if idx == k)
            return self.leg_direction(lab)
        w = e.other(v)
        diff = vec_sub(self.positions[w], self.positions[v])
        out = tuple(x / e.length for x in diff)
        if any(x.denominator != 1 for x in out):
            raise NonIntegralDirection(f"edge {k} from vertex {v}: direction {out} not integral")
        return out

    def to_json(self) -> dict:
        return curve_to_json(self)


def check_balancing(c: ParametrizedTropCurve) -> int | None:
    """Return the first inner vertex where balancing fails, or None.

    Raises NonIntegralDirection when an edge direction is not integral.
    """
    r = c.degree.r
    for v in sorted(c.tree.inner):
        if v not in c.positions:
            raise InvalidInput(f"missing position for inner vertex {v}")
    for v in sorted(c.tree.inner):
        total = zero_vec(r)
        for k in c.tree.adjacency[v]:
            total = vec_add(total, c.direction(v, k))
        if any(total):
            return v
    return None


# serialization --------------------------------------------------------------


def _length_json(x):
    return "inf" if x == INF else rational_json(x)


def tree_to_json(t: MarkedMetricTree) -> dict:
    vertices = [{"id": v, "kind": "inner"} for v in t.inner]
    for v in vertices:
        if v["id"] in t.names:
            v["name"] = t.names[v["id"]]
    vertices += [{"id": v, "kind": "foot"} for v in t.feet]
    return {
        "vertices": vertices,
        "edges": [[e.u, e.v, _length_json(e.length)] for e in t.edges],
        "legs": {lab: k for lab, k in sorted(t.legs.items())},
    }


def tree_from_json(obj: Mapping) -> MarkedMetricTree:
    try:
        inner = tuple(int(v["id"]) for v in obj["vertices"] if v["kind"] == "inner")
        feet = tuple(int(v["id"]) for v in obj["vertices"] if v["kind"] == "foot")
        names = {int(v["id"]): v["name"] for v in obj["vertices"] if "name" in v}
        edges = tuple(
            Edge(int(u), int(w), INF if ln == "inf" else as_fraction(ln)) for u, w, ln in obj["edges"]
        )
        legs = {str(k): int(v) for k, v in obj["legs"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed tree JSON: {exc}") from exc
    return MarkedMetricTree(inner, feet, edges, legs, names)


def curve_to_json(c: ParametrizedTropCurve) -> dict:
    out = tree_to_json(c.tree)
    out["r"] = c.degree.r
    out["degree"] = c.degree.to_json()
    out["marks"] = list(c.marks)
    out["positions"] = {str(v): [rational_json(x) for x in c.positions[v]] for v in c.tree.inner}
    return out


def curve_from_json(obj: Mapping) -> ParametrizedTropCurve:
    tree = tree_from_json(obj)
    degree = TropicalDegree.from_json(obj["degree"], int(obj["r"]))
    positions = {int(v): tuple(as_fraction(x) for x in p) for v, p in obj["positions"].items()}
    return ParametrizedTropCurve(tree, positions, degree, tuple(obj["marks"]))


def _fmt(q) -> str:
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_dot(t: MarkedMetricTree | ParametrizedTropCurve) -> str:
    """Graphviz rendering; bounded edges are labeled with their lengths."""
    curve = t if isinstance(t, ParametrizedTropCurve) else None
    tree = curve.tree if curve else t
    leg_of = {k: lab for lab, k in tree.legs.items()}
    lines = ["graph tropical_curve {", "  node [shape=point];"]
    for v in tree.inner:
        label = tree.names.get(v, str(v))
        if curve is not None:
            label += "\\n(" + ", ".join(_fmt(x) for x in curve.positions[v]) + ")"
        lines.append(f'  v{v} [shape=circle, width=0.1, xlabel="{label}"];')
    for v in tree.feet:
        lines.append(f'  v{v} [shape=plaintext, label=""];')
    for k, e in enumerate(tree.edges):
        if e.is_leg:
            lines.append(f'  v{e.u} -- v{e.v} [label="{leg_of.get(k, "")}", style=dashed];')
        else:
            lines.append(f'  v{e.u} -- v{e.v} [label="{_fmt(e.length)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
