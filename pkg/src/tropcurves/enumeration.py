"""Tropical curve counts by enumerating trivalent combinatorial types.

A trivalent type with ``n`` leaves has ``n - 3`` bounded edges.  On its
cell the evaluation maps are integer-linear in the bounded lengths and the
position of an anchor vertex (the vertex carrying the first label), so each
type contributes at most one solution, weighted by the absolute determinant
of the stacked integer condition matrix.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import Degenerate, DimensionMismatch, InvalidInput
from .linalg import affine_solutions, inequalities_feasible, integer_kernel_basis, integer_rank, is_primitive, solve_integer_system
from .puiseux import INF, as_fraction, rational_json
from .trees import Edge, MarkedMetricTree, ParametrizedTropCurve, TropicalDegree, vec_add, vec_scale

log = logging.getLogger(__name__)

MAX_TYPES = 10**8
PREFILTER_MIN_TYPES = 5000  # below this the exact pass alone is faster


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def type_count(n: int) -> int:
    """Number of trivalent trees with ``n`` labeled leaves: ``(2n-5)!!``."""
    if n < 3:
        return 0
    return double_factorial(2 * n - 5)


def _radices(n: int) -> list[int]:
    return [0, 0, 0] + [2 * k - 3 for k in range(3, n)]


def type_edges(n: int, idx: int) -> tuple[tuple[int, int], ...]:
    """Edges of the ``idx``-th trivalent tree on leaves ``0..n-1``.

    Leaves are vertices ``0..n-1``; inner vertices are numbered from ``n``
    in order of creation.  Leaf ``k >= 3`` subdivides edge ``c_k`` where the
    digits ``c_k`` are read from ``idx`` in mixed radix ``2k - 3``.
    """
    radices = _radices(n)
    digits = [0] * n
    rem = idx
    for k in range(n - 1, 2, -1):
        digits[k] = rem % radices[k]
        rem //= radices[k]
    if rem:
        raise IndexError(f"type index {idx} out of range for {n} leaves")
    edges = [(n, 0), (n, 1), (n, 2)]
    nxt = n + 1
    for k in range(3, n):
        a, b = edges[digits[k]]
        w = nxt
        nxt += 1
        edges[digits[k]] = (a, w)
        edges.append((w, b))
        edges.append((w, k))
    return tuple(edges)


@dataclass(frozen=True, eq=False)
class CombinatorialType:
    """Trivalent leaf-labeled tree; leaf ``k`` carries ``labels[k]``."""

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    index: int = -1

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {}
        for u, w in self.edges:
            adj.setdefault(u, []).append(w)
            adj.setdefault(w, []).append(u)
        return adj

    @cached_property
    def root(self) -> int:
        """Inner vertex carrying the first label; its position is the anchor."""
        return self.adjacency[0][0]

    @cached_property
    def _bfs(self) -> tuple[dict[int, int], list[int]]:
        parent = {self.root: -1}
        order = [self.root]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            for w in self.adjacency[v]:
                if w != parent[v]:
                    parent[w] = v
                    order.append(w)
        return parent, order

    @property
    def parent(self) -> dict[int, int]:
        return self._bfs[0]

    @cached_property
    def bounded_edges(self) -> tuple[tuple[int, int], ...]:
        """Bounded edges as ``(parent, child)`` in BFS order from the root."""
        parent, order = self._bfs
        return tuple((parent[v], v) for v in order if v >= self.n and v != self.root)

    def subtree_leaves(self, child: int) -> frozenset[int]:
        parent = self.parent
        out, stack = set(), [child]
        while stack:
            v = stack.pop()
            if v < self.n:
                out.add(v)
                continue
            stack.extend(w for w in self.adjacency[v] if w != parent[v])
        return frozenset(out)

    def edge_directions(self, degree: TropicalDegree) -> list[tuple[int, ...]]:
        """Direction of each bounded edge, pointing away from the root."""
        return [
            tuple(int(x) for x in degree.s_of(self.labels[k] for k in self.subtree_leaves(c)))
            for _, c in self.bounded_edges
        ]

    def splits(self) -> frozenset:
        """Leaf bipartitions of the bounded edges; determines the type."""
        out = set()
        everything = frozenset(self.labels)
        for _, c in self.bounded_edges:
            side = frozenset(self.labels[k] for k in self.subtree_leaves(c))
            out.add(frozenset((side, everything - side)))
        return frozenset(out)

    def canonical_form(self):
        """Sorted recursive encoding rooted at the first label's leaf."""

        def enc(v: int, via: int):
            if v < self.n:
                return self.labels[v]
            kids = [enc(w, v) for w in self.adjacency[v] if w != via]
            return tuple(sorted(kids, key=repr))

        return enc(self.root, 0)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "splits": sorted(
                sorted(sorted(side) for side in split) for split in self.splits()
            ),
        }


def make_type(labels: Sequence[str], idx: int) -> CombinatorialType:
    return CombinatorialType(tuple(labels), type_edges(len(labels), idx), idx)


def enumerate_types(labels: Sequence[str]) -> Iterator[CombinatorialType]:
    """Every trivalent type on ``labels`` exactly once, in index order."""
    labels = tuple(labels)
    if len(labels) < 3:
        raise InvalidInput("need at least three labels")
    for idx in range(type_count(len(labels))):
        yield make_type(labels, idx)


# constraints ----------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceConstraint:
    """``tev_label`` must lie in ``base + span(dirs)``.

    An empty ``dirs`` is a point condition.  For boundary labels the ray of
    the label is added to the difference space, i.e. the condition lives in
    the orbit quotient.
    """

    label: str
    base: tuple[Fraction, ...]
    dirs: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        for v in self.dirs:
            if len(v) != len(self.base):
                raise InvalidInput(f"direction {v} has wrong length for constraint on {self.label!r}")
            if not is_primitive(v):
                raise InvalidInput(f"direction {v} is not primitive")
        if self.dirs and integer_rank(self.dirs) != len(self.dirs):
            raise InvalidInput(f"directions of constraint on {self.label!r} are dependent")

    @classmethod
    def point(cls, label: str, p: Sequence) -> "IncidenceConstraint":
        return cls(label, tuple(as_fraction(x) for x in p))

    def difference_space(self, degree: TropicalDegree) -> list[tuple[int, ...]]:
        dirs = [tuple(v) for v in self.dirs]
        if self.label in degree.pi:
            dirs.append(tuple(degree.rays[degree.pi[self.label]]))
        return dirs

    def functionals(self, degree: TropicalDegree) -> list[tuple[int, ...]]:
        """Lattice basis of the integer functionals vanishing on the difference space."""
        return integer_kernel_basis(self.difference_space(degree), degree.r)

    def codim(self, degree: TropicalDegree) -> int:
        return len(self.functionals(degree))

    def to_json(self) -> dict:
        base = [rational_json(x) for x in self.base]
        if not self.dirs:
            return {"label": self.label, "point": base}
        return {"label": self.label, "affine": {"base": base, "dirs": [list(v) for v in self.dirs]}}

    @classmethod
    def from_json(cls, obj) -> "IncidenceConstraint":
        try:
            label = str(obj["label"])
            if "point" in obj:
                return cls.point(label, obj["point"])
            aff = obj["affine"]
            return cls(
                label,
                tuple(as_fraction(x) for x in aff["base"]),
                tuple(tuple(int(x) for x in v) for v in aff.get("dirs", [])),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed constraint: {obj!r}") from exc


@dataclass(frozen=True)
class ConditionSystem:
    """Rows ``matrix . (anchor, lengths) = rhs`` for one type."""

    matrix: tuple[tuple[int, ...], ...]
    rhs: tuple[Fraction, ...]


def _stack_functionals(labels, degree, constraints):
    index = {lab: k for k, lab in enumerate(labels)}
    rows = []
    for con in constraints:
        if con.label not in index:
            raise InvalidInput(f"constraint on unknown label {con.label!r}")
        if len(con.base) != degree.r:
            raise InvalidInput(f"constraint on {con.label!r} must have {degree.r} coordinates")
        for f in con.functionals(degree):
            rows.append((index[con.label], f, sum(fi * bi for fi, bi in zip(f, con.base))))
    return rows


def check_dimension(labels, degree: TropicalDegree, constraints) -> None:
    total = sum(con.codim(degree) for con in constraints)
    need = len(labels) - 3 + degree.r
    if total != need:
        raise DimensionMismatch(
            f"constraints have total codimension {total}, the moduli space has dimension {need}"
        )


def condition_system(
    ctype: CombinatorialType, degree: TropicalDegree, constraints: Sequence[IncidenceConstraint]
) -> ConditionSystem:
    r = degree.r
    rows = _stack_functionals(ctype.labels, degree, constraints)
    n_unknowns = ctype.n - 3 + r
    if len(rows) != n_unknowns:
        raise DimensionMismatch(f"{len(rows)} conditions for {n_unknowns} unknowns")
    dirs = ctype.edge_directions(degree)
    col = {child: r + k for k, (_, child) in enumerate(ctype.bounded_edges)}
    col_dir = {child: dirs[k] for k, (_, child) in enumerate(ctype.bounded_edges)}
    parent = ctype.parent
    matrix, rhs = [], []
    for leaf, f, value in rows:
        row = list(f) + [0] * (ctype.n - 3)
        w = parent[leaf]
        while w != ctype.root:
            row[col[w]] = sum(fi * di for fi, di in zip(f, col_dir[w]))
            w = parent[w]
        matrix.append(tuple(row))
        rhs.append(Fraction(value))
    return ConditionSystem(tuple(matrix), tuple(rhs))


@dataclass(frozen=True)
class Solution:
    ctype: CombinatorialType
    lengths: tuple[Fraction, ...]
    anchor: tuple[Fraction, ...]
    multiplicity: int

    def curve(self, degree: TropicalDegree, marks: Sequence[str] = ()) -> ParametrizedTropCurve:
        """The parametrized tropical curve of this solution.

        Leaves keep their type vertex ids as feet; the root sits at the anchor.
        """
        t = self.ctype
        edges, legs = [], {}
        for k in range(t.n):
            legs[t.labels[k]] = len(edges)
            edges.append(Edge(t.parent[k], k, INF))
        positions = {t.root: tuple(self.anchor)}
        dirs = t.edge_directions(degree)
        for (u, v), length, d in zip(t.bounded_edges, self.lengths, dirs):
            edges.append(Edge(u, v, length))
            positions[v] = vec_add(positions[u], vec_scale(length, d))
        inner = tuple(sorted(set(t.adjacency) - set(range(t.n))))
        tree = MarkedMetricTree(inner, tuple(range(t.n)), tuple(edges), legs)
        return ParametrizedTropCurve(tree, positions, degree, tuple(marks))

    def to_json(self) -> dict:
        return {
            "type": self.ctype.to_json(),
            "lengths": [rational_json(x) for x in self.lengths],
            "anchor": [rational_json(x) for x in self.anchor],
            "multiplicity": self.multiplicity,
        }


def _solve_status(ctype, degree, constraints):
    """Return ``(status, solution)`` with status accept/reject/wall/degenerate."""
    system = condition_system(ctype, degree, constraints)
    res = solve_integer_system(system.matrix, system.rhs)
    if res.status == "inconsistent":
        return "reject", None
    r = degree.r
    if res.status == "underdetermined":
        # a family of solutions; only a problem if it reaches nonnegative lengths
        x0, basis = affine_solutions(system.matrix, system.rhs)
        rows = [[v[r + k] for v in basis] for k in range(ctype.n - 3)]
        if inequalities_feasible(rows, [-x0[r + k] for k in range(ctype.n - 3)]):
            return "degenerate", None
        return "reject", None
    anchor, lengths = res.x[:r], res.x[r:]
    sol = Solution(ctype, lengths, anchor, abs(res.det))
    low = min(lengths, default=Fraction(1))
    if low > 0:
        return "accept", sol
    if low == 0:
        return "wall", sol
    return "reject", None


def solve_conditions(
    ctype: CombinatorialType, degree: TropicalDegree, constraints: Sequence[IncidenceConstraint]
) -> Solution | None:
    """Exact solution on the cell of ``ctype``, or None.

    Raises Degenerate when the system is singular and its solution family
    meets nonnegative lengths, and
    DimensionMismatch when it is not square.
    """
    status, sol = _solve_status(ctype, degree, constraints)
    if status == "degenerate":
        raise Degenerate(f"type {ctype.index}: positive-dimensional solution family")
    return sol if status == "accept" else None


# counting -------------------------------------------------------------------


@dataclass
class CountResult:
    degree: int
    solutions: list[Solution] = field(default_factory=list)
    rejected_degenerate: int = 0
    types_examined: int = 0
    exact_checks: int = 0
    unlabeled: Fraction | None = None

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "labeled_degree": self.degree,
            "types_examined": self.types_examined,
            "exact_checks": self.exact_checks,
            "rejected_degenerate": self.rejected_degenerate,
            "solutions": [s.to_json() for s in self.solutions],
        }
        if self.unlabeled is not None:
            out["unlabeled_degree"] = rational_json(self.unlabeled)
        return out


def count_labels(degree: TropicalDegree, marks: Sequence[str]) -> tuple[str, ...]:
    return tuple(marks) + tuple(degree.labels)


def _chunks(total: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _kernel_inputs(labels, degree, constraints):
    rows = _stack_functionals(labels, degree, constraints)
    n, r = len(labels), degree.r
    delta = np.zeros((n, r), dtype=np.float64)
    for k, lab in enumerate(labels):
        if lab in degree.pi:
            delta[k] = degree.delta(lab)
    func = np.array([f for _, f, _ in rows], dtype=np.float64).reshape(len(rows), r)
    row_label = np.array([leaf for leaf, _, _ in rows], dtype=np.int64)
    rhs = np.array([float(v) for _, _, v in rows], dtype=np.float64)
    radices = np.array(_radices(n), dtype=np.int64)
    return n, r, radices, delta, func, row_label, rhs


def _prefilter_chunk(args, start, stop) -> np.ndarray:
    from ._kernel import classify_range

    n, r, radices, delta, func, row_label, rhs = args
    out = np.zeros(stop - start, dtype=np.int8)
    classify_range(start, stop, n, r, radices, delta, func, row_label, rhs, out)
    return out


def count_curves(
    degree: TropicalDegree,
    constraints: Sequence[IncidenceConstraint],
    marks: Sequence[str] | None = None,
    prefilter: bool | None = None,
    threads: int | None = None,
    chunk_size: int = 1 << 20,
    max_types: int = MAX_TYPES,
) -> CountResult:
    """Tropical degree of the zero-dimensional pull-back of ``constraints``.

    ``marks`` default to the constrained labels outside the degree.  With
    ``prefilter`` the compiled float stage classifies every type and only
    candidates near acceptance are solved exactly; ``None`` enables it for
    runs of at least ``PREFILTER_MIN_TYPES`` types.  Raises Degenerate if any
    type has a singular system whose solutions reach nonnegative lengths, or a
    solution on a wall.
    """
    if marks is None:
        marks = [c.label for c in constraints if c.label not in degree.pi]
    labels = count_labels(degree, marks)
    if len(set(labels)) != len(labels):
        raise InvalidInput("labels must be distinct")
    check_dimension(labels, degree, constraints)
    total = type_count(len(labels))
    if total > max_types:
        raise DimensionMismatch(
            f"infeasible enumeration size: {total} combinatorial types (limit {max_types})"
        )
    result = CountResult(0, types_examined=total)

    def examine(idx: int):
        ctype = make_type(labels, idx)
        result.exact_checks += 1
        status, sol = _solve_status(ctype, degree, constraints)
        if status == "degenerate":
            raise Degenerate(f"type {idx}: positive-dimensional solution family")
        if status == "wall":
            result.rejected_degenerate += 1
            raise Degenerate(f"type {idx}: solution with a zero-length edge")
        if status == "accept":
            result.solutions.append(sol)
            result.degree += sol.multiplicity

    if prefilter is None:
        prefilter = total >= PREFILTER_MIN_TYPES
    if not prefilter:
        for idx in range(total):
            examine(idx)
    else:
        args = _kernel_inputs(labels, degree, constraints)
        chunks = _chunks(total, chunk_size)
        workers = max(1, threads or 1)
        if workers == 1 or len(chunks) == 1:
            codes_iter = (_prefilter_chunk(args, s, e) for s, e in chunks)
            for (s, _), codes in zip(chunks, codes_iter):
                for off in np.flatnonzero(codes):
                    examine(s + int(off))
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_prefilter_chunk, args, s, e) for s, e in chunks]
                for (s, _), fut in zip(chunks, futures):
                    codes = fut.result()
                    for off in np.flatnonzero(codes):
                        examine(s + int(off))
    if degree.is_projective:
        result.unlabeled = Fraction(result.degree, math.factorial(degree.d) ** (degree.r + 1))
    log.info("counted degree %d over %d types (%d exact checks)", result.degree, total, result.exact_checks)
    return result


# random generic constraints -------------------------------------------------


def unit_line_directions(r: int) -> list[tuple[int, ...]]:
    """Directions whose subtorus closures are lines: nonzero 0/1 or 0/-1 vectors."""
    out = []
    for mask in range(1, 2**r):
        v = tuple((mask >> k) & 1 for k in range(r))
        out.append(v)
        out.append(tuple(-x for x in v))
    return out


def random_point(rng: random.Random, r: int, spread: int = 1000) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-spread, spread)) for _ in range(r))


def random_point_constraints(rng: random.Random, r: int, marks: Sequence[str]) -> list[IncidenceConstraint]:
    return [IncidenceConstraint(m, random_point(rng, r)) for m in marks]


def random_line_constraints(rng: random.Random, r: int, marks: Sequence[str]) -> list[IncidenceConstraint]:
    """Affine lines whose directions come from :func:`unit_line_directions`.

    Directions are pairwise non-parallel: two parallel lines share a point at
    infinity, which is not a generic configuration.
    """
    classes = [v for v in unit_line_directions(r) if v[next(i for i, x in enumerate(v) if x)] > 0]
    if len(marks) > len(classes):
        raise InvalidInput(f"only {len(classes)} non-parallel unit directions in dimension {r}")
    dirs = []
    for v in rng.sample(classes, len(marks)):
        sign = rng.choice((1, -1))
        dirs.append(tuple(sign * x for x in v))
    return [IncidenceConstraint(m, random_point(rng, r), (v,)) for m, v in zip(marks, dirs)]


def point_count_marks(r: int, d: int) -> int | None:
    """Number of point conditions ``n`` with ``n r = n + r + r d + d - 3``."""
    num = r + r * d + d - 3
    if r == 1 or num % (r - 1):
        return None
    return num // (r - 1)


def count_with_retries(
    degree: TropicalDegree,
    make_constraints,
    seed: int = 42,
    retries: int = 5,
    **kwargs,
) -> tuple[CountResult, list[IncidenceConstraint], int]:
    """Re-randomize constraints from ``seed`` until the count is not degenerate.

    ``make_constraints(rng)`` builds one constraint set.  Returns the result,
    the constraints used, and the attempt number.
    """
    rng = random.Random(seed)
    last: Degenerate | None = None
    for attempt in range(max(1, retries)):
        constraints = make_constraints(rng)
        try:
            return count_curves(degree, constraints, **kwargs), constraints, attempt
        except Degenerate as exc:
            log.warning("attempt %d degenerate: %s", attempt, exc)
            last = exc
    raise Degenerate(f"still degenerate after {retries} attempts: {last}")


def kontsevich_oracle(d: int) -> int:
    """Number of rational plane curves of degree ``d`` through ``3d - 1`` points."""
    if d < 1:
        raise ValueError("degree must be positive")
    n = [0, 1]
    for e in range(2, d + 1):
        total = 0
        for d1 in range(1, e):
            d2 = e - d1
            total += n[d1] * n[d2] * (
                d1 * d1 * d2 * d2 * math.comb(3 * e - 4, 3 * d1 - 2)
                - d1**3 * d2 * math.comb(3 * e - 4, 3 * d1 - 1)
            )
        n.append(total)
    return n[d]
