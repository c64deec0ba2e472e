"""Plücker coordinates and evaluation maps on both sides of tropicalization.

The algebraic moduli point of a curve in standard form is the vector of
2x2 minors ``d(l, m)`` together with ``f(p_{i0})``; the tropical moduli
point is ``(-dist(l, m)/2)`` modulo ``Phi(x) = (x_l + x_m)`` together with
the position of the anchor leg.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Mapping, Sequence

from .errors import AsymmetricInput, InvalidInput, PrecisionLoss, UnknownLabel, ZeroDivisor
from .puiseux import PuiseuxSeries, as_fraction, divide, ps_valuation, rational_json
from .trees import (
    MarkedMetricTree,
    ParametrizedTropCurve,
    TropicalDegree,
    leg_distance,
    vec_add,
    vec_scale,
    vec_sub,
    zero_vec,
)
from .tropicalize import CurveInput, _solve_ray, anchor_position, corresponding_curve

ONE = PuiseuxSeries.constant(1)


# Plücker vectors ------------------------------------------------------------


@dataclass(frozen=True)
class PlueckerVector:
    """Gauge-normal representative of a class in ``Q^{pairs} / Im Phi``.

    All coordinates on pairs containing ``i0`` are zero and the smallest
    remaining coordinate is zero.  Both orientations of every pair are kept.
    """

    coords: Mapping[tuple[str, str], Fraction]
    i0: str

    def __getitem__(self, pair: tuple[str, str]) -> Fraction:
        return self.coords[pair]

    def __eq__(self, other):
        if not isinstance(other, PlueckerVector):
            return NotImplemented
        return self.i0 == other.i0 and dict(self.coords) == dict(other.coords)

    def __hash__(self):
        return hash((self.i0, tuple(sorted(self.coords.items()))))

    def to_json(self) -> list[dict]:
        return [
            {"pair": [a, b], "v": rational_json(v)}
            for (a, b), v in sorted(self.coords.items())
            if self.i0 not in (a, b) and a < b
        ]


def _labels_of(raw: Mapping[tuple[str, str], object]) -> list[str]:
    return sorted({x for pair in raw for x in pair})


def pluecker_normal_form(raw: Mapping[tuple[str, str], object], i0: str) -> PlueckerVector:
    """Gauge-fix ``raw`` modulo ``Im Phi``.

    First subtracts ``Phi(x)`` with ``x_{i0} = 0`` and ``x_m = raw(i0, m)``,
    which zeroes every pair through ``i0``.  The vectors ``Phi(x)`` with
    ``x_{i0} = a`` and ``x_m = -a`` keep those zeros and shift all other
    pairs by ``-2a``, so the remaining coordinates are then shifted to have
    minimum zero.
    """
    full: dict[tuple[str, str], Fraction] = {}
    for (a, b), v in raw.items():
        if a == b:
            raise InvalidInput(f"pair ({a!r}, {b!r}) is not a pair of distinct labels")
        v = as_fraction(v)
        for key in ((a, b), (b, a)):
            if key in full and full[key] != v:
                raise AsymmetricInput(f"coordinates of ({a!r}, {b!r}) differ by orientation")
            full[key] = v
    labels = _labels_of(full)
    if i0 not in labels:
        raise UnknownLabel(f"anchor {i0!r} does not occur in the Plücker vector")
    for a, b in permutations(labels, 2):
        if (a, b) not in full:
            raise InvalidInput(f"missing coordinate for pair ({a!r}, {b!r})")
    x = {m: (Fraction(0) if m == i0 else full[(i0, m)]) for m in labels}
    out = {(a, b): full[(a, b)] - x[a] - x[b] for a, b in permutations(labels, 2)}
    rest = [v for (a, b), v in out.items() if i0 not in (a, b)]
    if rest:
        shift = min(rest)
        for key in out:
            if i0 not in key:
                out[key] -= shift
    return PlueckerVector(out, i0)


def phi(x: Mapping[str, object]) -> dict[tuple[str, str], Fraction]:
    """``Phi(x)_{(l, m)} = x_l + x_m`` over ordered pairs."""
    return {(a, b): as_fraction(x[a]) + as_fraction(x[b]) for a, b in permutations(sorted(x), 2)}


def tropical_pluecker(t: MarkedMetricTree, i0: str) -> PlueckerVector:
    raw = {(a, b): -leg_distance(t, a, b) / 2 for a, b in permutations(sorted(t.legs), 2)}
    return pluecker_normal_form(raw, i0)


@dataclass(frozen=True)
class AlgPlueckerVector:
    """The minors ``d(l, m)`` of the 2 x L0 standard-form matrix."""

    coords: Mapping[tuple[str, str], PuiseuxSeries]
    i0: str

    def __getitem__(self, pair: tuple[str, str]) -> PuiseuxSeries:
        return self.coords[pair]

    @property
    def labels(self) -> list[str]:
        return _labels_of(self.coords)

    def act(self, x: Mapping[str, PuiseuxSeries]) -> "AlgPlueckerVector":
        """Torus action ``d(l, m) -> x_l x_m d(l, m)``."""
        return AlgPlueckerVector({(a, b): x[a] * x[b] * v for (a, b), v in self.coords.items()}, self.i0)


def algebraic_pluecker(inp: CurveInput) -> AlgPlueckerVector:
    coords = {}
    for a, b in permutations(inp.labels, 2):
        if a == inp.i0:
            coords[(a, b)] = -ONE
        elif b == inp.i0:
            coords[(a, b)] = ONE
        else:
            coords[(a, b)] = inp.a[b] - inp.a[a]
    return AlgPlueckerVector(coords, inp.i0)


def trop_algebraic_pluecker(apl: AlgPlueckerVector) -> PlueckerVector:
    return pluecker_normal_form({k: ps_valuation(v) for k, v in apl.coords.items()}, apl.i0)


@dataclass(frozen=True)
class ModuliPoint:
    pluecker: PlueckerVector
    anchor: tuple

    def to_json(self) -> dict:
        return {
            "pluecker": self.pluecker.to_json(),
            "anchor": [rational_json(x) for x in self.anchor],
        }


def trop_moduli_point(inp: CurveInput) -> ModuliPoint:
    """Tropicalization of the algebraic moduli point of ``inp``."""
    return ModuliPoint(trop_algebraic_pluecker(algebraic_pluecker(inp)), anchor_position(inp))


def curve_moduli_point(curve: ParametrizedTropCurve, i0: str) -> ModuliPoint:
    """Plücker vector of the abstract curve together with ``tev_{i0}``."""
    return ModuliPoint(tropical_pluecker(curve.tree, i0), tev_marked(curve, i0))


def check_moduli_point(inp: CurveInput, curve: ParametrizedTropCurve | None = None) -> bool:
    curve = corresponding_curve(inp) if curve is None else curve
    return trop_moduli_point(inp) == curve_moduli_point(curve, inp.i0)


# torus points ---------------------------------------------------------------


@dataclass(frozen=True)
class TorusPoint:
    """Point of the big torus given by fractional Cox coordinates.

    Coordinate ``rho`` is ``num[rho] / den[rho]``.  The torus coordinate
    ``k`` is ``prod_rho x_rho^(u_rho[k])``; for projective degrees this is
    ``x_k / x_0``.
    """

    num: tuple[PuiseuxSeries, ...]
    den: tuple[PuiseuxSeries, ...]
    rays: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cox(cls, cox: Sequence[PuiseuxSeries], rays) -> "TorusPoint":
        return cls(tuple(cox), tuple(ONE for _ in cox), tuple(rays))

    @property
    def cox(self) -> tuple[PuiseuxSeries, ...]:
        if any(d != ONE for d in self.den):
            raise ValueError("point has non-trivial denominators")
        return self.num

    def trop(self) -> tuple:
        pos = zero_vec(len(self.rays[0]))
        for n, d, u in zip(self.num, self.den, self.rays):
            pos = vec_add(pos, vec_scale(ps_valuation(n) - ps_valuation(d), u))
        return pos

    def _coordinate_sides(self, k: int):
        top, bottom = ONE, ONE
        for n, d, u in zip(self.num, self.den, self.rays):
            e = u[k]
            if e > 0:
                top, bottom = top * n**e, bottom * d**e
            elif e < 0:
                top, bottom = top * d ** (-e), bottom * n ** (-e)
        return top, bottom

    def coordinates(self, order=8) -> tuple[PuiseuxSeries, ...]:
        """Torus coordinates; truncated when a division is required."""
        out = []
        for k in range(len(self.rays[0])):
            top, bottom = self._coordinate_sides(k)
            out.append(top if bottom == ONE else divide(top, bottom, order))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, TorusPoint):
            return NotImplemented
        if self.rays != other.rays:
            return False
        for k in range(len(self.rays[0])):
            t1, b1 = self._coordinate_sides(k)
            t2, b2 = other._coordinate_sides(k)
            if t1 * b2 != t2 * b1:
                return False
        return True

    __hash__ = None

    def to_json(self, order=8) -> list:
        try:
            return [x.to_json() for x in self.cox]
        except ValueError:
            return [x.to_json() for x in self.coordinates(order)]


@dataclass(frozen=True)
class OrbitPoint:
    """Point of the boundary orbit of ray ``ray``: Cox coordinates of the other rays."""

    ray: int
    cox: Mapping[int, PuiseuxSeries]
    rays: tuple[tuple[int, ...], ...]

    def trop(self) -> "OrbitClass":
        pos = zero_vec(len(self.rays[0]))
        for rho, x in self.cox.items():
            pos = vec_add(pos, vec_scale(ps_valuation(x), self.rays[rho]))
        return OrbitClass(pos, tuple(self.rays[self.ray]))

    def to_json(self) -> dict:
        return {"ray": self.ray, "cox": {str(k): v.to_json() for k, v in sorted(self.cox.items())}}


@dataclass(frozen=True)
class OrbitClass:
    """Class of ``point`` in ``Q^r / Q*direction``."""

    point: tuple
    direction: tuple

    def __eq__(self, other):
        if not isinstance(other, OrbitClass):
            return NotImplemented
        if tuple(self.direction) != tuple(other.direction):
            return False
        diff = vec_sub(self.point, other.point)
        return _solve_ray(zero_vec(len(diff)), self.direction, diff) is not None

    __hash__ = None


# evaluation -----------------------------------------------------------------


def cox_image(inp: CurveInput, a: PuiseuxSeries) -> tuple[PuiseuxSeries, ...]:
    """Cox coordinates of ``f(1:a)``: ``c_rho prod (a - a_l)^omega(l)``."""
    deg = inp.degree
    out = []
    for rho, cr in enumerate(inp.c):
        val = cr
        for lab in deg.labels:
            if deg.pi[lab] == rho:
                val = val * (a - inp.a[lab]) ** deg.omega[lab]
        out.append(val)
    return tuple(out)


def ev_marked(inp: CurveInput, mark: str) -> TorusPoint:
    if mark not in inp.marks:
        raise UnknownLabel(f"{mark!r} is not a mark")
    rays = inp.degree.rays
    if mark == inp.i0:
        return TorusPoint.from_cox(inp.c, rays)
    return TorusPoint.from_cox(cox_image(inp, inp.a[mark]), rays)


def ev_marked_extended(
    apl: AlgPlueckerVector, c: Sequence[PuiseuxSeries], mark: str, degree: TropicalDegree
) -> TorusPoint:
    """Evaluation at ``mark`` written in Plücker coordinates only.

    Coordinate ``rho`` is ``c_rho prod (d(l, mark) / d(l, i0))^omega(l)``
    over labels ``l`` on ray ``rho``; defined on the whole Plücker torus.
    """
    i0 = apl.i0
    num, den = [], []
    for rho, cr in enumerate(c):
        top, bottom = cr, ONE
        for lab in degree.labels:
            if degree.pi[lab] != rho:
                continue
            w = degree.omega[lab]
            dl0 = apl[(lab, i0)]
            if dl0.is_zero():
                raise ZeroDivisor(f"d({lab!r}, {i0!r}) vanishes")
            if mark != i0:
                top = top * apl[(lab, mark)] ** w
                bottom = bottom * dl0**w
        num.append(top)
        den.append(bottom)
    return TorusPoint(tuple(num), tuple(den), tuple(degree.rays))


def ev_boundary(inp: CurveInput, j: str) -> OrbitPoint:
    deg = inp.degree
    if j not in deg.pi:
        raise UnknownLabel(f"{j!r} is not a boundary label")
    cox = cox_image(inp, inp.a[j])
    home = deg.pi[j]
    return OrbitPoint(home, {rho: x for rho, x in enumerate(cox) if rho != home}, tuple(deg.rays))


def tev_marked(c: ParametrizedTropCurve, mark: str) -> tuple:
    if mark not in c.tree.legs:
        raise UnknownLabel(f"unknown label {mark!r}")
    return c.positions[c.tree.leg_vertex(mark)]


def tev_boundary(c: ParametrizedTropCurve, j: str) -> OrbitClass:
    if j not in c.degree.pi:
        raise UnknownLabel(f"{j!r} is not a boundary label")
    pos = c.positions[c.tree.leg_vertex(j)]
    return OrbitClass(pos, tuple(c.degree.rays[c.degree.pi[j]]))


# verification ---------------------------------------------------------------


@dataclass
class CheckEntry:
    label: str
    kind: str  # "mark", "boundary" or "moduli"
    algebraic: object
    tropical: object
    ok: bool

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "trop_of_ev": _jsonable(self.algebraic),
            "tev_of_trop": _jsonable(self.tropical),
            "ok": self.ok,
        }


def _jsonable(x):
    if isinstance(x, OrbitClass):
        return {"point": [rational_json(v) for v in x.point], "mod": list(x.direction)}
    if isinstance(x, ModuliPoint):
        return x.to_json()
    if isinstance(x, tuple):
        return [rational_json(as_fraction(v)) for v in x]
    return x


@dataclass
class CommutativityReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.ok]

    def to_json(self) -> dict:
        return {"ok": self.ok, "entries": [e.to_json() for e in self.entries]}


def verify_commutativity(
    inp: CurveInput, curve: ParametrizedTropCurve | None = None, moduli: bool = True
) -> CommutativityReport:
    """Compare ``trop(ev)`` with ``tev(trop)`` at every mark and boundary label.

    ``curve`` defaults to the corresponding tropical curve of ``inp``.
    PrecisionLoss propagates if a valuation cannot be certified.
    """
    curve = corresponding_curve(inp) if curve is None else curve
    report = CommutativityReport()
    for m in inp.marks:
        alg = ev_marked(inp, m).trop()
        trop = tev_marked(curve, m)
        report.entries.append(CheckEntry(m, "mark", alg, trop, alg == trop))
    for j in inp.degree.labels:
        alg = ev_boundary(inp, j).trop()
        trop = tev_boundary(curve, j)
        report.entries.append(CheckEntry(j, "boundary", alg, trop, alg == trop))
    if moduli:
        alg = trop_moduli_point(inp)
        trop = curve_moduli_point(curve, inp.i0)
        report.entries.append(CheckEntry(inp.i0, "moduli", alg, trop, alg == trop))
    return report


__all__ = [
    "AlgPlueckerVector",
    "CommutativityReport",
    "ModuliPoint",
    "OrbitClass",
    "OrbitPoint",
    "PlueckerVector",
    "PrecisionLoss",
    "TorusPoint",
    "algebraic_pluecker",
    "check_moduli_point",
    "curve_moduli_point",
    "ev_boundary",
    "ev_marked",
    "ev_marked_extended",
    "phi",
    "pluecker_normal_form",
    "tev_boundary",
    "tev_marked",
    "trop_algebraic_pluecker",
    "trop_moduli_point",
    "tropical_pluecker",
    "verify_commutativity",
]
