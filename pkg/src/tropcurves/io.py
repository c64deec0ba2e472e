"""JSON encodings of curve inputs and random input generation."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Mapping

from .errors import InvalidInput
from .puiseux import PuiseuxSeries, series_from_json
from .trees import TropicalDegree
from .tropicalize import CurveInput


def curve_input_from_json(obj: Mapping) -> CurveInput:
    """Build a CurveInput from the CLI schema.

    Series may be given as term arrays (see ``series_from_json``) or as
    strings such as ``"t^-2 + 1"``.
    """
    if not isinstance(obj, Mapping):
        raise InvalidInput("curve input must be a JSON object")
    try:
        r = int(obj["r"])
        degree = TropicalDegree.from_json(obj["degree"], r)
        marks = tuple(str(m) for m in obj["marks"])
        i0 = str(obj["i0"])
        a = {str(k): series_from_json(v) for k, v in obj["a"].items()}
        c = tuple(series_from_json(v) for v in obj["c"])
    except KeyError as exc:
        raise InvalidInput(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed curve input: {exc}") from exc
    return CurveInput(degree, marks, i0, a, c)


def curve_input_to_json(inp: CurveInput) -> dict:
    return {
        "r": inp.r,
        "degree": inp.degree.to_json(),
        "i0": inp.i0,
        "marks": list(inp.marks),
        "a": {k: inp.a[k].to_json() for k in sorted(inp.a)},
        "c": [x.to_json() for x in inp.c],
    }


def worked_example() -> CurveInput:
    """The worked d = r = 2 example with marks 1, 2 and anchor 1."""
    s = PuiseuxSeries.coerce
    a = {
        "(0,1)": s("t^-2 + 1"),
        "(1,1)": s("t^-1"),
        "(2,1)": s("t^-2"),
        "(0,2)": s("2"),
        "(1,2)": s("2 + t + 4t^3"),
        "(2,2)": s("2 + t"),
        "2": s("2 + t + 4t^3 - t^4"),
    }
    c = (s("t^-1"), s("2t^-1 + 3t"), s("1 + t"))
    return CurveInput(TropicalDegree.projective(2, 2), ("1", "2"), "1", a, c)


def random_series(rng: random.Random, max_terms: int = 5, lo: int = -3, hi: int = 5) -> PuiseuxSeries:
    """Nonzero exact series with at most ``max_terms`` integer-exponent terms."""
    while True:
        k = rng.randint(1, max_terms)
        exps = rng.sample(range(lo, hi + 1), k)
        terms = [(e, Fraction(rng.choice([-1, 1]) * rng.randint(1, 4), rng.randint(1, 2))) for e in exps]
        x = PuiseuxSeries(terms)
        if not x.is_zero():
            return x


def random_toric_degree(rng: random.Random, r: int) -> TropicalDegree:
    """Random rays with a positive relation, one or more labels per ray."""
    while True:
        n_rays = rng.randint(r + 1, r + 2)
        rays = []
        for _ in range(n_rays - 1):
            u = tuple(rng.randint(-2, 2) for _ in range(r))
            if any(u):
                rays.append(u)
        if len(rays) != n_rays - 1:
            continue
        weights = [rng.randint(1, 2) for _ in rays]
        last = [-sum(w * u[k] for w, u in zip(weights, rays)) for k in range(r)]
        if not any(last):
            continue
        g = reduce(gcd, (abs(x) for x in last))
        rays.append(tuple(x // g for x in last))
        weights.append(g)
        prim = []
        omegas = []
        ok = True
        for u, w in zip(rays, weights):
            g = reduce(gcd, (abs(x) for x in u))
            if g == 0:
                ok = False
                break
            prim.append(tuple(x // g for x in u))
            omegas.append(w * g)
        if not ok or len(set(prim)) != len(prim):
            continue
        labels, pi, omega = [], {}, {}
        for rho, total in enumerate(omegas):
            # split the ray degree into one or two labels
            parts = [total] if total == 1 or rng.random() < 0.5 else [1, total - 1]
            for n, w in enumerate(parts):
                name = f"b{rho}.{n}"
                labels.append(name)
                pi[name] = rho
                omega[name] = w
        return TropicalDegree(tuple(prim), tuple(labels), pi, omega)


def random_curve_input(
    rng: random.Random,
    max_r: int = 3,
    max_d: int = 3,
    n_marks: int | None = None,
    toric: bool = False,
    max_terms: int = 5,
    exp_range: tuple[int, int] = (-3, 5),
) -> CurveInput:
    r = rng.randint(1, max_r)
    degree = random_toric_degree(rng, r) if toric else TropicalDegree.projective(r, rng.randint(1, max_d))
    if n_marks is None:
        n_marks = rng.randint(1, 3)
    marks = tuple(str(k) for k in range(1, n_marks + 1))
    labels = [m for m in marks[1:]] + list(degree.labels)
    lo, hi = exp_range
    a: dict[str, PuiseuxSeries] = {}
    used = set()
    for lab in labels:
        while True:
            x = random_series(rng, max_terms, lo, hi)
            if rng.random() < 0.5 and used:
                # perturb an existing point to get deep clusters
                base = rng.choice(sorted(used, key=str))
                x = base + random_series(rng, 2, 0, hi)
                if x.is_zero():
                    continue
            if x not in used and len(x.terms) <= max_terms:
                break
        used.add(x)
        a[lab] = x
    c = tuple(random_series(rng, max_terms, lo, hi) for _ in degree.rays)
    return CurveInput(degree, marks, marks[0], a, c)
