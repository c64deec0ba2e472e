"""Finite generalized power series over the rationals and their valuation.

A series ``sum q_e t^e`` has rational exponents and rational coefficients.
Series produced by inversion are truncated: they carry a precision bound
``B`` and nothing is known about terms with exponent ``>= B``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InvalidInput, PrecisionLoss, ZeroInverse

INF = math.inf

Rational = Union[int, Fraction]
Valuation = Union[Fraction, float]  # float only for INF


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, strings and ``[num, den]`` pairs to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise InvalidInput(f"not a rational number: {x!r}") from exc
    if isinstance(x, (list, tuple)) and len(x) == 2:
        den = as_fraction(x[1])
        if den == 0:
            raise InvalidInput("zero denominator")
        return as_fraction(x[0]) / den
    raise InvalidInput(f"not a rational number: {x!r}")


def rational_json(q: Fraction) -> list[str]:
    return [str(q.numerator), str(q.denominator)]


class PuiseuxSeries:
    """Immutable element of the valued field ``K``.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with strictly
    increasing exponents and nonzero coefficients.  ``precision`` is ``None``
    for exact series.
    """

    __slots__ = ("terms", "precision", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), precision=None):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e, c = as_fraction(e), as_fraction(c)
            acc[e] = acc.get(e, Fraction(0)) + c
        prec = None if precision is None else as_fraction(precision)
        self.terms = tuple(
            (e, acc[e])
            for e in sorted(acc)
            if acc[e] != 0 and (prec is None or e < prec)
        )
        self.precision = prec
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def _raw(cls, terms: tuple, precision) -> "PuiseuxSeries":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.precision = precision
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Rational) -> "PuiseuxSeries":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Rational, e: Rational) -> "PuiseuxSeries":
        return cls({e: c})

    @classmethod
    def coerce(cls, x) -> "PuiseuxSeries":
        if isinstance(x, PuiseuxSeries):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls.constant(x)
        if isinstance(x, str):
            return parse_series(x)
        return series_from_json(x)

    # queries --------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return not self.terms and self.precision is None

    def valuation(self) -> Valuation:
        return ps_valuation(self)

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            if self.precision is None:
                return Fraction(0)
            raise PrecisionLoss("leading term of a truncated series is unknown")
        return self.terms[0][1]

    def _lower_bound(self) -> Valuation:
        # valuation if known, else the precision bound (series is O(t^B))
        if self.terms:
            return self.terms[0][0]
        return INF if self.precision is None else self.precision

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries._raw(tuple((e, -c) for e, c in self.terms), self.precision)

    def __add__(self, other) -> "PuiseuxSeries":
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return _add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "PuiseuxSeries":
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return _add(self, -other)

    def __rsub__(self, other) -> "PuiseuxSeries":
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return _add(other, -self)

    def __mul__(self, other) -> "PuiseuxSeries":
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PuiseuxSeries":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = PuiseuxSeries.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self, order: Rational = 8) -> "PuiseuxSeries":
        return ps_inverse(self, order)

    # comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.terms == other.terms and self.precision == other.precision

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.terms, self.precision))
        return self._hash

    def __repr__(self) -> str:
        return f"PuiseuxSeries({format_series(self)!r})"

    def __str__(self) -> str:
        return format_series(self)

    def to_json(self):
        return series_to_json(self)


def _coerce_operand(x):
    if isinstance(x, PuiseuxSeries):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return PuiseuxSeries.constant(x)
    return NotImplemented


def _min_prec(*bounds):
    known = [b for b in bounds if b is not None and b != INF]
    if not known:
        return None
    return min(known)


def _add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    prec = _min_prec(a.precision, b.precision)
    acc = dict(a.terms)
    for e, c in b.terms:
        acc[e] = acc.get(e, Fraction(0)) + c
    terms = tuple(
        (e, acc[e]) for e in sorted(acc) if acc[e] != 0 and (prec is None or e < prec)
    )
    return PuiseuxSeries._raw(terms, prec)


def _mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    if a.is_zero() or b.is_zero():
        return PuiseuxSeries._raw((), None)
    bounds = []
    if a.precision is not None:
        bounds.append(a.precision + b._lower_bound())
    if b.precision is not None:
        bounds.append(b.precision + a._lower_bound())
    prec = _min_prec(*bounds)
    acc: dict[Fraction, Fraction] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = ea + eb
            if prec is not None and e >= prec:
                continue
            acc[e] = acc.get(e, Fraction(0)) + ca * cb
    terms = tuple((e, acc[e]) for e in sorted(acc) if acc[e] != 0)
    return PuiseuxSeries._raw(terms, prec)


def ps_arith(op: str, a: PuiseuxSeries, b: PuiseuxSeries | None = None) -> PuiseuxSeries:
    """Dispatch ``add``, ``sub``, ``mul`` or ``neg`` by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise InvalidInput(f"unknown operation {op!r}")


def ps_valuation(a: PuiseuxSeries) -> Valuation:
    """Least exponent with nonzero coefficient; ``INF`` for exact zero.

    Raises PrecisionLoss if ``a`` is truncated and all its known terms
    cancelled, since the leading exponent is then unresolved.
    """
    if a.terms:
        return a.terms[0][0]
    if a.precision is None:
        return INF
    raise PrecisionLoss(
        f"valuation unresolved: series is O(t^{a.precision}) with no known terms"
    )


def ps_inverse(a: PuiseuxSeries, order: Rational = 8) -> PuiseuxSeries:
    """Inverse of ``a`` to relative order ``order``.

    The result ``b`` satisfies ``nu(b) = -nu(a)`` exactly and ``a*b == 1``
    up to terms of exponent ``>= order``.  Monomials invert exactly.
    """
    order = as_fraction(order)
    if a.is_zero():
        raise ZeroInverse("cannot invert the zero series")
    e0 = ps_valuation(a)
    c0 = a.terms[0][1]
    rel_prec = order
    if a.precision is not None:
        rel_prec = min(order, a.precision - e0)
    if len(a.terms) == 1 and a.precision is None:
        return PuiseuxSeries._raw(((-e0, 1 / c0),), None)
    if rel_prec <= 0:
        raise PrecisionLoss("requested order exceeds what the input determines")
    # a = c0 t^e0 (1 + u) with u of positive valuation
    u_terms = tuple((e - e0, c / c0) for e, c in a.terms[1:])
    u = PuiseuxSeries._raw(u_terms, None if a.precision is None else a.precision - e0)
    neg_u = -u
    total = {Fraction(0): Fraction(1)}
    power = PuiseuxSeries._raw(((Fraction(0), Fraction(1)),), None)
    while True:
        power = _truncate(power * neg_u, rel_prec)
        if not power.terms:
            break
        for e, c in power.terms:
            total[e] = total.get(e, Fraction(0)) + c
    inv_c0 = 1 / c0
    terms = tuple(
        (e - e0, total[e] * inv_c0) for e in sorted(total) if total[e] != 0 and e < rel_prec
    )
    return PuiseuxSeries._raw(terms, rel_prec - e0)


def _truncate(a: PuiseuxSeries, bound: Fraction) -> PuiseuxSeries:
    terms = tuple((e, c) for e, c in a.terms if e < bound)
    return PuiseuxSeries._raw(terms, None)


def divide(a: PuiseuxSeries, b: PuiseuxSeries, order: Rational = 8) -> PuiseuxSeries:
    """``a / b`` with ``b`` inverted to relative order ``order``."""
    return a * ps_inverse(b, order)


def val_min(*vals: Valuation) -> Valuation:
    return min(vals) if vals else INF


# text format ----------------------------------------------------------------

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?
        (?:(?P<t>t)(?:\s*\^\s*(?P<exp>\(?\s*-?\d+(?:/\d+)?\s*\)?|-?\d+(?:/\d+)?))?)?
        \s*""",
    re.VERBOSE,
)


def parse_series(text: str) -> PuiseuxSeries:
    """Parse strings such as ``"t^-2 + 1"`` or ``"2 + t + 4t^3 - 1/2 t^(5/2)"``.

    A trailing ``+ O(t^B)`` sets the precision bound.
    """
    src = text.strip()
    precision = None
    m = re.search(r"(?:^|\+)\s*O\(\s*t\s*\^\s*\(?\s*(-?\d+(?:/\d+)?)\s*\)?\s*\)\s*$", src)
    if m:
        precision = Fraction(m.group(1))
        src = src[: m.start()].strip()
    if not src:
        if precision is None:
            raise InvalidInput("empty series")
        return PuiseuxSeries((), precision)
    terms: list[tuple[Fraction, Fraction]] = []
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM_RE.match(src, pos)
        if m is None or m.end() == pos or not (m.group("coef") or m.group("t")):
            raise InvalidInput(f"cannot parse series {text!r} at offset {pos}")
        if not first and m.group("sign") is None:
            raise InvalidInput(f"missing operator in series {text!r}")
        first = False
        sign = -1 if m.group("sign") == "-" else 1
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("t"):
            exp_txt = m.group("exp")
            exp = Fraction(exp_txt.strip("() ")) if exp_txt else Fraction(1)
        else:
            exp = Fraction(0)
        terms.append((exp, sign * coef))
        pos = m.end()
    return PuiseuxSeries(terms, precision)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_series(a: PuiseuxSeries) -> str:
    parts: list[str] = []
    for e, c in a.terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = _fmt_q(mag)
        else:
            coef = "" if mag == 1 else _fmt_q(mag) + "*"
            if e == 1:
                body = coef + "t"
            elif e.denominator == 1:
                body = f"{coef}t^{e.numerator}"
            else:
                body = f"{coef}t^({_fmt_q(e)})"
        parts.append((sign, body))
    if not parts:
        out = "0"
    else:
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
    if a.precision is not None:
        p = a.precision
        ptxt = str(p.numerator) if p.denominator == 1 else f"({_fmt_q(p)})"
        out = f"O(t^{ptxt})" if not parts else out + f" + O(t^{ptxt})"
    return out


# JSON -----------------------------------------------------------------------


def series_to_json(a: PuiseuxSeries):
    terms = [{"e": rational_json(e), "c": rational_json(c)} for e, c in a.terms]
    if a.precision is None:
        return terms
    return {"terms": terms, "prec": rational_json(a.precision)}


def series_from_json(obj) -> PuiseuxSeries:
    if isinstance(obj, str):
        return parse_series(obj)
    if isinstance(obj, (int, Fraction)) and not isinstance(obj, bool):
        return PuiseuxSeries.constant(obj)
    precision = None
    if isinstance(obj, dict):
        precision = obj.get("prec")
        obj = obj.get("terms", [])
    if not isinstance(obj, list):
        raise InvalidInput(f"bad series encoding: {obj!r}")
    terms = []
    last = None
    for item in obj:
        if not isinstance(item, dict) or "e" not in item or "c" not in item:
            raise InvalidInput(f"bad series term: {item!r}")
        e, c = as_fraction(item["e"]), as_fraction(item["c"])
        if last is not None and e <= last:
            raise InvalidInput("series exponents must be strictly increasing")
        if c == 0:
            raise InvalidInput("series coefficients must be nonzero")
        last = e
        terms.append((e, c))
    return PuiseuxSeries(terms, None if precision is None else as_fraction(precision))
