"""Exact arithmetic in Q[pi^(1/2), pi^(-1/2)].

Every exact probability and moment computed by this package lives in the
ring of finite sums ``sum_s q_s * pi^(s/2)`` with rational ``q_s``.  Since
pi is transcendental this is a Laurent polynomial ring in ``x = pi^(1/2)``,
so exact division is polynomial division.
"""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

__all__ = [
    "Rational",
    "PiLaurent",
    "InexactDivision",
    "gamma_half",
    "to_float",
    "to_float_flagged",
    "format_float",
]

Rational = Fraction
Number = Union[int, Fraction, "PiLaurent"]


class InexactDivision(ArithmeticError):
    """Raised when a quotient does not exist in the Laurent ring."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to an exact rational")


class PiLaurent:
    """An exact number ``sum_s q_s pi^(s/2)``.

    Instances are immutable and hashable.  Zero coefficients are never
    stored, so equality is plain equality of the coefficient maps.

    Parameters
    ----------
    terms : mapping of int to Fraction or int, optional
        Coefficient of ``pi^(s/2)`` keyed by ``s``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Union[int, Fraction]] | None = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for s, q in terms.items():
                q = _as_fraction(q)
                if q:
                    clean[int(s)] = q
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, Fraction]) -> "PiLaurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Number) -> "PiLaurent":
        if isinstance(value, PiLaurent):
            return value
        q = _as_fraction(value)
        return cls._raw({0: q} if q else {})

    @classmethod
    def monomial(cls, coeff: Union[int, Fraction], s: int) -> "PiLaurent":
        """Return ``coeff * pi^(s/2)``."""
        q = _as_fraction(coeff)
        return cls._raw({int(s): q} if q else {})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._terms))

    def coefficient(self, s: int) -> Fraction:
        return self._terms.get(s, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(s == 0 for s in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def rational(self) -> Fraction:
        """Return the value as a Fraction; raises if it involves pi."""
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms.get(0, Fraction(0))

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        try:
            other = PiLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for s, q in other._terms.items():
            r = out.get(s, 0) + q
            if r:
                out[s] = r
            else:
                out.pop(s, None)
        return PiLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return PiLaurent._raw({s: -q for s, q in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = PiLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return PiLaurent.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return PiLaurent._raw({})
            return PiLaurent._raw({s: q * other for s, q in self._terms.items()})
        if not isinstance(other, PiLaurent):
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for s1, q1 in self._terms.items():
            for s2, q2 in other._terms.items():
                s = s1 + s2
                out[s] = out.get(s, 0) + q1 * q2
        return PiLaurent._raw({s: q for s, q in out.items() if q})

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = PiLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in PiLaurent")
        if other.is_monomial():
            (s2, q2), = other._terms.items()
            return PiLaurent._raw({s - s2: q / q2 for s, q in self._terms.items()})
        return _laurent_exact_divide(self, other)

    def __rtruediv__(self, other):
        return PiLaurent.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise InexactDivision("negative power of a non-monomial")
            (s, q), = self._terms.items()
            return PiLaurent._raw({s * n: q ** n})
        result = PiLaurent.coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiLaurent.coerce(other)
        if not isinstance(other, PiLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        return to_float(self)

    # -- text / JSON ------------------------------------------------------

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"PiLaurent({self.to_text()!r})"

    def to_text(self) -> str:
        """Render in the fixed grammar ``q0 + q1*pi^(1/2) + q2*pi^(-1)``.

        Terms are ordered: ``s = 0`` first, then positive ``s`` ascending,
        then negative ``s`` descending.
        """
        if not self._terms:
            return "0"
        parts = []
        for s in sorted(self._terms, key=_text_order):
            q = self._terms[s]
            mag = abs(q)
            if s == 0:
                body = str(mag)
            elif mag == 1:
                body = _pi_power_text(s)
            else:
                body = f"{mag}*{_pi_power_text(s)}"
            if not parts:
                parts.append(body if q > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if q > 0 else f" - {body}")
        return "".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "PiLaurent":
        """Parse the output of :meth:`to_text`."""
        text = text.strip()
        if text == "0":
            return cls()
        tokens = re.findall(r"\s*([+-]?)\s*([^\s+-][^\s]*)", text.replace(" - ", " -").replace(" + ", " +"))
        if not tokens:
            raise ValueError(f"cannot parse exact number {text!r}")
        out: Dict[int, Fraction] = {}
        for sign, body in tokens:
            m = _TERM_RE.fullmatch(body)
            if m is None:
                raise ValueError(f"cannot parse term {body!r} in {text!r}")
            coeff, exp = m.group("coeff"), m.group("exp")
            q = Fraction(coeff) if coeff else Fraction(1)
            s = 0 if exp is None else int(Fraction(exp) * 2)
            if sign == "-":
                q = -q
            out[s] = out.get(s, 0) + q
        return cls(out)

    def to_json_obj(self) -> dict:
        return {"terms": {str(s): str(q) for s, q in sorted(self._terms.items())}}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "PiLaurent":
        return cls({int(s): Fraction(q) for s, q in obj["terms"].items()})


_TERM_RE = re.compile(
    r"(?P<coeff>\d+(?:/\d+)?)?(?:\*?pi\^\((?P<exp>-?\d+(?:/2)?)\))?"
)


def _text_order(s: int):
    return (s != 0, s < 0, abs(s))


def _pi_power_text(s: int) -> str:
    exp = str(s // 2) if s % 2 == 0 else f"{s}/2"
    return f"pi^({exp})"


def _laurent_exact_divide(a: PiLaurent, b: PiLaurent) -> PiLaurent:
    # shift both to ordinary polynomials in x = pi^(1/2) with nonzero constant term
    if a.is_zero():
        return PiLaurent()
    sa, sb = min(a._terms), min(b._terms)
    num = {s - sa: q for s, q in a._terms.items()}
    den = {s - sb: q for s, q in b._terms.items()}
    dn = max(den)
    lead = den[dn]
    quot: Dict[int, Fraction] = {}
    while num and max(num) >= dn:
        top = max(num)
        c = num[top] / lead
        quot[top - dn] = c
        for s, q in den.items():
            key = s + top - dn
            r = num.get(key, 0) - c * q
            if r:
                num[key] = r
            else:
                num.pop(key, None)
    if num:
        raise InexactDivision(f"({a}) / ({b}) is not exact in Q[pi^(+-1/2)]")
    shift = sa - sb
    return PiLaurent._raw({s + shift: q for s, q in quot.items()})


def gamma_half(two_x: int) -> PiLaurent:
    """Return Gamma(two_x / 2) exactly.

    >>> gamma_half(7).to_text()
    '15/8*pi^(1/2)'
    """
    if not isinstance(two_x, int) or two_x < 1:
        raise ValueError(f"gamma_half needs a positive integer 2x, got {two_x!r}")
    return _gamma_half_cached(two_x)


_GAMMA_CACHE: Dict[int, PiLaurent] = {}


def _gamma_half_cached(two_x: int) -> PiLaurent:
    hit = _GAMMA_CACHE.get(two_x)
    if hit is not None:
        return hit
    if two_x % 2 == 0:
        val = PiLaurent.monomial(math.factorial(two_x // 2 - 1), 0)
    else:
        n = (two_x - 1) // 2
        # Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
        val = PiLaurent.monomial(
            Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), 1
        )
    _GAMMA_CACHE[two_x] = val
    return val


def to_float_flagged(a: Number) -> Tuple[float, bool]:
    """Evaluate to a double; the flag is True when a term overflowed."""
    a = PiLaurent.coerce(a)
    vals = []
    overflow = False
    for s, q in a._terms.items():
        try:
            qf = float(q)
        except OverflowError:
            qf = math.inf if q > 0 else -math.inf
            overflow = True
        vals.append(qf * math.pi ** (s / 2))
    if overflow:
        return sum(vals), True
    return math.fsum(vals), False


def to_float(a: Number) -> float:
    """Evaluate ``a`` at double precision (infinity on overflow)."""
    return to_float_flagged(a)[0]


def fraction_sum(values: Iterable[PiLaurent]) -> PiLaurent:
    total = PiLaurent()
    for v in values:
        total = total + v
    return total


def format_float(x: float, digits: int = 10) -> str:
    """Fixed ``digits`` significant digits, trailing zeros kept."""
    if not math.isfinite(x) or x == 0:
        return str(x).replace("0.0", "0")
    return f"{x:#.{digits}g}".rstrip(".")
