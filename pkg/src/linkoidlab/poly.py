"""Exact Laurent polynomial arithmetic over the rationals.

Two carriers are provided: :class:`LaurentPoly2` in the variables W, B and
:class:`LaurentPoly1` in W alone.  Coefficients are `fractions.Fraction`
throughout; no floating point is used anywhere.  Values are immutable and
hashable, so they can be shared freely between threads.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

Coeff = Union[int, Fraction]


class PolyParseError(ValueError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class LaurentPoly2:
    """Sparse Laurent polynomial in Z[W^±1, B^±1] with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Tuple[int, int], Coeff] | None = None):
        clean = {}
        if terms:
            for (a, b), c in terms.items():
                c = Fraction(c)
                if c:
                    clean[(int(a), int(b))] = c
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly2":
        return LaurentPoly2()

    @staticmethod
    def one() -> "LaurentPoly2":
        return LaurentPoly2({(0, 0): 1})

    @staticmethod
    def monomial(a: int, b: int, coeff: Coeff = 1) -> "LaurentPoly2":
        return LaurentPoly2({(a, b): coeff})

    @staticmethod
    def const(c: Coeff) -> "LaurentPoly2":
        return LaurentPoly2({(0, 0): c})

    # -- ring structure -----------------------------------------------

    @property
    def terms(self) -> Mapping[Tuple[int, int], Fraction]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly2) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return LaurentPoly2(out)

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        out: dict = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return LaurentPoly2(out)

    def scale(self, c: Coeff) -> "LaurentPoly2":
        c = Fraction(c)
        return LaurentPoly2({k: v * c for k, v in self._terms.items()})

    # -- the substitutions the identities need ------------------------

    def collapse(self) -> "LaurentPoly1":
        """Substitute B = W^-1: the (a, b) term lands on power a - b."""
        out: dict = {}
        for (a, b), c in self._terms.items():
            k = a - b
            out[k] = out.get(k, Fraction(0)) + c
        return LaurentPoly1(out)

    def swap_neg(self) -> "LaurentPoly2":
        """Return p(-B, -W): W and B exchanged, both negated."""
        out: dict = {}
        for (a, b), c in self._terms.items():
            sign = -1 if (a + b) % 2 else 1
            k = (b, a)
            out[k] = out.get(k, Fraction(0)) + sign * c
        return LaurentPoly2(out)

    # -- text form ------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda k: (-k[0], -k[1]))
        parts = []
        for a, b in keys:
            c = self._terms[(a, b)]
            factors = []
            if a:
                factors.append("W" if a == 1 else f"W^{a}")
            if b:
                factors.append("B" if b == 1 else f"B^{b}")
            mag = abs(c)
            if not factors or mag != 1:
                factors.insert(0, _fmt_coeff(mag))
            body = "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly2({self!s})"


class LaurentPoly1:
    """Sparse Laurent polynomial in Z[W^±1] with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Coeff] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[int(k)] = c
        self._terms = clean
        self._hash = None

    @staticmethod
    def zero() -> "LaurentPoly1":
        return LaurentPoly1()

    @staticmethod
    def one() -> "LaurentPoly1":
        return LaurentPoly1({0: 1})

    @staticmethod
    def monomial(k: int, coeff: Coeff = 1) -> "LaurentPoly1":
        return LaurentPoly1({k: coeff})

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly1) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "LaurentPoly1") -> "LaurentPoly1":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return LaurentPoly1(out)

    def __neg__(self):
        return LaurentPoly1({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentPoly1") -> "LaurentPoly1":
        out: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return LaurentPoly1(out)

    def scale(self, c: Coeff) -> "LaurentPoly1":
        c = Fraction(c)
        return LaurentPoly1({k: v * c for k, v in self._terms.items()})

    def neg_inv(self) -> "LaurentPoly1":
        """Return p(-W^-1): the power-k term gets factor (-1)^k and power -k."""
        out: dict = {}
        for k, c in self._terms.items():
            sign = -1 if k % 2 else 1
            out[-k] = out.get(-k, Fraction(0)) + sign * c
        return LaurentPoly1(out)

    def unit_equivalent(self, other: "LaurentPoly1") -> bool:
        """True if self = ±W^n * other for some integer n."""
        if not self._terms and not other._terms:
            return True
        if not self._terms or not other._terms:
            return False
        n = min(self._terms) - min(other._terms)
        for sign in (1, -1):
            cand = other.scale(sign) * LaurentPoly1.monomial(n)
            if cand == self:
                return True
        return False

    def __str__(self):
        if not self._terms:
            return "0"
        keys = sorted(self._terms, reverse=True)
        parts = []
        for k in keys:
            c = self._terms[k]
            factors = []
            if k:
                factors.append("W" if k == 1 else f"W^{k}")
            mag = abs(c)
            if not factors or mag != 1:
                factors.insert(0, _fmt_coeff(mag))
            body = "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly1({self!s})"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<plus>\+)|(?P<minus>-)|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<var>[WB])(?:\^(?P<exp>-?\d+))?|(?P<star>\*))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PolyParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup is None and not m.group().strip():
            pos = m.end()
            continue
        kind = m.lastgroup
        if kind == "exp" or kind is None:
            kind = "var"
        tokens.append((kind, m, m.start()))
        pos = m.end()
    return tokens


def parse_wb(text: str) -> LaurentPoly2:
    """Parse the canonical two-variable polynomial text form."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial", 0)
    terms: dict = {}
    i = 0
    n = len(tokens)
    first = True
    while i < n:
        sign = 1
        kind, m, p = tokens[i]
        if kind in ("plus", "minus"):
            if kind == "minus":
                sign = -1
            i += 1
            if i >= n:
                raise PolyParseError("dangling sign", p)
        elif not first:
            raise PolyParseError("expected '+' or '-' between terms", p)
        first = False
        coeff = Fraction(1)
        a = b = 0
        kind, m, p = tokens[i]
        saw_body = False
        if kind == "num":
            coeff = Fraction(m.group("num"))
            i += 1
            saw_body = True
            if i < n and tokens[i][0] == "star":
                i += 1
                if i >= n or tokens[i][0] != "var":
                    raise PolyParseError("expected variable after '*'", tokens[i - 1][2])
        while i < n and tokens[i][0] == "var":
            m = tokens[i][1]
            e = int(m.group("exp")) if m.group("exp") is not None else 1
            if m.group("var") == "W":
                a += e
            else:
                b += e
            saw_body = True
            i += 1
            if i < n and tokens[i][0] == "star":
                i += 1
                if i >= n or tokens[i][0] not in ("var", "num"):
                    raise PolyParseError("expected factor after '*'", tokens[i - 1][2])
                if tokens[i][0] == "num":
                    coeff *= Fraction(tokens[i][1].group("num"))
                    i += 1
        if not saw_body:
            raise PolyParseError("expected a term", p)
        key = (a, b)
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff
    return LaurentPoly2(terms)


def parse_w(text: str) -> LaurentPoly1:
    """Parse a one-variable polynomial; rejects any B factor."""
    p2 = parse_wb(text)
    out: dict = {}
    for (a, b), c in p2.terms.items():
        if b:
            raise PolyParseError("variable B not allowed here", 0)
        out[a] = c
    return LaurentPoly1(out)
