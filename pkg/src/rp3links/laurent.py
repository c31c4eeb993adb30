"""Sparse integer Laurent polynomials in one variable ``A``."""

from __future__ import annotations

import re
from typing import Iterable, Mapping


class LaurentPolynomial:
    """Immutable map from integer exponent to nonzero integer coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coefficient})

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        """Parse strings such as ``"A^4+A^2-1-2A^-2"``."""
        s = text.replace(" ", "").replace("A^{", "A^").replace("}", "")
        if s in ("", "0"):
            return cls()
        terms = []
        for sign, coef, var, exp in re.findall(r"([+-]?)(\d*)(A?)(?:\^(-?\d+))?", s):
            if not (coef or var):
                continue
            c = int(coef) if coef else 1
            if sign == "-":
                c = -c
            e = (int(exp) if exp else 1) if var else 0
            terms.append((e, c))
        return cls(terms)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def exponents(self) -> list[int]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        return isinstance(other, LaurentPolynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "LaurentPolynomial":
        other = _coerce(other)
        return LaurentPolynomial(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPolynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPolynomial":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentPolynomial":
        other = _coerce(other)
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("coefficient is not a unit")
            return LaurentPolynomial({-e * -k: c ** (-k)})
        result = LaurentPolynomial({0: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by ``A^k``."""
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()})

    def invert_variable(self) -> "LaurentPolynomial":
        """Substitute ``A -> A^-1``."""
        return LaurentPolynomial({-e: c for e, c in self._terms.items()})

    def evaluate(self, a: complex) -> complex:
        return sum(c * a**e for e, c in self._terms.items())

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in sorted(self._terms.items(), reverse=True)}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "LaurentPolynomial":
        return cls({int(e): c for e, c in data.items()})

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("A" if e == 1 else f"A^{e}")
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(f"{s}{b}" for s, b in out[1:])


def _coerce(x) -> LaurentPolynomial:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, int):
        return LaurentPolynomial({0: x})
    raise TypeError(f"cannot combine LaurentPolynomial with {type(x).__name__}")


ONE = LaurentPolynomial({0: 1})
A = LaurentPolynomial({1: 1})
DELTA = LaurentPolynomial({2: -1, -2: -1})
