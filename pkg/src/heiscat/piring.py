"""Sparse polynomial ring Pi = Q[y1, y2, y3, ...] with exact rational coefficients.

Pi is the ring of closed-diagram values: the variable y_k stands for a
counterclockwise circle carrying d+k dots, where d is the level of the
ambient weight.  Only finitely many variables occur in any element, so a
polynomial is stored as a dict mapping a monomial to its nonzero rational
coefficient.  A monomial is a tuple of (variable_index, exponent) pairs,
sorted by variable index, with all exponents positive; the empty tuple is
the constant monomial.

Elements are immutable in spirit: all operations return fresh objects and
never mutate their arguments.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple[tuple[int, int], ...]
Scalar = Union[int, Fraction]

ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[int, int] = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def mono_degree(mono: Monomial) -> int:
    """Filtration degree of a bubble monomial: y_k contributes k + 1.

    A counterclockwise circle with d+k dots has degree (d+k) + (1-d) = k+1
    (the dots contribute one each, the single left cap contributes 1-d).
    """
    return sum((var + 1) * e for var, e in mono)


class PiPoly:
    """An element of Q[y1, y2, ...], stored sparsely.

    >>> y1 = PiPoly.var(1)
    >>> print((y1 + 2) * y1)
    y1^2 + 2*y1
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    clean[mono] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "PiPoly":
        return cls()

    @classmethod
    def one(cls) -> "PiPoly":
        return cls({ONE_MONO: 1})

    @classmethod
    def scalar(cls, c: Scalar) -> "PiPoly":
        return cls({ONE_MONO: Fraction(c)})

    @classmethod
    def var(cls, k: int) -> "PiPoly":
        if k < 1:
            raise ValueError(f"bubble variables are indexed from 1, got {k}")
        return cls({((k, 1),): 1})

    # -- ring structure --------------------------------------------------

    @staticmethod
    def _coerce(other) -> "PiPoly":
        if isinstance(other, PiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return PiPoly.scalar(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "PiPoly":
        other = PiPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = terms.get(mono, Fraction(0)) + coeff
            if new:
                terms[mono] = new
            else:
                terms.pop(mono, None)
        return PiPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> "PiPoly":
        return PiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "PiPoly":
        other = PiPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PiPoly":
        return PiPoly._coerce(other) - self

    def __mul__(self, other) -> "PiPoly":
        other = PiPoly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                new = terms.get(mono, Fraction(0)) + c1 * c2
                if new:
                    terms[mono] = new
                else:
                    terms.pop(mono, None)
        return PiPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PiPoly":
        if n < 0:
            raise ValueError("negative powers are not defined in Pi")
        result = PiPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates and views ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return not self.terms or set(self.terms) == {ONE_MONO}

    def constant(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def degree(self) -> int:
        """Max filtration degree over monomials; 0 for scalars, -1 for zero."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def substitute(self, values: Mapping[int, "PiPoly"]) -> "PiPoly":
        """Replace each y_k by values[k]; every occurring variable must be mapped."""
        out = PiPoly.zero()
        for mono, coeff in self.terms.items():
            term = PiPoly.scalar(coeff)
            for var, e in mono:
                term = term * values[var] ** e
            out = out + term
        return out

    def variables(self) -> set[int]:
        return {var for mono in self.terms for var, _ in mono}

    # -- hashing / comparison ---------------------------------------------

    def key(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiPoly.scalar(other)
        if not isinstance(other, PiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.key())

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- formatting ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self.terms.items()):
            factors = "*".join(
                f"y{var}" if e == 1 else f"y{var}^{e}" for var, e in mono
            )
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(factors)
            elif coeff == -1:
                parts.append(f"-{factors}")
            else:
                parts.append(f"{coeff}*{factors}")
        out = " + ".join(parts).replace("+ -", "- ")
        return out

    def __repr__(self) -> str:
        return f"PiPoly({str(self)})"

    # -- (de)serialization ----------------------------------------------------

    def to_json(self) -> dict[str, str]:
        """Monomial -> coefficient map with keys like ``"y1^2*y3"`` and ``"1"``."""
        out = {}
        for mono, coeff in sorted(self.terms.items()):
            key = "*".join(f"y{var}^{e}" if e > 1 else f"y{var}" for var, e in mono)
            out[key or "1"] = str(coeff)
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "PiPoly":
        terms: dict[Monomial, Fraction] = {}
        for key, val in data.items():
            if key == "1":
                mono: Monomial = ()
            else:
                pairs = []
                for factor in key.split("*"):
                    if "^" in factor:
                        var, e = factor.split("^")
                        pairs.append((int(var[1:]), int(e)))
                    else:
                        pairs.append((int(factor[1:]), 1))
                mono = tuple(sorted(pairs))
            terms[mono] = Fraction(val)
        return cls(terms)
