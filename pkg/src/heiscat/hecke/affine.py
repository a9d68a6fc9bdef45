"""The degenerate affine Hecke algebra H_n in PBW normal form.

H_n is generated by s_1, ..., s_{n-1} (a copy of the symmetric group) and
commuting elements x_1, ..., x_n, subject to

    s_i^2 = 1,      s_i s_j = s_j s_i (|i-j| > 1),
    s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1},
    s_j x_i = x_i s_j (i != j, j+1),      s_i x_i = x_{i+1} s_i - 1.

Every element is a unique rational combination of PBW monomials x^a * w
with a an exponent vector and w a permutation.  The straightening move is
the two-variable commutation

    s_i x_i^p x_{i+1}^q = x_i^q x_{i+1}^p s_i
                          + sum_{c+e=q-1} x_i^c x_{i+1}^{e+p}
                          - sum_{u+v=p-1} x_i^u x_{i+1}^{v+q},

iterated along a reduced word when a whole permutation must pass a
monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from ..perm import Perm

Scalar = Union[int, Fraction]
# PBW key: (exponent vector, one-line permutation images)
Key = tuple[tuple[int, ...], tuple[int, ...]]


class AffineElement:
    """A rational combination of PBW monomials x^a w of fixed rank."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Key, Scalar] | None = None):
        self.rank = rank
        clean: dict[Key, Fraction] = {}
        if terms:
            for (exps, images), coeff in terms.items():
                c = Fraction(coeff)
                if not c:
                    continue
                if len(exps) != rank or len(images) != rank:
                    raise ValueError(f"key rank mismatch in rank-{rank} element")
                clean[(tuple(exps), tuple(images))] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "AffineElement":
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> "AffineElement":
        return cls.monomial(rank, (0,) * rank)

    @classmethod
    def monomial(
        cls, rank: int, exps: tuple[int, ...], w: Perm | None = None, coeff: Scalar = 1
    ) -> "AffineElement":
        images = (w or Perm.identity(rank)).images
        return cls(rank, {(tuple(exps), images): coeff})

    @classmethod
    def x(cls, rank: int, i: int, power: int = 1) -> "AffineElement":
        if not 1 <= i <= rank:
            raise ValueError(f"x_{i} out of range for rank {rank}")
        exps = [0] * rank
        exps[i - 1] = power
        return cls.monomial(rank, tuple(exps))

    @classmethod
    def s(cls, rank: int, i: int) -> "AffineElement":
        return cls.monomial(rank, (0,) * rank, Perm.transposition(rank, i))

    @classmethod
    def scalar(cls, rank: int, c: Scalar) -> "AffineElement":
        return cls.monomial(rank, (0,) * rank, coeff=c)

    # -- additive structure -------------------------------------------------

    def _check(self, other: "AffineElement"):
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "AffineElement") -> "AffineElement":
        self._check(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            new = terms.get(key, Fraction(0)) + coeff
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
        return AffineElement(self.rank, terms)

    def __neg__(self) -> "AffineElement":
        return AffineElement(self.rank, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "AffineElement") -> "AffineElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "AffineElement":
        c = Fraction(c)
        if not c:
            return AffineElement.zero(self.rank)
        return AffineElement(self.rank, {k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AffineElement)
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.rank, tuple(sorted(self.terms.items()))))

    # -- multiplication -----------------------------------------------------

    def left_mul_x(self, i: int, power: int = 1) -> "AffineElement":
        """x_i^power * self (exponent bump, no straightening needed)."""
        terms: dict[Key, Fraction] = {}
        for (exps, images), coeff in self.terms.items():
            new = list(exps)
            new[i - 1] += power
            terms[(tuple(new), images)] = coeff
        return AffineElement(self.rank, terms)

    def left_mul_s(self, i: int) -> "AffineElement":
        """s_i * self, straightened back into PBW form."""
        n = self.rank
        if not 1 <= i < n:
            raise ValueError(f"s_{i} out of range for rank {n}")
        out: dict[Key, Fraction] = {}

        def add(exps: list[int], images: tuple[int, ...], coeff: Fraction):
            key = (tuple(exps), images)
            new = out.get(key, Fraction(0)) + coeff
            if new:
                out[key] = new
            else:
                out.pop(key, None)

        si = Perm.transposition(n, i)
        for (exps, images), coeff in self.terms.items():
            p, q = exps[i - 1], exps[i]
            swapped = (si * Perm(images)).images
            # leading term: x_i and x_{i+1} exponents swap, s_i enters w
            lead = list(exps)
            lead[i - 1], lead[i] = q, p
            add(lead, swapped, coeff)
            # corrections without the crossing
            for c in range(q):  # c + e = q - 1
                e = q - 1 - c
                corr = list(exps)
                corr[i - 1], corr[i] = c, e + p
                add(corr, images, coeff)
            for u in range(p):  # u + v = p - 1
                v = p - 1 - u
                corr = list(exps)
                corr[i - 1], corr[i] = u, v + q
                add(corr, images, -coeff)
        return AffineElement(self.rank, out)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        self._check(other)
        result = AffineElement.zero(self.rank)
        for (exps, images), coeff in self.terms.items():
            part = other
            for i in reversed(Perm(images).reduced_word()):
                part = part.left_mul_s(i)
            part = part.scale(coeff)
            for pos, e in enumerate(exps, start=1):
                if e:
                    part = part.left_mul_x(pos, e)
            result = result + part
        return result

    # -- views ---------------------------------------------------------------

    def coefficient(self, exps: tuple[int, ...], w: Perm) -> Fraction:
        return self.terms.get((tuple(exps), w.images), Fraction(0))

    def max_degree(self) -> int:
        """Largest total x-degree over the support (-1 for zero)."""
        if not self.terms:
            return -1
        return max(sum(exps) for (exps, _), _ in self.terms.items())

    def embed(self, rank: int) -> "AffineElement":
        """Include H_n into H_rank for rank >= n."""
        if rank < self.rank:
            raise ValueError("cannot embed into smaller rank")
        pad = (0,) * (rank - self.rank)
        terms = {
            (exps + pad, Perm(images).extend(rank).images): c
            for (exps, images), c in self.terms.items()
        }
        return AffineElement(rank, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (exps, images), coeff in sorted(self.terms.items()):
            factors = [
                f"x{i}" if e == 1 else f"x{i}^{e}"
                for i, e in enumerate(exps, start=1)
                if e
            ]
            w = Perm(images)
            if not w.is_identity():
                factors.extend(f"s{i}" for i in w.reduced_word())
            body = "*".join(factors) or "1"
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"AffineElement({self.rank}, {str(self)})"


def normal_form(
    word: Iterable[tuple[str, int] | Scalar], rank: int
) -> AffineElement:
    """PBW normal form of a product of generators, read left to right.

    ``word`` entries are ('s', i), ('x', i), or bare scalars.

    >>> str(normal_form([('s', 1), ('x', 1)], 2))
    '-1 + x2*s1'
    """
    result = AffineElement.one(rank)
    for item in reversed(list(word)):
        if isinstance(item, (int, Fraction)):
            result = result.scale(item)
            continue
        kind, idx = item
        if kind == "x":
            if not 1 <= idx <= rank:
                raise ValueError(f"x{idx} out of range for rank {rank}")
            result = result.left_mul_x(idx)
        elif kind == "s":
            if not 1 <= idx < rank:
                raise ValueError(f"s{idx} out of range for rank {rank}")
            result = result.left_mul_s(idx)
        else:
            raise ValueError(f"unknown generator kind {kind!r}")
    return result
