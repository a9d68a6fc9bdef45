"""Canonical basis diagrams of the hom-spaces, and morphisms over Pi.

A basis diagram between sign sequences eps (bottom) and eps' (top) is an
oriented matching: each strand runs from an in-endpoint (a + at the bottom
or a - at the top) to an out-endpoint (a - at the bottom or a + at the
top), any two strands cross at most once (exactly when their endpoint
pairs interleave on the boundary), and each strand carries a dot count,
the dots sitting next to the out-endpoint.  Closed circles never appear:
they are absorbed into the Pi-coefficient, which lives in the rightmost
region.

A Morphism is a finitely supported map {basis diagram -> PiPoly} together
with its boundary data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb
from typing import Iterable, Mapping

from ..piring import PiPoly, mono_degree
from .tokens import SignSeq

End = tuple[str, int]  # ('B', i) or ('T', j)
Strand = tuple[End, End, int]  # (in_end, out_end, dots)


def _end_sort_key(end: End) -> tuple[int, int]:
    side, idx = end
    return (0 if side == "B" else 1, idx)


@dataclass(frozen=True)
class BasisDiagram:
    dom: SignSeq
    cod: SignSeq
    strands: tuple[Strand, ...]

    @staticmethod
    def make(dom: SignSeq, cod: SignSeq, strands: Iterable[Strand]) -> "BasisDiagram":
        canon = tuple(sorted(strands, key=lambda s: _end_sort_key(s[0])))
        diagram = BasisDiagram(tuple(dom), tuple(cod), canon)
        diagram.validate()
        return diagram

    def validate(self):
        ins = {("B", i) for i, s in enumerate(self.dom) if s == "+"}
        ins |= {("T", j) for j, s in enumerate(self.cod) if s == "-"}
        outs = {("B", i) for i, s in enumerate(self.dom) if s == "-"}
        outs |= {("T", j) for j, s in enumerate(self.cod) if s == "+"}
        seen_in = [s[0] for s in self.strands]
        seen_out = [s[1] for s in self.strands]
        if sorted(seen_in) != sorted(ins) or sorted(seen_out) != sorted(outs):
            raise ValueError("strand endpoints do not tile the boundary")
        if any(s[2] < 0 for s in self.strands):
            raise ValueError("negative dot count")

    # -- geometry -----------------------------------------------------------

    def boundary_position(self, end: End) -> int:
        """Position on the boundary cycle: bottom left-to-right, then top
        right-to-left (the disk model of the strip)."""
        side, idx = end
        if side == "B":
            return idx
        return len(self.dom) + (len(self.cod) - 1 - idx)

    def crossing_pairs(self) -> list[tuple[int, int]]:
        """Pairs of strand indices that cross (= interleave) in the minimal
        drawing."""
        cycle = len(self.dom) + len(self.cod)
        spans = []
        for s in self.strands:
            a, b = self.boundary_position(s[0]), self.boundary_position(s[1])
            spans.append((a, b))
        out = []
        for i in range(len(spans)):
            for j in range(i + 1, len(spans)):
                if _interleave(spans[i], spans[j], cycle):
                    out.append((i, j))
        return out

    def degree(self, level: int) -> int:
        """Filtration degree: dots count one, a clockwise cup counts d-1, a
        counterclockwise cap counts 1-d, everything else zero."""
        total = 0
        for (in_end, out_end, dots) in self.strands:
            total += dots
            (si, ii), (so, io) = in_end, out_end
            if si == "T" and so == "T" and ii > io:
                total += level - 1  # cw cup, in-leg right of out-leg
            if si == "B" and so == "B" and ii > io:
                total += 1 - level  # ccw cap
        return total

    def total_dots(self) -> int:
        return sum(s[2] for s in self.strands)

    def __str__(self) -> str:
        parts = [
            f"{si}{ii}->{so}{io}" + (f":{dots}" if dots else "")
            for (si, ii), (so, io), dots in self.strands
        ]
        return f"[{' '.join(parts) or 'empty'}]"


def _interleave(span_a: tuple[int, int], span_b: tuple[int, int], cycle: int) -> bool:
    a1, a2 = span_a
    inside = 0
    for x in span_b:
        # walk the open arc from a1 to a2 (cyclically)
        pos = (x - a1) % cycle
        end = (a2 - a1) % cycle
        if 0 < pos < end:
            inside += 1
    return inside == 1


def identity_diagram(signs: SignSeq) -> BasisDiagram:
    strands = []
    for i, s in enumerate(signs):
        if s == "+":
            strands.append((("B", i), ("T", i), 0))
        else:
            strands.append((("T", i), ("B", i), 0))
    return BasisDiagram.make(signs, signs, strands)


class Morphism:
    """Pi-linear combination of basis diagrams with fixed boundary."""

    __slots__ = ("dom", "cod", "terms")

    def __init__(self, dom: SignSeq, cod: SignSeq, terms: Mapping[BasisDiagram, PiPoly] | None = None):
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        clean: dict[BasisDiagram, PiPoly] = {}
        if terms:
            for bd, coeff in terms.items():
                if bd.dom != self.dom or bd.cod != self.cod:
                    raise ValueError("term boundary mismatch")
                if coeff:
                    clean[bd] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, dom: SignSeq, cod: SignSeq) -> "Morphism":
        return cls(dom, cod)

    @classmethod
    def identity(cls, signs: SignSeq) -> "Morphism":
        return cls(signs, signs, {identity_diagram(signs): PiPoly.one()})

    @classmethod
    def of_diagram(cls, bd: BasisDiagram, coeff=None) -> "Morphism":
        return cls(bd.dom, bd.cod, {bd: coeff if coeff is not None else PiPoly.one()})

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("boundary mismatch")
        terms = dict(self.terms)
        for bd, c in other.terms.items():
            acc = terms.get(bd, PiPoly.zero()) + c
            if acc:
                terms[bd] = acc
            else:
                terms.pop(bd, None)
        return Morphism(self.dom, self.cod, terms)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + other.scale(-1)

    def scale(self, c) -> "Morphism":
        if not isinstance(c, PiPoly):
            c = PiPoly.scalar(c)
        return Morphism(self.dom, self.cod, {bd: coeff * c for bd, coeff in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, tuple(sorted(((str(b), k.key()) for b, k in self.terms.items())))))

    def filtration_degree(self, level: int) -> int | None:
        """Max term degree (diagram plus coefficient), or None for zero."""
        best = None
        for bd, coeff in self.terms.items():
            base = bd.degree(level)
            for mono in coeff.terms:
                deg = base + mono_degree(mono)
                best = deg if best is None else max(best, deg)
        return best

    def map_coefficients(self, fn) -> "Morphism":
        return Morphism(
            self.dom, self.cod, {bd: fn(coeff) for bd, coeff in self.terms.items()}
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for bd, coeff in sorted(self.terms.items(), key=lambda kv: str(kv[0])):
            parts.append(f"({coeff}) {bd}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Morphism({''.join(self.dom) or '()'} -> {''.join(self.cod) or '()'}: {str(self)})"


def basis_enumerate(dom: SignSeq, cod: SignSeq, dot_budget: int) -> list[BasisDiagram]:
    """All matchings with total dots at most dot_budget.

    The count is k! * C(k + budget, k) where k is the strand count; the
    empty list when the signed contents disagree.

    >>> len(basis_enumerate(('+','+'), ('+','+'), 1))
    6
    >>> len(basis_enumerate((), ('-','+'), 2))
    3
    """
    ins = [("B", i) for i, s in enumerate(dom) if s == "+"]
    ins += [("T", j) for j, s in enumerate(cod) if s == "-"]
    outs = [("B", i) for i, s in enumerate(dom) if s == "-"]
    outs += [("T", j) for j, s in enumerate(cod) if s == "+"]
    if len(ins) != len(outs):
        return []
    k = len(ins)
    result = []
    for matching in permutations(outs):
        for dots in _compositions_at_most(dot_budget, k):
            strands = tuple(
                (ins[t], matching[t], dots[t]) for t in range(k)
            )
            result.append(BasisDiagram.make(dom, cod, strands))
    assert len(result) == _count_matchings_with_dots(k, dot_budget)
    return result


def _compositions_at_most(budget: int, k: int):
    if k == 0:
        yield ()
        return
    for first in range(budget + 1):
        for rest in _compositions_at_most(budget - first, k - 1):
            yield (first,) + rest


def _count_matchings_with_dots(k: int, budget: int) -> int:
    from math import factorial

    return factorial(k) * comb(k + budget, k)
