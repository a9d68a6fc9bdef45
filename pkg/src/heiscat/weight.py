"""Dominant integral weights and the data derived from them.

A weight is a finite multiset of integer residues: lam = sum_i lam_i w_i
with lam_i the multiplicity of residue i.  It determines

* the level d = sum_i lam_i,
* the cyclotomic polynomial prod_i (x - i)^{lam_i} = x^d + sum_j f_j x^j,
  whose coefficients f_0, ..., f_{d-1} drive the cyclotomic reduction, and
* the scalar e0 = sum_i i*lam_i, the value of a counterclockwise circle
  with d dots.

The ground ring is fixed to the exact rationals throughout the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Weight:
    """Residue multiplicities of a nonzero dominant weight.

    ``entries`` is a tuple of (residue, multiplicity) pairs with distinct
    residues, sorted by residue, all multiplicities positive.

    >>> w = Weight.parse("0:1,1:1")
    >>> w.d, w.e0, w.cyclo_coeffs
    (2, Fraction(1, 1), (Fraction(0, 1), Fraction(-1, 1)))
    """

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("weight must be nonzero")
        residues = [r for r, _ in self.entries]
        if len(set(residues)) != len(residues):
            raise ValueError(f"duplicate residues in weight: {residues}")
        if list(residues) != sorted(residues):
            object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        if any(m <= 0 for _, m in self.entries):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "Weight":
        return cls(tuple(pairs))

    @classmethod
    def fundamental(cls, residue: int = 0) -> "Weight":
        return cls(((residue, 1),))

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Parse the ``residue:multiplicity[,...]`` grammar, e.g. ``"0:2,1:1"``."""
        entries = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                res, mult = chunk.split(":")
                entries.append((int(res.strip()), int(mult.strip())))
            except ValueError as exc:
                raise ValueError(f"bad weight component {chunk!r}") from exc
        if not entries:
            raise ValueError(f"empty weight text {text!r}")
        return cls(tuple(entries))

    @property
    def d(self) -> int:
        """The level: sum of multiplicities."""
        return sum(m for _, m in self.entries)

    @property
    def e0(self) -> Fraction:
        """Value of the counterclockwise circle with d dots: sum_i i*lam_i."""
        return Fraction(sum(r * m for r, m in self.entries))

    @property
    def cyclo_coeffs(self) -> tuple[Fraction, ...]:
        """(f_0, ..., f_{d-1}) with prod_i (x-i)^{lam_i} = x^d + sum f_j x^j."""
        poly = [Fraction(1)]
        for res, mult in self.entries:
            for _ in range(mult):
                # multiply by (x - res)
                shifted = [Fraction(0)] + poly
                poly = [a - res * b for a, b in zip(shifted, poly + [Fraction(0)])]
        assert len(poly) == self.d + 1 and poly[-1] == 1
        return tuple(poly[:-1])

    def shifted(self, j: int) -> "Weight":
        """The weight mu with mu_i = lam_{i-j} (all residues moved up by j)."""
        return Weight(tuple((r + j, m) for r, m in self.entries))

    def multiplicity(self, residue: int) -> int:
        return dict(self.entries).get(residue, 0)

    def __str__(self) -> str:
        return ",".join(f"{r}:{m}" for r, m in self.entries)
