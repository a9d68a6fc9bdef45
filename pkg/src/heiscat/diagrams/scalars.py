"""Structure scalars of the category: bubble values and the c_s family.

For a weight of level d, a counterclockwise circle with t dots evaluates to

    0             t < d-1,
    1             t = d-1,
    e0 = sum i*lam_i   t = d,
    y_{t-d}       t > d  (a generator of Pi),

and c_0 = 1, c_s = (-1)^s det( ccw-circle(d+j-i) )_{i,j=1..s} for
1 <= s <= d.  Dual dots expand through the c_s:

    dot^{j,dual} = sum_{i=j}^{d-1} c_{d-1-i} * dot^{i-j}.

Clockwise circles are eliminated recursively against counterclockwise
ones; the recursion comes from closing the dot-slide relation and is
cached per weight.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InputError
from ..piring import PiPoly
from ..weight import Weight


class StructureScalars:
    """Per-weight cache of bubble values, c_s, and cw-circle expansions.

    An optional perturbation hook shifts the value of the d-dot circle;
    it exists solely for negative-control tests that must break a relation.
    """

    def __init__(self, weight: Weight, e0_shift: Fraction | int = 0):
        self.weight = weight
        self.d = weight.d
        self.e0 = weight.e0 + Fraction(e0_shift)
        self._c: dict[int, PiPoly] = {}
        self._cw: dict[int, PiPoly] = {}

    def ccw_value(self, dots: int) -> PiPoly:
        """Value of a counterclockwise circle with ``dots`` dots."""
        if dots < 0:
            raise InputError("negative dot count")
        if dots < self.d - 1:
            return PiPoly.zero()
        if dots == self.d - 1:
            return PiPoly.one()
        if dots == self.d:
            return PiPoly.scalar(self.e0)
        return PiPoly.var(dots - self.d)

    def c(self, s: int) -> PiPoly:
        """The scalar c_s = (-1)^s det(ccw(d+j-i))_{i,j<=s}, 0 <= s <= d."""
        if not 0 <= s <= self.d:
            raise InputError(f"c_{s} undefined for level {self.d}")
        if s not in self._c:
            if s == 0:
                val = PiPoly.one()
            else:
                val = _determinant(
                    [
                        [self.ccw_value(self.d + j - i) for j in range(1, s + 1)]
                        for i in range(1, s + 1)
                    ]
                )
                if s % 2:
                    val = -val
            self._c[s] = val
        return self._c[s]

    def dual_dot_expansion(self, j: int) -> list[tuple[int, PiPoly]]:
        """(plain dot count, coefficient) pairs expanding the dual dot j."""
        if not 0 <= j <= self.d - 1:
            raise InputError(f"dual dot {j} outside 0..{self.d - 1}")
        return [(i - j, self.c(self.d - 1 - i)) for i in range(j, self.d)]

    def cw_value(self, dots: int) -> PiPoly:
        """A clockwise circle with ``dots`` dots as an element of Pi.

        From closing the dot slide:  for s >= 0,
        cw_s = ccw(2d+s) + sum_{j<d} c_{d-j} ccw(d+s+j)
               - e0*cw_{s-1} - sum_{k=1}^{s-1} y_k cw_{s-1-k}.
        """
        if dots < 0:
            raise InputError("negative dot count")
        if dots not in self._cw:
            val = self.ccw_value(2 * self.d + dots)
            for j in range(self.d):
                val = val + self.c(self.d - j) * self.ccw_value(self.d + dots + j)
            if dots >= 1:
                val = val - PiPoly.scalar(self.e0) * self.cw_value(dots - 1)
            for k in range(1, dots):
                val = val - PiPoly.var(k) * self.cw_value(dots - 1 - k)
            self._cw[dots] = val
        return self._cw[dots]

    def right_curl_expansion(self) -> list[tuple[int, PiPoly]]:
        """(dot count, coefficient) pairs with right curl = dot^d + sum c_{d-j} dot^j."""
        out = [(self.d, PiPoly.one())]
        for j in range(self.d):
            cj = self.c(self.d - j)
            if cj:
                out.append((j, cj))
        return out


def _determinant(rows: list[list[PiPoly]]) -> PiPoly:
    n = len(rows)
    if n == 0:
        return PiPoly.one()
    if n == 1:
        return rows[0][0]
    total = PiPoly.zero()
    for j in range(n):
        if not rows[0][j]:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
