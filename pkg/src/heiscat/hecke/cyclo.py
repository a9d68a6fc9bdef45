"""Cyclotomic quotients H_n^lam, their trace, dual elements, and commutants.

H_n^lam = H_n / (prod_i (x_1 - i)^{lam_i}).  With d the level, the images
of the PBW monomials x^a w with all exponents below d form a basis, so
dim H_n^lam = d^n n!.  Reduction to that basis uses two rewriting moves:

  R1:  x_1^d -> -sum_j f_j x_1^j                      (the defining relation)
  R2:  x_{i+1}^a -> s_i x_i^a s_i + sum_{u+v=a-1} x_i^u x_{i+1}^v s_i

where in R2 the inner x_i^a is reduced first, which keeps every rewrite
strictly decreasing in the right-to-left exponent order.

The Frobenius trace tr_{n+1} : H_{n+1}^lam -> H_n^lam is the coefficient
of x_{n+1}^{d-1} in the expansion over the left-module basis
{s_n ... s_j x_j^a}; it is computed through a cached change-of-basis
matrix per rank.  The elements y_{n,k} built from alternating sums of
trace determinants are dual to the dot powers under <u, v> = tr(u v).

All per-rank caches live on the CycloAlgebra context object; elements and
operations are pure.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian

from .. import linalg
from ..errors import InputError, ResourceError
from ..perm import Perm, all_perms
from ..weight import Weight
from .affine import AffineElement, Key, Scalar


def right_mul_perm(el: AffineElement, w: Perm) -> AffineElement:
    """el * w for a bare permutation w (key rewrite only)."""
    terms = {
        (exps, (Perm(images) * w).images): c for (exps, images), c in el.terms.items()
    }
    return AffineElement(el.rank, terms)


class CycloElement:
    """An element of H_n^lam, held in reduced PBW form.

    Thin wrapper around an AffineElement whose exponents are all < d,
    tagged with its weight so mixed-weight arithmetic fails loudly.
    """

    __slots__ = ("weight", "el")

    def __init__(self, weight: Weight, el: AffineElement):
        d = weight.d
        for (exps, _), _c in el.terms.items():
            if any(e >= d for e in exps):
                raise ValueError("element is not reduced below the level")
        self.weight = weight
        self.el = el

    @property
    def rank(self) -> int:
        return self.el.rank

    def _check(self, other: "CycloElement"):
        if self.weight != other.weight:
            raise InputError("weight mismatch")
        if self.rank != other.rank:
            raise InputError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "CycloElement") -> "CycloElement":
        self._check(other)
        return CycloElement(self.weight, self.el + other.el)

    def __sub__(self, other: "CycloElement") -> "CycloElement":
        self._check(other)
        return CycloElement(self.weight, self.el - other.el)

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.weight, -self.el)

    def scale(self, c: Scalar) -> "CycloElement":
        return CycloElement(self.weight, self.el.scale(c))

    def __mul__(self, other: "CycloElement") -> "CycloElement":
        self._check(other)
        return CycloElement(self.weight, cyclo_reduce(self.el * other.el, self.weight))

    def is_zero(self) -> bool:
        return self.el.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CycloElement)
            and self.weight == other.weight
            and self.el == other.el
        )

    def __hash__(self) -> int:
        return hash((self.weight, self.el))

    def __str__(self) -> str:
        return str(self.el)

    def __repr__(self) -> str:
        return f"CycloElement[{self.weight}]({self.el})"


def cyclo_reduce(el: AffineElement, weight: Weight) -> AffineElement:
    """Rewrite an affine element so every exponent is below the level d.

    Pure function of (element, weight); an algebra homomorphism on normal
    forms (exercised by the test suite, not assumed).
    """
    d = weight.d
    f = weight.cyclo_coeffs
    n = el.rank
    done: dict[Key, Fraction] = {}
    work = list(el.terms.items())
    while work:
        (exps, images), coeff = work.pop()
        pos = next((i for i, e in enumerate(exps) if e >= d), None)
        if pos is None:
            new = done.get((exps, images), Fraction(0)) + coeff
            if new:
                done[(exps, images)] = new
            else:
                done.pop((exps, images), None)
            continue
        if pos == 0:
            # R1 at x_1
            rest = list(exps)
            rest[0] -= d
            for j, fj in enumerate(f):
                if fj:
                    new_exps = rest[:]
                    new_exps[0] += j
                    work.append(((tuple(new_exps), images), -fj * coeff))
            continue
        # R2 at x_{pos+1}; i = pos is the 1-indexed generator index
        i = pos
        a = exps[pos]
        rest = list(exps)
        rest[pos] = 0
        inner = cyclo_reduce(AffineElement.x(n, i, a), weight)
        replacement = right_mul_perm(inner, Perm.transposition(n, i)).left_mul_s(i)
        for u in range(a):  # u + v = a - 1
            v = a - 1 - u
            mono = [0] * n
            mono[i - 1], mono[i] = u, v
            replacement = replacement + AffineElement.monomial(
                n, tuple(mono), Perm.transposition(n, i)
            )
        replacement = right_mul_perm(replacement, Perm(images))
        for p, e in enumerate(rest, start=1):
            if e:
                replacement = replacement.left_mul_x(p, e)
        for key, c in replacement.terms.items():
            work.append((key, c * coeff))
    return AffineElement(n, done)


class CycloAlgebra:
    """Context object for one weight: caches bases, traces, and duals.

    All caches are confined to this object; distinct instances never share
    state, so concurrent use of separate contexts is safe.
    """

    def __init__(self, weight: Weight, max_dim: int = 2000):
        self.weight = weight
        self.d = weight.d
        self.max_dim = max_dim
        self._basis: dict[int, list[Key]] = {}
        self._basis_index: dict[int, dict[Key, int]] = {}
        self._trace_inv: dict[int, tuple[list[tuple[Key, int, int]], linalg.Matrix]] = {}
        self._dual_cache: dict[tuple[int, int], CycloElement] = {}

    # -- element constructors ---------------------------------------------

    def reduce(self, el: AffineElement) -> CycloElement:
        return CycloElement(self.weight, cyclo_reduce(el, self.weight))

    def zero(self, rank: int) -> CycloElement:
        return CycloElement(self.weight, AffineElement.zero(rank))

    def one(self, rank: int) -> CycloElement:
        return CycloElement(self.weight, AffineElement.one(rank))

    def x(self, rank: int, i: int, power: int = 1) -> CycloElement:
        return self.reduce(AffineElement.x(rank, i, power))

    def s(self, rank: int, i: int) -> CycloElement:
        return self.reduce(AffineElement.s(rank, i))

    def scalar(self, rank: int, c: Scalar) -> CycloElement:
        return CycloElement(self.weight, AffineElement.scalar(rank, c))

    def from_affine(self, el: AffineElement) -> CycloElement:
        return self.reduce(el)

    # -- bases and vectors --------------------------------------------------

    def dim(self, rank: int) -> int:
        out = 1
        for m in range(1, rank + 1):
            out *= self.d * m
        return out

    def basis(self, rank: int) -> list[Key]:
        if rank not in self._basis:
            if self.dim(rank) > self.max_dim:
                raise ResourceError(
                    f"dim H_{rank} = {self.dim(rank)} exceeds cap {self.max_dim}"
                )
            keys = [
                (exps, w.images)
                for exps in _cartesian(range(self.d), repeat=rank)
                for w in all_perms(rank)
            ]
            keys.sort()
            self._basis[rank] = keys
            self._basis_index[rank] = {k: i for i, k in enumerate(keys)}
        return self._basis[rank]

    def to_vector(self, z: CycloElement) -> list[Fraction]:
        index = self._basis_index_for(z.rank)
        vec = [Fraction(0)] * len(index)
        for key, c in z.el.terms.items():
            vec[index[key]] = c
        return vec

    def from_vector(self, rank: int, vec) -> CycloElement:
        keys = self.basis(rank)
        terms = {keys[i]: c for i, c in enumerate(vec) if c}
        return CycloElement(self.weight, AffineElement(rank, terms))

    def _basis_index_for(self, rank: int) -> dict[Key, int]:
        self.basis(rank)
        return self._basis_index[rank]

    # -- the Frobenius trace ---------------------------------------------------

    def left_module_basis_element(self, rank: int, j: int, a: int) -> AffineElement:
        """s_{rank-1} ... s_j x_j^a inside H_rank (j = rank means bare x_rank^a)."""
        part = AffineElement.x(rank, j, a) if a else AffineElement.one(rank)
        for t in range(j, rank):
            part = part.left_mul_s(t)
        return part

    def _trace_data(self, rank: int):
        """Change of basis of H_rank over the left-module basis at top rank.

        Columns are indexed by (h, j, a) with h a PBW key of H_{rank-1}
        and the triple meaning h * s_{rank-1} ... s_j x_j^a.
        """
        if rank in self._trace_inv:
            return self._trace_inv[rank]
        n = rank - 1
        big_keys = self.basis(rank)
        big_index = self._basis_index[rank]
        cols: list[tuple[Key, int, int]] = []
        matrix_cols: list[list[Fraction]] = []
        for h_key in self.basis(n):
            h = AffineElement(n, {h_key: 1}).embed(rank)
            for j in range(1, rank + 1):
                for a in range(self.d):
                    prod = cyclo_reduce(
                        h * self.left_module_basis_element(rank, j, a), self.weight
                    )
                    col = [Fraction(0)] * len(big_keys)
                    for key, c in prod.terms.items():
                        col[big_index[key]] = c
                    cols.append((h_key, j, a))
                    matrix_cols.append(col)
        mat = [[matrix_cols[c][r] for c in range(len(cols))] for r in range(len(big_keys))]
        inv = linalg.invert(mat)
        self._trace_inv[rank] = (cols, inv)
        return self._trace_inv[rank]

    def trace_down(self, z: CycloElement) -> CycloElement:
        """tr_{n+1} : H_{n+1}^lam -> H_n^lam, projection onto the top
        x_{n+1}^{d-1} component of the left-module expansion."""
        rank = z.rank
        if rank < 1:
            raise InputError("trace_down needs rank at least 1")
        cols, inv = self._trace_data(rank)
        vec = self.to_vector(z)
        coords = [
            sum(inv[r][c] * vec[c] for c in range(len(vec)) if vec[c])
            for r in range(len(vec))
        ]
        n = rank - 1
        terms: dict[Key, Fraction] = {}
        for idx, (h_key, j, a) in enumerate(cols):
            if j == rank and a == self.d - 1 and coords[idx]:
                terms[h_key] = coords[idx]
        return CycloElement(self.weight, AffineElement(n, terms))

    def pairing(self, u: CycloElement, v: CycloElement) -> CycloElement:
        """<u, v> = tr(u v), an H_{n-1}^lam-valued form on H_n^lam."""
        return self.trace_down(u * v)

    # -- dual dots ---------------------------------------------------------------

    def trace_power(self, rank: int, power: int) -> CycloElement:
        """tr_rank(x_rank^power) in H_{rank-1}^lam."""
        return self.trace_down(self.x(rank, rank, power))

    def dual_dot_element(self, n: int, k: int) -> CycloElement:
        """y_{n,k}: the left dual of x_n^k under the trace pairing.

        y_{n,k} = sum_{t=k}^{d-1} (-1)^{d-1-t} x_n^{t-k}
                  det( tr_n(x_n^{d+j-i}) )_{i,j=1..d-1-t}
        with the empty determinant equal to one.
        """
        if n < 1:
            raise InputError("dual dots need rank at least 1")
        if not 0 <= k <= self.d - 1:
            raise InputError(f"dual dot index {k} outside 0..{self.d - 1}")
        cached = self._dual_cache.get((n, k))
        if cached is not None:
            return cached
        result = self.zero(n)
        for t in range(k, self.d):
            size = self.d - 1 - t
            det = self._trace_minor_det(n, size)
            sign = -1 if (self.d - 1 - t) % 2 else 1
            term = self.x(n, n, t - k) * CycloElement(self.weight, det.el.embed(n))
            result = result + term.scale(sign)
        self._dual_cache[(n, k)] = result
        return result

    def _trace_minor_det(self, n: int, size: int) -> CycloElement:
        """det( tr_n(x_n^{d+j-i}) )_{i,j=1..size} in H_{n-1}^lam (central)."""
        if size == 0:
            return self.one(n - 1)
        entries = {}
        for i in range(1, size + 1):
            for j in range(1, size + 1):
                entries[(i, j)] = self.trace_power(n, self.d + j - i)
        det = self.zero(n - 1)
        for w in all_perms(size):
            term = self.one(n - 1)
            for i in range(1, size + 1):
                term = term * entries[(i, w(i))]
            det = det + term.scale(w.sign())
        return det

    # -- commutants -------------------------------------------------------------

    def centralizer_basis(self, n: int, k: int) -> list[CycloElement]:
        """Exact basis of the centralizer of H_n^lam inside H_{n+k}^lam."""
        rank = n + k
        dim = self.dim(rank)
        if dim > self.max_dim:
            raise ResourceError(f"dim {dim} exceeds cap {self.max_dim}")
        keys = self.basis(rank)
        gens: list[CycloElement] = [self.x(rank, i) for i in range(1, n + 1)]
        gens += [self.s(rank, i) for i in range(1, n)]
        if not gens:
            return [self.from_vector(rank, self._unit_vec(dim, i)) for i in range(dim)]
        rows: list[list[Fraction]] = []
        for g in gens:
            # row block: coordinates of g*B - B*g for each basis element B
            images = []
            for key in keys:
                b = CycloElement(self.weight, AffineElement(rank, {key: 1}))
                images.append(self.to_vector(g * b - b * g))
            for coord in range(dim):
                rows.append([images[col][coord] for col in range(dim)])
        return [self.from_vector(rank, v) for v in linalg.nullspace(rows)]

    @staticmethod
    def _unit_vec(dim: int, i: int) -> list[Fraction]:
        vec = [Fraction(0)] * dim
        vec[i] = Fraction(1)
        return vec

    def subalgebra_closure(self, rank: int, gens: list[CycloElement]) -> list[list[Fraction]]:
        """Row basis (rref) of the unital subalgebra generated by ``gens``."""
        span: list[list[Fraction]] = [self.to_vector(self.one(rank))]
        for g in gens:
            span.append(self.to_vector(g))
        span = [r for r in linalg.rref(span)[0] if any(r)]
        while True:
            new_rows = list(span)
            for row_a in span:
                a = self.from_vector(rank, row_a)
                for g in gens:
                    new_rows.append(self.to_vector(a * g))
            reduced = [r for r in linalg.rref(new_rows)[0] if any(r)]
            if len(reduced) == len(span):
                return reduced
            span = reduced
