"""The action functor: diagrams as exact matrices on induction/restriction
bimodule chains over the cyclotomic quotients.

A sign sequence, read right to left from a base rank n, assigns region
labels that go up across up strands and down across down strands; the
associated bimodule is the tensor product of induction factors (r+1)_r
(one per '+', with free right-module basis {x_j^a s_j ... s_r}) and
restriction factors across which nothing but the acting rank changes.
Negative labels give the zero space.

A basis vector is a choice of slot (j, a) for every '+' position together
with a PBW basis key of H_n, nested left to right.  Every generator token
becomes an explicit rational matrix in this basis:

  dots        multiplication by x on the adjacent factor,
  crossings   multiplication by s / the s_r-insertion a (x) a' -> a s_r a'
              and its one-sided inverse s_r -> 1 (x) 1, x_{r+1}^j -> 0,
  right cup/cap   unit and multiplication of the Frobenius extension,
  left cup/cap    the trace and its dual element sum over x_i^k s_i...s_r
                  tensor s_r ... s_i y_{i,k}.

Bubble coefficients act by right multiplication by the central elements
tr_{r+1}(x_{r+1}^{d+k}) on the rightmost factor.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian

from .. import linalg
from ..errors import InputError, ResourceError
from ..hecke.affine import AffineElement
from ..hecke.cyclo import CycloAlgebra, CycloElement, right_mul_perm
from ..perm import Perm
from ..piring import PiPoly
from ..weight import Weight
from ..diagrams.basis import Morphism
from ..diagrams.engine import print_diagram
from ..diagrams.tokens import Event, SignSeq, check_signs

Slot = tuple[int, int]  # (j, a): the right-basis element x_j^a s_j ... s_r


def region_labels(signs: SignSeq, n: int) -> list[int]:
    """labels[i] = region left of strand i; labels[len] = n (rightmost)."""
    labels = [0] * (len(signs) + 1)
    labels[len(signs)] = n
    for i in range(len(signs) - 1, -1, -1):
        labels[i] = labels[i + 1] + (1 if signs[i] == "+" else -1)
    return labels


class BimoduleSpace:
    """Explicitly based model of the bimodule attached to (signs, n)."""

    def __init__(self, ctx: "ActionContext", signs: SignSeq, n: int):
        self.ctx = ctx
        self.signs = tuple(signs)
        self.n = n
        self.labels = region_labels(self.signs, n)
        self.is_zero = min(self.labels) < 0
        # '+' positions left to right with their base rank r (factor (r+1)_r)
        self.plus_positions = [i for i, s in enumerate(self.signs) if s == "+"]
        self.plus_bases = [self.labels[i + 1] for i in self.plus_positions]
        if self.is_zero:
            self.basis: list[tuple] = []
            self.index: dict[tuple, int] = {}
            return
        slot_choices = [ctx.slots(r) for r in self.plus_bases]
        hkeys = ctx.alg.basis(n)
        self.basis = [
            tuple(slots) + (h,) for slots in _cartesian(*slot_choices) for h in hkeys
        ]
        if len(self.basis) > ctx.max_dim:
            raise ResourceError(
                f"bimodule dimension {len(self.basis)} exceeds cap {ctx.max_dim}"
            )
        self.index = {b: i for i, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def label_strings(self) -> list[str]:
        out = []
        for b in self.basis:
            parts = [f"x{j}^{a}s..s" for (j, a) in b[:-1]]
            h = AffineElement(self.n, {b[-1]: 1})
            parts.append(str(h))
            out.append(" (x) ".join(parts))
        return out


class LinearMap:
    """Sparse exact matrix between two bimodule spaces (columns by source)."""

    __slots__ = ("src", "tgt", "cols")

    def __init__(self, src: BimoduleSpace, tgt: BimoduleSpace, cols=None):
        self.src = src
        self.tgt = tgt
        self.cols: dict[int, dict[int, Fraction]] = cols or {}

    @classmethod
    def zero(cls, src, tgt) -> "LinearMap":
        return cls(src, tgt)

    @classmethod
    def identity(cls, space) -> "LinearMap":
        return cls(space, space, {i: {i: Fraction(1)} for i in range(space.dim)})

    def set_entry(self, col: int, row: int, value: Fraction):
        if value:
            self.cols.setdefault(col, {})[row] = value

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        if other.tgt.basis != self.src.basis:
            raise InputError("map composition mismatch")
        out = LinearMap(other.src, self.tgt)
        for col, mid in other.cols.items():
            acc: dict[int, Fraction] = {}
            for m, c in mid.items():
                for r, v in self.cols.get(m, {}).items():
                    acc[r] = acc.get(r, Fraction(0)) + c * v
            acc = {r: v for r, v in acc.items() if v}
            if acc:
                out.cols[col] = acc
        return out

    def add(self, other: "LinearMap", scale: Fraction = Fraction(1)) -> "LinearMap":
        out = LinearMap(self.src, self.tgt, {c: dict(m) for c, m in self.cols.items()})
        for col, colmap in other.cols.items():
            acc = out.cols.setdefault(col, {})
            for r, v in colmap.items():
                nv = acc.get(r, Fraction(0)) + scale * v
                if nv:
                    acc[r] = nv
                else:
                    acc.pop(r, None)
            if not acc:
                out.cols.pop(col, None)
        return out

    def scale(self, c: Fraction) -> "LinearMap":
        if not c:
            return LinearMap(self.src, self.tgt)
        return LinearMap(
            self.src, self.tgt,
            {col: {r: v * c for r, v in m.items()} for col, m in self.cols.items()},
        )

    def apply(self, col: int) -> dict[int, Fraction]:
        return dict(self.cols.get(col, {}))

    def is_zero(self) -> bool:
        return not any(self.cols.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearMap)
            and self.src.basis == other.src.basis
            and self.tgt.basis == other.tgt.basis
            and self._clean() == other._clean()
        )

    def _clean(self):
        return {
            c: {r: v for r, v in m.items() if v}
            for c, m in self.cols.items()
            if any(m.values())
        }

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.src.dim for _ in range(self.tgt.dim)]
        for c, m in self.cols.items():
            for r, v in m.items():
                out[r][c] = v
        return out

    def content_key(self):
        return tuple(sorted((c, r, v) for c, m in self.cols.items() for r, v in m.items()))


class ActionContext:
    """Per-weight caches for the functor: algebra, straightening, duals."""

    def __init__(self, weight: Weight, alg: CycloAlgebra | None = None, max_dim: int = 2000):
        self.weight = weight
        self.d = weight.d
        self.alg = alg or CycloAlgebra(weight, max_dim=max_dim)
        self.max_dim = max_dim
        self._slots: dict[int, list[Slot]] = {}
        self._slot_elements: dict[tuple[int, Slot], AffineElement] = {}
        self._straighten: dict[int, dict] = {}
        self._trace_slot: dict[tuple[int, Slot], CycloElement] = {}
        self._eta_left: dict[int, list[tuple[Slot, CycloElement]]] = {}
        self._spaces: dict[tuple[SignSeq, int], BimoduleSpace] = {}
        self._bubble_central: dict[tuple[int, int], CycloElement] = {}

    # -- slot combinatorics ---------------------------------------------------

    def slots(self, r: int) -> list[Slot]:
        """Right-module basis indices of (r+1)_r: (j, a), 1<=j<=r+1, a<d."""
        if r not in self._slots:
            self._slots[r] = [(j, a) for j in range(1, r + 2) for a in range(self.d)]
        return self._slots[r]

    def slot_element(self, r: int, slot: Slot) -> AffineElement:
        """x_j^a s_j ... s_r as an element of H_{r+1}."""
        key = (r, slot)
        if key not in self._slot_elements:
            j, a = slot
            w = Perm.identity(r + 1)
            for t in range(j, r + 1):
                w = w * Perm.transposition(r + 1, t)
            el = AffineElement.x(r + 1, j, a) if a else AffineElement.one(r + 1)
            self._slot_elements[key] = right_mul_perm(el, w)
        return self._slot_elements[key]

    def straighten(self, r: int):
        """H_{r+1} -> free right module over H_r: PBW key -> [(slot, hkey, coeff)]."""
        if r not in self._straighten:
            alg = self.alg
            big = alg.basis(r + 1)
            big_index = {k: i for i, k in enumerate(big)}
            cols = []
            headers = []
            for slot in self.slots(r):
                b = self.slot_element(r, slot)
                for hkey in alg.basis(r):
                    h = AffineElement(r, {hkey: 1}).embed(r + 1)
                    prod = alg.reduce(b * h)
                    vec = [Fraction(0)] * len(big)
                    for k, c in prod.el.terms.items():
                        vec[big_index[k]] = c
                    cols.append(vec)
                    headers.append((slot, hkey))
            mat = [[cols[c][row] for c in range(len(cols))] for row in range(len(big))]
            inv = linalg.invert(mat)
            table = {}
            for row_idx, key in enumerate(big):
                expansion = []
                for c in range(len(cols)):
                    v = inv[c][row_idx]
                    if v:
                        expansion.append((headers[c][0], headers[c][1], v))
                table[key] = expansion
            self._straighten[r] = table
        return self._straighten[r]

    def expand_in_slots(self, r: int, z: CycloElement):
        """z in H_{r+1} as sum of slot (x) H_r terms: [(slot, hkey, coeff)]."""
        table = self.straighten(r)
        acc: dict[tuple[Slot, tuple], Fraction] = {}
        for key, c in z.el.terms.items():
            for slot, hkey, v in table[key]:
                k2 = (slot, hkey)
                acc[k2] = acc.get(k2, Fraction(0)) + c * v
        return [(slot, hkey, v) for (slot, hkey), v in acc.items() if v]

    def trace_slot(self, r: int, slot: Slot) -> CycloElement:
        """tr_{r+1}(x_j^a s_j ... s_r) in H_r."""
        key = (r, slot)
        if key not in self._trace_slot:
            el = self.alg.reduce(self.slot_element(r, slot))
            self._trace_slot[key] = self.alg.trace_down(el)
        return self._trace_slot[key]

    def eta_left(self, r: int) -> list[tuple[Slot, CycloElement]]:
        """Left-adjunction unit data at base r: pairs (slot in X_{r-1},
        s_{r-1} ... s_j y_{j,k} in H_r)."""
        if r not in self._eta_left:
            out = []
            for j in range(1, r + 1):
                for k in range(self.d):
                    y = self.alg.dual_dot_element(j, k).el.embed(r)
                    for t in range(j, r):
                        y = y.left_mul_s(t)
                    out.append(((j, k), self.alg.reduce(y)))
            self._eta_left[r] = out
        return self._eta_left[r]

    def bubble_central(self, n: int, k: int) -> CycloElement:
        """tr_{n+1}(x_{n+1}^{d+k}): the central element a ccw circle with
        d+k dots acts by."""
        key = (n, k)
        if key not in self._bubble_central:
            z = self.alg.reduce(AffineElement.x(n + 1, n + 1, self.d + k))
            self._bubble_central[key] = self.alg.trace_down(z)
        return self._bubble_central[key]

    def space(self, signs: SignSeq, n: int) -> BimoduleSpace:
        key = (tuple(signs), n)
        if key not in self._spaces:
            self._spaces[key] = BimoduleSpace(self, signs, n)
        return self._spaces[key]

    # -- recursive left action -------------------------------------------------

    def left_mul(self, space: BimoduleSpace, level: int, h: CycloElement, tail: tuple):
        """h (in H_{labels[level]}) acting on the partial vector ``tail``
        (slots for '+' positions >= level, then the H_n key).

        Returns {tail': coeff}.
        """
        labels = space.labels
        signs = space.signs
        # find the next '+' at or after `level`
        i = level
        while i < len(signs) and signs[i] == "-":
            i += 1
        if i == len(signs):
            target = self.alg.reduce(h.el.embed(space.n) if h.rank < space.n else h.el)
            hkey = tail[-1]
            prod = CycloElement(self.weight, target.el) * CycloElement(
                self.weight, AffineElement(space.n, {hkey: 1})
            )
            return {(key,): c for key, c in prod.el.terms.items()}
        r = labels[i + 1]
        # embed h from H_{labels[level]} into H_{r+1}
        el = h.el.embed(r + 1) if h.rank < r + 1 else h.el
        slot = tail[0]
        z = self.alg.reduce(el * self.slot_element(r, slot))
        out: dict[tuple, Fraction] = {}
        plus_seen = space.plus_positions.index(i)
        rest = tail[1:]
        for slot2, hkey2, v in self.expand_in_slots(r, z):
            sub = self.left_mul(
                space, i + 1, CycloElement(self.weight, AffineElement(r, {hkey2: 1})), rest
            )
            for t2, c2 in sub.items():
                key = (slot2,) + t2
                nv = out.get(key, Fraction(0)) + v * c2
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return out

    def tail_of(self, space: BimoduleSpace, level: int, vec: tuple) -> tuple:
        """The part of a basis tuple belonging to levels >= level."""
        skip = sum(1 for p in space.plus_positions if p < level)
        return vec[skip:]

    def glue(self, space: BimoduleSpace, level: int, vec: tuple, tail: tuple) -> tuple:
        skip = sum(1 for p in space.plus_positions if p < level)
        return vec[:skip] + tail


# ---------------------------------------------------------------------------
# elementary maps and evaluation


def _event_cod(signs: SignSeq, ev: Event) -> SignSeq:
    return check_signs(signs, [ev])


def elementary_map(ctx: ActionContext, signs: SignSeq, n: int, ev: Event) -> LinearMap:
    src = ctx.space(signs, n)
    tgt = ctx.space(_event_cod(signs, ev), n)
    out = LinearMap(src, tgt)
    if src.is_zero or tgt.is_zero:
        return out
    kind, p = ev[0], ev[1]
    labels = src.labels
    weight = ctx.weight

    def emit(col_vec, dist: dict[tuple, Fraction], scale: Fraction = Fraction(1)):
        col = src.index[col_vec]
        for tvec, c in dist.items():
            out.set_entry(col, tgt.index[tvec], c * scale)

    if kind == "dot":
        k = ev[2]
        if signs[p] == "+":
            r = labels[p + 1]
            pi = src.plus_positions.index(p)
            for vec in src.basis:
                slot = vec[pi]
                z = ctx.alg.reduce(
                    ctx.slot_element(r, slot) * AffineElement.x(r + 1, r + 1, k)
                )
                dist: dict[tuple, Fraction] = {}
                for slot2, hkey2, v in ctx.expand_in_slots(r, z):
                    h2 = CycloElement(weight, AffineElement(r, {hkey2: 1}))
                    sub = ctx.left_mul(src, p + 1, h2, ctx.tail_of(src, p + 1, vec))
                    for t2, c2 in sub.items():
                        key = vec[:pi] + (slot2,) + t2
                        dist[key] = dist.get(key, Fraction(0)) + v * c2
                emit(vec, dist)
        else:
            r = labels[p + 1]
            x = ctx.alg.x(r, r, k)
            for vec in src.basis:
                sub = ctx.left_mul(src, p + 1, x, ctx.tail_of(src, p + 1, vec))
                emit(vec, {ctx.glue(src, p + 1, vec, t2): c for t2, c in sub.items()})
        return out

    if kind == "cross":
        pair = (signs[p], signs[p + 1])
        if pair == ("+", "+"):
            r = labels[p + 2]
            pi = src.plus_positions.index(p)
            s_top = AffineElement.s(r + 2, r + 1)
            for vec in src.basis:
                b1, b2 = vec[pi], vec[pi + 1]
                z = ctx.alg.reduce(
                    ctx.slot_element(r + 1, b1)
                    * ctx.slot_element(r, b2).embed(r + 2)
                    * s_top
                )
                dist: dict[tuple, Fraction] = {}
                for slot1, h1key, v1 in ctx.expand_in_slots(r + 1, z):
                    h1 = CycloElement(weight, AffineElement(r + 1, {h1key: 1}))
                    for slot2, h2key, v2 in ctx.expand_in_slots(r, h1):
                        h2 = CycloElement(weight, AffineElement(r, {h2key: 1}))
                        sub = ctx.left_mul(src, p + 2, h2, ctx.tail_of(src, p + 2, vec))
                        for t2, c2 in sub.items():
                            key = vec[:pi] + (slot1, slot2) + t2
                            dist[key] = dist.get(key, Fraction(0)) + v1 * v2 * c2
                emit(vec, dist)
            return out
        if pair == ("-", "-"):
            r = labels[p + 2]
            s = ctx.alg.s(r, r - 1)
            for vec in src.basis:
                sub = ctx.left_mul(src, p + 2, s, ctx.tail_of(src, p + 2, vec))
                emit(vec, {ctx.glue(src, p + 2, vec, t2): c for t2, c in sub.items()})
            return out
        if pair == ("+", "-"):
            r = labels[p + 2]
            pi = src.plus_positions.index(p)
            s_r = AffineElement.s(r + 1, r)
            for vec in src.basis:
                b = vec[pi]
                z = ctx.alg.reduce(ctx.slot_element(r - 1, b).embed(r + 1) * s_r)
                dist: dict[tuple, Fraction] = {}
                for slot2, hkey2, v in ctx.expand_in_slots(r, z):
                    h2 = CycloElement(weight, AffineElement(r, {hkey2: 1}))
                    sub = ctx.left_mul(src, p + 2, h2, ctx.tail_of(src, p + 2, vec))
                    for t2, c2 in sub.items():
                        key = vec[:pi] + (slot2,) + t2
                        dist[key] = dist.get(key, Fraction(0)) + v * c2
                emit(vec, dist)
            return out
        # ('-', '+'): s_r -> 1 (x) 1, x_{r+1}^j -> 0
        r = labels[p + 2]
        pi = src.plus_positions.index(p + 1)
        for vec in src.basis:
            j, a = vec[pi]
            if j == r + 1:
                continue
            emit(vec, {vec[:pi] + ((j, a),) + vec[pi + 1 :]: Fraction(1)})
        return out

    if kind == "cap":
        orient = ev[2]
        if orient == "cw":
            rr = labels[p + 2]
            pi = src.plus_positions.index(p)
            for vec in src.basis:
                b = CycloElement(
                    weight, ctx.alg.reduce(ctx.slot_element(rr - 1, vec[pi])).el
                )
                sub = ctx.left_mul(src, p + 2, b, ctx.tail_of(src, p + 2, vec))
                emit(vec, {vec[:pi] + t2: c for t2, c in sub.items()})
            return out
        r = labels[p + 2]
        pi = src.plus_positions.index(p + 1)
        for vec in src.basis:
            tr = ctx.trace_slot(r, vec[pi])
            if tr.is_zero():
                continue
            sub = ctx.left_mul(src, p + 2, tr, ctx.tail_of(src, p + 2, vec))
            emit(vec, {vec[:pi] + t2: c for t2, c in sub.items()})
        return out

    # cup
    orient = ev[2]
    r = labels[p]
    if orient == "ccw":
        new_pi = tgt.plus_positions.index(p + 1)
        for vec in src.basis:
            key = vec[:new_pi] + ((r + 1, 0),) + vec[new_pi:]
            emit(vec, {key: Fraction(1)})
        return out
    # cw: the left unit over the dual-element sum
    new_pi = tgt.plus_positions.index(p)
    for vec in src.basis:
        dist: dict[tuple, Fraction] = {}
        for slot, yel in ctx.eta_left(r):
            sub = ctx.left_mul(src, p, yel, ctx.tail_of(src, p, vec))
            for t2, c2 in sub.items():
                key = vec[:new_pi] + (slot,) + t2
                dist[key] = dist.get(key, Fraction(0)) + c2
        emit(vec, dist)
    return out


def evaluate_events(ctx: ActionContext, signs: SignSeq, events: list[Event], n: int) -> LinearMap:
    current = tuple(signs)
    total = LinearMap.identity(ctx.space(current, n))
    for ev in events:
        step = elementary_map(ctx, current, n, ev)
        total = step.compose(total)
        current = _event_cod(current, ev)
    return total


def central_coefficient_map(ctx: ActionContext, space: BimoduleSpace, coeff: PiPoly) -> LinearMap:
    """Right multiplication by the coefficient's bubble value on the
    rightmost H_n factor."""
    out = LinearMap(space, space)
    if space.is_zero:
        return out
    n = space.n
    for mono, q in coeff.terms.items():
        z = ctx.alg.one(n)
        for var, e in mono:
            for _ in range(e):
                z = z * ctx.bubble_central(n, var)
        for vec in space.basis:
            h = CycloElement(ctx.weight, AffineElement(n, {vec[-1]: 1}))
            prod = h * z
            col = space.index[vec]
            for hkey2, c in prod.el.terms.items():
                out.set_entry(col, space.index[vec[:-1] + (hkey2,)], c * q)
    return out


def evaluate_morphism(ctx: ActionContext, m: Morphism, n: int) -> LinearMap:
    src = ctx.space(m.dom, n)
    tgt = ctx.space(m.cod, n)
    total = LinearMap.zero(src, tgt)
    for bd, coeff in m.terms.items():
        mat = evaluate_events(ctx, m.dom, print_diagram(bd), n)
        cmap = central_coefficient_map(ctx, src, coeff)
        total = total.add(mat.compose(cmap))
    return total
