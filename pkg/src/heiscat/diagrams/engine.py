"""The diagram rewriting engine: movies, the canonical router, and the sweep.

A morphism expression is flattened to a *movie*: a list of events, each a
cup, cap, crossing, or dot at an explicit position on the current wire
list.  The engine normalizes a movie to a Pi-linear combination of basis
diagrams by sweeping bottom to top while maintaining the processed part in
canonical form (a partial basis diagram whose growing ends sit on the
frontier).  Every rewrite is one of the local moves:

* crossings act on the frontier by swapping wires; dots below a fresh
  crossing climb through it, shedding the smoothing corrections of the
  dot-slide relation (sign = orientation cross product);
* a down-up double crossing on strands that already cross resolves into
  the identity minus the d dual-dotted cup-cap terms;
* a crossing whose two wires belong to one strand is a curl: the
  counterclockwise one vanishes, the clockwise one becomes dots weighted
  by the c_s scalars;
* a cap closing a single strand makes a circle, which converts clockwise
  to counterclockwise, slides to the rightmost region (shedding dotted
  corrections on the wires it passes), and lands in the coefficient;
* a cap fusing two entangled strands goes through an R2 eliminator that
  cancels double crossings pair by pair.

Correction terms re-enter the queue as fresh movies (canonical print of
the current state plus explicit events); every such movie carries strictly
fewer crossings, so the recursion terminates, with a fuel counter as the
hard backstop.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InputError, ReductionError
from ..piring import PiPoly
from .basis import BasisDiagram, End, Morphism
from .scalars import StructureScalars
from .tokens import Event, SignSeq, SliceWord, check_signs, word_to_events

# ---------------------------------------------------------------------------
# canonical printing of (partial) basis diagrams


def print_strands(dom: SignSeq, cod: SignSeq, strands) -> list[Event]:
    """Canonical movie of a basis diagram (strands: (in_end, out_end, dots)).

    Bands, bottom to top: dots at bottom out-endpoints; cap strands closed
    innermost first; through strands sorted to their top order; cup
    strands born outermost first; dots at top out-endpoints.  The routing
    realizes exactly one crossing per interleaving pair.
    """
    events: list[Event] = []
    # wires currently alive: list of (strand_index, target) where target is
    # the top position this wire must reach, or None for cap-strand legs.
    caps = []
    bottom = {}
    for idx, (in_end, out_end, dots) in enumerate(strands):
        for end, role in ((in_end, "in"), (out_end, "out")):
            if end[0] == "B":
                bottom[end[1]] = (idx, role)
        if in_end[0] == "B" and out_end[0] == "B":
            caps.append(idx)
        if out_end[0] == "B" and dots:
            events.append(("dot", out_end[1], dots))
    wires: list[tuple[int, End | None]] = []
    for pos in range(len(dom)):
        idx, _role = bottom[pos]
        in_end, out_end, _ = strands[idx]
        if in_end[0] == "B" and out_end[0] == "B":
            wires.append((idx, None))
        else:
            top = out_end if out_end[0] == "T" else in_end
            wires.append((idx, top))

    def positions_of(idx):
        return [q for q, (sid, _t) in enumerate(wires) if sid == idx]

    # close cap strands, innermost (smallest current gap) first
    remaining = set(caps)
    while remaining:
        best = min(remaining, key=lambda i: abs(positions_of(i)[0] - positions_of(i)[1]))
        u, v = positions_of(best)
        while v - u > 1:
            events.append(("cross", u))
            wires[u], wires[u + 1] = wires[u + 1], wires[u]
            u += 1
        in_end, out_end, _ = strands[best]
        orient = "cw" if in_end[1] < out_end[1] else "ccw"
        events.append(("cap", u, orient))
        del wires[u : u + 2]
        remaining.discard(best)

    # sort through strands by their top position (stable bubble sort)
    changed = True
    while changed:
        changed = False
        for q in range(len(wires) - 1):
            if wires[q][1][1] > wires[q + 1][1][1]:
                events.append(("cross", q))
                wires[q], wires[q + 1] = wires[q + 1], wires[q]
                changed = True

    # create cup strands, outermost first
    cups = [
        idx
        for idx, (in_end, out_end, _d) in enumerate(strands)
        if in_end[0] == "T" and out_end[0] == "T"
    ]
    cups.sort(key=lambda i: (min(strands[i][0][1], strands[i][1][1]),
                             -max(strands[i][0][1], strands[i][1][1])))
    for idx in cups:
        in_end, out_end, _d = strands[idx]
        left, right = sorted((in_end[1], out_end[1]))
        orient = "ccw" if in_end[1] < out_end[1] else "cw"
        q = 0
        while q < len(wires) and wires[q][1][1] < left:
            q += 1
        events.append(("cup", q, orient))
        wires[q:q] = [(idx, ("T", left)), (idx, ("T", right))]
        r = q + 1
        while r + 1 < len(wires) and wires[r + 1][1][1] < right:
            events.append(("cross", r))
            wires[r], wires[r + 1] = wires[r + 1], wires[r]
            r += 1

    assert [w[1][1] for w in wires] == sorted(w[1][1] for w in wires)
    for idx, (in_end, out_end, dots) in enumerate(strands):
        if out_end[0] == "T" and dots:
            events.append(("dot", out_end[1], dots))
    return events


def print_diagram(bd: BasisDiagram) -> list[Event]:
    events = print_strands(bd.dom, bd.cod, bd.strands)
    assert check_signs(bd.dom, events) == bd.cod
    return events


# ---------------------------------------------------------------------------
# movie simulation: wires, strands, paths


class Sim:
    """Trace a movie: wire identities, signs, strand components, paths."""

    def __init__(self, dom: SignSeq, events: list[Event]):
        self.dom = tuple(dom)
        self.events = list(events)
        self.sign: dict[int, str] = {}
        self.birth: dict[int, tuple] = {}
        self.death: dict[int, tuple] = {}
        self.info: list[tuple] = []  # per event: ('cross',p,wl,wr) etc.
        self.parent: dict[int, int] = {}
        wires: list[int] = []
        fresh = iter(range(10**9))
        for i, s in enumerate(self.dom):
            w = next(fresh)
            wires.append(w)
            self.sign[w] = s
            self.birth[w] = ("B", i)
            self.parent[w] = w
        for h, ev in enumerate(self.events):
            kind, p = ev[0], ev[1]
            if kind == "cup":
                orient = ev[2]
                wl, wr = next(fresh), next(fresh)
                sl, sr = ("-", "+") if orient == "ccw" else ("+", "-")
                self.sign[wl], self.sign[wr] = sl, sr
                self.birth[wl] = ("cup", h, 0)
                self.birth[wr] = ("cup", h, 1)
                self.parent[wl] = wl
                self.parent[wr] = wr
                self._union(wl, wr)
                wires[p:p] = [wl, wr]
                self.info.append(("cup", p, wl, wr, orient))
            elif kind == "cap":
                wl, wr = wires[p], wires[p + 1]
                want = ("-", "+") if ev[2] == "ccw" else ("+", "-")
                if (self.sign[wl], self.sign[wr]) != want:
                    raise InputError(f"cap {ev[2]} over {(self.sign[wl], self.sign[wr])}")
                self.death[wl] = ("cap", h, 0)
                self.death[wr] = ("cap", h, 1)
                self._union(wl, wr)
                del wires[p : p + 2]
                self.info.append(("cap", p, wl, wr, ev[2]))
            elif kind == "cross":
                wl, wr = wires[p], wires[p + 1]
                wires[p], wires[p + 1] = wr, wl
                self.info.append(("cross", p, wl, wr))
            else:  # dot
                self.info.append(("dot", p, wires[p], ev[2]))
        for j, w in enumerate(wires):
            self.death[w] = ("T", j)
        self.top = list(wires)

    def _find(self, w):
        while self.parent[w] != w:
            self.parent[w] = self.parent[self.parent[w]]
            w = self.parent[w]
        return w

    def _union(self, a, b):
        self.parent[self._find(a)] = self._find(b)

    def strand_of(self, w: int) -> int:
        return self._find(w)

    def wire_events(self, w: int) -> list[int]:
        """Indices of cross/dot events touching wire w, in height order."""
        out = []
        for h, rec in enumerate(self.info):
            if rec[0] == "cross" and w in (rec[2], rec[3]):
                out.append(h)
            elif rec[0] == "dot" and rec[2] == w:
                out.append(h)
        return out

    def path_from(self, w: int) -> list[tuple]:
        """Flow-ordered walk of the whole strand starting at wire w's in-side.

        Yields ('wire', wid) and ('cross', h, side) and ('turn', h, orient)
        entries; ends at the strand's out-endpoint.  ``side`` is 0 if the
        wire sits at position p below the crossing, 1 for p+1.
        """
        steps: list[tuple] = []
        wire = w
        upward = self.sign[w] == "+"
        guard = 0
        while True:
            guard += 1
            if guard > 10000:
                raise ReductionError("strand path does not terminate")
            evs = self.wire_events(wire)
            if not upward:
                evs = list(reversed(evs))
            steps.append(("wire", wire))
            for h in evs:
                rec = self.info[h]
                if rec[0] == "cross":
                    side = 0 if rec[2] == wire else 1
                    steps.append(("cross", h, side))
                    steps.append(("wire", wire))
            endpoint = self.death[wire] if upward else self.birth[wire]
            if endpoint[0] in ("B", "T"):
                steps.append(("end", endpoint))
                return steps
            kind, h, _leg = endpoint
            rec = self.info[h]
            partner = rec[3] if rec[2] == wire else rec[2]
            steps.append(("turn", h, rec[4]))
            wire = partner
            upward = self.sign[wire] == "+"


_DIRS = {  # (side, sign) -> flow direction through a crossing, in 45-degree units
    (0, "+"): 1,   # from p up to p+1: heading 45
    (0, "-"): -3,  # down-left: heading -135
    (1, "+"): 3,   # up-left: 135
    (1, "-"): -1,  # down-right: -45
}


def _heading_diff(a: int, b: int) -> int:
    """Signed difference b - a in 45-degree units, in (-4, 4)."""
    diff = (b - a + 4) % 8 - 4
    if diff == -4:
        raise ReductionError("ambiguous half-turn outside a cup/cap")
    return diff


def _turning(segments: list[tuple], d_out: int, d_in: int) -> int:
    """Total turning (in 45-degree units) of a closed loop that exits a
    crossing with heading d_out, runs through ``segments`` (('wire', sign)
    and ('turn', orient) entries), arrives with heading d_in, and closes
    with the corner back to d_out.  Must be +-8."""
    total = 0
    heading = d_out
    for seg in segments:
        if seg[0] == "wire":
            new = 2 if seg[1] == "+" else -2
            total += _heading_diff(heading, new)
            heading = new
        else:
            total += 4 if seg[1] == "ccw" else -4
            heading = 2 if heading == -2 else -2
    total += _heading_diff(heading, d_in)
    total += _heading_diff(d_in, d_out)
    if total not in (8, -8):
        raise ReductionError(f"loop turning {total * 45} degrees")
    return total


# ---------------------------------------------------------------------------
# the sweep state: a partial basis diagram with a growing frontier


class SweepState:
    """Processed part of a movie: strands with settled and frontier ends.

    Frontier ends are ('W', wire_id); dots always live at a strand's
    out-end (settled at a bottom '-' endpoint, or riding a frontier '+'
    wire).
    """

    __slots__ = ("dom", "wires", "sign", "strand_of_wire", "strands", "_next")

    def __init__(self, dom: SignSeq):
        self.dom = tuple(dom)
        self.wires: list[int] = []
        self.sign: dict[int, str] = {}
        self.strand_of_wire: dict[int, int] = {}
        # strand id -> [in_end, out_end, dots]
        self.strands: dict[int, list] = {}
        self._next = 0
        for i, s in enumerate(self.dom):
            w = self._fresh()
            self.wires.append(w)
            self.sign[w] = s
            sid = self._fresh()
            self.strand_of_wire[w] = sid
            if s == "+":
                self.strands[sid] = [("B", i), ("W", w), 0]
            else:
                self.strands[sid] = [("W", w), ("B", i), 0]

    def _fresh(self) -> int:
        self._next += 1
        return self._next

    def copy(self) -> "SweepState":
        st = SweepState.__new__(SweepState)
        st.dom = self.dom
        st.wires = list(self.wires)
        st.sign = dict(self.sign)
        st.strand_of_wire = dict(self.strand_of_wire)
        st.strands = {k: list(v) for k, v in self.strands.items()}
        st._next = self._next
        return st

    # -- geometry ----------------------------------------------------------

    def _boundary_pos(self, end) -> int:
        kind, val = end
        if kind == "B":
            return val
        return len(self.dom) + (len(self.wires) - 1 - self.wires.index(val))

    def interleave(self, sid1: int, sid2: int) -> bool:
        cycle = len(self.dom) + len(self.wires)
        a = (self._boundary_pos(self.strands[sid1][0]), self._boundary_pos(self.strands[sid1][1]))
        b = (self._boundary_pos(self.strands[sid2][0]), self._boundary_pos(self.strands[sid2][1]))
        a1, a2 = a
        inside = 0
        for x in b:
            if 0 < (x - a1) % cycle < (a2 - a1) % cycle:
                inside += 1
        return inside == 1

    def crosses_anything(self, sid: int) -> bool:
        return any(self.interleave(sid, other) for other in self.strands if other != sid)

    # -- views ----------------------------------------------------------------

    def frontier_signs(self) -> SignSeq:
        return tuple(self.sign[w] for w in self.wires)

    def as_strand_tuples(self):
        """Strands with frontier ends mapped to ('T', position)."""
        pos = {w: q for q, w in enumerate(self.wires)}
        out = []
        for in_end, out_end, dots in self.strands.values():
            a = ("T", pos[in_end[1]]) if in_end[0] == "W" else in_end
            b = ("T", pos[out_end[1]]) if out_end[0] == "W" else out_end
            out.append((a, b, dots))
        return out

    def print_events(self) -> list[Event]:
        return print_strands(self.dom, self.frontier_signs(), self.as_strand_tuples())

    def finish(self) -> BasisDiagram:
        return BasisDiagram.make(self.dom, self.frontier_signs(), self.as_strand_tuples())


# ---------------------------------------------------------------------------
# incorporation of one event into the sweep state
#
# Returns None when the state was updated in place, or a list of branches
# [(kind, factor, payload)] with kind 'state' (payload: SweepState) or
# 'movie' (payload: prefix event list, to be re-swept with the remaining
# tail appended).  An empty list kills the term.

_VEC = {(0, "+"): (1, 1), (0, "-"): (-1, -1), (1, "+"): (-1, 1), (1, "-"): (1, -1)}


def _dot_ev(p: int, k: int) -> list[Event]:
    return [("dot", p, k)] if k else []


def _loop_ev(pos: int, dots: int) -> list[Event]:
    return [("cup", pos, "ccw")] + _dot_ev(pos + 1, dots) + [("cap", pos, "ccw")]


def incorporate(state: SweepState, ev: Event, sc: StructureScalars):
    kind = ev[0]
    if kind == "cup":
        _, p, orient = ev
        wl, wr = state._fresh(), state._fresh()
        sl, sr = ("-", "+") if orient == "ccw" else ("+", "-")
        state.sign[wl], state.sign[wr] = sl, sr
        sid = state._fresh()
        state.strand_of_wire[wl] = sid
        state.strand_of_wire[wr] = sid
        if orient == "ccw":
            state.strands[sid] = [("W", wl), ("W", wr), 0]
        else:
            state.strands[sid] = [("W", wr), ("W", wl), 0]
        state.wires[p:p] = [wl, wr]
        return None
    if kind == "dot":
        _, p, k = ev
        if k == 0:
            return None
        w = state.wires[p]
        sid = state.strand_of_wire[w]
        if state.sign[w] == "+" or not state.crosses_anything(sid):
            state.strands[sid][2] += k
            return None
        return _transport(state, p, k)
    if kind == "cross":
        return _incorporate_cross(state, ev[1], sc)
    if kind == "cap":
        return _incorporate_cap(state, ev[1], ev[2], sc)
    raise InputError(f"unknown event {ev!r}")


def _incorporate_cross(state: SweepState, p: int, sc: StructureScalars):
    wl, wr = state.wires[p], state.wires[p + 1]
    sl, sr = state.sign[wl], state.sign[wr]
    sid_l, sid_r = state.strand_of_wire[wl], state.strand_of_wire[wr]

    def swapped(st: SweepState) -> SweepState:
        st.wires[p], st.wires[p + 1] = st.wires[p + 1], st.wires[p]
        return st

    if (sl, sr) in (("+", "+"), ("-", "-")):
        i = state.strands[sid_l][2] if sl == "+" else 0
        j = state.strands[sid_r][2] if sr == "+" else 0
        if i == 0 and j == 0:
            swapped(state)
            return None
        branches = [("state", 1, swapped(state.copy()))]
        for a in range(i):  # a + b = i - 1
            b = i - 1 - a
            st = state.copy()
            st.strands[sid_l][2] = b
            st.strands[sid_r][2] = a + j
            branches.append(("state", 1, st))
        for c in range(j):  # c + e = j - 1
            e = j - 1 - c
            st = state.copy()
            st.strands[sid_l][2] = e
            st.strands[sid_r][2] = i + c
            branches.append(("state", -1, st))
        return branches

    if (sl, sr) == ("+", "-"):
        # down-up crossing: up strand A exits at p, down strand B enters at p+1
        i = state.strands[sid_l][2]
        if sid_l == sid_r:
            # curl on a cw-cup shaped strand: a right curl
            pre = state.copy()
            pre.strands[sid_l][2] = 0
            base = pre.print_events()
            branches = []
            for u in range(i):
                v = i - 1 - u
                movie = base + _dot_ev(p, u) + [("cap", p, "cw"), ("cup", p, "ccw")] + _dot_ev(p + 1, v)
                branches.append(("movie", -1, movie))
            for extra, coeff in sc.right_curl_expansion():
                st = state.copy()
                nl, nr = st._fresh(), st._fresh()
                st.sign[nl], st.sign[nr] = "-", "+"
                st.strand_of_wire[nl] = sid_l
                st.strand_of_wire[nr] = sid_l
                del st.strand_of_wire[wl], st.strand_of_wire[wr]
                st.strands[sid_l] = [("W", nl), ("W", nr), i + extra]
                st.wires[p : p + 2] = [nl, nr]
                branches.append(("state", coeff, st))
            return branches
        linked = state.interleave(sid_l, sid_r)
        if i == 0 and not linked:
            swapped(state)
            return None
        branches = []
        pre = state.copy()
        pre.strands[sid_l][2] = 0
        base = pre.print_events()
        for u in range(i):
            v = i - 1 - u
            movie = base + _dot_ev(p, u) + [("cap", p, "cw"), ("cup", p, "ccw")] + _dot_ev(p + 1, v)
            branches.append(("movie", -1, movie))
        if not linked:
            branches.append(("state", 1, swapped(state.copy())))
        else:
            # the new crossing cancels against the existing one; the R2
            # eliminator replaces the pair by id minus the dual-dotted
            # cup-cap terms, after which A's dots land on the + wire at p+1
            for factor, movie in eliminate_one(pre.dom, base + [("cross", p)], sc):
                branches.append(("movie", factor, movie + _dot_ev(p + 1, i)))
        return branches

    # (sl, sr) == ('-', '+'): up-down crossing, always a free double cross
    j = state.strands[sid_r][2]
    if sid_l == sid_r:
        # left curl: zero, up to dot evacuation terms
        pre = state.copy()
        pre.strands[sid_r][2] = 0
        base = pre.print_events()
        branches = []
        for u in range(j):
            v = j - 1 - u
            movie = base + _dot_ev(p + 1, v) + [("cap", p, "ccw"), ("cup", p, "cw")] + _dot_ev(p, u)
            branches.append(("movie", 1, movie))
        return branches
    if j == 0:
        swapped(state)
        return None
    branches = [("state", 1, swapped(state.copy()))]
    pre = state.copy()
    pre.strands[sid_r][2] = 0
    base = pre.print_events()
    for u in range(j):
        v = j - 1 - u
        movie = base + _dot_ev(p + 1, v) + [("cap", p, "ccw"), ("cup", p, "cw")] + _dot_ev(p, u)
        branches.append(("movie", 1, movie))
    return branches


def _incorporate_cap(state: SweepState, p: int, orient: str, sc: StructureScalars):
    wl, wr = state.wires[p], state.wires[p + 1]
    want = ("-", "+") if orient == "ccw" else ("+", "-")
    if (state.sign[wl], state.sign[wr]) != want:
        raise InputError(f"cap {orient} over {(state.sign[wl], state.sign[wr])}")
    sid_l, sid_r = state.strand_of_wire[wl], state.strand_of_wire[wr]
    plus_sid = sid_l if orient == "cw" else sid_r
    minus_pos = p + 1 if orient == "cw" else p

    if sid_l == sid_r:
        # a closed circle is born; its dots ride the strand record
        t = state.strands[sid_l][2]
        st = state.copy()
        del st.strand_of_wire[wl], st.strand_of_wire[wr]
        del st.strands[sid_l]
        del st.wires[p : p + 2]
        return _loop_branches(st, p, t, orient, sc)

    k = state.strands[plus_sid][2]
    if k:
        pre = state.copy()
        pre.strands[plus_sid][2] = 0
        movie = pre.print_events() + [("dot", minus_pos, k), ("cap", p, orient)]
        return [("movie", 1, movie)]

    entangled = state.interleave(sid_l, sid_r) or any(
        state.interleave(t, sid_l) and state.interleave(t, sid_r)
        for t in state.strands
        if t not in (sid_l, sid_r)
    )
    if entangled:
        movie = state.print_events() + [("cap", p, orient)]
        return [("movie", f, m) for f, m in eliminate_one(state.dom, movie, sc)]

    # clean fusion
    a, b = state.strands[sid_l], state.strands[sid_r]
    if orient == "cw":
        fused = [a[0], b[1], b[2]]
    else:
        fused = [b[0], a[1], a[2]]
    del state.strands[sid_l]
    del state.strands[sid_r]
    del state.strand_of_wire[wl], state.strand_of_wire[wr]
    new_sid = state._fresh()
    state.strands[new_sid] = fused
    for end in (fused[0], fused[1]):
        if end[0] == "W":
            state.strand_of_wire[end[1]] = new_sid
    del state.wires[p : p + 2]
    return None


def _transport(state: SweepState, p: int, k: int):
    """Walk one dot from the in-end of the down strand at frontier slot p."""
    base = state.print_events()
    sim = Sim(state.dom, base)
    w_top = sim.top[p]
    path = sim.path_from(w_top)
    rest = _dot_ev(p, k - 1)
    branches = []
    for step in path:
        if step[0] == "cross":
            _, h, side = step
            rec = sim.info[h]
            q, wa, wb = rec[1], rec[2], rec[3]
            mine = wa if side == 0 else wb
            other = wb if side == 0 else wa
            dm = _VEC[(side, sim.sign[mine])]
            do = _VEC[(1 - side, sim.sign[other])]
            eps = 1 if dm[0] * do[1] - dm[1] * do[0] > 0 else -1
            sa, sb = sim.sign[wa], sim.sign[wb]
            if sa == sb:
                smooth = base[:h] + base[h + 1 :]
            else:
                capor = "cw" if (sa, sb) == ("+", "-") else "ccw"
                cupor = "ccw" if (sb, sa) == ("-", "+") else "cw"
                smooth = base[:h] + [("cap", q, capor), ("cup", q, cupor)] + base[h + 1 :]
            branches.append(("movie", eps, smooth + rest))
        elif step[0] == "end":
            endpoint = step[1]
            if endpoint[0] == "B":
                main = [("dot", endpoint[1], 1)] + base + rest
            else:
                main = base + [("dot", endpoint[1], 1)] + rest
            branches.append(("movie", 1, main))
    return branches


def _loop_branches(st: SweepState, p: int, t: int, orient: str, sc: StructureScalars):
    if orient == "cw":
        branches = []
        for mono, q in sc.cw_value(t).terms.items():
            if not mono:
                branches.append(("state", q, st.copy()))
            else:
                movie = st.print_events()
                for var, e in mono:
                    for _ in range(e):
                        movie = movie + _loop_ev(p, sc.d + var)
                branches.append(("movie", q, movie))
        return branches
    # counterclockwise
    if t <= sc.d:
        val = sc.ccw_value(t)
        if not val:
            return []
        return [("state", val, st)]
    if p >= len(st.wires):
        return [("state", PiPoly.var(t - sc.d), st)]
    w0 = st.wires[p]
    sign0 = st.sign[w0]
    tau = t - sc.d + 1
    base = st.print_events()
    branches = [("movie", 1, base + _loop_ev(p + 1, t))]
    for b in range(tau - 1):
        m = tau - 2 - b
        factor = (tau - 1 - b) if sign0 == "+" else -(tau - 1 - b)
        side_pos = p if sign0 == "+" else p + 1
        movie = base + _dot_ev(p, m) + _loop_ev(side_pos, sc.d - 1 + b)
        branches.append(("movie", factor, movie))
    return branches


# ---------------------------------------------------------------------------
# the R2 / curl eliminator on movies


def eliminate_one(dom: SignSeq, events: list[Event], sc: StructureScalars):
    """Resolve one double crossing or one curl in a movie.

    Returns [(factor, new_events)] realizing the local relation; every
    output movie has strictly fewer crossings.
    """
    sim = Sim(dom, events)
    crossings = [(h, rec) for h, rec in enumerate(sim.info) if rec[0] == "cross"]

    def touching(h1: int, h2: int, wire_set: set[int]) -> bool:
        for h in range(h1 + 1, h2):
            rec = sim.info[h]
            ws = set()
            if rec[0] in ("cup", "cap"):
                ws = {rec[2], rec[3]}
            elif rec[0] == "cross":
                ws = {rec[2], rec[3]}
            elif rec[0] == "dot":
                ws = {rec[2]}
            if ws & wire_set:
                return True
        return False

    # curls first: a crossing whose wires share a strand
    for h, rec in crossings:
        _, q, wa, wb = rec
        if sim.strand_of(wa) != sim.strand_of(wb):
            continue
        blocked, turning = _curl_geometry(sim, h)
        if blocked:
            continue
        if turning > 0:
            return []  # counterclockwise loop: a left curl, which vanishes
        surgered = events[:h] + events[h + 1 :]
        surgered = _flip_caps_over(surgered, sim, h, {wa, wb})
        out = []
        for extra, coeff in sc.right_curl_expansion():
            out.append((coeff, surgered[:h] + _dot_ev(q, extra) + surgered[h:]))
        return out

    pairs: dict[tuple[int, int], list[tuple[int, tuple]]] = {}
    for h, rec in crossings:
        key = tuple(sorted((sim.strand_of(rec[2]), sim.strand_of(rec[3]))))
        pairs.setdefault(key, []).append((h, rec))
    for key, occurrences in pairs.items():
        if len(occurrences) < 2:
            continue
        for (h1, r1), (h2, r2) in zip(occurrences, occurrences[1:]):
            if {r1[2], r1[3]} != {r2[2], r2[3]}:
                continue
            if touching(h1, h2, {r1[2], r1[3]}):
                continue
            q1 = r1[1]
            s1 = (sim.sign[r1[2]], sim.sign[r1[3]])
            deleted = events[:h1] + events[h1 + 1 : h2] + events[h2 + 1 :]
            if s1 != ("-", "+"):
                return [(PiPoly.one(), deleted)]
            out = [(PiPoly.one(), deleted)]
            for jj in range(sc.d):
                for tt in range(jj, sc.d):
                    coeff = -sc.c(sc.d - 1 - tt)
                    if not coeff:
                        continue
                    block = (
                        _dot_ev(q1 + 1, tt - jj)
                        + [("cap", q1, "ccw"), ("cup", q1, "ccw")]
                        + _dot_ev(q1 + 1, jj)
                    )
                    out.append(
                        (coeff, events[:h1] + block + events[h1 + 1 : h2] + events[h2 + 1 :])
                    )
            return out
    raise ReductionError("no resolvable double crossing", stuck=(dom, events))


def _curl_geometry(sim: Sim, h: int):
    """(blocked, turning) for the loop of the self-crossing at event h."""
    rec = sim.info[h]
    wa = rec[2]
    strand_start = None
    # find the strand's initial wire: walk from any boundary in-end
    for w in sim.sign:
        if sim.strand_of(w) != sim.strand_of(wa):
            continue
        origin = sim.birth[w] if sim.sign[w] == "+" else sim.death[w]
        if origin[0] in ("B", "T"):
            strand_start = w
            break
    if strand_start is None:
        raise ReductionError("curl on a closed component")
    path = sim.path_from(strand_start)
    hits = [i for i, step in enumerate(path) if step[0] == "cross" and step[1] == h]
    if len(hits) != 2:
        raise ReductionError("self-crossing passages not found")
    i1, i2 = hits
    segment = path[i1 + 1 : i2]
    if any(step[0] == "cross" for step in segment):
        return True, 0
    d_out = _units(_VEC[(path[i1][2], sim.sign[rec[2] if path[i1][2] == 0 else rec[3]])])
    d_in = _units(_VEC[(path[i2][2], sim.sign[rec[2] if path[i2][2] == 0 else rec[3]])])
    seg = []
    for step in segment:
        if step[0] == "wire":
            seg.append(("wire", sim.sign[step[1]]))
        elif step[0] == "turn":
            seg.append(("turn", step[2]))
    return False, _turning(seg, d_out, d_in)


def _units(vec: tuple[int, int]) -> int:
    return {(1, 1): 1, (-1, 1): 3, (-1, -1): -3, (1, -1): -1}[vec]


def _flip_caps_over(events: list[Event], sim: Sim, h: int, wire_set: set[int]) -> list[Event]:
    """After deleting the self-crossing at h, caps above it that close the
    same two wires see them in swapped positions; flip their markers."""
    out = list(events)
    for hh, rec in enumerate(sim.info):
        if hh > h and rec[0] == "cap" and {rec[2], rec[3]} == wire_set:
            idx = hh - 1  # one event was deleted below
            kind, pos, orient = out[idx]
            assert kind == "cap"
            out[idx] = ("cap", pos, "ccw" if orient == "cw" else "cw")
    return out


# ---------------------------------------------------------------------------
# the engine driver


class Engine:
    """Per-weight reduction context: scalars, fuel, and the normalize memo."""

    def __init__(self, weight, fuel: int = 10**6, scalars: StructureScalars | None = None):
        self.weight = weight
        self.scalars = scalars or StructureScalars(weight)
        self.fuel = fuel
        self._memo: dict[tuple, Morphism] = {}

    # -- normalization -------------------------------------------------------

    def normalize(self, dom: SignSeq, events: list[Event], coeff: PiPoly | None = None) -> Morphism:
        dom = tuple(dom)
        key = (dom, tuple(events))
        cached = self._memo.get(key)
        if cached is None:
            cached = self._normalize_fresh(dom, list(events))
            self._memo[key] = cached
        if coeff is None or coeff == PiPoly.one():
            return cached
        return cached.scale(coeff)

    def _normalize_fresh(self, dom: SignSeq, events: list[Event]) -> Morphism:
        cod = check_signs(dom, events)
        terms: dict[BasisDiagram, PiPoly] = {}
        stack = [(PiPoly.one(), SweepState(dom), events, 0)]
        fuel = self.fuel
        while stack:
            coeff, state, evs, idx = stack.pop()
            finished = True
            while idx < len(evs):
                fuel -= 1
                if fuel <= 0:
                    raise ReductionError("fuel exhausted", stuck=(dom, evs[idx:]))
                branches = incorporate(state, evs[idx], self.scalars)
                idx += 1
                if branches is None:
                    continue
                finished = False
                for kind, factor, payload in branches:
                    if not isinstance(factor, PiPoly):
                        factor = PiPoly.scalar(factor)
                    c2 = coeff * factor
                    if not c2:
                        continue
                    if kind == "state":
                        stack.append((c2, payload, evs, idx))
                    else:
                        stack.append((c2, SweepState(dom), payload + evs[idx:], 0))
                break
            if finished:
                bd = state.finish()
                acc = terms.get(bd, PiPoly.zero()) + coeff
                if acc:
                    terms[bd] = acc
                else:
                    terms.pop(bd, None)
        return Morphism(dom, cod, terms)

    # -- public operations --------------------------------------------------

    def reduce_word(self, word: SliceWord) -> Morphism:
        return self.normalize(word.dom, word_to_events(word))

    def reduce_events(self, dom: SignSeq, events: list[Event]) -> Morphism:
        return self.normalize(dom, events)

    def identity(self, signs: SignSeq) -> Morphism:
        return Morphism.identity(tuple(signs))

    def compose(self, f: Morphism, g: Morphism) -> Morphism:
        """f after g (g at the bottom)."""
        if f.dom != g.cod:
            raise InputError(f"cannot compose: {f.dom} below {g.cod}")
        out = Morphism.zero(g.dom, f.cod)
        for bg, cg in g.terms.items():
            ev_g = print_diagram(bg)
            for bf, cf in f.terms.items():
                part = self.normalize(g.dom, ev_g + print_diagram(bf))
                out = out + part.scale(cf * cg)
        return out

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        """Horizontal juxtaposition, f on the left."""
        dom = f.dom + g.dom
        cod = f.cod + g.cod
        out = Morphism.zero(dom, cod)
        shift = len(f.cod)
        for bf, cf in f.terms.items():
            ev_f = print_diagram(bf)
            for bg, cg in g.terms.items():
                ev_g = [_shift_event(ev, shift) for ev in print_diagram(bg)]
                for mono, q in cf.terms.items():
                    bubbles: list[Event] = []
                    for var, e in mono:
                        for _ in range(e):
                            bubbles += _loop_ev(shift, self.scalars.d + var)
                    part = self.normalize(dom, ev_f + bubbles + ev_g)
                    out = out + part.scale(cg * q)
        return out

    def apply_word(self, word: SliceWord, m: Morphism) -> Morphism:
        """Compose the slice word on top of an existing morphism."""
        if word.dom != m.cod:
            raise InputError("word domain does not match morphism codomain")
        events = word_to_events(word)
        out = Morphism.zero(m.dom, word.cod)
        for bd, c in m.terms.items():
            part = self.normalize(m.dom, print_diagram(bd) + events)
            out = out + part.scale(c)
        return out


def _shift_event(ev: Event, shift: int) -> Event:
    if ev[0] == "dot":
        return (ev[0], ev[1] + shift, ev[2])
    if ev[0] == "cross":
        return (ev[0], ev[1] + shift)
    return (ev[0], ev[1] + shift, ev[2])
