"""Generator tokens, sign sequences, and the slice-word DSL.

A diagram expression is a stack of slices read bottom to top, separated by
``;``.  Each slice is a left-to-right list of tokens separated by ``*``:

    U, D          identity strands (up / down)
    PU, PD        a dot on an up / down strand; PU^k for k dots
    XUU XDD XDU XUD   the four crossings
    CAPCW  : (+,-) -> ()      CAPCCW : (-,+) -> ()
    CUPCCW : () -> (-,+)      CUPCW  : () -> (+,-)

Orientations at cups and caps follow the flow: the ccw cap takes its input
on the + (right) leg and exits on the - (left) leg, matching a
counterclockwise circle CAPCCW o CUPCCW.

Parsing produces a SliceWord whose slices type-check; a slice word maps
onto a flat list of movie events for the rewriting engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

SignSeq = tuple[str, ...]  # entries '+' or '-'

# token name -> (domain fragment, codomain fragment)
TOKEN_SIGNATURES: dict[str, tuple[SignSeq, SignSeq]] = {
    "U": (("+",), ("+",)),
    "D": (("-",), ("-",)),
    "PU": (("+",), ("+",)),
    "PD": (("-",), ("-",)),
    "XUU": (("+", "+"), ("+", "+")),
    "XDD": (("-", "-"), ("-", "-")),
    "XDU": (("+", "-"), ("-", "+")),
    "XUD": (("-", "+"), ("+", "-")),
    "CAPCW": (("+", "-"), ()),
    "CAPCCW": (("-", "+"), ()),
    "CUPCCW": ((), ("-", "+")),
    "CUPCW": ((), ("+", "-")),
}


@dataclass(frozen=True)
class Token:
    """One generator occurrence: a token name plus a dot multiplicity."""

    name: str
    power: int = 1  # only meaningful for PU / PD

    def __post_init__(self):
        if self.name not in TOKEN_SIGNATURES:
            raise ParseError(f"unknown token {self.name!r}")
        if self.power != 1 and self.name not in ("PU", "PD"):
            raise ParseError(f"only dots take powers, got {self.name}^{self.power}")
        if self.power < 0:
            raise ParseError("negative dot power")

    @property
    def dom(self) -> SignSeq:
        return TOKEN_SIGNATURES[self.name][0]

    @property
    def cod(self) -> SignSeq:
        return TOKEN_SIGNATURES[self.name][1]

    def __str__(self) -> str:
        if self.name in ("PU", "PD") and self.power != 1:
            return f"{self.name}^{self.power}"
        return self.name


@dataclass(frozen=True)
class SliceWord:
    """A vertical stack of slices; slice i's codomain feeds slice i+1."""

    dom: SignSeq
    slices: tuple[tuple[Token, ...], ...]

    @property
    def cod(self) -> SignSeq:
        signs = self.dom
        for sl in self.slices:
            signs = _slice_cod(signs, sl, check=False)
        return signs

    def __str__(self) -> str:
        return " ; ".join(" * ".join(str(t) for t in sl) for sl in self.slices)


def _slice_dom(tokens: tuple[Token, ...]) -> SignSeq:
    out: list[str] = []
    for t in tokens:
        out.extend(t.dom)
    return tuple(out)


def _slice_cod(signs: SignSeq, tokens: tuple[Token, ...], check: bool = True) -> SignSeq:
    if check and _slice_dom(tokens) != signs:
        raise ParseError(
            f"slice domain {''.join(_slice_dom(tokens))} does not match "
            f"incoming signs {''.join(signs)}"
        )
    out: list[str] = []
    for t in tokens:
        out.extend(t.cod)
    return tuple(out)


def slice_word(dom: SignSeq, slices) -> SliceWord:
    """Build and type-check a slice word from raw token lists."""
    signs = tuple(dom)
    norm = []
    for idx, sl in enumerate(slices):
        sl = tuple(sl)
        if _slice_dom(sl) != signs:
            raise ParseError(
                f"slice {idx}: expected domain {''.join(signs) or '()'}, "
                f"got {''.join(_slice_dom(sl)) or '()'}"
            )
        signs = _slice_cod(signs, sl, check=False)
        norm.append(sl)
    return SliceWord(tuple(dom), tuple(norm))


def parse_slice_word(text: str, dom: SignSeq | None = None) -> SliceWord:
    """Parse the DSL; the domain is inferred from the first slice if omitted.

    >>> w = parse_slice_word("U * D")
    >>> w.dom, w.cod
    (('+', '-'), ('+', '-'))
    >>> parse_slice_word("CUPCCW ; CAPCCW").cod
    ()
    """
    chunks = [c.strip() for c in text.split(";")]
    slices = []
    for chunk in chunks:
        tokens = []
        if chunk:
            for part in chunk.split("*"):
                part = part.strip()
                if not part:
                    raise ParseError(f"empty token in slice {chunk!r}")
                if "^" in part:
                    name, _, power = part.partition("^")
                    try:
                        tokens.append(Token(name.strip().upper(), int(power)))
                    except ValueError as exc:
                        raise ParseError(f"bad power in {part!r}") from exc
                else:
                    tokens.append(Token(part.upper()))
        slices.append(tuple(tokens))
    if dom is None:
        dom = _slice_dom(slices[0]) if slices else ()
    return slice_word(tuple(dom), slices)


# -- movie events -------------------------------------------------------------
#
# The engine works on flat event lists: ('cup', p, or), ('cap', p, or),
# ('cross', p), ('dot', p, k), acting at explicit positions on the current
# wire list.  Slice words flatten into events position by position.

Event = tuple


def word_to_events(word: SliceWord) -> list[Event]:
    events: list[Event] = []
    for sl in word.slices:
        pos = 0
        for tok in sl:
            name = tok.name
            if name in ("U", "D"):
                pos += 1
            elif name in ("PU", "PD"):
                if tok.power:
                    events.append(("dot", pos, tok.power))
                pos += 1
            elif name.startswith("X"):
                events.append(("cross", pos))
                pos += 2
            elif name.startswith("CAP"):
                events.append(("cap", pos, "cw" if name.endswith("CW") and not name.endswith("CCW") else "ccw"))
            else:  # CUP
                events.append(("cup", pos, "cw" if not name.endswith("CCW") else "ccw"))
                pos += 2
    return events


def check_signs(dom: SignSeq, events: list[Event]) -> SignSeq:
    """Run the events over a wire-sign list, validating planarity/typing."""
    signs = list(dom)
    for ev in events:
        kind = ev[0]
        p = ev[1]
        if kind == "cup":
            if not 0 <= p <= len(signs):
                raise ParseError(f"cup position {p} out of range")
            pair = ("-", "+") if ev[2] == "ccw" else ("+", "-")
            signs[p:p] = list(pair)
        elif kind == "cap":
            if not 0 <= p <= len(signs) - 2:
                raise ParseError(f"cap position {p} out of range")
            want = ("-", "+") if ev[2] == "ccw" else ("+", "-")
            got = (signs[p], signs[p + 1])
            if got != want:
                raise ParseError(f"cap {ev[2]} over wires {got}")
            del signs[p : p + 2]
        elif kind == "cross":
            if not 0 <= p <= len(signs) - 2:
                raise ParseError(f"cross position {p} out of range")
            signs[p], signs[p + 1] = signs[p + 1], signs[p]
        elif kind == "dot":
            if not 0 <= p < len(signs):
                raise ParseError(f"dot position {p} out of range")
        else:
            raise ParseError(f"unknown event {ev!r}")
    return tuple(signs)
