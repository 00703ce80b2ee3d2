"""Elements of A_Γ: reduced words and the lexicographic normal form.

A letter is encoded as the int ``2*i + s`` where ``i`` is the vertex index
and ``s`` is 0 for the generator and 1 for its inverse, so ``code ^ 1`` is
the inverse letter and integer order is the canonical letter order
(vertex construction order, then positive before negative).
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

from .graph_core import Graph, GraphError

MAX_WORD_LENGTH = 4096
MAX_CENTRALIZER_RADIUS = 8


class WordError(ValueError):
    pass


class Letter(NamedTuple):
    vertex: str
    sign: int = 1

    def inverse(self) -> "Letter":
        return Letter(self.vertex, -self.sign)

    def __str__(self):
        return self.vertex if self.sign > 0 else f"{self.vertex}^-1"


def letter_code(g: Graph, letter: Letter) -> int:
    if letter.sign not in (1, -1):
        raise WordError(f"letter sign must be +1 or -1, got {letter.sign}")
    try:
        return 2 * g.index(letter.vertex) + (letter.sign < 0)
    except GraphError as exc:
        raise WordError(str(exc)) from None


def code_letter(g: Graph, code: int) -> Letter:
    return Letter(g.vertices[code >> 1], -1 if code & 1 else 1)


# ---------------------------------------------------------------------------
# core algorithms on code tuples


def _reduce(codes: Iterable[int], nbr: Sequence[int]) -> list[int]:
    """Cancel x^-1 ... x pairs whose intervening letters all commute with x.

    Appending to an already reduced word only ever needs to look back past
    letters that commute with the new one, so one left-to-right pass is
    enough.
    """
    out: list[int] = []
    for c in codes:
        inv = c ^ 1
        m = nbr[c >> 1]
        i = len(out) - 1
        while i >= 0:
            d = out[i]
            if d == inv:
                del out[i]
                break
            if not m >> (d >> 1) & 1:
                out.append(c)
                break
            i -= 1
        else:
            out.append(c)
    return out


def _lex_form(codes: Sequence[int], nbr: Sequence[int]) -> tuple[int, ...]:
    """Least word in the commutation class: repeatedly emit the smallest
    letter that can be shuffled to the front."""
    rest = list(codes)
    out = []
    while rest:
        seen = 0
        best = bi = -1
        for i, c in enumerate(rest):
            v = c >> 1
            if not seen & ~nbr[v] and (best < 0 or c < best):
                best, bi = c, i
            seen |= 1 << v
        out.append(best)
        del rest[bi]
    return tuple(out)


def normalize(g: Graph, codes: Sequence[int]) -> tuple[int, ...]:
    if len(codes) > MAX_WORD_LENGTH:
        raise WordError(f"word of length {len(codes)} exceeds limit {MAX_WORD_LENGTH}")
    table = g.cache.setdefault("normal_forms", {})
    key = tuple(codes)
    hit = table.get(key)
    if hit is None:
        nbr = g.nbr
        hit = _lex_form(_reduce(key, nbr), nbr)
        if len(table) > 500_000:
            table.clear()
        table[key] = hit
    return hit


def inverse_codes(codes: Sequence[int]) -> list[int]:
    return [c ^ 1 for c in reversed(codes)]


def _front_letters(codes: Sequence[int], nbr: Sequence[int]) -> list[int]:
    seen = 0
    out = []
    for i, c in enumerate(codes):
        v = c >> 1
        if not seen & ~nbr[v]:
            out.append(i)
        seen |= 1 << v
    return out


def _back_letters(codes: Sequence[int], nbr: Sequence[int]) -> list[int]:
    seen = 0
    out = []
    for i in range(len(codes) - 1, -1, -1):
        v = codes[i] >> 1
        if not seen & ~nbr[v]:
            out.append(i)
        seen |= 1 << v
    return out


def conjugator_codes(g: Graph, v: int, codes: Sequence[int]) -> tuple[int, ...] | None:
    """Shortest u with ``codes == u^-1 (v) u``, v a vertex index; None if the
    element is not conjugate to the generator v.

    ``codes`` must be a reduced word.  A reduced conjugate of v is a shuffle
    of u^-1 v u, so matching front/back letter pairs are peeled off (with
    backtracking, since a letter on v may be either the core or part of u);
    the peeled word is then cut down to its shortest representative modulo
    the centraliser <st(v)>.
    """
    nbr = g.nbr
    if len(codes) % 2 == 0:
        return None
    failed: set = set()

    def peel(w: tuple) -> list | None:
        if len(w) == 1:
            return [] if w[0] == 2 * v else None
        if w in failed:
            return None
        back_codes = {w[j]: j for j in _back_letters(w, nbr)}
        fronts = sorted(_front_letters(w, nbr), key=lambda i: (w[i] >> 1 == v, i))
        for i in fronts:
            j = back_codes.get(w[i] ^ 1)
            if j is None or j == i:
                continue
            rest = peel(tuple(c for k, c in enumerate(w) if k != i and k != j))
            if rest is not None:
                return [w[i]] + rest
        failed.add(w)
        return None

    peeled = peel(tuple(codes))
    if peeled is None:
        return None
    u = list(normalize(g, inverse_codes(peeled)))
    star_v = g.st(v)
    while True:
        lead = [i for i in _front_letters(u, nbr) if star_v >> (u[i] >> 1) & 1]
        if not lead:
            break
        del u[lead[0]]
    return normalize(g, u)


# ---------------------------------------------------------------------------
# public element type


class GroupElement:
    """An element of A_Γ stored by its canonical normal form."""

    __slots__ = ("graph", "codes")

    def __init__(self, graph: Graph, codes: Sequence[int] = (), *, normal: bool = False):
        self.graph = graph
        self.codes = tuple(codes) if normal else normalize(graph, codes)

    @classmethod
    def identity(cls, graph: Graph) -> "GroupElement":
        return cls(graph, (), normal=True)

    @classmethod
    def parse(cls, graph: Graph, text: str) -> "GroupElement":
        return cls(graph, parse_word(graph, text))

    def letters(self) -> list[Letter]:
        return [code_letter(self.graph, c) for c in self.codes]

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return concat_reduce(self.graph, self, other)

    def inverse(self) -> "GroupElement":
        return invert(self)

    def __len__(self):
        return len(self.codes)

    def __bool__(self):
        return bool(self.codes)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.codes == other.codes and (self.graph is other.graph
                                              or self.graph == other.graph)

    def __hash__(self):
        return hash(self.codes)

    def __str__(self):
        return format_word(self.graph, self.codes)

    def __repr__(self):
        return f"GroupElement({str(self)!r})"


# ---------------------------------------------------------------------------
# (de)serialisation


def parse_word(g: Graph, text: str) -> list[int]:
    """``a b^-1 c`` -> letter codes.  ``1`` or an empty string is the
    identity."""
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        if tok.endswith("^-1"):
            name, sign = tok[:-3], -1
        elif tok.endswith("^1"):
            name, sign = tok[:-2], 1
        else:
            name, sign = tok, 1
        out.append(letter_code(g, Letter(name, sign)))
    return out


def format_word(g: Graph, codes: Sequence[int]) -> str:
    if not codes:
        return "1"
    return " ".join(str(code_letter(g, c)) for c in codes)


def _as_codes(g: Graph, w) -> list[int]:
    if isinstance(w, GroupElement):
        return list(w.codes)
    if isinstance(w, str):
        return parse_word(g, w)
    out = []
    for x in w:
        if isinstance(x, int):
            if not 0 <= x < 2 * g.n:
                raise WordError(f"letter code {x} out of range")
            out.append(x)
        else:
            out.append(letter_code(g, Letter(*x)))
    return out


# ---------------------------------------------------------------------------
# operations


def normal_form(g: Graph, w) -> GroupElement:
    """Canonical representative of the word ``w`` (string, letters, codes or
    a GroupElement)."""
    return GroupElement(g, _as_codes(g, w))


def _check_ambient(g: Graph, *els: GroupElement) -> None:
    for e in els:
        if e.graph is not g and e.graph != g:
            raise WordError("elements belong to different graphs")


def concat_reduce(g: Graph, u: GroupElement, v: GroupElement) -> GroupElement:
    _check_ambient(g, u, v)
    return GroupElement(g, u.codes + v.codes)


def invert(u: GroupElement) -> GroupElement:
    return GroupElement(u.graph, inverse_codes(u.codes))


def equal(g: Graph, w1, w2) -> bool:
    return normal_form(g, w1).codes == normal_form(g, w2).codes


def extract_conjugator(g: Graph, v: str, w) -> GroupElement | None:
    el = normal_form(g, w)
    u = conjugator_codes(g, g.index(v), el.codes)
    return None if u is None else GroupElement(g, u, normal=True)


def centralizer_members(g: Graph, v: str, radius: int,
                        bound: int = MAX_CENTRALIZER_RADIUS) -> list[GroupElement]:
    """Elements of length <= radius supported on st(v), shortest first."""
    return [GroupElement(g, c, normal=True)
            for c in _centralizer_codes(g, g.index(v), radius, bound)]


def _centralizer_codes(g: Graph, v: int, radius: int,
                       bound: int = MAX_CENTRALIZER_RADIUS) -> list[tuple[int, ...]]:
    if radius < 0 or radius > bound:
        raise WordError(f"centraliser radius must lie in [0, {bound}]")
    key = ("centralizer", v, radius)
    cached = g.cache.get(key)
    if cached is not None:
        return cached
    letters = [2 * i + s for i in range(g.n) if g.st(v) >> i & 1 for s in (0, 1)]
    seen = {(): None}
    layer = [()]
    out = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for c in letters:
                nf = normalize(g, w + (c,))
                if len(nf) == len(w) + 1 and nf not in seen:
                    seen[nf] = None
                    nxt.append(nf)
        nxt.sort()
        out.extend(nxt)
        layer = nxt
    g.cache[key] = out
    return out
