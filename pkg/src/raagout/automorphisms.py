"""Automorphisms of A_Γ given by the images of the generators.

Composition follows function notation: ``compose(a, b)`` is ``a ∘ b``, so
``compose(a, b)(v) == a(b(v))``.  The commutator is ``[a, b] = a⁻¹b⁻¹ab``
read in the same notation, i.e. ``a⁻¹ ∘ b⁻¹ ∘ a ∘ b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .graph_core import Graph, GraphError, _bits, enumerate_graph_symmetries, MAX_SYMMETRY_VERTICES
from .words import (
    GroupElement,
    Letter,
    WordError,
    _as_codes,
    _centralizer_codes,
    conjugator_codes,
    inverse_codes,
    letter_code,
    normalize,
)

DEFAULT_INNER_RADIUS = 4


class AutomorphismError(ValueError):
    """Illegal generator spec or inconsistent image data."""


# ---------------------------------------------------------------------------
# generator specs


@dataclass(frozen=True)
class Inversion:
    vertex: str


@dataclass(frozen=True)
class Graphic:
    images: tuple  # image of each vertex, in vertex order


@dataclass(frozen=True)
class PartialConjugation:
    multiplier: Letter
    region: tuple


@dataclass(frozen=True)
class Transvection:
    multiplier: Letter
    target: str
    side: str = "right"


GeneratorSpec = Union[Inversion, Graphic, PartialConjugation, Transvection]


def _letter_text(letter: Letter) -> str:
    return f"{letter.vertex}^{'+1' if letter.sign > 0 else '-1'}"


def _cycles(g: Graph, images: Sequence[str]) -> str:
    seen = set()
    parts = []
    for v in g.vertices:
        if v in seen:
            continue
        cyc = [v]
        seen.add(v)
        w = images[g.index(v)]
        while w != v:
            cyc.append(w)
            seen.add(w)
            w = images[g.index(w)]
        if len(cyc) > 1:
            parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


def format_spec(spec: GeneratorSpec, g: Graph | None = None) -> str:
    """Text form: ``inv v``, ``graphic (a c)``, ``pc x^+1 {a, b}``,
    ``tv x^-1 -> y`` and ``tv x^+1 -> y left``."""
    if isinstance(spec, Inversion):
        return f"inv {spec.vertex}"
    if isinstance(spec, Graphic):
        if g is None:
            raise ValueError("graphic specs need the graph to name cycles")
        return f"graphic {_cycles(g, spec.images)}"
    if isinstance(spec, PartialConjugation):
        return f"pc {_letter_text(spec.multiplier)} {{{', '.join(spec.region)}}}"
    if isinstance(spec, Transvection):
        tail = " left" if spec.side == "left" else ""
        return f"tv {_letter_text(spec.multiplier)} -> {spec.target}{tail}"
    raise TypeError(f"not a generator spec: {spec!r}")


_LETTER = r"(\S+?)\^([+-]1)"


def parse_spec(text: str, g: Graph | None = None) -> GeneratorSpec:
    text = text.strip()
    if m := re.fullmatch(r"inv (\S+)", text):
        return Inversion(m.group(1))
    if m := re.fullmatch(r"pc " + _LETTER + r" \{(.*)\}", text):
        region = tuple(v.strip() for v in m.group(3).split(",") if v.strip())
        return PartialConjugation(Letter(m.group(1), int(m.group(2))), region)
    if m := re.fullmatch(r"tv " + _LETTER + r" -> (\S+)( left)?", text):
        return Transvection(Letter(m.group(1), int(m.group(2))), m.group(3),
                            "left" if m.group(4) else "right")
    if m := re.fullmatch(r"graphic ((?:\([^()]*\))+)", text):
        if g is None:
            raise ValueError("graphic specs need the graph")
        images = {v: v for v in g.vertices}
        for cyc in re.findall(r"\(([^()]*)\)", m.group(1)):
            names = cyc.split()
            for a, b in zip(names, names[1:] + names[:1]):
                images[a] = b
        return Graphic(tuple(images[v] for v in g.vertices))
    raise AutomorphismError(f"cannot parse generator spec {text!r}")


def spec_to_dict(spec: GeneratorSpec, g: Graph) -> dict:
    return {"text": format_spec(spec, g)}


# ---------------------------------------------------------------------------
# automorphisms


def _apply_codes(subst: Sequence[Sequence[int]], codes: Iterable[int]) -> list[int]:
    out: list[int] = []
    for c in codes:
        out.extend(subst[c])
    return out


def _substitution(images: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    subst = []
    for img in images:
        subst.append(tuple(img))
        subst.append(tuple(inverse_codes(img)))
    return subst


class Automorphism:
    """An automorphism of A_Γ together with its inverse, as generator images."""

    __slots__ = ("graph", "images", "inverse_images", "_subst", "_inv_subst")

    def __init__(self, graph: Graph, images: Sequence[Sequence[int]],
                 inverse_images: Sequence[Sequence[int]], *, check: bool = True):
        if len(images) != graph.n or len(inverse_images) != graph.n:
            raise AutomorphismError("one image per vertex is required")
        self.graph = graph
        self.images = tuple(normalize(graph, im) for im in images)
        self.inverse_images = tuple(normalize(graph, im) for im in inverse_images)
        self._subst = _substitution(self.images)
        self._inv_subst = _substitution(self.inverse_images)
        if check:
            self._verify()

    @classmethod
    def from_words(cls, graph: Graph, images: Sequence, inverse_images: Sequence) -> "Automorphism":
        return cls(graph, [_as_codes(graph, w) for w in images],
                   [_as_codes(graph, w) for w in inverse_images])

    def _verify(self) -> None:
        g = self.graph
        for i in range(g.n):
            if normalize(g, _apply_codes(self._subst, self.inverse_images[i])) != (2 * i,):
                raise AutomorphismError("inverse images do not invert the images")
            if normalize(g, _apply_codes(self._inv_subst, self.images[i])) != (2 * i,):
                raise AutomorphismError("images do not invert the inverse images")
        for i in range(g.n):
            for j in _bits(g.nbr[i]):
                if j > i:
                    a, b = self.images[i], self.images[j]
                    if normalize(g, a + b) != normalize(g, b + a):
                        raise AutomorphismError(
                            f"images of adjacent {g.vertices[i]}, {g.vertices[j]} do not commute")

    def __call__(self, w) -> GroupElement:
        return apply(self, w)

    def image(self, v: str) -> GroupElement:
        return GroupElement(self.graph, self.images[self.graph.index(v)], normal=True)

    def moved(self) -> list[int]:
        return [i for i, im in enumerate(self.images) if im != (2 * i,)]

    def is_identity(self) -> bool:
        return not self.moved()

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return equal_in_aut(self, other)

    def __hash__(self):
        return hash(self.images)

    def describe(self) -> dict:
        g = self.graph
        return {v: str(GroupElement(g, self.images[i], normal=True))
                for i, v in enumerate(g.vertices)}

    def __repr__(self):
        body = ", ".join(f"{k} -> {w}" for k, w in self.describe().items())
        return f"Automorphism({body})"


def _check_ambient(*auts: Automorphism) -> None:
    g = auts[0].graph
    for a in auts[1:]:
        if a.graph is not g and a.graph != g:
            raise AutomorphismError("automorphisms of different graphs")


def identity_automorphism(g: Graph) -> Automorphism:
    ims = [(2 * i,) for i in range(g.n)]
    return Automorphism(g, ims, ims, check=False)


def inner_automorphism(g: Graph, w) -> Automorphism:
    """Conjugation v -> w⁻¹ v w."""
    codes = list(normalize(g, _as_codes(g, w)))
    winv = inverse_codes(codes)
    ims = [winv + [2 * i] + codes for i in range(g.n)]
    inv = [codes + [2 * i] + winv for i in range(g.n)]
    return Automorphism(g, ims, inv, check=False)


def apply(aut: Automorphism, w) -> GroupElement:
    g = aut.graph
    if isinstance(w, GroupElement) and w.graph is not g and w.graph != g:
        raise AutomorphismError("word and automorphism live over different graphs")
    return GroupElement(g, _apply_codes(aut._subst, _as_codes(g, w)))


def compose(a: Automorphism, b: Automorphism) -> Automorphism:
    """a ∘ b."""
    _check_ambient(a, b)
    images = [_apply_codes(a._subst, im) for im in b.images]
    inverse = [_apply_codes(b._inv_subst, im) for im in a.inverse_images]
    return Automorphism(a.graph, images, inverse, check=False)


def compose_all(auts: Sequence[Automorphism]) -> Automorphism:
    out = auts[0]
    for a in auts[1:]:
        out = compose(out, a)
    return out


def invert_aut(a: Automorphism) -> Automorphism:
    return Automorphism(a.graph, a.inverse_images, a.images, check=False)


def power(a: Automorphism, n: int) -> Automorphism:
    base = a if n >= 0 else invert_aut(a)
    out = identity_automorphism(a.graph)
    for _ in range(abs(n)):
        out = compose(out, base)
    return out


def equal_in_aut(a: Automorphism, b: Automorphism) -> bool:
    _check_ambient(a, b)
    return a.images == b.images


def commutator(a: Automorphism, b: Automorphism) -> Automorphism:
    """[a, b] = a⁻¹ b⁻¹ a b."""
    return compose_all([invert_aut(a), invert_aut(b), a, b])


def abelianization_matrix(aut: Automorphism) -> np.ndarray:
    """Integer matrix of the induced map on H_1; column v is the exponent
    sum vector of aut(v)."""
    n = aut.graph.n
    m = np.zeros((n, n), dtype=np.int64)
    for v, im in enumerate(aut.images):
        for c in im:
            m[c >> 1, v] += -1 if c & 1 else 1
    return m


# ---------------------------------------------------------------------------
# generators


def _validate_region(g: Graph, mult: int, region: int, *, allow_empty: bool = False) -> None:
    outside = g.all_mask & ~g.st(mult)
    if region & ~outside:
        raise AutomorphismError("partial conjugation region meets the star of its multiplier")
    if not region and not allow_empty:
        raise AutomorphismError("partial conjugation region is empty")
    for comp in g.components_mask(outside):
        if comp & region and comp & ~region:
            raise AutomorphismError("partial conjugation region is not a union of components")


def make_generator(g: Graph, spec: GeneratorSpec) -> Automorphism:
    """Executable automorphism for a generator spec, validated."""
    try:
        return _make_generator(g, spec)
    except (GraphError, WordError) as exc:
        raise AutomorphismError(str(exc)) from None


def _make_generator(g: Graph, spec: GeneratorSpec) -> Automorphism:
    n = g.n
    ident = [(2 * i,) for i in range(n)]
    if isinstance(spec, Inversion):
        i = g.index(spec.vertex)
        ims = list(ident)
        ims[i] = (2 * i + 1,)
        return Automorphism(g, ims, ims, check=False)
    if isinstance(spec, Graphic):
        if len(spec.images) != n or sorted(spec.images) != sorted(g.vertices):
            raise AutomorphismError("graphic spec is not a permutation of the vertices")
        perm = [g.index(v) for v in spec.images]
        for i in range(n):
            for j in range(n):
                if (g.nbr[i] >> j & 1) != (g.nbr[perm[i]] >> perm[j] & 1):
                    raise AutomorphismError("permutation does not preserve adjacency")
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        return Automorphism(g, [(2 * p,) for p in perm], [(2 * q,) for q in inv], check=False)
    if isinstance(spec, PartialConjugation):
        x = letter_code(g, spec.multiplier)
        region = g.mask(spec.region)
        _validate_region(g, x >> 1, region)
        ims, inv = list(ident), list(ident)
        for i in _bits(region):
            ims[i] = (x ^ 1, 2 * i, x)
            inv[i] = (x, 2 * i, x ^ 1)
        return Automorphism(g, ims, inv, check=False)
    if isinstance(spec, Transvection):
        x = letter_code(g, spec.multiplier)
        y = g.index(spec.target)
        if x >> 1 == y:
            raise AutomorphismError("transvection multiplier equals its target")
        if not g.dom(x >> 1, y):
            raise AutomorphismError(f"{spec.multiplier.vertex} does not dominate {spec.target}")
        ims, inv = list(ident), list(ident)
        if spec.side == "right":
            ims[y], inv[y] = (2 * y, x), (2 * y, x ^ 1)
        elif spec.side == "left":
            ims[y], inv[y] = (x, 2 * y), (x ^ 1, 2 * y)
        else:
            raise AutomorphismError(f"transvection side must be right or left, not {spec.side!r}")
        return Automorphism(g, ims, inv, check=False)
    raise AutomorphismError(f"unknown generator spec {spec!r}")


def pc_is_out_nontrivial(g: Graph, spec: PartialConjugation) -> bool:
    """Region and Γ∖(st ∪ region) both nonempty."""
    x = g.index(spec.multiplier.vertex)
    region = g.mask(spec.region)
    return bool(region) and bool(g.all_mask & ~g.st(x) & ~region)


def single_component_pcs(g: Graph, signs: Sequence[int] = (1,), *,
                         out_nontrivial: bool = True) -> list[PartialConjugation]:
    out = []
    for x in range(g.n):
        comps = g.components_mask(g.all_mask & ~g.st(x))
        if out_nontrivial and len(comps) < 2:
            continue
        for comp in comps:
            for s in signs:
                out.append(PartialConjugation(Letter(g.vertices[x], s), g.names(comp)))
    return out


def transvection_specs(g: Graph, signs: Sequence[int] = (1,),
                       sides: Sequence[str] = ("right", "left")) -> list[Transvection]:
    out = []
    for side in sides:
        for x in range(g.n):
            for y in range(g.n):
                if x != y and g.dom(x, y):
                    for s in signs:
                        out.append(Transvection(Letter(g.vertices[x], s), g.vertices[y], side))
    return out


def enumerate_laurence_generators(g: Graph, bound: int = MAX_SYMMETRY_VERTICES) -> list[GeneratorSpec]:
    """Inversions, graphic automorphisms, Out-nontrivial single-component
    partial conjugations, right then left transvections (positive
    multipliers; inverses are obtained with ``invert_aut``)."""
    if g.n > bound:
        raise AutomorphismError(f"generator enumeration limited to {bound} vertices")
    specs: list[GeneratorSpec] = [Inversion(v) for v in g.vertices]
    specs += [Graphic(p) for p in enumerate_graph_symmetries(g, bound)]
    specs += single_component_pcs(g)
    specs += transvection_specs(g)
    return specs


# ---------------------------------------------------------------------------
# inner automorphisms and Out-equality


@dataclass(frozen=True)
class InnerCheck:
    """Outcome of the bounded inner-automorphism search.

    status is ``"inner"`` (with a verified witness w, aut(v) = w⁻¹vw),
    ``"not_inner"`` (a radius-independent obstruction fired, see
    ``reason``) or ``"not_inner_within"`` (no conjugator found among the
    candidates of length up to ``radius``; inconclusive).
    """

    status: str
    witness: GroupElement | None = None
    radius: int = 0
    reason: str = ""

    @property
    def inner(self) -> bool:
        return self.status == "inner"

    def to_dict(self) -> dict:
        d = {"status": self.status}
        if self.witness is not None:
            d["witness"] = str(self.witness)
        if self.reason:
            d["reason"] = self.reason
        d["radius"] = self.radius
        return d


def conjugates_to(aut: Automorphism, w: Sequence[int]) -> bool:
    """True iff aut(v) == w⁻¹ v w for every vertex v."""
    g = aut.graph
    winv = inverse_codes(w)
    for i, im in enumerate(aut.images):
        if normalize(g, winv + [2 * i] + list(w)) != im:
            return False
    return True


def vertex_conjugators(aut: Automorphism) -> list[tuple[int, ...] | None]:
    """For each vertex v the minimal u with aut(v) = u⁻¹ v u, or None."""
    g = aut.graph
    return [conjugator_codes(g, i, im) for i, im in enumerate(aut.images)]


def is_inner(aut: Automorphism, radius: int = DEFAULT_INNER_RADIUS,
             candidates: Iterable = ()) -> InnerCheck:
    g = aut.graph
    for w in candidates:
        codes = normalize(g, _as_codes(g, w))
        if conjugates_to(aut, codes):
            return InnerCheck("inner", GroupElement(g, codes, normal=True), radius)
    if g.n == 0 or aut.is_identity():
        return InnerCheck("inner", GroupElement.identity(g), radius)
    if not np.array_equal(abelianization_matrix(aut), np.eye(g.n, dtype=np.int64)):
        return InnerCheck("not_inner", None, radius, "abelianization is not the identity")
    conj = vertex_conjugators(aut)
    for i, u in enumerate(conj):
        if u is None:
            return InnerCheck("not_inner", None, radius,
                              f"image of {g.vertices[i]} is not conjugate to it")
    for u in dict.fromkeys(conj):
        if conjugates_to(aut, u):
            return InnerCheck("inner", GroupElement(g, u, normal=True), radius)
    v0 = min(range(g.n), key=lambda i: (bin(g.st(i)).count("1"), i))
    base = list(conj[v0])
    for c in _centralizer_codes(g, v0, radius):
        w = normalize(g, list(c) + base)
        if conjugates_to(aut, w):
            return InnerCheck("inner", GroupElement(g, w, normal=True), radius)
    return InnerCheck("not_inner_within", None, radius)


def equal_in_out(a: Automorphism, b: Automorphism, radius: int = DEFAULT_INNER_RADIUS,
                 candidates: Iterable = ()) -> InnerCheck:
    _check_ambient(a, b)
    return is_inner(compose(a, invert_aut(b)), radius, candidates)


def certify_partial_conjugation_nontrivial(g: Graph, y: Letter, region: Sequence[str]) -> bool:
    """Sufficient test that c_{y,Y} is nontrivial in Out: some vertex is
    conjugated and some vertex outside st(y) is left alone."""
    try:
        i = g.index(y.vertex)
        mask = g.mask(region)
    except GraphError as exc:
        raise AutomorphismError(str(exc)) from None
    _validate_region(g, i, mask, allow_empty=True)
    moved = mask & ~g.st(i)
    untouched = g.all_mask & ~g.st(i) & ~mask
    return bool(moved) and bool(untouched)


# ---------------------------------------------------------------------------
# recognising generator shapes


@dataclass(frozen=True)
class Recognized:
    """An automorphism identified exactly as a power of a generator.

    kind is ``"identity"``, ``"transvection"`` or ``"partial_conjugation"``;
    ``spec`` carries a unit multiplier letter whose sign is that of the
    exponent, and ``exponent`` its absolute value.
    """

    kind: str
    spec: GeneratorSpec | None = None
    exponent: int = 0

    def text(self, g: Graph) -> str:
        if self.kind == "identity":
            return "1"
        s = format_spec(self.spec, g)
        return s if self.exponent == 1 else f"({s})^{self.exponent}"


def _letter_power(codes: Sequence[int]) -> tuple[int, int] | None:
    """(letter code, n) if codes is a nonzero power of one letter."""
    if not codes or any(c != codes[0] for c in codes):
        return None
    return codes[0], len(codes)


def recognize(aut: Automorphism) -> Recognized | None:
    """Identify aut exactly (in Aut, no inner correction) as the identity,
    a transvection power or a partial conjugation power."""
    g = aut.graph
    moved = aut.moved()
    if not moved:
        return Recognized("identity")
    if len(moved) == 1:
        y = moved[0]
        im = list(aut.images[y])
        for side, rest in (("right", normalize(g, [2 * y + 1] + im)),
                           ("left", normalize(g, im + [2 * y + 1]))):
            lp = _letter_power(rest)
            if lp and lp[0] >> 1 != y and g.dom(lp[0] >> 1, y):
                x, e = lp
                return Recognized("transvection",
                                  Transvection(Letter(g.vertices[x >> 1], -1 if x & 1 else 1),
                                               g.vertices[y], side), e)
    mult = None
    for i in moved:
        u = conjugator_codes(g, i, aut.images[i])
        lp = _letter_power(u) if u is not None else None
        if lp is None or (mult is not None and lp != mult):
            return None
        mult = lp
    x, e = mult
    region = 0
    for i in moved:
        region |= 1 << i
    try:
        _validate_region(g, x >> 1, region)
    except AutomorphismError:
        return None
    return Recognized("partial_conjugation",
                      PartialConjugation(Letter(g.vertices[x >> 1], -1 if x & 1 else 1),
                                         g.names(region)), e)


@dataclass(frozen=True)
class OutRecognition:
    """aut equals ``recognized`` in Out: conjugating every image of aut by
    ``witness`` (v -> w⁻¹ aut(v) w) gives the recognised automorphism exactly."""

    recognized: Recognized
    witness: GroupElement
    source: str


def recognize_in_out(aut: Automorphism, candidates: Iterable = (),
                     radius: int = DEFAULT_INNER_RADIUS) -> OutRecognition | None:
    """Recognise aut up to an inner automorphism.  Tries the identity, the
    explicit candidates, then w = u⁻¹ for every vertex conjugator u (which
    makes the corrected automorphism fix that vertex)."""
    g = aut.graph
    tried = set()

    def attempt(codes, source):
        codes = normalize(g, codes)
        if codes in tried:
            return None
        tried.add(codes)
        corrected = compose(inner_automorphism(g, codes), aut) if codes else aut
        rec = recognize(corrected)
        if rec is not None:
            return OutRecognition(rec, GroupElement(g, codes, normal=True), source)
        return None

    hit = attempt((), "identity")
    if hit:
        return hit
    for w in candidates:
        hit = attempt(_as_codes(g, w), "explicit")
        if hit:
            return hit
    for u in vertex_conjugators(aut):
        if u is not None:
            hit = attempt(inverse_codes(u), "vertex_conjugator")
            if hit:
                return hit
    check = is_inner(aut, radius)
    if check.inner:
        return OutRecognition(Recognized("identity"), check.witness.inverse(), "bounded_search")
    return None
