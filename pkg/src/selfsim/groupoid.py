"""Finite discrete groupoids with fully explicit, exhaustively checkable tables.

A groupoid here is a set of objects, a set of arrows with source and range
maps, a partial composition table, an inverse table and a unit arrow per
object.  Everything is stored explicitly so that validation can enumerate
all composable pairs and triples.

Infinite groups (needed for the binary odometer) are handled by
``PresentedGroup``: arrows are canonical words over a generator alphabet and
equality delegates to a normalization routine.  Only two normalizations are
shipped, free reduction and free-abelian collection, which cover the
instances this package cares about.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class GroupoidError(ValueError):
    """Raised when groupoid data is malformed or an operation is not composable."""


# arrows of a FiniteGroupoid are opaque strings; arrows of a PresentedGroup
# are canonical words, i.e. tuples of (generator, exponent) pairs
Word = tuple


@dataclass(frozen=True)
class FiniteGroupoid:
    """A finite groupoid given by explicit tables.

    ``compose`` is defined exactly on the composable pairs (g, h) with
    src(g) = rng(h); the product gh then satisfies src(gh) = src(h) and
    rng(gh) = rng(g).
    """

    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    src_table: dict[str, str] = field(repr=False)
    rng_table: dict[str, str] = field(repr=False)
    compose_table: dict[tuple[str, str], str] = field(repr=False)
    inv_table: dict[str, str] = field(repr=False)
    unit_table: dict[str, str] = field(repr=False)

    is_finite = True

    def src(self, g: str) -> str:
        return self.src_table[g]

    def rng(self, g: str) -> str:
        return self.rng_table[g]

    def unit(self, v: str) -> str:
        if v not in self.unit_table:
            raise GroupoidError(f"no unit for object {v!r}")
        return self.unit_table[v]

    def is_unit(self, g: str) -> bool:
        return self.unit_table.get(self.src_table[g]) == g

    def composable(self, g: str, h: str) -> bool:
        return self.src_table[g] == self.rng_table[h]

    def compose(self, g: str, h: str) -> str:
        if not self.composable(g, h):
            raise GroupoidError(f"arrows not composable: {g!r} * {h!r}")
        return self.compose_table[(g, h)]

    def inv(self, g: str) -> str:
        return self.inv_table[g]

    def all_arrows(self):
        return self.arrows

    def arrows_up_to(self, wordcap: int):
        """All arrows; the cap is irrelevant for a genuinely finite groupoid."""
        return self.arrows

    def word_length(self, g: str) -> int:
        return 0 if self.is_unit(g) else 1

    def letters(self, g: str):
        """Decomposition used by cocycle evaluation; trivial for table groupoids."""
        return [g]

    def format_arrow(self, g: str) -> str:
        return g


def make_set_groupoid(objects) -> FiniteGroupoid:
    """Groupoid of a discrete set: the given objects and their units only."""
    objs = list(objects)
    if len(set(objs)) != len(objs):
        raise GroupoidError(f"duplicate object identifiers in {objs!r}")
    units = {v: f"1_{v}" for v in objs}
    arrows = tuple(units[v] for v in objs)
    return FiniteGroupoid(
        objects=tuple(objs),
        arrows=arrows,
        src_table={units[v]: v for v in objs},
        rng_table={units[v]: v for v in objs},
        compose_table={(units[v], units[v]): units[v] for v in objs},
        inv_table={units[v]: units[v] for v in objs},
        unit_table=units,
    )


def make_group_groupoid(elements, mul_table, object_name: str = "*") -> FiniteGroupoid:
    """One-object groupoid from a group multiplication table.

    ``mul_table`` maps (a, b) to ab and must be a genuine group table; the
    failed axiom is named in the error otherwise.
    """
    els = list(elements)
    if len(set(els)) != len(els):
        raise GroupoidError(f"duplicate element identifiers in {els!r}")
    for a, b in itertools.product(els, repeat=2):
        if (a, b) not in mul_table:
            raise GroupoidError(f"closure axiom: product {a!r}*{b!r} missing")
        if mul_table[(a, b)] not in els:
            raise GroupoidError(f"closure axiom: {a!r}*{b!r} gives unknown element")
    for a, b, c in itertools.product(els, repeat=3):
        if mul_table[(mul_table[(a, b)], c)] != mul_table[(a, mul_table[(b, c)])]:
            raise GroupoidError(f"associativity axiom fails at ({a!r},{b!r},{c!r})")
    identity = None
    for e in els:
        if all(mul_table[(e, a)] == a and mul_table[(a, e)] == a for a in els):
            identity = e
            break
    if identity is None:
        raise GroupoidError("identity axiom: no two-sided identity element")
    inv = {}
    for a in els:
        for b in els:
            if mul_table[(a, b)] == identity and mul_table[(b, a)] == identity:
                inv[a] = b
                break
        if a not in inv:
            raise GroupoidError(f"inverse axiom: element {a!r} has no inverse")
    v = object_name
    return FiniteGroupoid(
        objects=(v,),
        arrows=tuple(els),
        src_table={a: v for a in els},
        rng_table={a: v for a in els},
        compose_table=dict(mul_table),
        inv_table=inv,
        unit_table={v: identity},
    )


def validate_groupoid(G: FiniteGroupoid) -> list[str]:
    """Exhaustive axiom check; returns one message per violation (empty iff valid)."""
    report = []
    for g in G.arrows:
        if G.src_table.get(g) not in G.objects or G.rng_table.get(g) not in G.objects:
            report.append(f"arrow {g!r} has src/rng outside the object set")
    for v in G.objects:
        u = G.unit_table.get(v)
        if u is None or u not in G.arrows:
            report.append(f"unit missing for object {v!r}")
            continue
        if G.src_table[u] != v or G.rng_table[u] != v:
            report.append(f"unit arrow {u!r} of {v!r} is not an endo-arrow at {v!r}")
    for g, h in itertools.product(G.arrows, repeat=2):
        defined = (g, h) in G.compose_table
        if G.composable(g, h) != defined:
            report.append(f"compose defined-ness wrong for pair ({g!r},{h!r})")
            continue
        if defined:
            gh = G.compose_table[(g, h)]
            if G.src_table[gh] != G.src_table[h] or G.rng_table[gh] != G.rng_table[g]:
                report.append(f"compose endpoints wrong at ({g!r},{h!r})")
    for g, h, k in itertools.product(G.arrows, repeat=3):
        if G.composable(g, h) and G.composable(h, k):
            if (g, h) not in G.compose_table or (h, k) not in G.compose_table:
                continue  # reported above
            left = G.compose_table.get((G.compose_table[(g, h)], k))
            right = G.compose_table.get((g, G.compose_table[(h, k)]))
            if left is None or right is None or left != right:
                report.append(f"associativity fails at ({g!r},{h!r},{k!r})")
    for g in G.arrows:
        u_r = G.unit_table.get(G.rng_table[g])
        u_s = G.unit_table.get(G.src_table[g])
        if u_r is not None and G.compose_table.get((u_r, g)) != g:
            report.append(f"unit not left-neutral at {g!r}")
        if u_s is not None and G.compose_table.get((g, u_s)) != g:
            report.append(f"unit not right-neutral at {g!r}")
        gi = G.inv_table.get(g)
        if gi is None:
            report.append(f"inverse missing for {g!r}")
            continue
        if G.compose_table.get((gi, g)) != G.unit_table.get(G.src_table[g]):
            report.append(f"inverse axiom fails (inv(g)*g) at {g!r}")
        if G.compose_table.get((g, gi)) != G.unit_table.get(G.rng_table[g]):
            report.append(f"inverse axiom fails (g*inv(g)) at {g!r}")
    return report


# --- presented (possibly infinite) groups -----------------------------------
#
# Arrows are canonical words: tuples of (generator, exponent) pairs with
# nonzero exponents.  The normalization routine owns the word problem.


def free_normalize(word: Word) -> Word:
    """Free reduction: merge adjacent powers of the same generator, drop zeros."""
    out = []
    for gen, exp in word:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged != 0:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


def abelian_normalize(word: Word) -> Word:
    """Free-abelian collection: one power per generator, in alphabetical order."""
    totals: dict[str, int] = {}
    for gen, exp in word:
        totals[gen] = totals.get(gen, 0) + exp
    return tuple((gen, totals[gen]) for gen in sorted(totals) if totals[gen] != 0)


NORMALIZERS = {"free": free_normalize, "abelian": abelian_normalize}


@dataclass(frozen=True)
class PresentedGroup:
    """A finitely generated group as one-object groupoid, words modulo ``normalize``.

    All arithmetic happens on canonical words, so arrow equality is tuple
    equality.  Enumeration is only possible up to a word-length cap.
    """

    generators: tuple[str, ...]
    normalize_name: str
    object_name: str = "v"

    is_finite = False

    @property
    def normalize(self):
        return NORMALIZERS[self.normalize_name]

    @property
    def objects(self) -> tuple[str, ...]:
        return (self.object_name,)

    def unit(self, v: str) -> Word:
        if v != self.object_name:
            raise GroupoidError(f"no object {v!r} in presented group")
        return ()

    def is_unit(self, g: Word) -> bool:
        return g == ()

    def src(self, g: Word) -> str:
        return self.object_name

    def rng(self, g: Word) -> str:
        return self.object_name

    def composable(self, g: Word, h: Word) -> bool:
        return True

    def compose(self, g: Word, h: Word) -> Word:
        return self.normalize(tuple(g) + tuple(h))

    def inv(self, g: Word) -> Word:
        return self.normalize(tuple((gen, -exp) for gen, exp in reversed(g)))

    def word_length(self, g: Word) -> int:
        return sum(abs(exp) for _, exp in g)

    def letters(self, g: Word):
        """Single-generator letters whose left-to-right product is g."""
        out = []
        for gen, exp in g:
            step = 1 if exp > 0 else -1
            out.extend(((gen, step),) for _ in range(abs(exp)))
        return out

    def arrows_up_to(self, wordcap: int):
        """All canonical words of length <= wordcap, deterministically ordered."""
        seen = {(): None}
        frontier = [()]
        letters = [((gen, 1),) for gen in self.generators]
        letters += [((gen, -1),) for gen in self.generators]
        while frontier:
            nxt = []
            for w in frontier:
                for letter in letters:
                    u = self.compose(w, letter)
                    if u not in seen and self.word_length(u) <= wordcap:
                        seen[u] = None
                        nxt.append(u)
            frontier = nxt
        return sorted(seen, key=lambda w: (self.word_length(w), w))

    def format_arrow(self, g: Word) -> str:
        if not g:
            return "e"
        return " ".join(gen if exp == 1 else f"{gen}^{exp}" for gen, exp in g)
