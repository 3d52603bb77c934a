"""The inverse semigroup of singleton slices, in normal form.

Every nonzero element is Theta(p) Theta(g) Theta(q)^* for paths p, q over
the fundamental domain and an arrow g with src(p) = rng(g), src(q) = src(g);
the formal unit ONE and the absorbing ZERO complete the picture.  Products
are normalized eagerly through the prefix rules; the independent
word-reduction oracle in ``free_reduce`` re-derives the same normal forms
from the defining relations alone and is used for differential testing.

Elements are values: equality is structural, so two elements are equal in
the semigroup iff their normal forms compare equal (arrow equality is
delegated to the base, i.e. to word normalization for presented groups).
"""

from __future__ import annotations

from dataclasses import dataclass

from .correspondence import CorrespondenceError, Path, SelfSimilarData


class _Zero:
    def __repr__(self):
        return "0"

    def __eq__(self, other):
        return isinstance(other, _Zero)

    def __hash__(self):
        return hash("islice.ZERO")


class _One:
    def __repr__(self):
        return "1"

    def __eq__(self, other):
        return isinstance(other, _One)

    def __hash__(self):
        return hash("islice.ONE")


ZERO = _Zero()
ONE = _One()


@dataclass(frozen=True)
class Triple:
    """Normal form Theta(p) Theta(g) Theta(q)^*."""

    p: Path
    g: object
    q: Path

    def __repr__(self):
        return f"({self.p.label()}|{self.g!r}|{self.q.label()})"


# word symbols for the reduction oracle
@dataclass(frozen=True)
class Sym:
    """A generator letter: an edge or an arrow, possibly adjointed."""

    kind: str  # "edge" | "arrow"
    value: object
    star: bool = False


# internal reduction atom: Theta(path) Theta(arrow) with src(path) = rng(arrow)
_Atom = tuple  # (Path, arrow)


class SliceSemigroup:
    """Arithmetic of the singleton-slice inverse semigroup over one correspondence."""

    def __init__(self, C: SelfSimilarData):
        self.C = C

    # -- constructors ----------------------------------------------------

    def triple(self, p: Path, g, q: Path) -> Triple:
        if p.src != self.C.base.rng(g):
            raise CorrespondenceError(f"triple constraint src(p)=rng(g) fails: {p} {g!r}")
        if q.src != self.C.base.src(g):
            raise CorrespondenceError(f"triple constraint src(q)=src(g) fails: {q} {g!r}")
        return Triple(p, g, q)

    def unit_at(self, v: str) -> Triple:
        p = self.C.vertex_path(v)
        return Triple(p, self.C.base.unit(v), p)

    def cylinder(self, m: Path) -> Triple:
        """The idempotent supported on points extending m."""
        return Triple(m, self.C.base.unit(m.src), m)

    def edge_element(self, x: str) -> Triple:
        p = self.C.make_path((x,))
        u = self.C.base.unit(p.src)
        return Triple(p, u, self.C.vertex_path(p.src))

    def arrow_element(self, g) -> Triple:
        return Triple(
            self.C.vertex_path(self.C.base.rng(g)),
            g,
            self.C.vertex_path(self.C.base.src(g)),
        )

    # -- the semigroup operations ----------------------------------------

    def multiply(self, s, t):
        if s is ZERO or t is ZERO:
            return ZERO
        if s is ONE:
            return t
        if t is ONE:
            return s
        C = self.C
        p, g, q = s.p, s.g, s.q
        p2, g2, q2 = t.p, t.g, t.q
        if C.is_prefix(q, p2):
            u = C.tail(p2, len(q))
            gu, rest = C.act_on_path(g, u)
            return Triple(C.concat(p, gu), C.base.compose(rest, g2), q2)
        if C.is_prefix(p2, q):
            u = C.tail(q, len(p2))
            g2i = C.base.inv(g2)
            u2, rest = C.act_on_path(g2i, u)
            return Triple(p, C.base.compose(g, C.base.inv(rest)), C.concat(q2, u2))
        return ZERO

    def adjoint(self, s):
        if s is ZERO or s is ONE:
            return s
        return Triple(s.q, self.C.base.inv(s.g), s.p)

    def is_idempotent(self, s) -> bool:
        if s is ZERO or s is ONE:
            return True
        return self.multiply(s, s) == s

    def leq(self, s, t) -> bool:
        """Natural partial order: s <= t iff s = t s* s."""
        if s is ZERO:
            return True
        return self.multiply(t, self.multiply(self.adjoint(s), s)) == s

    # -- bounded element enumeration --------------------------------------

    def elements(self, pathcap: int, wordcap: int = 2, with_units=True):
        """All triples with path lengths <= pathcap and arrow words <= wordcap."""
        from .correspondence import paths_of_length

        paths = []
        for n in range(pathcap + 1):
            paths.extend(paths_of_length(self.C, n))
        if self.C.base.is_finite:
            arrows = list(self.C.base.all_arrows())
        else:
            arrows = list(self.C.base.arrows_up_to(wordcap))
        out = []
        if with_units:
            out.extend([ZERO, ONE])
        for g in arrows:
            for p in paths:
                if p.src != self.C.base.rng(g):
                    continue
                for q in paths:
                    if q.src != self.C.base.src(g):
                        continue
                    out.append(Triple(p, g, q))
        return out

    # -- the word-reduction oracle ----------------------------------------

    def _atom_of(self, sym: Sym) -> _Atom:
        if sym.kind == "edge":
            p = self.C.make_path((sym.value,))
            return (p, self.C.base.unit(p.src))
        if sym.kind == "arrow":
            return (self.C.vertex_path(self.C.base.rng(sym.value)), sym.value)
        raise CorrespondenceError(f"unknown symbol kind {sym.kind!r}")

    def _atom_compose(self, a: _Atom, b: _Atom):
        """Theta-product of two plain atoms, or None when not composable."""
        (p, g), (q, h) = a, b
        if self.C.base.src(g) != q.rng:
            return None
        gq, rest = self.C.act_on_path(g, q)
        return (self.C.concat(p, gq), self.C.base.compose(rest, h))

    def _junction(self, a: _Atom, b: _Atom):
        """Reduce A^* B one step; returns ZERO or a list of (atom, star) entries.

        Only the defining relations are used: the G-adjoint rule, slice
        products with an arrow factor, and the singleton bracket rule
        Theta(x)^* Theta(y) = delta_{x,y} unit.
        """
        C = self.C
        p, g = a
        q, h = b
        if p.is_vertex():
            # A^* = Theta(g^{-1}), a plain atom
            ai = (C.vertex_path(C.base.src(g)), C.base.inv(g))
            out = self._atom_compose(ai, b)
            return ZERO if out is None else [(out, False)]
        if q.is_vertex():
            # A^* Theta(h) = (Theta(h^{-1}) A)^*
            hi = (C.vertex_path(C.base.src(h)), C.base.inv(h))
            out = self._atom_compose(hi, a)
            return ZERO if out is None else [(out, True)]
        if p.edges[0] != q.edges[0]:
            return ZERO
        # shared outermost edge cancels into the unit at its source
        return [((C.tail(p, 1), g), True), ((C.tail(q, 1), h), False)]

    def _reduce_pair(self, top, nxt, collapse_junctions: bool):
        """One local rewriting step on adjacent stack entries, or None."""
        (a, sa), (b, sb) = nxt, top
        if not sa and not sb:
            out = self._atom_compose(a, b)
            return ZERO if out is None else [(out, False)]
        if sa and sb:
            out = self._atom_compose(b, a)
            return ZERO if out is None else [(out, True)]
        if sa and not sb:
            if not collapse_junctions:
                return None
            return self._junction(a, b)
        return None  # plain followed by star: the p/q junction of a normal form

    def _run_stack(self, items, collapse_junctions: bool):
        stack = []
        for item in items:
            stack.append(item)
            while len(stack) >= 2:
                step = self._reduce_pair(stack[-1], stack[-2], collapse_junctions)
                if step is None:
                    break
                if step is ZERO:
                    return ZERO
                stack[-2:] = step
        return stack

    def _stack_to_element(self, stack):
        C = self.C
        if stack is ZERO:
            return ZERO
        if not stack:
            return ONE
        if len(stack) == 1:
            (p, g), star = stack[0]
            if star:
                return Triple(C.vertex_path(C.base.src(g)), C.base.inv(g), p)
            return Triple(p, g, C.vertex_path(C.base.src(g)))
        assert len(stack) == 2, stack
        (a, sa), (b, sb) = stack
        assert (sa, sb) == (False, True), stack
        (p, g), (q, h) = a, b
        hi = C.base.inv(h)
        if C.base.src(g) != C.base.rng(hi):
            return ZERO
        return Triple(p, C.base.compose(g, hi), q)

    def free_reduce(self, word, deferred: bool = False):
        """Reduce a generator word left to right; ``deferred`` postpones all
        adjoint-against-plain cancellations to a final pass."""
        items = [(self._atom_of(s), s.star) for s in word]
        stack = self._run_stack(items, collapse_junctions=not deferred)
        if stack is ZERO:
            return ZERO
        if deferred:
            while True:
                stack = self._run_stack(stack, collapse_junctions=True)
                if stack is ZERO:
                    return ZERO
                if self._is_quiescent(stack):
                    break
        return self._stack_to_element(stack)

    def _is_quiescent(self, stack) -> bool:
        for (a, sa), (b, sb) in zip(stack, stack[1:]):
            if not (sa is False and sb is True):
                return False
        return len(stack) <= 2

    def element_of_symbol(self, s: Sym):
        """The symbol as a normal-form element (for folding with multiply)."""
        if s.kind == "edge":
            el = self.edge_element(s.value)
        else:
            el = self.arrow_element(s.value)
        return self.adjoint(el) if s.star else el
