"""Discrete groupoid correspondences in fundamental-domain form.

The data of a correspondence over a discrete base is an edge set F with
range/source vertex maps together with a cocycle table sending a composable
pair (arrow g, edge x) to (g∘x, g|_x).  The pair encodes the left action on
the full bispace F x_{s,r} G through h.(x, g) = (h∘x, h|_x g).

Conventions (fixed throughout the package):
  * rngV(g∘x) = rng(g),
  * src(g|_x) = srcV(x) and rng(g|_x) = srcV(g∘x),
  * (hg)∘x = h∘(g∘x) and (hg)|_x = h|_{g∘x} · g|_x.

Paths are composable edge sequences x_1...x_n with srcV(x_i) = rngV(x_{i+1});
the length-0 path at a vertex carries that vertex explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .groupoid import FiniteGroupoid, GroupoidError, PresentedGroup


@dataclass(frozen=True, order=True)
class Path:
    """A composable edge sequence with cached endpoints (rng side first)."""

    edges: tuple[str, ...]
    rng: str
    src: str

    def __len__(self) -> int:
        return len(self.edges)

    def is_vertex(self) -> bool:
        return not self.edges

    def label(self) -> str:
        return "".join(self.edges) if self.edges else f"({self.rng})"


class CorrespondenceError(ValueError):
    """Raised for malformed correspondence data or non-composable requests."""


@dataclass(frozen=True)
class SelfSimilarData:
    """Edge set with a self-similar cocycle over a finite or presented base."""

    base: FiniteGroupoid | PresentedGroup
    edges: tuple[str, ...]
    edge_rng: dict[str, str] = field(repr=False)
    edge_src: dict[str, str] = field(repr=False)
    # keyed by (letter arrow, edge); letters are whole arrows for finite
    # bases and single-generator words for presented bases
    cocycle: dict[tuple, tuple] = field(repr=False)

    # -- construction ---------------------------------------------------

    @staticmethod
    def build(base, edges, edge_rng, edge_src, cocycle=None) -> "SelfSimilarData":
        """Normalize input tables; fills unit rows and inverse-letter rows.

        For a presented base the supplied cocycle rows must cover exactly the
        positive generator letters; rows for inverse letters are derived from
        bijectivity of x -> g∘x.
        """
        edges = tuple(edges)
        if len(set(edges)) != len(edges):
            raise CorrespondenceError(f"duplicate edge identifiers in {edges!r}")
        table = dict(cocycle or {})
        if base.is_finite:
            for v in base.objects:
                u = base.unit(v)
                for x in edges:
                    if edge_rng[x] == v:
                        table.setdefault((u, x), (x, base.unit(edge_src[x])))
        else:
            for x in edges:
                table.setdefault(((), x), (x, ()))
            for gen in base.generators:
                letter = ((gen, 1),)
                inv_letter = ((gen, -1),)
                fiber = [x for x in edges]
                for x in fiber:
                    if (letter, x) not in table:
                        continue
                    y, r = table[(letter, x)]
                    # g∘x = y  ⇒  g^{-1}∘y = x with restriction inv(g|_x)
                    table.setdefault((inv_letter, y), (x, base.inv(r)))
        return SelfSimilarData(base, edges, dict(edge_rng), dict(edge_src), table)

    # -- basic maps -----------------------------------------------------

    def rngV(self, x: str) -> str:
        return self.edge_rng[x]

    def srcV(self, x: str) -> str:
        return self.edge_src[x]

    def fiber(self, v: str) -> list[str]:
        """Edges with range v, in declaration order."""
        return [x for x in self.edges if self.edge_rng[x] == v]

    def vertex_path(self, v: str) -> Path:
        if v not in self.base.objects:
            raise CorrespondenceError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def make_path(self, edge_ids) -> Path:
        edge_ids = tuple(edge_ids)
        if not edge_ids:
            raise CorrespondenceError("use vertex_path for length-0 paths")
        for x, y in zip(edge_ids, edge_ids[1:]):
            if self.edge_src[x] != self.edge_rng[y]:
                raise CorrespondenceError(f"edges not composable: {x!r} then {y!r}")
        return Path(edge_ids, self.edge_rng[edge_ids[0]], self.edge_src[edge_ids[-1]])

    def concat(self, p: Path, q: Path) -> Path:
        if p.src != q.rng:
            raise CorrespondenceError(f"paths not composable: {p} then {q}")
        if p.is_vertex():
            return q
        if q.is_vertex():
            return p
        return Path(p.edges + q.edges, p.rng, q.src)

    def prefix(self, p: Path, n: int) -> Path:
        assert 0 <= n <= len(p)
        if n == 0:
            return self.vertex_path(p.rng)
        if n == len(p):
            return p
        return self.make_path(p.edges[:n])

    def tail(self, p: Path, n: int) -> Path:
        """The remainder of p after its length-n prefix."""
        assert 0 <= n <= len(p)
        if n == len(p):
            return self.vertex_path(p.src)
        return self.make_path(p.edges[n:])

    def is_prefix(self, p: Path, q: Path) -> bool:
        """Whether p is an initial segment of q (vertices must agree for n=0)."""
        if len(p) > len(q):
            return False
        if p.is_vertex():
            return p.rng == q.rng
        return q.edges[: len(p)] == p.edges

    # -- the cocycle ----------------------------------------------------

    def act_edge(self, g, x: str) -> tuple[str, object]:
        """(g∘x, g|_x) for an arbitrary arrow g with src(g) = rngV(x).

        An explicitly supplied table row wins over letter iteration, so a
        conflicting composite row is visible to the validator.
        """
        if self.base.src(g) != self.edge_rng[x]:
            raise CorrespondenceError(f"arrow {g!r} not composable with edge {x!r}")
        if (g, x) in self.cocycle:
            return self.cocycle[(g, x)]
        cur = x
        rest = self.base.unit(self.edge_src[x])
        for letter in reversed(self.base.letters(g)):
            key = (letter, cur)
            if key not in self.cocycle:
                raise CorrespondenceError(f"cocycle row missing for {key!r}")
            cur, r = self.cocycle[key]
            rest = self.base.compose(r, rest)
        return cur, rest

    def act_on_path(self, g, p: Path) -> tuple[Path, object]:
        """(g∘p, g|_p): apply the cocycle edge by edge, threading restrictions."""
        if self.base.src(g) != p.rng:
            raise CorrespondenceError(f"arrow {g!r} not composable with path {p}")
        out = []
        cur = g
        for x in p.edges:
            y, cur = self.act_edge(cur, x)
            out.append(y)
        if not out:
            return self.vertex_path(self.base.rng(g)), cur
        return self.make_path(out), cur

    def bracket_edges(self, x: tuple, y: tuple):
        """The unique arrow h with x·h = y for bispace points, or None.

        Points are (edge, arrow) pairs with src(edge) = rng(arrow); the
        bracket exists iff the edge components agree, and is then
        inv(g_x)·g_y.
        """
        for name, (e, g) in (("x", x), ("y", y)):
            if e not in self.edge_src:
                raise CorrespondenceError(f"{name}: unknown edge {e!r}")
            if self.edge_src[e] != self.base.rng(g):
                raise CorrespondenceError(f"{name}: pair ({e!r},{g!r}) not composable")
        (ex, gx), (ey, gy) = x, y
        if ex != ey:
            return None
        return self.base.compose(self.base.inv(gx), gy)

    # -- properness -----------------------------------------------------

    def maximal_proper_subset(self) -> tuple[set, set]:
        """(Y_max, regular vertices): finite fibers, and nonempty finite fibers.

        With a finite edge set every fiber is finite, so Y_max is the whole
        object set; vertices with empty fiber are excluded from the regular
        set (their gauge projection is forced to zero in the quotient).
        """
        y_max = set(self.base.objects)
        regular = {v for v in self.base.objects if self.fiber(v)}
        return y_max, regular


def paths_of_length(C: SelfSimilarData, n: int) -> list[Path]:
    """All composable edge sequences of length n; n = 0 gives one path per vertex."""
    if n < 0:
        raise CorrespondenceError("path length must be nonnegative")
    if n == 0:
        return [C.vertex_path(v) for v in C.base.objects]
    level = [C.make_path((x,)) for x in C.edges]
    for _ in range(n - 1):
        level = [
            C.make_path(p.edges + (x,))
            for p in level
            for x in C.edges
            if p.src == C.edge_rng[x]
        ]
    return sorted(level)


def validate_correspondence(C: SelfSimilarData, wordcap: int = 4) -> list[str]:
    """Check all correspondence invariants; one message (with witness) each.

    For presented bases the cocycle law is verified on all words h, g with
    combined length at most ``wordcap``.
    """
    report = []
    for x in C.edges:
        if C.edge_rng.get(x) not in C.base.objects:
            report.append(f"edge {x!r}: range vertex not an object")
        if C.edge_src.get(x) not in C.base.objects:
            report.append(f"edge {x!r}: source vertex not an object")
    if report:
        return report

    if C.base.is_finite:
        arrow_pool = list(C.base.all_arrows())
        pair_pool = [
            (h, g)
            for h in arrow_pool
            for g in arrow_pool
            if C.base.composable(h, g)
        ]
    else:
        arrow_pool = [w for w in C.base.arrows_up_to(wordcap)]
        pair_pool = [
            (h, g)
            for h in arrow_pool
            for g in arrow_pool
            if C.base.word_length(h) + C.base.word_length(g) <= wordcap
        ]

    def defined(g, x):
        try:
            return C.act_edge(g, x)
        except CorrespondenceError:
            return None

    for g in arrow_pool:
        for x in C.edges:
            if C.base.src(g) != C.edge_rng[x]:
                continue
            got = defined(g, x)
            if got is None:
                report.append(f"cocycle undefined at ({g!r},{x!r})")
                continue
            y, r = got
            if C.edge_rng[y] != C.base.rng(g):
                report.append(f"range law fails: rngV({g!r}∘{x!r}) != rng(g)")
            if C.base.src(r) != C.edge_src[x]:
                report.append(f"restriction source wrong at ({g!r},{x!r})")
            if C.base.rng(r) != C.edge_src[y]:
                report.append(f"restriction range wrong at ({g!r},{x!r})")
    # unit law
    for x in C.edges:
        u = C.base.unit(C.edge_rng[x])
        got = defined(u, x)
        if got != (x, C.base.unit(C.edge_src[x])):
            report.append(f"unit law fails at edge {x!r} (witness {got!r})")
    # cocycle law
    for h, g in pair_pool:
        hg = C.base.compose(h, g)
        for x in C.edges:
            if C.base.src(g) != C.edge_rng[x]:
                continue
            lhs = defined(hg, x)
            via = defined(g, x)
            if lhs is None or via is None:
                continue  # reported above
            gx, gr = via
            outer = defined(h, gx)
            if outer is None:
                continue
            hy, hr = outer
            rhs = (hy, C.base.compose(hr, gr))
            if lhs != rhs:
                report.append(
                    f"cocycle law fails: ({C.base.format_arrow(h)}*{C.base.format_arrow(g)}, {x!r})"
                    f" gives {lhs!r} vs {rhs!r}"
                )
    # per-arrow bijectivity on fibers
    bij_pool = arrow_pool if C.base.is_finite else [
        w for w in arrow_pool if C.base.word_length(w) <= 1
    ]
    for g in bij_pool:
        dom = [x for x in C.edges if C.edge_rng[x] == C.base.src(g)]
        cod = {x for x in C.edges if C.edge_rng[x] == C.base.rng(g)}
        image = []
        for x in dom:
            got = defined(g, x)
            if got is not None:
                image.append(got[0])
        if len(set(image)) != len(dom) or set(image) != cod:
            report.append(
                f"fiber bijectivity fails for arrow {C.base.format_arrow(g)}"
                f" (image {sorted(set(image))!r} vs fiber {sorted(cod)!r})"
            )
    return report
