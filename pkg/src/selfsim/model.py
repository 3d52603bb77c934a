"""Germ arithmetic over truncated boundary stages and the finite model groupoid.

A germ is a normal-form element anchored at a boundary point in its domain.
Equality of germs is decided through cylinder idempotents: [s, w] = [t, w]
iff s e = t e for the cylinder idempotent e of some finite extension of the
anchor.  At a finite truncation this is decidable outright when the anchor
is a complete point (no extensions exist), and otherwise yields one of three
verdicts: Equal and Distinct are final, UnknownAtDepth records that the
available tail was exhausted while the group parts still disagreed.

The arrow enumeration keeps Unknown pairs unmerged and flagged; soundness
over completeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .correspondence import CorrespondenceError, Path, SelfSimilarData
from .islice import ONE, ZERO, SliceSemigroup, Triple
from .pathspace import BoundaryTrunc, build_boundary


@dataclass(frozen=True)
class Verdict:
    kind: str  # "equal" | "distinct" | "unknown"
    depth: int | None = None

    def __repr__(self):
        if self.kind == "unknown":
            return f"UnknownAtDepth({self.depth})"
        return self.kind.capitalize()


EQUAL = Verdict("equal")
DISTINCT = Verdict("distinct")


def unknown_at(depth: int) -> Verdict:
    return Verdict("unknown", depth)


class GermError(ValueError):
    """Raised when a germ operation is requested outside its domain."""


def is_defined_at(C: SelfSimilarData, s, omega: Path) -> bool:
    if s is ZERO:
        return False
    if s is ONE:
        return True
    return C.is_prefix(s.q, omega)


def germ_apply(C, R, s, omega: Path, depth: int, truncate: bool = True):
    """The image of a boundary point under a slice element.

    Returns None when the point is outside the domain (undefined, which is
    distinct from an error).  Output longer than the truncation depth is cut
    back to the depth when ``truncate`` is set and reported as None (image
    annihilated) otherwise.
    """
    if s is ONE:
        return omega
    if not is_defined_at(C, s, omega):
        return None
    t = C.tail(omega, len(s.q))
    gt, _rest = C.act_on_path(s.g, t)
    out = C.concat(s.p, gt)
    if len(out) > depth:
        if not truncate:
            return None
        out = C.prefix(out, depth)
    return out


def _is_complete_point(C: SelfSimilarData, omega: Path, depth: int) -> bool:
    """Whether the cylinder of a truncated point contains only the point itself."""
    return len(omega) < depth or not C.fiber(omega.src)


def _localize(S: SliceSemigroup, s, omega: Path):
    """s restricted to the cylinder of the anchor, as a normal form."""
    return S.multiply(s, S.cylinder(omega))


def germ_equals(C, R, s, t, omega: Path, depth: int) -> Verdict:
    """Decide germ equality of two elements at a boundary point."""
    S = SliceSemigroup(C)
    for el in (s, t):
        if not is_defined_at(C, el, omega):
            raise GermError(f"element {el!r} not defined at {omega.label()}")
    a = _localize(S, s, omega)
    b = _localize(S, t, omega)
    if a == b:
        return EQUAL
    if _is_complete_point(C, omega, depth):
        return DISTINCT
    # anchored forms share the cylinder component; first components extend
    # canonically under deeper cylinders, group parts may still merge
    assert isinstance(a, Triple) and isinstance(b, Triple)
    if a.p != b.p:
        return DISTINCT
    return unknown_at(depth)


# --- arrow enumeration -------------------------------------------------------


@dataclass
class GermClass:
    """A germ equivalence class at one anchor point (within caps)."""

    rep: Triple
    source: Path
    target: Path
    members: list = field(default_factory=list)
    unknown: bool = False

    def key(self):
        return (self.source, self.rep)


@dataclass
class ModelGroupoid:
    """Enumerated arrows of the truncated transformation groupoid.

    A germ with more adjoint letters than plain ones maps a depth-d anchor
    to a coarser truncation, so range bookkeeping works up to prefix
    compatibility and anchor lookups refine coarse points back to full
    depth.
    """

    C: SelfSimilarData
    regular: frozenset
    depth: int
    boundary: BoundaryTrunc
    classes: list[GermClass]
    by_point: dict = field(default_factory=dict)

    def objects(self) -> list[Path]:
        return self.boundary.points()

    def compatible(self, a: Path, b: Path) -> bool:
        """Whether two truncated points describe the same cylinder germ-wise."""
        return self.C.is_prefix(a, b) or self.C.is_prefix(b, a)

    def refine(self, tau: Path):
        """A full-precision enumerated anchor inside the cylinder of tau."""
        if tau in self.by_point:
            return tau
        for omega in self.boundary.points():
            if self.C.is_prefix(tau, omega):
                return omega
        return None

    def class_of(self, s, omega: Path):
        """The enumerated class containing [s, omega], or None outside caps."""
        if not is_defined_at(self.C, s, omega):
            return None
        for cls in self.by_point.get(omega, []):
            verdict = germ_equals(self.C, self.regular, s, cls.rep, omega, self.depth)
            if verdict == EQUAL:
                return cls
        return None

    def unit_class(self, omega: Path):
        return self.class_of(ONE, omega)

    def compose(self, outer: GermClass, inner: GermClass):
        """[s, theta_t(w)] * [t, w] = [st, w]; None if outside the table."""
        if inner.target is None or not self.compatible(outer.source, inner.target):
            return None
        S = SliceSemigroup(self.C)
        st = S.multiply(outer.rep, inner.rep)
        if st is ZERO or not is_defined_at(self.C, st, inner.source):
            return None
        return self.class_of(st, inner.source)

    def inverse(self, cls: GermClass):
        if cls.target is None:
            return None
        anchor = self.refine(cls.target)
        if anchor is None:
            return None
        S = SliceSemigroup(self.C)
        return self.class_of(S.adjoint(cls.rep), anchor)


def enumerate_arrows(
    C: SelfSimilarData, R, depth: int, cap: int, wordcap: int = 2
) -> ModelGroupoid:
    """All germ classes [s, w] with path components capped, deduplicated.

    Comparisons returning UnknownAtDepth keep both candidates and set the
    ``unknown`` flag on the classes involved.
    """
    S = SliceSemigroup(C)
    boundary = build_boundary(C, R, depth)
    pool = [el for el in S.elements(cap, wordcap, with_units=False)]
    model = ModelGroupoid(C, frozenset(R), depth, boundary, [])
    for omega in boundary.points():
        classes_here: list[GermClass] = []
        # the unit germ first, so units are always enumerated
        candidates = [S.cylinder(omega)] + [s for s in pool if is_defined_at(C, s, omega)]
        for s in candidates:
            placed = False
            unknown_seen = False
            for cls in classes_here:
                verdict = germ_equals(C, R, s, cls.rep, omega, depth)
                if verdict == EQUAL:
                    cls.members.append(s)
                    placed = True
                    break
                if verdict.kind == "unknown":
                    unknown_seen = True
                    cls.unknown = True
            if not placed:
                target = germ_apply(C, R, s, omega, depth, truncate=True)
                cls = GermClass(rep=s, source=omega, target=target, members=[s])
                cls.unknown = unknown_seen
                classes_here.append(cls)
        model.by_point[omega] = classes_here
        model.classes.extend(classes_here)
    return model


def check_groupoid_axioms(model: ModelGroupoid) -> list[str]:
    """Exhaustive associativity/unit/inverse audit on the enumerated tables."""
    problems = []
    composable = []
    for a in model.classes:
        for b in model.classes:
            c = model.compose(b, a)
            if c is not None:
                composable.append((b, a, c))
    for b, a, c in composable:
        range_ok = c.target is not None and b.target is not None and model.compatible(
            c.target, b.target
        )
        if c.source != a.source or not range_ok:
            problems.append(f"composite endpoints wrong for {b.key()}*{a.key()}")
    # associativity where all composites realized
    for b, a, c in composable:
        for z in model.classes:
            if z.source != b.target:
                continue
            zb = model.compose(z, b)
            zc = model.compose(z, c)
            if zb is None or zc is None:
                continue
            left = model.compose(zb, a)
            if left is not None and left is not zc:
                problems.append(
                    f"associativity fails at {z.key()},{b.key()},{a.key()}"
                )
    for cls in model.classes:
        u_src = model.unit_class(cls.source)
        if u_src is None or model.compose(cls, u_src) is not cls:
            problems.append(f"unit not right-neutral at {cls.key()}")
        anchor = None if cls.target is None else model.refine(cls.target)
        u_tgt = None if anchor is None else model.unit_class(anchor)
        if u_tgt is not None:
            left = model.compose(u_tgt, cls)
            # the composite cylinder may exceed the stage depth; only a
            # realized composite can violate neutrality
            if left is not None and left is not cls:
                problems.append(f"unit not left-neutral at {cls.key()}")
        inv = model.inverse(cls)
        if inv is None:
            problems.append(f"inverse missing for {cls.key()}")
            continue
        back = model.compose(inv, cls)
        if back is None or back is not model.unit_class(cls.source):
            problems.append(f"inverse law fails at {cls.key()}")
    return problems


# --- restriction to the regularity set --------------------------------------


def restrict_to_regular(C: SelfSimilarData, R, depth: int, cap: int, wordcap: int = 2):
    """Audit the restriction structure over R inside the full truncated space.

    The verification runs in the model over the untruncated-by-R stage (the
    relative boundary removes R-sourced paths, so there the intersection
    with R is empty and the check is vacuous; the report records both).
    Checks: every enumerated germ from an R-vertex to an R-vertex comes from
    a pure group element, and the orbit of R consists exactly of the
    R-sourced paths.
    """
    report = {
        "relative_intersection": [],  # R ∩ (relative boundary) is always empty
        "pure_failures": [],
        "orbit_mismatch": [],
        "vacuous": not R,
        "pass": True,
    }
    relative = build_boundary(C, R, depth)
    report["relative_intersection"] = [
        p.label() for p in relative.points() if p.is_vertex() and p.rng in R
    ]
    if not R:
        return report
    model = enumerate_arrows(C, set(), depth, cap, wordcap)
    r_points = [p for p in model.objects() if p.is_vertex() and p.rng in R]
    for cls in model.classes:
        src_in = cls.source.is_vertex() and cls.source.rng in R
        tgt_in = cls.target is not None and cls.target.is_vertex() and cls.target.rng in R
        if src_in and tgt_in:
            if len(cls.rep.p) != 0 or len(cls.rep.q) != 0:
                report["pure_failures"].append(
                    (repr(cls.rep), cls.source.label())
                )
    # orbit of R under enumerated arrows vs R-sourced paths
    reached = {p for p in r_points}
    grown = True
    while grown:
        grown = False
        for cls in model.classes:
            if cls.source in reached and cls.target is not None and cls.target not in reached:
                reached.add(cls.target)
                grown = True
    expected = {p for p in model.objects() if p.src in R}
    if reached != expected:
        sym = sorted(p.label() for p in reached.symmetric_difference(expected))
        report["orbit_mismatch"] = sym
    report["pass"] = not report["pure_failures"] and not report["orbit_mismatch"]
    return report


# --- diagnostics -------------------------------------------------------------


def is_graph_instance(C: SelfSimilarData) -> bool:
    """Trivial cocycle: a finite base all of whose arrows are units."""
    return C.base.is_finite and all(C.base.is_unit(g) for g in C.base.all_arrows())


def _cycle_vertices(C: SelfSimilarData) -> set:
    """Vertices lying on some cycle (walking edges from range to source)."""
    on_cycle = set()
    for start in C.base.objects:
        seen = {start}
        frontier = {start}
        while frontier:
            nxt = set()
            for v in frontier:
                for e in C.fiber(v):
                    w = C.srcV(e)
                    if w == start:
                        on_cycle.add(start)
                    if w not in seen:
                        seen.add(w)
                        nxt.add(w)
            frontier = nxt
    return on_cycle


def _condition_l_holds(C: SelfSimilarData) -> bool:
    """Every cycle has an exit: no cycle stays inside single-fiber vertices."""
    single = {v for v in C.base.objects if len(C.fiber(v)) == 1}
    for start in single:
        v = start
        for _ in range(len(C.base.objects) + 1):
            e = C.fiber(v)[0]
            v = C.srcV(e)
            if v not in single:
                break
            if v == start:
                return False
    return True


def _reachable(C: SelfSimilarData, v: str) -> set:
    """Vertices w admitting a path with range v and source w."""
    seen = {v}
    frontier = {v}
    while frontier:
        nxt = set()
        for u in frontier:
            for e in C.fiber(u):
                w = C.srcV(e)
                if w not in seen:
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
    return seen


def diagnose(C: SelfSimilarData, R, depth: int = 6, cap: int = 3, wordcap: int = 4):
    """Model diagnostics: exact graph verdicts, bounded witnesses otherwise."""
    report = {"witnesses": []}
    if is_graph_instance(C):
        report["hausdorff"] = "yes"
        report["condition_l"] = _condition_l_holds(C)
        cycles = _cycle_vertices(C)
        singular = {v for v in C.base.objects if not C.fiber(v)}
        targets = cycles | singular
        report["cofinal"] = all(
            targets <= _reachable(C, v) for v in C.base.objects
        )
        return report
    # self-similar case: search for germ comparisons that stay unresolved
    S = SliceSemigroup(C)
    boundary = build_boundary(C, R, depth)
    for g in C.base.arrows_up_to(wordcap):
        if C.base.is_unit(g):
            continue
        el = S.arrow_element(g)
        for omega in boundary.points():
            if not is_defined_at(C, el, omega):
                continue
            verdict = germ_equals(C, R, el, ONE, omega, depth)
            if verdict.kind == "unknown":
                report["witnesses"].append(
                    (C.base.format_arrow(g), omega.label(), repr(verdict))
                )
    report["hausdorff"] = f"unknown({depth})"
    report["condition_l"] = None
    report["cofinal"] = None
    return report
