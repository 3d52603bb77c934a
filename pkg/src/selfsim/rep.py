"""Finite matrix representations and exact relation checking.

Bases are indexed by pairs (path point, arrow twist).  The truncated Fock
basis stacks all levels 0..N; the boundary basis uses the depth-N boundary
stage instead.  Every generator acts by the self-similar formulas

    T_e:  (p, k) -> (e p, k)            when srcV(e) = rng(p),
    T_h:  (p, k) -> (h∘p, h|_p k),
    P_v:  diagonal indicator of rng(p) = v,

with images leaving the basis annihilated (zero column), never re-truncated:
that keeps every generator an honest partial permutation and pushes all
relation defects to the top level.  All arithmetic is exact integer
arithmetic on sparse matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .correspondence import CorrespondenceError, Path, SelfSimilarData
from .islice import ONE, ZERO, SliceSemigroup, Triple
from .model import is_defined_at
from .pathspace import build_boundary, paths_of_length


class IntMatrix:
    """Sparse exact integer matrix over a fixed square index range."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries=None):
        self.n = n
        self.entries = {k: v for k, v in (entries or {}).items() if v != 0}

    @classmethod
    def zero(cls, n: int) -> "IntMatrix":
        return cls(n)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diagonal(cls, n: int, ones) -> "IntMatrix":
        return cls(n, {(i, i): 1 for i in ones})

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.n == other.n and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, frozenset(self.entries.items())))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return IntMatrix(self.n, out)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) - v
        return IntMatrix(self.n, out)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        assert self.n == other.n
        rows_of_other: dict[int, list] = {}
        for (j, k), v in other.entries.items():
            rows_of_other.setdefault(j, []).append((k, v))
        out: dict[tuple[int, int], int] = {}
        for (i, j), v in self.entries.items():
            for k, w in rows_of_other.get(j, ()):
                key = (i, k)
                out[key] = out.get(key, 0) + v * w
        return IntMatrix(self.n, out)

    def t(self) -> "IntMatrix":
        return IntMatrix(self.n, {(j, i): v for (i, j), v in self.entries.items()})

    def is_partial_permutation(self) -> bool:
        rows = set()
        cols = set()
        for (i, j), v in self.entries.items():
            if v != 1 or i in rows or j in cols:
                return False
            rows.add(i)
            cols.add(j)
        return True

    def column_support(self) -> set:
        return {j for (_, j) in self.entries}

    def columns_agree(self, other: "IntMatrix", cols) -> bool:
        """Exact equality restricted to the given column indices."""
        for (i, j), v in self.entries.items():
            if j in cols and other.entries.get((i, j), 0) != v:
                return False
        for (i, j), v in other.entries.items():
            if j in cols and self.entries.get((i, j), 0) != v:
                return False
        return True

    def nonzero_columns_vs(self, other: "IntMatrix") -> set:
        """Columns where the two matrices differ."""
        cols = set()
        for key in set(self.entries) | set(other.entries):
            if self.entries.get(key, 0) != other.entries.get(key, 0):
                cols.add(key[1])
        return cols

    def restricted_to_columns(self, cols) -> "IntMatrix":
        return IntMatrix(
            self.n, {k: v for k, v in self.entries.items() if k[1] in cols}
        )


def _arrow_key(base, g):
    return (base.word_length(g), repr(g))


@dataclass(frozen=True)
class IndexedBasis:
    """Ordered (point, twist) labels with an index lookup."""

    kind: str  # "fock" | "boundary"
    depth: int
    wordcap: int
    labels: tuple
    index: dict = field(repr=False)

    def __len__(self):
        return len(self.labels)

    def level(self, i: int) -> int:
        return len(self.labels[i][0])

    def wordlen(self, base, i: int) -> int:
        return base.word_length(self.labels[i][1])

    def interior_columns(self, base, level_budget: int, word_budget: int) -> set:
        out = set()
        for i, (p, g) in enumerate(self.labels):
            if len(p) <= self.depth - level_budget and base.word_length(g) <= self.wordcap - word_budget:
                out.add(i)
        return out


def _twists(C: SelfSimilarData, v: str, wordcap: int):
    """Arrows with range v, capped by word length, in stable order."""
    if C.base.is_finite:
        pool = [g for g in C.base.all_arrows() if C.base.rng(g) == v]
    else:
        pool = [g for g in C.base.arrows_up_to(wordcap) if C.base.rng(g) == v]
    return sorted(pool, key=lambda g: _arrow_key(C.base, g))


def fock_basis(C: SelfSimilarData, N: int, wordcap: int = 3) -> IndexedBasis:
    """Labels (p, g) over all levels 0..N with src(p) = rng(g)."""
    labels = []
    for k in range(N + 1):
        for p in paths_of_length(C, k):
            for g in _twists(C, p.src, wordcap):
                labels.append((p, g))
    labels = tuple(labels)
    return IndexedBasis("fock", N, wordcap, labels, {lab: i for i, lab in enumerate(labels)})


def boundary_basis(C: SelfSimilarData, R, N: int, wordcap: int = 3) -> IndexedBasis:
    """Labels (w, g) over the depth-N boundary stage."""
    bd = build_boundary(C, R, N)
    labels = []
    for p in bd.points():
        for g in _twists(C, p.src, wordcap):
            labels.append((p, g))
    labels = tuple(labels)
    return IndexedBasis("boundary", N, wordcap, labels, {lab: i for i, lab in enumerate(labels)})


@dataclass
class GeneratorFamily:
    """The gauge generators over one indexed basis."""

    C: SelfSimilarData
    basis: IndexedBasis

    def _matrix_from_map(self, col_to_label) -> IntMatrix:
        entries = {}
        for j, lab in enumerate(self.basis.labels):
            out = col_to_label(lab)
            if out is None:
                continue
            i = self.basis.index.get(out)
            if i is not None:
                entries[(i, j)] = 1
        return IntMatrix(len(self.basis), entries)

    def edge_matrix(self, e: str) -> IntMatrix:
        C = self.C

        def step(lab):
            p, g = lab
            if C.srcV(e) != p.rng:
                return None
            return (C.concat(C.make_path((e,)), p), g)

        return self._matrix_from_map(step)

    def arrow_matrix(self, h) -> IntMatrix:
        C = self.C

        def step(lab):
            p, g = lab
            if C.base.src(h) != p.rng:
                return None
            hp, rest = C.act_on_path(h, p)
            return (hp, C.base.compose(rest, g))

        return self._matrix_from_map(step)

    def vertex_projection(self, v: str) -> IntMatrix:
        ones = [i for i, (p, _) in enumerate(self.basis.labels) if p.rng == v]
        return IntMatrix.diagonal(len(self.basis), ones)

    def path_matrix(self, p: Path) -> IntMatrix:
        C = self.C

        def step(lab):
            q, g = lab
            if p.src != q.rng:
                return None
            return (C.concat(p, q), g)

        return self._matrix_from_map(step)

    def point_matrix(self, p: Path, h) -> IntMatrix:
        """The bispace point Theta(p)Theta(h) in one stroke."""
        C = self.C

        def step(lab):
            q, g = lab
            if C.base.src(h) != q.rng:
                return None
            hq, rest = C.act_on_path(h, q)
            return (C.concat(p, hq), C.base.compose(rest, g))

        return self._matrix_from_map(step)

    def element_matrix(self, s) -> IntMatrix:
        """A normal-form slice element as a product of generator blocks."""
        n = len(self.basis)
        if s is ZERO:
            return IntMatrix.zero(n)
        if s is ONE:
            return IntMatrix.identity(n)
        return self.point_matrix(s.p, s.g) @ self.path_matrix(s.q).t()

    def indicator(self, point_pred) -> IntMatrix:
        """Diagonal projection onto labels whose point satisfies the predicate."""
        ones = [i for i, (p, _) in enumerate(self.basis.labels) if point_pred(p)]
        return IntMatrix.diagonal(len(self.basis), ones)


def fock_generators(C: SelfSimilarData, N: int, wordcap: int = 3) -> GeneratorFamily:
    if N < 1:
        raise CorrespondenceError("Fock truncation needs N >= 1")
    return GeneratorFamily(C, fock_basis(C, N, wordcap))


def boundary_generators(C: SelfSimilarData, R, N: int, wordcap: int = 3) -> GeneratorFamily:
    return GeneratorFamily(C, boundary_basis(C, R, N, wordcap))


def _generator_arrows(C: SelfSimilarData, wordcap: int):
    if C.base.is_finite:
        return list(C.base.all_arrows())
    return list(C.base.arrows_up_to(wordcap))


def check_toeplitz_relations(
    fam: GeneratorFamily,
    C: SelfSimilarData,
    pathcap: int | None = None,
    twistcap: int = 1,
) -> dict:
    """Instantiate the three product/adjoint/bracket relation families.

    Each instance is compared exactly on its interior columns (labels whose
    level and twist leave room for the instance's shifts); bracket-instance
    defects are collected so the contract "defect support at the top level"
    can be audited by the caller.
    """
    N = fam.basis.depth
    wordcap = fam.basis.wordcap
    if pathcap is None:
        pathcap = N
    base = C.base
    report = {
        "instances": 0,
        "failures": [],
        "bracket_defect_levels": set(),
    }

    def record(name, lhs, rhs, level_budget, word_budget):
        report["instances"] += 1
        cols = fam.basis.interior_columns(base, level_budget, word_budget)
        if not lhs.columns_agree(rhs, cols):
            report["failures"].append(name)

    arrows = _generator_arrows(C, wordcap)
    arrow_mats = {g: fam.arrow_matrix(g) for g in arrows}
    n = len(fam.basis)

    # products with at least one groupoid factor
    for g, h in itertools.product(arrows, repeat=2):
        if base.word_length(g) + base.word_length(h) > wordcap:
            continue
        lhs = arrow_mats[g] @ arrow_mats[h]
        if base.composable(g, h):
            rhs = fam.arrow_matrix(base.compose(g, h))
        else:
            rhs = IntMatrix.zero(n)
        record(
            f"T[{base.format_arrow(g)}]*T[{base.format_arrow(h)}]",
            lhs,
            rhs,
            0,
            base.word_length(g) + base.word_length(h),
        )

    # adjoints of groupoid generators
    for g in arrows:
        record(
            f"T[{base.format_arrow(g)}]^*",
            arrow_mats[g].t(),
            fam.arrow_matrix(base.inv(g)),
            0,
            2 * base.word_length(g),
        )

    # commutation through the fundamental domain
    edge_mats = {e: fam.edge_matrix(e) for e in C.edges}
    for g in arrows:
        for e in C.edges:
            lhs = arrow_mats[g] @ edge_mats[e]
            if base.src(g) == C.rngV(e):
                ge, rest = C.act_edge(g, e)
                rhs = edge_mats[ge] @ fam.arrow_matrix(rest)
            else:
                rhs = IntMatrix.zero(n)
            record(
                f"T[{base.format_arrow(g)}]*T[{e}]",
                lhs,
                rhs,
                1,
                base.word_length(g),
            )

    # brackets of bispace points, level by level
    twist_pool = [g for g in arrows if base.word_length(g) <= twistcap]
    for k in range(1, pathcap + 1):
        pts = [
            (p, g)
            for p in paths_of_length(C, k)
            for g in twist_pool
            if p.src == base.rng(g)
        ]
        for (p, g), (q, h) in itertools.product(pts, repeat=2):
            lhs = fam.point_matrix(p, g).t() @ fam.point_matrix(q, h)
            if p == q:
                rhs = fam.arrow_matrix(base.compose(base.inv(g), h))
            else:
                rhs = IntMatrix.zero(n)
            name = f"T[{p.label()},{base.format_arrow(g)}]^* T[{q.label()},{base.format_arrow(h)}]"
            budget = base.word_length(g) + base.word_length(h)
            report["instances"] += 1
            cols = fam.basis.interior_columns(base, k, budget)
            if not lhs.columns_agree(rhs, cols):
                report["failures"].append(name)
            elif fam.basis.kind == "fock":
                for j in lhs.nonzero_columns_vs(rhs):
                    if fam.basis.wordlen(base, j) <= fam.basis.wordcap - budget:
                        report["bracket_defect_levels"].add(fam.basis.level(j))

    report["pass"] = not report["failures"]
    return report


def ck_defect(fam: GeneratorFamily, C: SelfSimilarData, R, v: str) -> dict:
    """The covariance defect P_v - sum of edge range projections at v."""
    if v not in R:
        raise CorrespondenceError(f"vertex {v!r} is not in the regularity set")
    n = len(fam.basis)
    total = IntMatrix.zero(n)
    fiber = C.fiber(v)
    for e in fiber:
        te = fam.edge_matrix(e)
        total = total + (te @ te.t())
    defect = fam.vertex_projection(v) - total
    vacuum = {
        i
        for i, (p, g) in enumerate(fam.basis.labels)
        if len(p) == 0 and p.rng == v
    }
    expected_fock = IntMatrix.diagonal(n, vacuum)
    low_columns = {
        i for i in range(n) if fam.basis.level(i) < fam.basis.depth
    }
    return {
        "vertex": v,
        "defect": defect,
        "degenerate": not fiber,
        "is_vacuum_projection": defect == expected_fock,
        "vanishes_below_top": defect.columns_agree(IntMatrix.zero(n), low_columns),
    }


# --- covariant representation conditions -------------------------------------


def check_covariant_rep(
    fam: GeneratorFamily,
    C: SelfSimilarData,
    R,
    elements=None,
    pathcap: int = 1,
    wordcap: int = 0,
) -> dict:
    """Exact checks of the covariance conditions on one generator family.

    phi is the diagonal representation of indicator functions of point
    sets; T is assembled from normal-form elements.  Checked: the unit and
    multiplicativity conditions, domain and codomain projections, the
    conjugation identity, the (redundant) bracket condition, idempotents
    against their indicator projections, and relative covariance over R.
    """
    S = SliceSemigroup(C)
    base = C.base
    n = len(fam.basis)
    if elements is None:
        elements = [s for s in S.elements(pathcap, wordcap, with_units=False)]
    report = {"failures": [], "instances": 0}

    def check(name, ok):
        report["instances"] += 1
        if not ok:
            report["failures"].append(name)

    interior = fam.basis.interior_columns(base, max(1, pathcap), wordcap)

    check("unit", fam.element_matrix(ONE) == IntMatrix.identity(n))

    mats = {s: fam.element_matrix(s) for s in elements}
    for s, t in itertools.product(elements, repeat=2):
        st = S.multiply(s, t)
        lhs = mats[s] @ mats[t]
        rhs = fam.element_matrix(st)
        check(
            f"multiplicativity {s!r}*{t!r}",
            lhs.columns_agree(rhs, fam.basis.interior_columns(base, 2 * pathcap, 2 * wordcap)),
        )

    for e in C.edges:
        te = fam.edge_matrix(e)
        dom = fam.indicator(lambda p, e=e: p.rng == C.srcV(e))
        cod = fam.indicator(lambda p, e=e: len(p) >= 1 and p.edges[0] == e)
        check(f"domain {e}", (te.t() @ te).columns_agree(dom, interior))
        check(f"codomain {e}", (te @ te.t()).columns_agree(cod, interior))
        # conjugation against cylinder indicators
        for f in C.edges:
            ind = fam.indicator(lambda p, f=f: len(p) >= 1 and p.edges[0] == f)
            lhs = te.t() @ ind @ te
            pulled = fam.indicator(
                lambda p, e=e, f=f: e == f and p.rng == C.srcV(e)
            )
            check(f"conjugation {e}|{f}", lhs.columns_agree(pulled, interior))
        for f in C.edges:
            tf = fam.edge_matrix(f)
            rhs = dom if e == f else IntMatrix.zero(n)
            check(f"bracket {e}|{f}", (te.t() @ tf).columns_agree(rhs, interior))

    # idempotents act as their indicator projections
    for m in paths_of_length(C, 1):
        cyl = S.cylinder(m)
        ind = fam.indicator(lambda p, m=m: C.is_prefix(m, p))
        check(
            f"idempotent {m.label()}",
            fam.element_matrix(cyl).columns_agree(ind, interior),
        )

    # relative covariance over R: phi(r^{-1}(v)) dominated by edge ranges
    report["covariance_witnesses"] = []
    for v in sorted(R):
        proj = fam.indicator(lambda p, v=v: p.rng == v)
        total = IntMatrix.zero(n)
        for e in C.fiber(v):
            te = fam.edge_matrix(e)
            total = total + (te @ te.t())
        missing = [
            fam.basis.labels[i]
            for i in sorted(proj.column_support() & interior)
            if total.entries.get((i, i), 0) == 0
        ]
        report["instances"] += 1
        if missing:
            report["failures"].append(f"covariance at {v}")
            report["covariance_witnesses"].extend(
                (v, p.label(), base.format_arrow(g)) for p, g in missing
            )
    report["pass"] = not report["failures"]
    return report


# --- cross-check against the groupoid model -----------------------------------


def germ_slice_matrix(fam: GeneratorFamily, C: SelfSimilarData, s) -> IntMatrix:
    """The matrix of a slice element computed from germ application directly.

    Independent of matrix products: each column label is moved through
    tail-stripping, the path action and twist threading in one step.
    """
    n = len(fam.basis)
    if s is ZERO:
        return IntMatrix.zero(n)
    if s is ONE:
        return IntMatrix.identity(n)
    entries = {}
    for j, (omega, k) in enumerate(fam.basis.labels):
        if not is_defined_at(C, s, omega):
            continue
        t = C.tail(omega, len(s.q))
        gt, rest = C.act_on_path(s.g, t)
        target = (C.concat(s.p, gt), C.base.compose(rest, k))
        i = fam.basis.index.get(target)
        if i is not None:
            entries[(i, j)] = 1
    return IntMatrix(n, entries)


def class_arrow_matrix(fam: GeneratorFamily, C: SelfSimilarData, cls) -> IntMatrix:
    """The column block of one germ arrow over the twists of its anchor.

    Computed from the class representative's exact germ action (germ-equal
    representatives give the same exact action on the anchor cylinder), with
    out-of-basis targets annihilated.
    """
    n = len(fam.basis)
    entries = {}
    s = cls.rep
    omega = cls.source
    for j, (pt, k) in enumerate(fam.basis.labels):
        if pt != omega:
            continue
        t = C.tail(omega, len(s.q))
        gt, rest = C.act_on_path(s.g, t)
        target = (C.concat(s.p, gt), C.base.compose(rest, k))
        i = fam.basis.index.get(target)
        if i is not None:
            entries[(i, j)] = 1
    return IntMatrix(n, entries)


def cross_check_main_theorem(
    C: SelfSimilarData, R, N: int, cap: int = 2, wordcap: int = 2
) -> dict:
    """Compare the germ-data family with the gauge-generator family.

    Direction one: every enumerated germ arrow, realized directly from germ
    application on the boundary basis, is expressed exactly as a generator
    product: some member's normal-form product matrix matches its column
    block.  Direction two: every gauge generator decomposes into enumerated
    germ arrows: at each anchor of its domain its column block is a germ
    arrow of the model, and its slice matrix agrees with germ application.
    """
    from .model import enumerate_arrows

    fam = boundary_generators(C, R, N, wordcap)
    model = enumerate_arrows(C, R, depth=N, cap=cap, wordcap=wordcap)
    report = {"checked": 0, "witnesses": []}

    for cls in model.classes:
        block = class_arrow_matrix(fam, C, cls)
        cols = {
            j for j, (pt, _) in enumerate(fam.basis.labels) if pt == cls.source
        }
        report["checked"] += 1
        realized = any(
            fam.element_matrix(m).restricted_to_columns(cols) == block
            for m in cls.members
        )
        if not realized:
            report["witnesses"].append(
                f"germ {cls.rep!r} at {cls.source.label()} not a generator product"
            )

    S = SliceSemigroup(C)
    generators = [("edge", S.edge_element(e)) for e in C.edges]
    generators += [
        ("arrow", S.arrow_element(g)) for g in _generator_arrows(C, min(wordcap, 1))
    ]
    for kind, el in generators:
        direct = germ_slice_matrix(fam, C, el)
        report["checked"] += 1
        if kind == "edge":
            via = fam.edge_matrix(el.p.edges[0])
        else:
            via = fam.arrow_matrix(el.g)
        if direct != via:
            report["witnesses"].append(f"generator {el!r} disagrees with germ action")
            continue
        for omega in model.objects():
            if not is_defined_at(C, el, omega):
                continue
            cls = model.class_of(el, omega)
            if cls is None:
                report["witnesses"].append(
                    f"generator {el!r} missing from model at {omega.label()}"
                )
                break
            cols = {
                j for j, (pt, _) in enumerate(fam.basis.labels) if pt == omega
            }
            if direct.restricted_to_columns(cols) != class_arrow_matrix(fam, C, cls):
                report["witnesses"].append(
                    f"generator {el!r} block mismatch at {omega.label()}"
                )
                break

    report["pass"] = not report["witnesses"]
    return report
