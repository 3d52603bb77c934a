"""Truncated universal path spaces and the associated commutative algebra.

``OmegaTrunc`` enumerates all path orbits of lengths m..n together with the
prefix projections; ``BoundaryTrunc`` keeps the length-n paths plus every
shorter path whose source vertex lies outside the regularity set (those are
the points that can never be forced to extend).

``LevelFunction`` holds one finitely supported scalar function per level.
The product is computed in the character picture: the cumulative transform
Phi(f)(x) = sum_{k<=j} f_k(prefix_k x) identifies the algebra with pointwise
functions on the truncated space, products are taken there, and the result
is pulled back by prefix differencing.  (A literal transcription of the
printed two-sided sum formula would double-count the top term; the character
picture is the semantics that matches the spectrum description, and is what
this module implements.)

Scalars are exact: ``fractions.Fraction`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .correspondence import CorrespondenceError, Path, SelfSimilarData, paths_of_length


@dataclass(frozen=True)
class OmegaTrunc:
    """All path points of lengths lo..hi with prefix projections."""

    lo: int
    hi: int
    levels: dict[int, list[Path]] = field(repr=False)

    def points(self) -> list[Path]:
        out = []
        for k in range(self.lo, self.hi + 1):
            out.extend(self.levels[k])
        return out

    def __len__(self) -> int:
        return sum(len(self.levels[k]) for k in range(self.lo, self.hi + 1))


def build_omega(C: SelfSimilarData, m: int, n: int) -> OmegaTrunc:
    if not 0 <= m <= n:
        raise CorrespondenceError(f"bad depth range [{m},{n}]")
    return OmegaTrunc(m, n, {k: paths_of_length(C, k) for k in range(m, n + 1)})


def project(C: SelfSimilarData, p: Path, m: int) -> Path:
    """Truncation onto the depth-m stage: prefix of length m, short paths fixed."""
    if len(p) <= m:
        return p
    return C.prefix(p, m)


def orbit_invariant_closure(C: SelfSimilarData, vertices) -> frozenset:
    """Closure of a vertex set under the object orbit relation of the base."""
    closed = set(vertices)
    grown = True
    while grown:
        grown = False
        if C.base.is_finite:
            arrows = C.base.all_arrows()
        else:
            arrows = []  # one object only; nothing to close up
        for g in arrows:
            if C.base.src(g) in closed and C.base.rng(g) not in closed:
                closed.add(C.base.rng(g))
                grown = True
            if C.base.rng(g) in closed and C.base.src(g) not in closed:
                closed.add(C.base.src(g))
                grown = True
    return frozenset(closed)


def validate_regular_set(C: SelfSimilarData, R) -> list[str]:
    """R must be a G-invariant set of objects with finite (always) fibers."""
    report = []
    unknown = set(R) - set(C.base.objects)
    if unknown:
        report.append(f"regular set contains non-objects {sorted(unknown)!r}")
        return report
    if orbit_invariant_closure(C, R) != frozenset(R):
        report.append("regular set is not invariant under the object orbit relation")
    return report


@dataclass(frozen=True)
class BoundaryTrunc:
    """Depth-n stage of the universal boundary for a regularity set R."""

    depth: int
    regular: frozenset
    points_list: tuple[Path, ...]

    def points(self) -> list[Path]:
        return list(self.points_list)

    def __contains__(self, p: Path) -> bool:
        return p in set(self.points_list)

    def __len__(self) -> int:
        return len(self.points_list)


def build_boundary(C: SelfSimilarData, R, n: int) -> BoundaryTrunc:
    """Length-n paths plus all shorter paths with source outside R."""
    problems = validate_regular_set(C, R)
    if problems:
        raise CorrespondenceError("; ".join(problems))
    pts = []
    for k in range(n + 1):
        for p in paths_of_length(C, k):
            if k == n or p.src not in R:
                pts.append(p)
    pts.sort(key=lambda p: (len(p), p.edges, p.rng))
    return BoundaryTrunc(n, frozenset(R), tuple(pts))


def circ_identification(C: SelfSimilarData, m: int, n: int):
    """Pair each point of Omega_[m,n] with (length-m prefix, tail).

    Returns a list of (point, prefix, tail) triples; the pairing is a
    bijection onto prefix-tail pairs by construction, which the caller can
    audit by recombining.
    """
    if not 0 <= m <= n:
        raise CorrespondenceError(f"bad depth range [{m},{n}]")
    omega = build_omega(C, m, n)
    out = []
    for p in omega.points():
        out.append((p, C.prefix(p, m), C.tail(p, m)))
    return out


# --- the level-graded commutative algebra -----------------------------------


@dataclass(frozen=True)
class LevelFunction:
    """Finitely supported scalar functions, one component per level in lo..hi."""

    lo: int
    hi: int
    components: tuple  # tuple of (level, point, Fraction) triples, sorted

    @staticmethod
    def make(lo: int, hi: int, entries) -> "LevelFunction":
        """entries: iterable of (level, Path, scalar); zeros are dropped."""
        acc: dict[tuple[int, Path], Fraction] = {}
        for level, point, value in entries:
            if not lo <= level <= hi:
                raise CorrespondenceError(f"level {level} outside [{lo},{hi}]")
            if len(point) != level:
                raise CorrespondenceError(f"point {point} not at level {level}")
            v = acc.get((level, point), Fraction(0)) + Fraction(value)
            acc[(level, point)] = v
        comps = tuple(
            (lvl, pt, val)
            for (lvl, pt), val in sorted(acc.items(), key=lambda kv: (kv[0][0], kv[0][1]))
            if val != 0
        )
        return LevelFunction(lo, hi, comps)

    def at(self, level: int, point: Path) -> Fraction:
        for lvl, pt, val in self.components:
            if lvl == level and pt == point:
                return val
        return Fraction(0)

    def __add__(self, other: "LevelFunction") -> "LevelFunction":
        _require_same_range(self, other)
        return LevelFunction.make(
            self.lo, self.hi, list(self.components) + list(other.components)
        )

    def star(self) -> "LevelFunction":
        """Pointwise involution; real scalars make it the identity."""
        return self


def _require_same_range(a: LevelFunction, b: LevelFunction) -> None:
    if (a.lo, a.hi) != (b.lo, b.hi):
        raise CorrespondenceError(
            f"mismatched level ranges [{a.lo},{a.hi}] vs [{b.lo},{b.hi}]"
        )


def cumulative_transform(C: SelfSimilarData, a: LevelFunction) -> dict:
    """Phi(a): point of Omega_[lo,hi] -> sum of components over its prefixes."""
    omega = build_omega(C, a.lo, a.hi)
    out = {}
    for p in omega.points():
        total = Fraction(0)
        for k in range(a.lo, len(p) + 1):
            total += a.at(k, project(C, p, k))
        out[p] = total
    return out


def from_cumulative(C: SelfSimilarData, lo: int, hi: int, values: dict) -> LevelFunction:
    """Inverse of the cumulative transform by prefix differencing."""
    entries = []
    for p, val in values.items():
        k = len(p)
        if k > lo:
            val = val - values[project(C, p, k - 1)]
        if val != 0:
            entries.append((k, p, val))
    return LevelFunction.make(lo, hi, entries)


def amn_multiply(C: SelfSimilarData, a: LevelFunction, b: LevelFunction) -> LevelFunction:
    """Product in the character picture: transform, multiply pointwise, invert."""
    _require_same_range(a, b)
    pa = cumulative_transform(C, a)
    pb = cumulative_transform(C, b)
    return from_cumulative(C, a.lo, a.hi, {p: pa[p] * pb[p] for p in pa})


@dataclass(frozen=True)
class Character:
    """Evaluation of the cumulative transform at one point (a multiplicative functional)."""

    point: Path

    def __call__(self, C: SelfSimilarData, a: LevelFunction) -> Fraction:
        total = Fraction(0)
        for k in range(a.lo, len(self.point) + 1):
            total += a.at(k, project(C, self.point, k))
        return total


def amn_characters(C: SelfSimilarData, m: int, n: int) -> list[Character]:
    """One character per point of the truncated space, in stable point order."""
    return [Character(p) for p in build_omega(C, m, n).points()]
