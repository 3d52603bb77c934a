"""Built-in example instances.

These are the stock correspondences every module's tests run against:

* ``cuntz(n)``      -- one vertex, n loop edges, trivial group (O_n data).
* ``single_edge``   -- two vertices v <- w, one edge.
* ``single_loop``   -- one vertex, one loop.
* ``singular_vertex`` -- a 2-cycle v <-> w plus a source-only vertex u
                         feeding v;
                         u has empty incoming fiber, hence is irregular.
* ``odometer``      -- the binary adding machine over the presented group Z.
* ``exel_pardo``    -- Z/2 flipping two loops, restriction the flip itself.

Regular vertex sets default to the automatic choice (nonempty finite fiber).
"""

from __future__ import annotations

from .correspondence import SelfSimilarData
from .groupoid import PresentedGroup, make_group_groupoid, make_set_groupoid


def cuntz(n: int = 2) -> SelfSimilarData:
    """n loops at one vertex with trivial cocycle; edges are a, b, c, ..."""
    assert 1 <= n <= 26
    base = make_set_groupoid(["v"])
    edges = [chr(ord("a") + i) for i in range(n)]
    return SelfSimilarData.build(
        base, edges, {x: "v" for x in edges}, {x: "v" for x in edges}
    )


def single_edge() -> SelfSimilarData:
    base = make_set_groupoid(["v", "w"])
    return SelfSimilarData.build(base, ["e1"], {"e1": "v"}, {"e1": "w"})


def single_loop() -> SelfSimilarData:
    base = make_set_groupoid(["v"])
    return SelfSimilarData.build(base, ["e"], {"e": "v"}, {"e": "v"})


def singular_vertex() -> SelfSimilarData:
    """2-cycle a: v<-w, b: w<-v plus leaf edge c: v<-u; u is irregular."""
    base = make_set_groupoid(["v", "w", "u"])
    return SelfSimilarData.build(
        base,
        ["a", "b", "c"],
        {"a": "v", "b": "w", "c": "v"},
        {"a": "w", "b": "v", "c": "u"},
    )


def odometer() -> SelfSimilarData:
    """Binary adding machine: z∘0 = 1 with trivial carry, z∘1 = 0 with carry z."""
    base = PresentedGroup(generators=("z",), normalize_name="abelian")
    z = (("z", 1),)
    e = ()
    return SelfSimilarData.build(
        base,
        ["0", "1"],
        {"0": "v", "1": "v"},
        {"0": "v", "1": "v"},
        cocycle={(z, "0"): ("1", e), (z, "1"): ("0", z)},
    )


def exel_pardo() -> SelfSimilarData:
    """Z/2 swapping two loops x, y; the restriction is the flip everywhere."""
    base = make_group_groupoid(
        ["e", "s"],
        {
            ("e", "e"): "e",
            ("e", "s"): "s",
            ("s", "e"): "s",
            ("s", "s"): "e",
        },
        object_name="v",
    )
    return SelfSimilarData.build(
        base,
        ["x", "y"],
        {"x": "v", "y": "v"},
        {"x": "v", "y": "v"},
        cocycle={("s", "x"): ("y", "s"), ("s", "y"): ("x", "s")},
    )


def auto_regular(C: SelfSimilarData) -> frozenset:
    """The default regularity set: vertices with nonempty (finite) fiber."""
    _, regular = C.maximal_proper_subset()
    return frozenset(regular)


ALL = {
    "o2": cuntz,
    "o3": lambda: cuntz(3),
    "single_edge": single_edge,
    "single_loop": single_loop,
    "singular_vertex": singular_vertex,
    "odometer": odometer,
    "exel_pardo": exel_pardo,
}
