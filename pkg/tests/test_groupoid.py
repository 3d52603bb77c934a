import itertools

import pytest

from selfsim.groupoid import (
    GroupoidError,
    PresentedGroup,
    abelian_normalize,
    free_normalize,
    make_group_groupoid,
    make_set_groupoid,
    validate_groupoid,
)


# === constructors ===

def test_set_groupoid_singleton():
    G = make_set_groupoid(["v"])
    assert len(G.objects) == 1
    assert len(G.arrows) == 1
    assert G.unit("v") in G.arrows


def test_set_groupoid_empty():
    G = make_set_groupoid([])
    assert G.objects == ()
    assert G.arrows == ()
    assert validate_groupoid(G) == []


def test_set_groupoid_two_objects():
    G = make_set_groupoid(["u", "w"])
    assert len(G.objects) == 2
    assert len(G.arrows) == 2


def test_set_groupoid_duplicate_objects_rejected():
    with pytest.raises(GroupoidError):
        make_set_groupoid(["v", "v"])


def z_mod(n):
    els = [f"g{k}" for k in range(n)]
    table = {
        (f"g{a}", f"g{b}"): f"g{(a + b) % n}"
        for a in range(n)
        for b in range(n)
    }
    return els, table


def test_group_groupoid_z2():
    els, table = z_mod(2)
    G = make_group_groupoid(els, table)
    assert len(G.objects) == 1
    assert len(G.arrows) == 2
    assert validate_groupoid(G) == []


def test_group_groupoid_z4_associativity_exhaustive():
    els, table = z_mod(4)
    G = make_group_groupoid(els, table)
    # all 64 triples compose associatively
    for a, b, c in itertools.product(G.arrows, repeat=3):
        assert G.compose(G.compose(a, b), c) == G.compose(a, G.compose(b, c))


def test_group_groupoid_broken_inverse_rejected():
    els, table = z_mod(3)
    # kill invertibility while keeping closure and identity: collapse onto g0/g1
    table[("g1", "g2")] = "g1"
    table[("g2", "g1")] = "g1"
    with pytest.raises(GroupoidError) as err:
        make_group_groupoid(els, table)
    assert "axiom" in str(err.value)


# === validation ===

def test_validate_is_pure_and_idempotent():
    els, table = z_mod(2)
    G = make_group_groupoid(els, table)
    assert validate_groupoid(G) == []
    assert validate_groupoid(G) == []


def test_validate_detects_tampered_composition():
    els, table = z_mod(4)
    G = make_group_groupoid(els, table)
    bad = dict(G.compose_table)
    bad[("g1", "g1")] = "g3"
    H = make_set_groupoid(["x"])  # recycled shell, rebuilt below
    H = G.__class__(
        objects=G.objects,
        arrows=G.arrows,
        src_table=G.src_table,
        rng_table=G.rng_table,
        compose_table=bad,
        inv_table=G.inv_table,
        unit_table=G.unit_table,
    )
    report = validate_groupoid(H)
    assert any("associativity" in line for line in report)


def test_validate_detects_missing_unit():
    G = make_set_groupoid(["v", "w"])
    H = G.__class__(
        objects=G.objects,
        arrows=G.arrows,
        src_table=G.src_table,
        rng_table=G.rng_table,
        compose_table=G.compose_table,
        inv_table=G.inv_table,
        unit_table={"v": G.unit("v")},
    )
    report = validate_groupoid(H)
    assert any("unit" in line for line in report)


# === presented groups ===

def test_free_normalize_cancels():
    w = (("a", 1), ("a", -1), ("b", 2), ("b", -1))
    assert free_normalize(w) == (("b", 1),)


def test_abelian_normalize_collects():
    w = (("z", 1), ("z", 1), ("z", -3))
    assert abelian_normalize(w) == (("z", -1),)


def test_presented_group_arithmetic():
    Z = PresentedGroup(generators=("z",), normalize_name="abelian")
    z = (("z", 1),)
    assert Z.compose(z, Z.inv(z)) == ()
    assert Z.word_length(Z.compose(z, z)) == 2
    assert Z.letters((("z", -2),)) == [(("z", -1),), (("z", -1),)]


def test_presented_group_enumeration_cap():
    Z = PresentedGroup(generators=("z",), normalize_name="abelian")
    words = Z.arrows_up_to(3)
    # e, z^{±1}, z^{±2}, z^{±3}
    assert len(words) == 7
    assert all(Z.word_length(w) <= 3 for w in words)
    assert words == Z.arrows_up_to(3)  # deterministic order
