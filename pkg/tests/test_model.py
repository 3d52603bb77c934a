import itertools

import pytest

from selfsim.instances import cuntz, exel_pardo, odometer, single_edge, single_loop, singular_vertex
from selfsim.islice import ONE, SliceSemigroup
from selfsim.model import (
    DISTINCT,
    EQUAL,
    GermError,
    check_groupoid_axioms,
    diagnose,
    enumerate_arrows,
    germ_apply,
    germ_equals,
    is_defined_at,
    restrict_to_regular,
    unknown_at,
)
from selfsim.pathspace import build_boundary

Z = (("z", 1),)
E = ()


# === germ application ===

def test_idempotent_fixes_points():
    C = cuntz(2)
    S = SliceSemigroup(C)
    omega = C.make_path("ab")
    s = S.cylinder(C.make_path("a"))
    assert germ_apply(C, {"v"}, s, omega, depth=2) == omega


def test_single_loop_shift_retruncates():
    C = single_loop()
    S = SliceSemigroup(C)
    s = S.edge_element("e")
    for n in range(1, 5):
        omega = C.make_path(("e",) * n)
        assert germ_apply(C, {"v"}, s, omega, depth=n) == omega
        assert germ_apply(C, {"v"}, s, omega, depth=n, truncate=False) is None


def test_odometer_translation_germ():
    C = odometer()
    S = SliceSemigroup(C)
    s = S.arrow_element(Z)
    omega = C.make_path("11")
    assert germ_apply(C, {"v"}, s, omega, depth=2) == C.make_path("00")


def test_undefined_is_none_not_error():
    C = cuntz(2)
    S = SliceSemigroup(C)
    s = S.adjoint(S.edge_element("a"))  # domain: points starting with a
    omega = C.make_path("bb")
    assert germ_apply(C, {"v"}, s, omega, depth=2) is None


# === germ equality verdicts ===

def test_idempotent_equals_one_on_its_cylinder():
    C = cuntz(2)
    S = SliceSemigroup(C)
    s = S.cylinder(C.make_path("a"))
    omega = C.make_path("ab")
    assert germ_equals(C, {"v"}, s, ONE, omega, depth=2) == EQUAL


def test_odometer_translation_distinct_from_one():
    C = odometer()
    S = SliceSemigroup(C)
    s = S.arrow_element(Z)
    omega = C.make_path("11")
    assert germ_equals(C, {"v"}, s, ONE, omega, depth=2) == DISTINCT


def test_unknown_at_truncation_boundary():
    # adding 4 fixes both low binary digits but carries z out: the germ
    # comparison against the identity cannot resolve at depth 2
    C = odometer()
    S = SliceSemigroup(C)
    z4 = S.arrow_element((("z", 4),))
    omega = C.make_path("11")
    assert germ_equals(C, {"v"}, z4, ONE, omega, depth=2) == unknown_at(2)


def test_complete_point_decides_exactly():
    C = single_edge()
    S = SliceSemigroup(C)
    omega = C.make_path(("e1",))  # complete at depth 2: source w has empty fiber
    s = S.cylinder(omega)
    assert germ_equals(C, {"v"}, s, ONE, omega, depth=2) == EQUAL


def test_germ_equals_requires_domain():
    C = cuntz(2)
    S = SliceSemigroup(C)
    s = S.adjoint(S.edge_element("a"))
    with pytest.raises(GermError):
        germ_equals(C, {"v"}, s, ONE, C.make_path("bb"), depth=2)


def test_verdict_stability_across_depths():
    # Equal and Distinct verdicts persist when the depth grows
    C = odometer()
    S = SliceSemigroup(C)
    for k in (1, 2, 4):
        el = S.arrow_element((("z", k),))
        for depth in (2, 3, 4):
            for omega in build_boundary(C, {"v"}, depth).points():
                v = germ_equals(C, {"v"}, el, ONE, omega, depth)
                if v.kind == "unknown":
                    continue
                # re-anchor at every extension one level deeper
                for e in C.fiber(omega.src):
                    deeper = C.concat(omega, C.make_path((e,)))
                    v2 = germ_equals(C, {"v"}, el, ONE, deeper, depth + 1)
                    if v == DISTINCT:
                        assert v2 in (DISTINCT, unknown_at(depth + 1)) or v2.kind == "distinct"
                    if v == EQUAL:
                        assert v2 == EQUAL


# === arrow enumeration ===

def test_single_loop_isotropy_lag_classes():
    C = single_loop()
    model = enumerate_arrows(C, {"v"}, depth=3, cap=2)
    assert len(model.objects()) == 1
    lags = sorted(len(cls.rep.p) - len(cls.rep.q) for cls in model.classes)
    assert lags == [-2, -1, 0, 1, 2]


def test_single_edge_pair_groupoid():
    C = single_edge()
    model = enumerate_arrows(C, {"v"}, depth=2, cap=1)
    assert len(model.objects()) == 2
    assert len(model.classes) == 4
    assert check_groupoid_axioms(model) == []


def test_o2_toeplitz_arrows_from_base_vertex():
    C = cuntz(2)
    model = enumerate_arrows(C, set(), depth=1, cap=1)
    v = C.vertex_path("v")
    from_v = [cls for cls in model.classes if cls.source == v]
    targets = sorted(cls.target.label() for cls in from_v)
    assert targets == ["(v)", "a", "b"]


def test_groupoid_axioms_on_fixtures():
    for C, R in (
        (single_edge(), {"v"}),
        (single_loop(), {"v"}),
        (cuntz(2), set()),
        (singular_vertex(), {"v", "w"}),
    ):
        model = enumerate_arrows(C, R, depth=2, cap=1)
        assert check_groupoid_axioms(model) == []


def test_germ_apply_respects_multiplication():
    # theta_{s t} = theta_s ∘ theta_t wherever everything stays inside the
    # truncation window
    for C, R in ((cuntz(2), {"v"}), (odometer(), {"v"})):
        S = SliceSemigroup(C)
        els = S.elements(1, 1, with_units=False)
        depth = 3
        pts = build_boundary(C, R, depth).points()
        for s, t in itertools.product(els, repeat=2):
            st = S.multiply(s, t)
            for omega in pts:
                if not is_defined_at(C, t, omega):
                    continue
                mid = germ_apply(C, R, t, omega, depth, truncate=False)
                if mid is None or not is_defined_at(C, s, mid):
                    continue
                out = germ_apply(C, R, s, mid, depth, truncate=False)
                if out is None or st == 0:
                    continue
                if not is_defined_at(C, st, omega):
                    continue
                direct = germ_apply(C, R, st, omega, depth, truncate=False)
                assert direct == out


def test_graph_germ_equality_matches_lag_computation():
    C = single_loop()
    S = SliceSemigroup(C)
    omega = C.make_path("eee")
    els = [t for t in S.elements(2, 0, with_units=False) if is_defined_at(C, t, omega)]
    for s, t in itertools.product(els, repeat=2):
        verdict = germ_equals(C, {"v"}, s, t, omega, depth=3)
        assert verdict.kind != "unknown"
        same_lag = len(s.p) - len(s.q) == len(t.p) - len(t.q)
        assert (verdict == EQUAL) == same_lag


# === restriction over the regularity set ===

def test_restrict_single_loop_relative_side_empty():
    report = restrict_to_regular(single_loop(), {"v"}, depth=3, cap=2)
    assert report["relative_intersection"] == []
    assert report["pass"]


def test_restrict_singular_vertex_fixture():
    report = restrict_to_regular(singular_vertex(), {"v", "w"}, depth=3, cap=2)
    assert report["pass"]
    assert report["pure_failures"] == []
    assert report["orbit_mismatch"] == []


def test_restrict_empty_regular_set_vacuous():
    report = restrict_to_regular(cuntz(2), set(), depth=2, cap=1)
    assert report["vacuous"]
    assert report["pass"]


# === diagnostics ===

def test_diagnose_single_loop_condition_l_fails():
    report = diagnose(single_loop(), {"v"})
    assert report["hausdorff"] == "yes"
    assert report["condition_l"] is False


def test_diagnose_o2_condition_l_and_cofinal():
    report = diagnose(cuntz(2), {"v"})
    assert report["condition_l"] is True
    assert report["cofinal"] is True


def test_diagnose_singular_vertex_not_cofinal():
    report = diagnose(singular_vertex(), {"v", "w"})
    assert report["condition_l"] is True
    assert report["cofinal"] is False


def test_diagnose_odometer_no_witness_at_depth6():
    report = diagnose(odometer(), {"v"}, depth=6, cap=3, wordcap=4)
    assert report["witnesses"] == []


def test_diagnose_exel_pardo_clean():
    report = diagnose(exel_pardo(), {"v"}, depth=4, cap=2, wordcap=2)
    assert report["witnesses"] == []
