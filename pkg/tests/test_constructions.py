import pytest

from posetsat.constructions import (
    ConstructionError,
    antichain_external_family,
    build,
    external_lift,
    isolated_element_family,
    kst_almost_saturated,
    lift_parts,
    relaxed_projective_family,
    two_c2_family,
    vee_family,
    wedge_diamond_family,
)
from posetsat.copies import find_strong_copy
from posetsat.family import SetFamily, full, interval, to_mask
from posetsat.poset import all_posets, canonical_form, make_named
from posetsat.saturation import (
    PreconditionError,
    verify_almost_saturated,
    verify_external,
    verify_ordinary,
    verify_projective,
    verify_relaxed_projective,
)
from posetsat.family import containment_order

from conftest import sets_of


def lists(result):
    return sorted(result.family.as_lists())


def test_wedge_family_formula():
    r = wedge_diamond_family(6, 2)
    assert lists(r) == sorted([[], list(range(1, 8)), [1, 2, 8], [1, 7], [2, 8]])
    assert r.claimed_size == 5


@pytest.mark.parametrize("k,n", [(2, 3), (2, 4), (2, 9), (3, 5), (3, 8), (4, 7), (4, 10)])
def test_wedge_family_size_and_validity(k, n):
    r = wedge_diamond_family(n, k)
    assert len(r.family) == 2 * k + 1
    for name in (f"W_{k}", f"D_{k}"):
        assert verify_projective(r.family, make_named(name)).holds


def test_wedge_family_floor():
    with pytest.raises(ConstructionError) as info:
        wedge_diamond_family(2, 2)
    assert info.value.collision is not None
    with pytest.raises(ConstructionError):
        wedge_diamond_family(3, 3)


def test_wedge_family_minus_empty_is_two_wedges():
    for k in (2, 3):
        fam = wedge_diamond_family(2 * k, k).family
        rest = SetFamily.of([s for s in fam.sets if s], fam.n, fam.N)
        order = containment_order(rest)
        two = make_named(f"union:[W_{k - 1},W_{k - 1}]")
        assert canonical_form(order) == canonical_form(two)


def test_two_c2_listed_sets():
    r = two_c2_family(4)
    assert lists(r) == sorted([[], [3], [1, 2], [2, 3], [2, 5], [1, 2, 3, 5], [1, 3, 4], [2, 3, 4, 5]])
    for n in (4, 5, 6, 7):
        fam = two_c2_family(n).family
        assert len(fam) == 8
        assert verify_projective(fam, make_named("2C2")).holds


def test_two_c2_collision_at_three():
    with pytest.raises(ConstructionError) as info:
        two_c2_family(3)
    a, b = info.value.collision
    assert {a, b} == {to_mask([2, 3]), to_mask([2, 3, 4])}
    assert a & full(3) == b & full(3)


def test_vee_family_examples():
    assert lists(vee_family(3)) == sorted([[1, 2], [1, 3], [2, 3], [1, 2, 3]])
    assert lists(vee_family(2)) == sorted([[1], [2], [1, 2]])
    for n in range(2, 7):
        r = vee_family(n)
        assert len(r.family) == n + 1
        assert verify_ordinary(r.family, make_named("V_2"), n).holds


def test_antichain_external_examples():
    r = antichain_external_family(4, 3)
    assert r.family.as_lists() == [[1, 2, 6], [1, 3, 6]]
    assert r.family.ground.anchor == to_mask([5])
    for k in (2, 3, 4, 5):
        assert len(antichain_external_family(4, k).family) == k - 1
    with pytest.raises(ConstructionError):
        antichain_external_family(4, 1)


def test_isolated_vertex_smallest_case():
    n = 3
    r = isolated_element_family(make_named("union:[A_1,C_2]"), n, "vertex")
    lift = to_mask([n + 2])
    assert all(s & lift for s in r.family.sets)
    inner = SetFamily.of([s & ~lift for s in r.family.sets], n, n)
    assert find_strong_copy(inner, make_named("C_2")) is not None
    assert verify_external(r.family, make_named("union:[A_1,C_2]"), projection_rule="strict").holds


def test_isolated_c2_on_two_chains():
    n = 3
    r = isolated_element_family(make_named("2C2"), n, "c2")
    assert len(r.family) == 3 and to_mask([n + 1]) in r.family.sets
    assert verify_external(r.family, make_named("2C2"), projection_rule="strict").holds


def test_isolated_needs_component():
    with pytest.raises(ConstructionError, match="component absent"):
        isolated_element_family(make_named("D_2"), 3, "vertex")
    with pytest.raises(ConstructionError, match="component absent"):
        isolated_element_family(make_named("V_2"), 3, "c2")


@pytest.mark.parametrize("variant", ["vertex", "c2"])
def test_isolated_families_verify_for_every_small_poset(variant):
    checked = 0
    for size in range(1, 5):
        for p in all_posets(size):
            try:
                r = isolated_element_family(p, 3, variant)
            except ConstructionError:
                continue
            checked += 1
            assert len(r.family) == p.size - 1
            assert verify_external(r.family, p, projection_rule="strict").holds, p
    assert checked > 0


def test_relaxed_family_examples():
    n = 3
    r = relaxed_projective_family(make_named("W_2"), n)
    assert lists(r) == sorted([[], [n + 1], list(range(1, n + 3))])
    assert len(relaxed_projective_family(make_named("V_2"), n).family) == 2
    a2 = relaxed_projective_family(make_named("A_2"), n)
    assert lists(a2) == sorted([[], [n + 1]])


def test_relaxed_families_verify_for_every_small_poset():
    for size in range(1, 5):
        for p in all_posets(size):
            for n in (2, 3):
                r = relaxed_projective_family(p, n)
                expected = p.size - 1 if p.smallest_element() is not None else p.size
                assert len(r.family) == expected
                assert verify_relaxed_projective(r.family, p, n).holds, (p, n)


def test_kst_levels_examples():
    f1, f2 = kst_almost_saturated(5, 2, 2)
    assert f1.as_lists() == [[1], [2], [3]]
    assert sorted(f2.as_lists()) == sorted([[2, 3, 4, 5], [1, 3, 4, 5], [1, 2, 4, 5]])
    f1, f2 = kst_almost_saturated(3, 1, 2)
    assert f1.as_lists() == [[1], [2]]
    assert sorted(f2.as_lists()) == sorted([[2, 3], [1, 3]])
    with pytest.raises(ConstructionError):
        kst_almost_saturated(5, 1, 1)
    with pytest.raises(ConstructionError):
        kst_almost_saturated(3, 2, 2)


@pytest.mark.parametrize("s,t", [(1, 2), (2, 2), (1, 3), (2, 3)])
def test_external_lift_properties(s, t):
    n = s + t + 1
    f1, f2 = kst_almost_saturated(n, s, t)
    assert len(f1) == len(f2) == s + t - 1
    assert verify_almost_saturated(f1, f2, make_named(f"K_{s}_{t}"), n).holds
    r = external_lift(f1, f2, n)
    fam = r.family
    assert len(fam) == 2 * (len(f1) + len(f2))
    assert fam.ground.anchor == to_mask([n + 3])
    # nothing in the result is itself a probe set A u B
    ext = interval(n + 1, n + 3)
    assert all(s & ext != to_mask([n + 3]) for s in fam.sets)
    parts = lift_parts(fam, n)
    assert sorted(parts["G1"]) == sorted(f1.sets)
    base = SetFamily.of(list(f1.sets) + list(f2.sets), n, n)
    g12 = SetFamily.of(parts["G1"] + parts["G2"], n, n + 3)
    assert canonical_form(containment_order(g12)) == canonical_form(containment_order(base))
    assert verify_external(fam, make_named(f"K_{s}_{t}"), projection_rule="relaxed").holds


def test_external_lift_checks_precondition():
    f1 = SetFamily.of(sets_of([1]), 3)
    f2 = SetFamily.of(sets_of([1, 2]), 3)
    with pytest.raises((ConstructionError, PreconditionError)):
        external_lift(f1, f2, 3, make_named("K_1_2"))


def test_build_dispatch():
    assert build("vee", n=3).claimed_size == 4
    assert build("kst_levels", n=4, s=1, t=2).family.levels is not None
    with pytest.raises(ConstructionError):
        build("nothing", n=3)
    prov = build("wedge_diamond", n=6, k=2).provenance()
    assert prov["construction"] == "wedge_diamond" and prov["params"] == {"n": 6, "k": 2}
