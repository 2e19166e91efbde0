import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetsat.poset import (
    Poset,
    PosetError,
    all_posets,
    canonical_form,
    disjoint_union,
    has_uctp,
    make_named,
    poset_from_json,
    structure,
)


@st.composite
def posets(draw, max_size=6):
    size = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Poset.from_relations(size, chosen)


def iso(p, q):
    return p.size == q.size and canonical_form(p) == canonical_form(q)


def test_diamond_shape():
    d = make_named("D_2")
    assert d.size == 4
    a, b1, b2, c = range(4)
    assert d.lt(a, b1) and d.lt(a, b2) and d.lt(b1, c) and d.lt(b2, c)
    assert not d.comparable(b1, b2)


def test_single_point():
    p = make_named("A_1")
    assert p.size == 1 and p.relations() == []


@pytest.mark.parametrize("name", ["2C_2", "2C2"])
def test_two_chains(name):
    p = make_named(name)
    assert p.size == 4
    assert len(p.relations()) == 2
    assert iso(p, disjoint_union([make_named("C_2"), make_named("C_2")]))


def test_named_parse_errors():
    for bad in ("Q_3", "D_0", "K_1", "union:[A_1", ""):
        with pytest.raises(PosetError):
            make_named(bad)


def test_dual_examples():
    assert make_named("V_3").dual() == make_named("W_3")
    assert iso(make_named("A_4").dual(), make_named("A_4"))
    d = make_named("D_2")
    assert d.dual().dual() == d


def test_disjoint_union_examples():
    assert iso(disjoint_union([make_named("A_1")]), make_named("A_1"))
    assert iso(disjoint_union([make_named("A_2"), make_named("A_3")]), make_named("A_5"))


def test_validation_rejects_cycles():
    with pytest.raises(PosetError):
        Poset(2, (0b10, 0b01))
    with pytest.raises(PosetError):
        Poset(1, (0b1,))
    with pytest.raises(PosetError):
        Poset(3, (0b010, 0b100, 0))  # 0<1<2 but 0 not below 2


def test_from_relations_rejects_cycle():
    with pytest.raises(PosetError):
        Poset.from_relations(3, [(0, 1), (1, 2), (2, 0)])


def test_structure_examples():
    s = structure(make_named("D_2"))
    assert (s.height, s.width, len(s.components)) == (3, 2, 1)
    s = structure(make_named("A_3"))
    assert (s.height, s.width) == (1, 3)
    assert all(c.isolated_vertex for c in s.components) and len(s.components) == 3
    s = structure(make_named("2C2"))
    assert len(s.components) == 2 and all(c.isolated_c2 for c in s.components)


def test_kst_levels():
    s = structure(make_named("K_2_3"))
    assert s.lower_level == (0, 1) and s.upper_level == (2, 3, 4)
    assert s.height == 2


def test_uctp_examples():
    assert has_uctp(make_named("W_2")) == (True, [])
    ok, bad = has_uctp(make_named("C_2"))
    assert not ok and bad == [0]
    assert has_uctp(make_named("A_3")) == (True, [])


def test_uctp_directions():
    # V_2's bottom has two covers, each top has none: fine upward, and the
    # tops' unique lower cover is shared, so fine downward too.
    v = make_named("V_2")
    assert has_uctp(v, "both")[0]
    assert not has_uctp(make_named("C_3"), "down")[0]
    with pytest.raises(ValueError):
        has_uctp(v, "sideways")


def test_json_round_trip():
    p = make_named("K_2_2")
    assert poset_from_json(p.to_json()) == p
    with pytest.raises(PosetError):
        poset_from_json({"relations": []})


def test_enumeration_counts():
    # unlabelled posets: 1, 2, 5, 16, 63
    assert [len(all_posets(k)) for k in range(1, 6)] == [1, 2, 5, 16, 63]


@settings(max_examples=60, deadline=None)
@given(posets())
def test_dual_is_involution_and_reverses(p):
    d = p.dual()
    assert d.dual() == p
    for i in range(p.size):
        for j in range(p.size):
            assert p.lt(i, j) == d.lt(j, i)


@settings(max_examples=60, deadline=None)
@given(posets())
def test_width_matches_brute_force(p):
    from itertools import combinations

    best = max(k for k in range(1, p.size + 1)
               if any(p.induced(c).is_antichain() for c in combinations(range(p.size), k)))
    assert p.width == best


@settings(max_examples=60, deadline=None)
@given(posets())
def test_height_matches_longest_chain(p):
    from itertools import permutations

    longest = 1
    for k in range(2, p.size + 1):
        if any(all(p.lt(c[i], c[i + 1]) for i in range(k - 1)) for c in permutations(range(p.size), k)):
            longest = k
    assert p.height == longest
