import pytest
from hypothesis import given
from hypothesis import strategies as st

from schreiertrees.action import orbit_ball
from schreiertrees.trees import (
    FAR,
    NEAR,
    OLD,
    Code,
    ExplicitFinite,
    FamilyError,
    LineTree,
    MasterCodeFamily,
    NatSet,
    PlainFamily,
    SingleD,
    TLFamily,
    Vertex,
    family_from_json,
    master_code_geometry,
    parse_address_vertex,
    sl_schedule,
)


def test_plain_has_no_d_edges():
    fam = PlainFamily(3)
    assert not fam.is_d_edge("") and not fam.is_d_edge("cb")
    assert fam.neighbors(Vertex("")) == {"a": Vertex("a"), "b": Vertex("b"), "c": Vertex("c")}


def test_sl_and_master_keys(families):
    assert families["sl1"].is_d_edge("cb")
    assert families["master_b"].is_d_edge("b")
    assert families["sl1"].d_keys(4) == ["cb", "abcb", "cbcb"]
    assert families["master_b"].d_keys(14) == ["b", "cabab", "cacacabababab"]


def test_sl_schedule_addresses(families):
    L = families["sl1"].L
    assert sl_schedule(L, 0, 1) == "cb"
    assert sl_schedule(L, 1, 1) == "abcb"
    assert sl_schedule(L, 0, 2) == "cbcb"
    with pytest.raises(FamilyError):
        sl_schedule(L, 0, 0)


def test_master_geometry():
    assert master_code_geometry(Code("", "b"), 1) == ("ca", "b")
    assert master_code_geometry(Code("", "bc"), 2) == ("cababa", "cacac")
    assert master_code_geometry(Code("", "c"), 1) == ("ba", "c")


def test_single_d_decoration_trace():
    fam = SingleD("")
    assert fam.neighbors(Vertex(""))["a"] == Vertex("", NEAR)
    assert fam.neighbors(Vertex("", NEAR)) == {"a": Vertex(""), "b": Vertex("", FAR)}
    assert fam.neighbors(Vertex("a"))["a"] == Vertex("", FAR)


def test_key_ending_in_a_rejected():
    with pytest.raises(FamilyError):
        SingleD("ba")
    with pytest.raises(FamilyError):
        PlainFamily(3).is_d_edge("bb")


@pytest.mark.parametrize("name", ["plain3", "plain5", "singled", "sl1", "sl2", "master_b", "master_bc"])
def test_valency_proper_and_involutive(families, name):
    fam = families[name]
    full = len(fam.alphabet)
    for v in orbit_ball(fam, fam.root(), 8 if full == 3 else 6):
        nb = fam.neighbors(v)
        if v.tag == OLD:
            assert len(nb) == full
        else:
            assert set(nb) == {"a", "b"}
        assert len(set(nb.values())) == len(nb)
        for c, z in nb.items():
            assert fam.neighbors(z)[c] == v


@pytest.mark.parametrize("name", ["singled", "sl1", "sl2", "master_b", "master_bc"])
def test_good_coloring(families, name):
    # edges adjacent to a D-edge are colored b or c
    fam = families[name]
    for key in fam.d_keys(12):
        for end in (key, key + "a"):
            colors = set(fam.undecorated_neighbors(end))
            assert "D" in colors and "a" not in colors


@pytest.mark.parametrize("name", ["singled", "sl1", "master_b"])
def test_decoration_matches_independent_subdivision(families, name):
    """Subdivide each D-edge of the undecorated tree by hand and compare."""
    fam = families[name]
    for addr in [v.addr for v in orbit_ball(PlainFamily(3), Vertex(""), 6)]:
        und = fam.undecorated_neighbors(addr)
        dec = fam.neighbors(Vertex(addr))
        for c, z in und.items():
            if c != "D":
                assert dec[c] == Vertex(z)
            else:
                key = addr if not addr.endswith("a") else addr[:-1]
                near, far = Vertex(key, NEAR), Vertex(key, FAR)
                first = near if addr == key else far
                assert dec["a"] == first
                other = far if first == near else near
                assert fam.step(first, "b") == other
                assert fam.step(other, "a") == Vertex(z)


def test_natset_json_roundtrip():
    for s in [NatSet.finite([1, 4]), NatSet((1,), (0, 1)), NatSet((), (1,))]:
        assert NatSet.from_json(s.to_json()) == s
    assert NatSet.finite([2, 5]).members_upto(6) == [2, 5]
    assert 3 in NatSet((), (1,)) and 3 not in NatSet.finite([1])


@given(st.lists(st.integers(0, 1), max_size=6), st.lists(st.integers(0, 1), min_size=1, max_size=4))
def test_natset_normalization_preserves_bits(prefix, period):
    s = NatSet(tuple(prefix), tuple(period))
    for i in range(1, 30):
        expected = prefix[i - 1] if i <= len(prefix) else period[(i - 1 - len(prefix)) % len(period)]
        assert s.bit(i) == expected
    assert NatSet.from_json(s.to_json()) == s


def test_code_first_difference():
    assert Code("", "b").first_difference(Code("", "c")) == 1
    assert Code("bb", "c").first_difference(Code("", "b")) == 3
    assert Code("", "bc").first_difference(Code("bcbc", "bc")) is None
    with pytest.raises(FamilyError):
        Code("", "bd")


def test_vertex_text_roundtrip():
    for v in [Vertex(""), Vertex("cb", NEAR), Vertex("b", FAR)]:
        assert parse_address_vertex(str(v)) == v


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "PlainT3"},
        {"kind": "SingleD", "params": {"key": "cb"}},
        {"kind": "DKeys", "params": {"keys": ["", "cbc"]}},
        {"kind": "TL", "params": {"L": [1, 3]}},
        {"kind": "MasterCode", "params": {"code": {"prefix": "c", "period": "b"}}},
        {"kind": "SL", "params": {"N": {"finite": [[1]]}}},
        {"kind": "LineTree", "params": {"sequence": {"periodic": "ab"}}},
    ],
)
def test_family_json_roundtrip(spec):
    fam = family_from_json(spec)
    again = family_from_json(fam.to_json())
    assert again.to_json() == fam.to_json()


@pytest.mark.parametrize(
    "spec, path",
    [
        ({"kind": "Nope"}, "family.kind"),
        ([], "family"),
        ({"kind": "TL", "params": {"L": [0]}}, "family.params.L"),
        ({"kind": "MasterCode", "params": {"code": {"period": ""}}}, "code.period"),
        ({"kind": "SL", "params": {"N": {"weird": 1}}}, "family.params.N"),
    ],
)
def test_family_errors_carry_paths(spec, path):
    with pytest.raises(FamilyError) as exc:
        family_from_json(spec)
    assert exc.value.path == path


def test_line_tree_and_explicit():
    L = family_from_json({"kind": "LineTree", "params": {"sequence": {"periodic": "ab"}}})
    assert isinstance(L, LineTree)
    assert L.neighbors(0) == {"a": 1, "b": -1}
    E = ExplicitFinite([("x", "y", "a"), ("y", "z", "b")], "x")
    assert E.neighbors("y") == {"a": "x", "b": "z"}
    with pytest.raises(FamilyError):
        ExplicitFinite([("x", "y", "a"), ("y", "x", "b")])
    with pytest.raises(FamilyError):
        ExplicitFinite([("x", "y", "a"), ("x", "z", "a")])


def test_tl_keys():
    assert TLFamily(NatSet.finite([1, 3])).d_keys(10) == ["cb", "cbcbcbcb"]


def test_master_code_families_differ_only_after_divergence():
    a, b = MasterCodeFamily(Code("", "b")), MasterCodeFamily(Code("b", "c"))
    assert a.d_keys(1) == b.d_keys(1) == ["b"]
    assert a.d_keys(6) != b.d_keys(6)
