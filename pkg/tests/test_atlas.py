import pytest
from hypothesis import given
from hypothesis import strategies as st

from crownkit.atlas import (
    HERMITIAN_SELF,
    HERMITIAN_TARGET,
    OTHER_EXCEPTIONAL,
    RIGID,
    list_all,
    lookup,
    lookup_name,
    match_name,
    normalize_name,
    partition_violations,
)
from crownkit.errors import OutOfRange, UnknownSpace
from printed_tables import HERMITIAN_SELF_ROWS, HERMITIAN_TARGET_ROWS, RIGID_ROWS


def _bounds(text):
    return {tuple(c.strip().split(">")) for c in text.split(",") if c.strip()}


def test_row_counts():
    rows = list_all()
    assert len(rows) == 16
    assert sum(not e.marker for e in rows) == 15 and sum(e.marker for e in rows) == 1
    classes = [e.crown_class for e in rows]
    assert classes.count(HERMITIAN_SELF) == 6
    assert classes.count(HERMITIAN_TARGET) == 3
    assert classes.count(RIGID) == 7


def test_table_order_and_classes():
    rows = list_all()
    assert all(e.table == 1 and e.crown_class != RIGID for e in rows[:9])
    assert all(e.table == 2 and e.crown_class == RIGID for e in rows[9:])
    assert rows[-1].marker and rows[-1].family == OTHER_EXCEPTIONAL


@pytest.mark.parametrize("k, printed", list(enumerate(HERMITIAN_SELF_ROWS)))
def test_hermitian_self_rows(k, printed):
    e = list_all()[k]
    assert normalize_name(e.family) == normalize_name(printed)
    assert e.crown_class == HERMITIAN_SELF and e.lower_bounds == () and e.target is None


@pytest.mark.parametrize("k, row", list(enumerate(HERMITIAN_TARGET_ROWS)))
def test_hermitian_target_rows(k, row):
    printed, bounds, target = row
    e = list_all()[6 + k]
    assert normalize_name(e.family) == normalize_name(printed)
    assert e.crown_class == HERMITIAN_TARGET
    assert {(p, str(v)) for p, v in e.lower_bounds} == _bounds(bounds)
    assert normalize_name(e.target) == normalize_name(target)


@pytest.mark.parametrize("k, row", list(enumerate(RIGID_ROWS)))
def test_rigid_rows(k, row):
    printed, bounds = row
    e = list_all()[9 + k]
    assert normalize_name(e.family) == normalize_name(printed)
    assert e.crown_class == RIGID
    assert {(p, str(v)) for p, v in e.lower_bounds} == _bounds(bounds)


# --- lookups --------------------------------------------------------------------------


def test_named_examples():
    entry, values = lookup_name("SL(3,ℝ)/SO(3)")
    assert entry.crown_class == RIGID and values == {"n": 3}

    entry, values = lookup_name("SO₀(4,1)/SO(4)")
    assert entry.crown_class == HERMITIAN_TARGET
    assert normalize_name(entry.target_name(values)) == normalize_name("SO₀(4,2)/(SO(4) × SO(2))")

    entry, _ = lookup_name("Sp(5,ℝ)/U(5)")
    assert entry.crown_class == HERMITIAN_SELF


def test_coefficient_parameters():
    entry, values = lookup_name("Sp(2,3)/(Sp(2) × Sp(3))")
    assert normalize_name(entry.target_name(values)) == normalize_name("SU(4,6)/S(U₄ × U₆)")
    entry, values = lookup_name("SU*(6)/Sp(3)")
    assert values == {"n": 3}
    with pytest.raises(UnknownSpace):
        lookup_name("SU*(5)/Sp(2)")  # 5 is not 2n
    with pytest.raises(UnknownSpace):
        lookup_name("SO*(6)/U(2)")  # inconsistent n


def test_exceptional_rows():
    assert lookup_name("(e6(-14), so(10)+R)")[0].crown_class == HERMITIAN_SELF
    assert lookup_name("(𝔣₄₍₋₂₀₎, 𝔰𝔬(9))")[0].crown_class == HERMITIAN_TARGET
    entry, _ = lookup_name("(e8(8), so(16))")
    assert entry.marker and entry.crown_class == RIGID


def test_excluded_parameters_are_out_of_range():
    for name in ["SL(2,ℝ)/SO(2)", "SO(3,ℂ)/SO(3)", "Sp(1,ℂ)/Sp(1)", "SO₀(2,1)/SO(2)", "SL(2,ℂ)/SU(2)"]:
        with pytest.raises(OutOfRange):
            lookup_name(name)
    with pytest.raises(OutOfRange):
        lookup("SL(n,R)/SO(n)", [2])
    with pytest.raises(OutOfRange):
        lookup("SU(p,q)/S(U_p x U_q)", [1])


def test_unknown_spaces():
    with pytest.raises(UnknownSpace):
        lookup_name("SL(3,ℍ)/Sp(3)")
    with pytest.raises(UnknownSpace):
        lookup("SU(n)/SO(n)", [3])


def test_lookup_by_family():
    e = lookup("SO_o(p,q)/(SO(p) x SO(q))", {"p": 3, "q": 4})
    assert e.crown_class == RIGID
    assert lookup("SO₀(p,1)/SO(p)", [3]).crown_class == HERMITIAN_TARGET


def test_overlaps_not_resolved():
    # SO_o(3,2) is Hermitian by the first table; the rigid row needs q > 2
    assert lookup_name("SO₀(3,2)/(SO(3) × SO(2))")[0].crown_class == HERMITIAN_SELF


def test_normalization_variants():
    a = normalize_name("SO₀(p,2)/(SO(p) × SO(2))")
    assert a == normalize_name("SO_o(p,2)/(SO(p) x SO(2))") == normalize_name("SO0(p, 2) / (SO(p) x SO(2))")


# --- partition ------------------------------------------------------------------------


def test_partition_invariant():
    assert partition_violations(max_param=8) == []


@given(st.integers(1, 12), st.integers(1, 12))
def test_every_instance_round_trips(p, q):
    for e in list_all():
        if e.marker:
            continue
        values = dict(zip(e.params, (p, q)))
        name = e.instantiate(values)
        hits = match_name(name)
        if e.accepts(values):
            assert hits == [(e, values)]
        else:
            assert all(hit is not e for hit, _ in hits)


def test_line_format():
    lines = [e.line() for e in list_all()]
    assert lines[0] == "table1 | hermitian-self | SU(p,q)/S(U_p x U_q) | p>=1, q>=1 | -"
    assert lines[6] == "table1 | hermitian-target | SO_o(p,1)/SO(p) | p>2 | SO_o(p,2)/(SO(p) x SO(2))"
    assert lines[-1] == "table2 | rigid | All the other exceptional cases | - | -"
