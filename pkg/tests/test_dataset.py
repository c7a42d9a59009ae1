import io
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from choicefit.dataset import (
    ChoiceDataError,
    Dataset,
    Menu,
    MenuCollection,
    Observation,
    Symmetry,
    active_subdataset,
    check_symmetry,
    generate_menu_collection,
    parse_csv,
    write_csv,
)

DATA = Path(__file__).parent / "data"


def test_paper_domain_has_fifty_menus():
    mc = generate_menu_collection(6, (2, 3, 4))
    assert len(mc) == 15 + 20 + 15
    assert [len(m) for m in mc] == sorted(len(m) for m in mc)
    assert check_symmetry(mc) is Symmetry.STRONG


def test_menu_collection_rejects_duplicates_and_bad_sizes():
    with pytest.raises(ChoiceDataError):
        MenuCollection(2, (Menu.of(0, 1), Menu.of(1, 0)))
    with pytest.raises(ValueError):
        generate_menu_collection(3, (4,))


def test_symmetry_levels():
    A, B, C, D = range(4)
    # every item sits in two menus; A and B only in triples, C and D in a triple and a pair
    assert check_symmetry([Menu.of(A, B, C), Menu.of(A, B, D), Menu.of(C, D)]) is Symmetry.WEAK_ONLY
    assert check_symmetry([Menu.of(A, B), Menu.of(A, C)]) is Symmetry.ASYMMETRIC
    assert check_symmetry([Menu.of(A, B), Menu.of(C, D)]) is Symmetry.STRONG


def test_menu_equality_ignores_order():
    assert Menu.of(0, 1, order=(1, 0)) == Menu.of(0, 1)
    assert Menu.of(2, 0).list_order == (0, 2)
    with pytest.raises(ChoiceDataError):
        Menu.of(0, 1, order=(0, 2))
    with pytest.raises(ChoiceDataError):
        Menu(frozenset())


def test_observation_choice_must_be_in_menu():
    with pytest.raises(ChoiceDataError):
        Observation(Menu.of(0, 1), frozenset({2}))
    assert Observation(Menu.of(0, 1)).deferred


def test_dataset_validation():
    m = Menu.of(0, 1)
    with pytest.raises(ChoiceDataError):
        Dataset("s", (Observation(m, frozenset({0})), Observation(Menu.of(1, 0), frozenset({1}))))
    with pytest.raises(ChoiceDataError):
        Dataset("s", (Observation(m),), forced=True)
    with pytest.raises(ChoiceDataError):
        Dataset("s", (Observation(Menu.of(0, 5), frozenset({0})),), n=3)
    d = Dataset("s", (Observation(Menu.of(0, 3), frozenset({0})),))
    assert d.n == 4 and d.universe == {0, 3}


def test_uninformative_flags():
    mc = generate_menu_collection(3, (2,))
    defer = Dataset("d", tuple(Observation(m) for m in mc))
    everything = Dataset("e", tuple(Observation(m, m.members) for m in mc))
    mixed = Dataset("m", tuple(Observation(m, frozenset({min(m.members)})) for m in mc))
    assert defer.uninformative and everything.uninformative and not mixed.uninformative


def test_active_subdataset_drops_deferrals():
    d = Dataset("s", (Observation(Menu.of(0, 1)), Observation(Menu.of(0, 2), frozenset({2}))))
    a = active_subdataset(d)
    assert len(a) == 1 and a.forced


CSV = """subject,menu,choice,order
s1,A;B,A,B;A
s1,A;B;C,,
s2,B;C,B;C,
"""


def test_parse_csv_basic():
    ds = parse_csv(CSV)
    assert [d.subject_id for d in ds] == ["s1", "s2"]
    s1 = ds[0]
    assert s1.observations[0].menu.list_order == (1, 0)
    assert s1.observations[1].deferred
    assert s1.observations[1].menu.list_order == (0, 1, 2)
    assert ds[1].observations[0].choice == {1, 2}
    assert all(d.n == 3 for d in ds)


def test_parse_csv_from_path_and_file(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text(CSV)
    assert parse_csv(p)[0].observations == parse_csv(str(p))[0].observations
    assert len(parse_csv(io.StringIO(CSV))) == 2


@pytest.mark.parametrize(
    "text, row",
    [
        ("subject,menu,choice\ns1,A;B,C\n", 2),
        ("subject,menu,choice\ns1,A;B,A\ns1,B;A,B\n", 3),
        ("subject,menu,choice\ns1,A;B\n", 2),
        ("subject,menu,choice\ns1,A;1,A\n", 2),
        ("subject,menu,choice\n,A;B,A\n", 2),
        ("subject,menu,choice\ns1,,\n", 2),
        ("subject,menu,choice,order\ns1,A;B,A,A;C\n", 2),
        ("subj,menu,choice\n", 1),
    ],
)
def test_parse_errors_carry_row_numbers(text, row):
    with pytest.raises(ChoiceDataError, match=f"row {row}"):
        parse_csv(text)


def test_forced_flag_rejects_blank_choice():
    with pytest.raises(ChoiceDataError, match="row 3"):
        parse_csv("subject,menu,choice\ns1,A;B,A\ns1,A;C,\n", forced=True)


def test_empty_input():
    with pytest.raises(ChoiceDataError):
        parse_csv("")
    assert parse_csv("subject,menu,choice\n") == []


def test_universe_override():
    with pytest.raises(ChoiceDataError):
        parse_csv("subject,menu,choice\ns1,A;F,A\n", n=3)
    assert parse_csv("subject,menu,choice\ns1,A;B,A\n", n=6)[0].n == 6


menu_st = st.sets(st.integers(0, 5), min_size=1, max_size=4).flatmap(
    lambda s: st.tuples(st.just(s), st.permutations(sorted(s)), st.sets(st.sampled_from(sorted(s))))
)


@given(st.lists(menu_st, min_size=1, max_size=10, unique_by=lambda t: frozenset(t[0])))
def test_csv_round_trip(rows):
    obs = tuple(Observation(Menu(frozenset(m), tuple(order)), frozenset(ch)) for m, order, ch in rows)
    d = Dataset("subj", obs, n=6)
    back = parse_csv(write_csv([d]), n=6)[0]
    assert back.observations == d.observations
    assert [o.menu.list_order for o in back] == [o.menu.list_order for o in d]


def test_fixture_files_parse():
    for name in ("uc_subject.csv", "dc_subject.csv"):
        (d,) = parse_csv(DATA / name)
        assert len(d) == 50 and d.n == 6
