import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from choicefit.relations import (
    BinaryRelation,
    RelationClass,
    belongs_to,
    classify,
    count_relations,
    enumerate_relations,
    from_text,
    greatest_elements,
    index_of,
    is_regular,
    label,
    maximal_elements,
    parts,
    relation_array,
    strict_part,
    to_text,
    transitive_closure,
    transitive_reduction,
)

CLASSES = list(RelationClass)


def bool_matrices(n_min=1, n_max=5):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(lambda b: np.array(b).reshape(n, n))
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("cls", CLASSES, ids=lambda c: c.value)
def test_enumeration_matches_matrix_filter(cls, n):
    expected = {m.tobytes() for m in oracles.filter_class(n, cls.value)}
    arr = relation_array(cls, n)
    got = [m.tobytes() for m in arr]
    assert len(got) == len(set(got))
    assert set(got) == expected


@pytest.mark.parametrize("cls", CLASSES, ids=lambda c: c.value)
def test_enumeration_is_canonically_sorted(cls):
    keys = [r.key() for r in enumerate_relations(cls, 4)]
    assert keys == sorted(keys)


def test_small_counts():
    # OEIS A000670, A001035, A000798 and n!
    assert [count_relations(RelationClass.WEAK_ORDER, n) for n in range(1, 6)] == [1, 3, 13, 75, 541]
    assert [count_relations(RelationClass.STRICT_PARTIAL_ORDER, n) for n in range(1, 6)] == [1, 3, 19, 219, 4231]
    assert [count_relations(RelationClass.PREORDER, n) for n in range(1, 6)] == [1, 4, 29, 355, 6942]
    assert [count_relations(RelationClass.LINEAR_ORDER, n) for n in range(1, 6)] == [1, 2, 6, 24, 120]


def test_enumeration_bounds():
    with pytest.raises(ValueError):
        relation_array(RelationClass.PREORDER, 0)
    with pytest.raises(ValueError):
        relation_array(RelationClass.PREORDER, 8)


def test_enumerated_arrays_are_read_only():
    arr = relation_array(RelationClass.WEAK_ORDER, 3)
    with pytest.raises(ValueError):
        arr[0, 0, 0] = False


def test_classify_identity():
    props = classify(BinaryRelation.identity(3))
    assert {"reflexive", "transitive", "antisymmetric", "acyclic"} <= props
    assert "complete" not in props and "irreflexive" not in props


def test_classify_three_cycle():
    r = BinaryRelation.from_pairs(3, [(0, 1), (1, 2), (2, 0)])
    props = classify(r)
    assert "acyclic" not in props and "transitive" not in props
    assert {"irreflexive", "asymmetric"} <= props


@given(bool_matrices(1, 4))
def test_classify_agrees_with_definitions(m):
    n = m.shape[0]
    props = classify(BinaryRelation(m))
    assert ("reflexive" in props) == all(m[i, i] for i in range(n))
    assert ("irreflexive" in props) == (not any(m[i, i] for i in range(n)))
    trans = all(m[x, z] for x in range(n) for y in range(n) for z in range(n) if m[x, y] and m[y, z])
    assert ("transitive" in props) == trans
    assert ("asymmetric" in props) == (not any(m[x, y] and m[y, x] for x in range(n) for y in range(n)))
    assert ("antisymmetric" in props) == (not any(m[x, y] and m[y, x] for x in range(n) for y in range(n) if x != y))
    assert ("complete" in props) == all(m[x, y] or m[y, x] for x in range(n) for y in range(n))
    s = m & ~m.T
    assert ("acyclic" in props) == (not np.diag(oracles.closure(s)).any())


@given(bool_matrices())
def test_closure_matches_squaring(m):
    assert (transitive_closure(BinaryRelation(m)).matrix == oracles.closure(m)).all()


@given(st.integers(1, 5), st.data())
def test_reduction_recovers_order(n, data):
    arr = relation_array(RelationClass.STRICT_PARTIAL_ORDER, n)
    r = BinaryRelation(arr[data.draw(st.integers(0, arr.shape[0] - 1))])
    red = transitive_reduction(r)
    assert transitive_closure(red) == r
    # removing any covering edge loses a pair
    for x, y in red.pairs():
        m = red.matrix.copy()
        m[x, y] = False
        assert transitive_closure(BinaryRelation(m)) != r


def test_reduction_rejects_non_orders():
    with pytest.raises(ValueError):
        transitive_reduction(BinaryRelation.identity(2))


@given(st.integers(2, 5), st.data())
def test_greatest_and_maximal_match_double_loop(n, data):
    pre = relation_array(RelationClass.PREORDER, n)
    spo = relation_array(RelationClass.STRICT_PARTIAL_ORDER, n)
    p = pre[data.draw(st.integers(0, pre.shape[0] - 1))]
    s = spo[data.draw(st.integers(0, spo.shape[0] - 1))]
    menu = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    assert greatest_elements(BinaryRelation(p), menu) == oracles.greatest(p, menu)
    got = maximal_elements(BinaryRelation(s), menu)
    assert got == oracles.maximal(s, menu)
    assert got  # acyclic strict relations always leave something undominated


def test_empty_menu_raises():
    with pytest.raises(ValueError):
        maximal_elements(BinaryRelation.empty(2), [])
    with pytest.raises(ValueError):
        greatest_elements(BinaryRelation.identity(2), [])


@given(st.integers(1, 4), st.data())
def test_parts_partition_pairs(n, data):
    arr = relation_array(RelationClass.PREORDER, n)
    r = BinaryRelation(arr[data.draw(st.integers(0, arr.shape[0] - 1))])
    strict, ind, inc = (p.matrix.astype(int) for p in parts(r))
    total = strict + strict.T + ind + inc + np.eye(n, dtype=int)
    assert (total == 1).all()
    assert (ind == ind.T).all() and (inc == inc.T).all()
    assert strict_part(r).matrix.astype(int).tolist() == strict.tolist()


def test_parts_extremes():
    s, i, c = parts(BinaryRelation.identity(3))
    assert not s.matrix.any() and not i.matrix.any() and len(c.pairs()) == 6
    s, i, c = parts(BinaryRelation.full(3))
    assert not s.matrix.any() and len(i.pairs()) == 6 and not c.matrix.any()
    with pytest.raises(ValueError):
        parts(BinaryRelation.empty(2))


def test_regularity():
    A, B, C, D, E, F = range(6)
    # E over A~F over C over D, B unranked: every gap with B has a witness
    pairs = [(x, x) for x in range(6)] + [(A, F), (F, A), (E, A), (E, F), (E, C), (E, D), (A, C), (A, D), (F, C), (F, D), (C, D)]
    assert is_regular(BinaryRelation.from_pairs(6, pairs))
    # two unranked points and nothing else to separate them
    assert not is_regular(BinaryRelation.identity(2))
    # a chain plus an isolated point is regular
    assert is_regular(BinaryRelation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1)]))
    with pytest.raises(ValueError):
        is_regular(BinaryRelation.from_pairs(2, [(0, 1)]))


@given(st.integers(2, 5), st.sampled_from(CLASSES), st.data())
def test_text_round_trip(n, cls, data):
    arr = relation_array(cls, n)
    r = BinaryRelation(arr[data.draw(st.integers(0, arr.shape[0] - 1))])
    assert from_text(to_text(r)) == r
    assert belongs_to(r, cls)


def test_text_form_lines():
    r = BinaryRelation.from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (0, 2), (1, 2)])
    assert to_text(r).splitlines() == ["# n=3 reflexive", "A~B", "A>C", "B>C"]
    with pytest.raises(ValueError):
        from_text("A-B")


def test_labels():
    assert label(0) == "A" and index_of("F") == 5
    with pytest.raises(ValueError):
        index_of("AB")
    with pytest.raises(ValueError):
        label(26)


def test_relation_basics():
    r = BinaryRelation.from_pairs(2, [(0, 1)])
    assert (0, 1) in r and (1, 0) not in r
    assert r | r.transpose() == BinaryRelation.from_pairs(2, [(0, 1), (1, 0)])
    assert (r & BinaryRelation.empty(2)) == BinaryRelation.empty(2)
    assert r <= BinaryRelation.full(2)
    assert hash(r) == hash(BinaryRelation.from_pairs(2, [(0, 1)]))
    with pytest.raises(ValueError):
        BinaryRelation(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        r.matrix[0, 0] = True
