from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chebytower.errors import DomainError, ResourceGuardError
from chebytower.invariants import b_weight, diagonal_recursive
from chebytower.trees import (
    LEAF,
    OrderedTree,
    WeightMonomial,
    catalan,
    count,
    enumerate_trees,
    grouped_to_json,
    grouped_weights,
    join,
    label_counts,
    monomial,
    parse,
    render,
    split_root,
    tree_to_json,
    weight,
    weighted_catalan,
    weighted_catalan_dp,
)


def test_small_families():
    assert enumerate_trees(1) == [LEAF]
    assert [render(t) for t in enumerate_trees(2)] == ["2(1,1)"]
    assert [render(t) for t in enumerate_trees(3)] == ["3(2(1,1),1)", "3(1,2(1,1))"]
    assert len(enumerate_trees(4)) == 5


@pytest.mark.parametrize("k, expected", [(1, 1), (2, 1), (4, 5), (6, 42)])
def test_count(k, expected):
    assert count(k) == expected


def test_count_is_catalan():
    for k in range(1, 17):
        assert count(k) == catalan(k - 1)
    for k in range(1, 10):
        assert len(enumerate_trees(k)) == count(k)


def test_weights_of_small_trees():
    assert weight(LEAF) == -1
    assert weight(enumerate_trees(2)[0]) == F(1, 12)
    assert [weight(t) for t in enumerate_trees(3)] == [F(-1, 720), F(-1, 720)]


def test_weighted_catalan_routes_agree_with_diagonal():
    diag = diagonal_recursive(64)
    for k in range(1, 13):
        assert weighted_catalan(k, "enumerate") == diag[k - 1]
    assert weighted_catalan_dp(64) == diag
    assert weighted_catalan(4) == F(1, 20160)
    assert weighted_catalan(1) == -1


def test_weighted_catalan_auto_falls_back_to_dp():
    assert weighted_catalan(12, "auto", guard=10) == weighted_catalan(12, "dp")
    with pytest.raises(ResourceGuardError):
        weighted_catalan(12, "enumerate", guard=10)
    with pytest.raises(DomainError):
        weighted_catalan(3, "sampling")


def test_weighted_catalan_k5_from_grouped_monomials():
    b1, b2, b3, b4, b5 = F(-1), b_weight(2), b_weight(3), b_weight(4), b_weight(5)
    expected = (2 * b1**5 * b2**2 * b4 * b5
                + 8 * b1**5 * b2 * b3 * b4 * b5
                + 4 * b1**5 * b2**2 * b3 * b5)
    assert weighted_catalan(5) == expected


def test_grouped_weights():
    g3 = grouped_weights(3)
    assert {m.render(): c for m, c in g3.items()} == {"b1^3 b2 b3": 2}

    g4 = {m.render(): c for m, c in grouped_weights(4).items()}
    assert g4 == {"b1^4 b2^2 b4": 1, "b1^4 b2 b3 b4": 4}

    g5 = {m.render(): c for m, c in grouped_weights(5).items()}
    assert g5 == {"b1^5 b2^2 b4 b5": 2, "b1^5 b2 b3 b4 b5": 8, "b1^5 b2^2 b3 b5": 4}
    assert sum(grouped_weights(7).values()) == catalan(6)


def test_monomial_value_matches_tree_weight():
    for t in enumerate_trees(6):
        assert monomial(t).value() == t.weight


def test_leaf_count_and_sign():
    for k in range(1, 8):
        for t in enumerate_trees(k):
            assert label_counts(t)[1] == k
            assert label_counts(t)[k] == 1
            assert (t.weight > 0) == (k % 2 == 0)


def test_split_join_bijection():
    for k in range(2, 8):
        trees = enumerate_trees(k)
        rejoined = [join(k, *split_root(t)) for t in trees]
        assert Counter(map(render, rejoined)) == Counter(map(render, trees))
    with pytest.raises(DomainError):
        split_root(LEAF)


def test_node_label_must_be_sum_of_children():
    with pytest.raises(DomainError):
        OrderedTree(3, LEAF, LEAF)
    with pytest.raises(DomainError):
        OrderedTree(2)
    with pytest.raises(DomainError):
        OrderedTree(2, LEAF, None)


def test_enumeration_guard():
    with pytest.raises(ResourceGuardError):
        enumerate_trees(10, guard=100)
    with pytest.raises(DomainError):
        enumerate_trees(0)


def test_parse_inverts_render():
    for t in enumerate_trees(6):
        assert parse(render(t)) == t
    assert parse("3(1, 2(1,1))") == enumerate_trees(3)[1]
    with pytest.raises(DomainError):
        parse("3(1,2(1,1)")
    with pytest.raises(DomainError):
        parse("2(1,1)x")


def test_json_forms():
    t = enumerate_trees(3)[0]
    assert tree_to_json(t) == {
        "label": 3,
        "children": [
            {"label": 2, "children": [{"label": 1, "children": []}, {"label": 1, "children": []}]},
            {"label": 1, "children": []},
        ],
    }
    assert grouped_to_json(grouped_weights(3)) == [
        {"monomial": {"1": 3, "2": 1, "3": 1}, "count": "2"}
    ]


def test_weight_monomial_from_counts_drops_zero_exponents():
    m = WeightMonomial.from_counts({2: 1, 1: 2, 5: 0})
    assert m.exponents == ((1, 2), (2, 1))
    assert m.render() == "b1^2 b2"


@given(st.integers(min_value=1, max_value=40))
def test_dp_prefix_consistency(k):
    assert weighted_catalan_dp(k) == weighted_catalan_dp(40)[:k]
