from fractions import Fraction as F

import pytest

from chebytower.errors import ConsistencyError, DomainError
from chebytower.invariants import (
    InvariantTable,
    b_weight,
    diagonal_recursive,
    eta,
    first_difference,
    invariants_recursive,
    invariants_vandermonde,
    invariants_vandermonde_table,
    invariants_vandermonde_trace,
    second_row_recursive,
    sign_pattern_observation,
    table_from_json,
    table_to_json,
    u_term,
    v_term,
)


def test_published_columns(table16):
    assert table16.a(1, 1) == -1
    assert table16.column(2) == [F(-1, 12), F(1, 12)]
    assert table16.column(3) == [F(-1, 90), F(1, 72), F(-1, 360)]
    assert table16.column(4) == [F(-1, 560), F(7, 2880), F(-1, 1440), F(1, 20160)]


def test_recursive_equals_vandermonde(table16):
    assert first_difference(table16, invariants_vandermonde_table(16)) is None


def test_column_from_solver_matches_table(table16):
    for k in (1, 5, 9):
        assert invariants_vandermonde(k) == table16.column(k)


def test_divided_difference_stages_k3():
    trace = invariants_vandermonde_trace(3)
    assert [w.phase for w in trace] == ["nu", "nu", "nu", "a", "a"]
    assert list(trace[0].nu) == [F(-1, 2), F(-21, 2), F(-357, 2)]
    assert list(trace[1].nu) == [F(-1, 2), F(-5, 24), F(-7, 8)]
    assert list(trace[2].nu) == [F(-1, 2), F(-5, 24), F(-1, 360)]
    assert list(trace[3].nu) == [F(-1, 2), F(-11, 360), F(-1, 360)]
    assert list(trace[4].nu) == [F(-1, 90), F(1, 72), F(-1, 360)]


def test_divided_difference_stages_k4():
    trace = invariants_vandermonde_trace(4)
    expected = [
        [F(1, 16), F(165, 16), F(12597, 16), F(840565, 16)],
        [F(1, 16), F(41, 192), F(259, 64), F(12937, 192)],
        [F(1, 16), F(41, 192), F(23, 1440), F(19, 288)],
        [F(1, 16), F(41, 192), F(23, 1440), F(1, 20160)],
        [F(1, 16), F(41, 192), F(11, 3360), F(1, 20160)],
        [F(1, 16), F(9, 2240), F(1, 10080), F(1, 20160)],
        [F(-1, 560), F(7, 2880), F(-1, 1440), F(1, 20160)],
    ]
    assert [list(w.nu) for w in trace] == expected
    assert [w.stage for w in trace] == [1, 2, 3, 4, 3, 2, 1]


def test_solver_rejects_inexact_source():
    with pytest.raises(ConsistencyError):
        invariants_vandermonde(2, coeff_source=lambda n: 0.5)


def test_diagonal_recursion(table16):
    assert diagonal_recursive(16) == table16.diagonal()
    assert diagonal_recursive(4)[-1] == F(1, 20160)


def test_second_row(table16):
    assert second_row_recursive(table16) == [table16.a(2, k) for k in range(2, 17)]


def test_weights_and_eta():
    assert b_weight(2) == F(1, 12)
    assert b_weight(3) == F(1, 60)
    assert [eta(k) for k in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    with pytest.raises(DomainError):
        b_weight(1)
    with pytest.raises(DomainError):
        eta(0)


def test_auxiliary_sums_vanish_outside_their_range(table16):
    assert u_term(2, 4, table16) == 0
    assert u_term(3, 5, table16) == 0
    assert v_term(0, 1, 4, table16) == 0


def test_missing_entry_is_a_consistency_error():
    with pytest.raises(ConsistencyError):
        u_term(3, 4, {})


def test_table_requires_every_entry():
    with pytest.raises(DomainError):
        InvariantTable(2, {(1, 1): F(-1), (1, 2): F(-1, 12)})
    with pytest.raises(DomainError):
        invariants_recursive(0)


def test_first_difference_locates_entry(table16):
    entries = dict(table16.entries)
    entries[(2, 3)] = F(0)
    assert first_difference(table16, InvariantTable(16, entries)) == (2, 3)


def test_sign_pattern_is_reported(table16):
    assert isinstance(sign_pattern_observation(table16), bool)
    assert sign_pattern_observation(invariants_recursive(4))


def test_json_form(table16):
    data = table_to_json(invariants_recursive(2))
    assert data == {"kmax": 2, "a": [["-1/1"], ["-1/12", "1/12"]]}
    assert first_difference(table_from_json(table_to_json(table16)), table16) is None


def test_auxiliary_sums_worked_values(table16):
    assert u_term(3, 4, table16) == F(-1, 72)
    assert u_term(3, 3, table16) == 0
    assert v_term(0, 3, 3, table16) == F(-1, 12)
    assert v_term(3, 3, 3, table16) == F(-1, 12)
    assert v_term(0, 2, 4, table16) == F(1, 90)
    assert b_weight(4) == F(1, 252)
    with pytest.raises(DomainError):
        v_term(2, 3, 3, table16)
