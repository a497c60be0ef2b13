from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebytower.errors import DomainError, ResourceGuardError
from chebytower.polyseq import (
    EvenPoly,
    LaurentPoly,
    compose_shift,
    corollary_probe,
    cyclotomic_identity_check,
    eval_exact,
    eval_mp,
    eval_tower,
    gen_p,
    gen_q,
    laurent_substitution,
    poly_from_json,
    poly_to_csv_rows,
    poly_to_json,
    poly_to_text,
    root_residual,
    sign_alternates,
    trig_residual,
)

TINY = mpmath.mpf(2) ** -100


def test_first_members_of_the_tower(p3_coeffs, p4_coeffs):
    assert gen_p(0).coeffs == (-2, 1)
    assert gen_p(1).coeffs == (2, -4, 1)
    assert gen_p(2).coeffs == (2, -16, 20, -8, 1)
    assert list(gen_p(3).coeffs) == p3_coeffs
    assert list(gen_p(4).coeffs) == p4_coeffs


@pytest.mark.parametrize("n", range(0, 11))
def test_composition_tower_equals_squaring_tower(n):
    assert gen_q(n) == gen_p(n)


def test_generated_polynomial_shape():
    for n in range(1, 7):
        p = gen_p(n)
        assert p.degree == 2 ** (n + 1)
        assert p.coeffs[-1] == 1
        assert p.coeffs[0] == 2
        assert p.n == n


def test_degree_guard():
    with pytest.raises(ResourceGuardError):
        gen_p(3, max_degree_log2=3)
    assert gen_p(2, max_degree_log2=3).degree == 8
    with pytest.raises(DomainError):
        gen_p(-1)


def test_eval_exact_fixed_points():
    for n in range(1, 6):
        p = gen_p(n)
        assert eval_exact(p, 1) == -1
        assert eval_exact(p, 2) == 2
        assert eval_exact(p, 0) == 2
    assert eval_exact(gen_p(0), Fraction(1, 2)) == Fraction(-7, 4)


def test_laurent_substitution_of_p0():
    assert laurent_substitution(gen_p(0)) == LaurentPoly({4: 1, 0: 1})


@pytest.mark.parametrize("n", range(0, 11))
def test_cyclotomic_identity(n):
    assert cyclotomic_identity_check(n)


def test_laurent_poly_drops_zeros_and_rejects_odd_exponents():
    assert LaurentPoly({2: 0, -2: 3}).terms == {-2: 3}
    with pytest.raises(DomainError):
        LaurentPoly({1: 1})


def test_compose_shift():
    assert compose_shift(gen_p(0)).coeffs == (2, 4, 1)
    assert compose_shift(EvenPoly((2,))).coeffs == (2,)
    # (y+2)^4 - 4(y+2)^2 + 2 with y = x^2
    assert compose_shift(gen_p(1)).coeffs == (2, 16, 20, 8, 1)


def test_even_poly_trims_trailing_zeros():
    assert EvenPoly((1, 2, 0, 0)).coeffs == (1, 2)
    assert EvenPoly((0, 0)).coeffs == (0,)
    assert EvenPoly((1, 2)).coefficient(5) == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_strict_sign_alternation(n):
    assert sign_alternates(gen_p(n))


def test_sign_alternation_fails_on_gap():
    assert not sign_alternates(EvenPoly((2, 0, 1)))


def test_trig_residual_small_cases():
    third = mpmath.pi / 3
    assert trig_residual(0, mpmath.mpf("0.7"), 256) < TINY
    assert trig_residual(3, third, 256) < TINY
    assert trig_residual(6, mpmath.pi / 2**8, 256) < mpmath.mpf(2) ** -128


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10), st.floats(min_value=0.01, max_value=3.13))
def test_trig_residual_both_routes(n, theta):
    assert trig_residual(n, theta, 256, "dense") < TINY
    assert trig_residual(n, theta, 256, "tower") < TINY


@pytest.mark.parametrize("n", range(0, 11))
def test_root_residual_vanishes(n):
    assert root_residual(n, 256) < TINY


def test_precision_floor():
    with pytest.raises(DomainError):
        root_residual(2, 32)
    with pytest.raises(DomainError):
        trig_residual(2, 0.5, 256, method="fft")


def test_dense_and_tower_evaluation_agree():
    x = mpmath.mpf("1.3")
    dense = eval_mp(gen_p(5), x, 200)
    tower = eval_tower(5, x, 200)
    assert abs(dense - tower) < mpmath.mpf(2) ** -150


@pytest.mark.parametrize("e", range(4, 9))
def test_corollary_probe_index(e):
    probe = corollary_probe(e, 256)
    assert probe.unique
    assert probe.vanishing == (e - 4,)
    assert probe.matches_expected
    assert probe.stated_index == e - 3


def test_corollary_probe_base_case():
    probe = corollary_probe(3, 256)
    assert probe.vanishing == (-1,)
    with pytest.raises(DomainError):
        corollary_probe(2, 256)


def test_text_json_csv_rendering():
    assert poly_to_text(gen_p(1)) == "x^4 - 4x^2 + 2"
    assert poly_to_text(gen_p(0)) == "x^2 - 2"
    assert poly_to_json(gen_p(0)) == {"n": 0, "coeffs": ["-2", "1"]}
    assert list(poly_to_csv_rows(gen_p(2))) == [(0, "2"), (1, "-16"), (2, "20"), (3, "-8"), (4, "1")]
    assert poly_from_json(poly_to_json(gen_p(3))) == gen_p(3)
