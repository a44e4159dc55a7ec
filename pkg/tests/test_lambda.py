from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from clusterbasis import (InputError, ValidationError, build_picture_from_roots, disc_result,
                          disc_valuation_from_picture, disc_valuation_from_roots,
                          hyperdisc_order, kausz_lambda8, lambda8, lambda_result, parse_picture)
from clusterbasis.lambda_formula import cluster_weight, top_weight

from conftest import EX_ROOTS, pictures, root_sets


def lambda8_by_leaves(P):
    """Closed formula evaluated from leaf sets and absolute depths only."""
    sets = {P[c].leaves: P.depth(c) for c in P.clusters}
    g, n = P.genus, P.n
    total = 4 * g * P.vcf
    for L, d in sets.items():
        if len(L) == n:
            total += d * ((n - 2) * n if n % 2 == 0 else (n - 1) ** 2)
            continue
        parent_depth = min(((len(M), e) for M, e in sets.items() if L < M))[1]
        k = len(L)
        total += (d - parent_depth) * ((k - 2) * k if k % 2 == 0 else (k - 1) ** 2)
    return total


def test_worked_example(ex_picture):
    assert lambda8(ex_picture) == 168
    res = lambda_result(ex_picture)
    assert res.v_lambda == 21 and res.integral
    assert res.as_dict() == {"eight_v_lambda": "168", "v_lambda": "21", "integral": True}


def test_worked_example_terms(ex_picture):
    # 4·4·6 + 2·2² + 8·2·4 + 0·10·12
    assert cluster_weight(6) * 4 + cluster_weight(3) * 2 + cluster_weight(4) * 8 == 168
    assert top_weight(12, 5) == 120 and top_weight(11, 5) == 100


def test_worked_example_disc(ex_picture):
    assert disc_valuation_from_picture(ex_picture) == 228
    assert disc_valuation_from_roots(EX_ROOTS, 1, 5) == 228
    assert hyperdisc_order(ex_picture) == 216
    assert disc_result(ex_picture).as_dict() == {"v_disc": "228", "hyperdisc_order": "216"}


@given(pictures())
def test_matches_leaf_formula(P):
    assert lambda8(P) == lambda8_by_leaves(P)


@settings(max_examples=150, deadline=None)
@given(root_sets())
def test_disc_two_ways(data):
    roots, c_f, p = data
    P = build_picture_from_roots(roots, c_f, p)
    assert disc_valuation_from_picture(P) == disc_valuation_from_roots(roots, c_f, p)


@given(pictures(top_depths=st.just(0), vcfs=st.just(0)))
def test_reduced_formula_on_its_domain(P):
    if P.n % 2:
        with pytest.raises(ValidationError):
            kausz_lambda8(P)
    else:
        assert kausz_lambda8(P) == lambda8(P)


def test_reduced_formula_preconditions(ex_picture):
    assert kausz_lambda8(ex_picture) == 168
    with pytest.raises(ValidationError):
        kausz_lambda8(ex_picture.replace(vcf=2))
    with pytest.raises(ValidationError):
        kausz_lambda8(parse_picture("(* * * * * *)_1"))
    # integral roots but only two residues mod 5
    few = build_picture_from_roots([0, 5, 10, 1, 6, 11], 1, 5)
    with pytest.raises(ValidationError, match="residues"):
        kausz_lambda8(few)


def test_non_integral_flag():
    res = lambda_result(parse_picture("((* * *)_1 * * *)_0"))
    assert res.eight_v_lambda == 4 and res.v_lambda == Fraction(1, 2)
    assert res.integral is False


def test_genus_guard():
    with pytest.raises(InputError):
        lambda8(parse_picture("(* * * *)_0"))
    with pytest.raises(InputError):
        disc_valuation_from_roots([0, 1, 2, 3], 1, 5)
    with pytest.raises(InputError):
        disc_valuation_from_roots([0, 1, 2, 3, 3], 1, 5)


def test_single_cluster_zero():
    P = parse_picture("(* * * * * *)_0")
    assert lambda8(P) == 0 and disc_valuation_from_picture(P) == 0
