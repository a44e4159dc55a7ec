from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from clusterbasis import (InputError, build_picture_from_roots, hyperdisc_order, lambda8,
                          parse_picture)
from clusterbasis import transforms as tf

from conftest import EX_ROOTS, EX_TEXT, by_leaves, ex_named, pictures, root_sets


def change(P, spec):
    return lambda8(tf.apply(P, spec)) - lambda8(P)


def test_deepen_example(ex_picture):
    Q = tf.deepen(ex_picture, 1)
    t = ex_named(ex_picture)
    assert [Q.depth(t[k]) for k in ("R", "t1", "t2", "t3")] == [1, 5, 7, 9]
    assert change(ex_picture, tf.TransformSpec("deepen", (1,))) == 120
    assert tf.deepen(ex_picture, 0) == ex_picture


def test_add_root_examples():
    P = parse_picture("(* * * * *)_0")
    Q = tf.add_root(P)
    assert Q.n == 6 and Q.genus == 2 and lambda8(Q) == lambda8(P)
    P2 = parse_picture("(* * * * *)_2")
    assert change(P2, tf.TransformSpec("add-root")) == 16
    with pytest.raises(InputError):
        tf.add_root(Q)
    with pytest.raises(InputError):
        tf.add_root(parse_picture("(* * * * *)_1/2"))


def test_redistribute_dissolves():
    P = parse_picture("((* * * *)_1 * *)_0")
    S = by_leaves(P, range(4))
    Q = tf.redistribute(P, S, 1)
    assert Q.canonical_text() == "((* *)_1 * * * *)_0"
    assert Q[by_leaves(Q, {4, 5})].depth == 1
    assert lambda8(Q) - lambda8(P) == -8


def test_redistribute_size_two():
    P = parse_picture("((* *)_2 * * * *)_0")
    S = by_leaves(P, {0, 1})
    Q = tf.redistribute(P, S, 1)
    assert Q.canonical_text() == "((* * * *)_1 (* *)_1)_0"
    assert lambda8(Q) - lambda8(P) == 8


def test_redistribute_t0_is_noop_up_to_materialisation():
    P = parse_picture("((* * *)_1 (* * *)_2)_0")
    S = P.find_path((0,))
    assert tf.redistribute(P, S, 0) == P


def test_redistribute_errors():
    P = parse_picture("(((* *)_1 * *)_1 * *)_0")
    with pytest.raises(InputError):
        tf.redistribute(P, P.top, 1)
    with pytest.raises(InputError):
        tf.redistribute(P, P.find_path((0, 0)), 1)
    with pytest.raises(InputError, match="negative"):
        tf.redistribute(P, P.find_path((0,)), 2)
    odd = parse_picture("((* *)_1 * * *)_0")
    with pytest.raises(InputError, match="even"):
        tf.redistribute(odd, odd.find_path((0,)), 1)


def test_scale_leading_examples(ex_picture):
    assert change(ex_picture, tf.TransformSpec("scale-leading", (1,))) == 40
    assert tf.scale_leading(ex_picture, 0) == ex_picture
    P = parse_picture("(* * * * * *)_0", vcf=2)
    assert change(P, tf.TransformSpec("scale-leading", (-1,))) == -16


def test_rescale_example(ex_picture):
    Q = tf.rescale_equation(ex_picture, 2, 0)
    t = ex_named(ex_picture)
    assert [Q.depth(t[k]) for k in ("R", "t1", "t2", "t3")] == [-2, 2, 4, 6]
    assert Q.vcf == 24
    assert hyperdisc_order(Q) == 216
    S = tf.rescale_equation(ex_picture, 0, 1)
    assert S.vcf == -2 and S.d_R == 0 and hyperdisc_order(S) == 216
    assert tf.rescale_equation(ex_picture, 0, 0) == ex_picture


def test_shift_examples(ex_picture):
    for z in (0, 7, Fraction(1, 5)):
        Q = tf.shift(ex_picture, z)
        assert Q == ex_picture and lambda8(Q) == 168
        assert Q.roots[0] == z


def test_equation_transforms_need_roots(ex_abstract):
    with pytest.raises(InputError):
        tf.shift(ex_abstract, 1)
    with pytest.raises(InputError):
        tf.rescale_equation(ex_abstract, 1, 0)


@settings(max_examples=150, deadline=None)
@given(pictures(), st.integers(-2, 3), st.integers(-2, 2))
def test_picture_laws(P, t, m):
    for spec in (tf.TransformSpec("deepen", (t,)), tf.TransformSpec("scale-leading", (m,))):
        assert change(P, spec) == tf.predicted_lambda8_change(P, spec)
    if P.n % 2:
        spec = tf.TransformSpec("add-root")
        assert change(P, spec) == tf.predicted_lambda8_change(P, spec)


@settings(max_examples=150, deadline=None)
@given(pictures(), st.data())
def test_redistribute_law(P, data):
    assume(P.n % 2 == 0)
    kids = [c for c in P.children(P.top) if P[c].is_proper]
    assume(kids)
    S = data.draw(st.sampled_from(kids))
    t = data.draw(st.integers(0, P.rel_depth(S)))
    spec = tf.TransformSpec("redistribute", (P.path(S), t))
    try:
        got = change(P, spec)
    except InputError:
        return  # R∖S would go negative
    assert got == tf.predicted_lambda8_change(P, spec)


@settings(max_examples=100, deadline=None)
@given(root_sets(), st.integers(-2, 2), st.integers(-2, 2),
       st.fractions(max_denominator=30))
def test_hyperdisc_invariance(data, t, s, z):
    roots, c_f, p = data
    P = build_picture_from_roots(roots, c_f, p)
    h = hyperdisc_order(P)
    Q = tf.rescale_equation(P, t, s)
    assert hyperdisc_order(Q) == h
    assert lambda8(Q) - lambda8(P) == tf.predicted_lambda8_change(
        P, tf.TransformSpec("rescale", (t, s)))
    Z = tf.shift(P, z)
    assert Z == P and hyperdisc_order(Z) == h


@pytest.mark.parametrize("text,kind,params", [
    ("deepen:2", "deepen", (2,)),
    ("add-root", "add-root", ()),
    ("redistribute:0/1:3", "redistribute", ((0, 1), 3)),
    ("redistribute:R:1", "redistribute", ((), 1)),
    ("scale-leading:-1", "scale-leading", (-1,)),
    ("rescale:2,-1", "rescale", (2, -1)),
    ("shift:1/5", "shift", (Fraction(1, 5),)),
])
def test_parse_op(text, kind, params):
    spec = tf.parse_op(text)
    assert (spec.kind, spec.params) == (kind, params)
    assert tf.parse_op(str(spec)) == spec


@pytest.mark.parametrize("bad", ["deepen", "deepen:x", "add-root:1", "redistribute:1",
                                 "rescale:1", "shift:a", "twist:1"])
def test_parse_op_errors(bad):
    with pytest.raises(InputError):
        tf.parse_op(bad)


def test_originals_untouched(ex_picture):
    for spec in ("deepen:1", "scale-leading:2", "rescale:1,1", "shift:3"):
        tf.apply(ex_picture, tf.parse_op(spec))
    assert ex_picture.canonical_text() == EX_TEXT and ex_picture.roots == tuple(EX_ROOTS)
