from fractions import Fraction

import pytest
from hypothesis import strategies as st

from clusterbasis import build_picture_from_roots, parse_picture

P5 = 5
EX_ROOT_TEXT = ["0", "p^6", "2*p^6", "p^4", "2*p^4", "3*p^4",
                "1", "1+p^8", "1+2*p^8", "1+3*p^8", "2", "3"]
EX_ROOTS = [0, 5**6, 2 * 5**6, 5**4, 2 * 5**4, 3 * 5**4,
            1, 1 + 5**8, 1 + 2 * 5**8, 1 + 3 * 5**8, 2, 3]
EX_TEXT = "(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0"
EX_JSON = {"p": 5, "leading_coeff": "1", "roots": EX_ROOT_TEXT}

# Hand-written corpus; each entry is (input text, expected canonical text).
CORPUS = [
    ("(* * * * *)_0", "(* * * * *)_0"),
    ("(* * * * * *)_3", "(* * * * * *)_3"),
    ("((* *)_1 * * *)_0", "((* *)_1 * * *)_0"),
    ("(* * * (* *)_1)_0", "((* *)_1 * * *)_0"),
    ("(* (* * *)_2 *)_1", "((* * *)_2 * *)_1"),
    ("((* *)_1 (* *)_3 *)_0", "((* *)_3 (* *)_1 *)_0"),
    ("((* * *)_1 (* * * *)_1)_0", "((* * * *)_1 (* * *)_1)_0"),
    ("(((* *)_1 *)_1 * *)_0", "(((* *)_1 *)_1 * *)_0"),
    ("(* * ((* *)_2 (* *)_2)_1)_0", "(((* *)_2 (* *)_2)_1 * *)_0"),
    ("((* *)_1/2 * * *)_0", "((* *)_1/2 * * *)_0"),
    ("((* *)_2/4 * * *)_0", "((* *)_1/2 * * *)_0"),
    ("(* * * * *)_-1/3", "(* * * * *)_-1/3"),
    ("((* * *)_3/2 (* * *)_1/2)_1/2", "((* * *)_3/2 (* * *)_1/2)_1/2"),
    ("  ( *  *   * * * ) _ 0 ", "(* * * * *)_0"),
    ("(((* * *)_2 * * *)_4 (* * * *)_8 * *)_0", EX_TEXT),
    ("(* * (* * * *)_8 ((* * *)_2 * * *)_4)_0", EX_TEXT),
    ("((* *)_1 (* *)_1 (* *)_1)_2", "((* *)_1 (* *)_1 (* *)_1)_2"),
    ("(((* *)_1 * *)_2 ((* * *)_1 *)_2)_0", "(((* * *)_1 *)_2 ((* *)_1 * *)_2)_0"),
    ("((* *)_+1 * * *)_+0", "((* *)_1 * * *)_0"),
    ("((((* *)_1 *)_1 *)_1 * *)_0", "((((* *)_1 *)_1 *)_1 * *)_0"),
]


@pytest.fixture
def ex_picture():
    return build_picture_from_roots(EX_ROOTS, 1, P5)


@pytest.fixture
def ex_abstract():
    return parse_picture(EX_TEXT)


def by_leaves(P, leaves):
    """Node id of the proper cluster with exactly these root indices."""
    leaves = frozenset(leaves)
    (c,) = [c for c in P.clusters if P[c].leaves == leaves]
    return c


def ex_named(P):
    """R, t1, t2, t3 of the worked example picture built from EX_ROOTS."""
    return {"R": P.top, "t1": by_leaves(P, range(6)), "t2": by_leaves(P, range(3)),
            "t3": by_leaves(P, range(6, 10))}


# --- hypothesis strategies -----------------------------------------------------------

def _split(draw, n, max_parts=4):
    """Random composition of n into 2..max_parts positive parts."""
    k = draw(st.integers(2, min(max_parts, n)))
    cuts = sorted(draw(st.lists(st.integers(1, n - 1), min_size=k - 1, max_size=k - 1,
                                unique=True)))
    return [b - a for a, b in zip([0] + cuts, cuts + [n])]


def _tree(draw, n, depths):
    if n == 1:
        return None
    return (draw(depths), [_tree(draw, m, depths) for m in _split(draw, n)])


@st.composite
def pictures(draw, min_roots=5, max_roots=10, depths=st.integers(1, 3),
             top_depths=st.integers(0, 2), vcfs=st.sampled_from([0, 1, 2, 4])):
    from clusterbasis import ClusterPicture
    n = draw(st.integers(min_roots, max_roots))
    items = [_tree(draw, m, depths) for m in _split(draw, n, 6)]
    return ClusterPicture.from_nested((draw(top_depths), items), vcf=draw(vcfs))


rational_depths = st.one_of(st.integers(1, 3),
                            st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=4)
                            .filter(lambda q: q > 0))


@st.composite
def root_sets(draw, primes=(3, 5, 7), min_size=5, max_size=9):
    """Distinct rational roots built from p-adic digits, plus p and c_f."""
    p = draw(st.sampled_from(primes))
    digits = st.lists(st.integers(0, p - 1), min_size=1, max_size=4)
    def build(ds, shift):
        return sum(Fraction(d) * Fraction(p) ** (k + shift) for k, d in enumerate(ds))
    roots = draw(st.lists(st.builds(build, digits, st.integers(-1, 3)),
                          min_size=min_size, max_size=max_size, unique=True))
    c_f = draw(st.sampled_from([1, 2, p, p * p, Fraction(1, p), -3 * p]))
    return roots, c_f, p
