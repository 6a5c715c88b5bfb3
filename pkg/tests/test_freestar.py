from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgauss.exact import I, ONE, ZERO, Scalar
from hgauss.freestar import (
    ANTIHOMOMORPHIC,
    DERIVATION,
    HOMOMORPHIC,
    NCPoly,
    TensorPoly,
    apply_generator_map,
    check_involutive,
    multiply,
    parse_poly,
    parse_tensor,
    star,
)

a, b, g, h = (NCPoly.gen(x) for x in "abgh")
GENS = ("a", "as", "c", "cs")
STAR = {"a": NCPoly.gen("as"), "as": NCPoly.gen("a"), "c": NCPoly.gen("cs"), "cs": NCPoly.gen("c")}

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(Scalar, fracs, fracs)
words = st.lists(st.sampled_from(GENS), max_size=4).map(tuple)
polys = st.dictionaries(words, scalars, max_size=5).map(NCPoly)


def test_multiply_examples():
    assert multiply(NCPoly.one(), a + b) == a + b
    assert (a + b) * (a - b) == a * a - a * b + b * a - b * b
    assert (g - 1) * (h - 1) == g * h - g - h + 1


def test_canonical_text():
    p = NCPoly({("a", "g", "as"): Scalar(Fraction(1, 2), Fraction(3, 4)), (): 1})
    assert str(p) == "(1/2 + 3/4i)*a.g.as + 1"
    assert str(NCPoly.zero()) == "0"
    assert str(a - 2 * b) == "-2*b + a"


def test_star_examples():
    alpha, gamma = NCPoly.gen("a"), NCPoly.gen("c")
    assert star(alpha * gamma, STAR) == NCPoly.gen("cs") * NCPoly.gen("as")
    u = NCPoly.gen("u12")
    assert star(u.scale(I), {"u12": u}) == u.scale(-I)
    assert star(g, {"g": NCPoly.gen("gi"), "gi": g}) == NCPoly.gen("gi")


def test_star_table_must_be_involutive():
    assert check_involutive({"a": NCPoly.gen("b"), "b": NCPoly.gen("a")}) == []
    assert check_involutive({"a": NCPoly.gen("b"), "b": NCPoly.gen("b")}) != []


def test_generator_maps():
    eps = {"a": ONE, "as": ONE, "c": ZERO, "cs": ZERO}
    assert apply_generator_map(NCPoly.word(("a", "c")), eps, HOMOMORPHIC, one=ONE) == 0
    eta = apply_generator_map(NCPoly.word(("u", "u", "u")), {"u": ONE}, DERIVATION, counit={"u": ONE}, zero=ZERO)
    assert eta == 3
    S = {"g": NCPoly.gen("gi"), "h": NCPoly.gen("hi")}
    assert apply_generator_map(g * h, S, ANTIHOMOMORPHIC, one=NCPoly.one()) == NCPoly.word(("hi", "gi"))
    with pytest.raises(KeyError):
        apply_generator_map(g, {}, HOMOMORPHIC, one=ONE)


@given(polys)
def test_parse_print_roundtrip(p):
    assert parse_poly(str(p)) == p


@given(polys)
def test_star_involutive(p):
    assert star(star(p, STAR), STAR) == p


@settings(max_examples=50)
@given(polys, polys)
def test_star_antimultiplicative(p, q):
    assert star(p * q, STAR) == star(q, STAR) * star(p, STAR)


@settings(max_examples=50)
@given(words.filter(bool), words.filter(bool), st.builds(Scalar, fracs, fracs), st.builds(Scalar, fracs, fracs))
def test_derivation_vanishes_on_k2(w1, w2, x, y):
    eps = {"a": ONE, "as": ONE, "c": ZERO, "cs": ZERO}

    def centered(w):
        p = NCPoly.word(w)
        return p - apply_generator_map(p, eps, HOMOMORPHIC, one=ONE)

    prod = centered(w1) * centered(w2)
    eta = {"a": x, "as": y, "c": Scalar(1), "cs": Scalar(0, 2)}
    assert apply_generator_map(prod, eta, DERIVATION, counit=eps, zero=ZERO) == 0


def test_tensor_ops():
    t = TensorPoly.elementary(a, b) + TensorPoly.elementary(NCPoly.one(), a)
    assert str(t) == "a (x) b + 1 (x) a"
    assert parse_tensor(str(t)) == t
    sq = t * t
    assert sq == TensorPoly.elementary(a * a, b * b) + TensorPoly.elementary(a, b * a) + TensorPoly.elementary(a, a * b) + TensorPoly.elementary(NCPoly.one(), a * a)
    assert t.legs == 2
