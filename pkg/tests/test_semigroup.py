import cmath
import math
import random
from fractions import Fraction
from math import comb

import pytest

from hgauss.exact import ZERO, Scalar
from hgauss.freestar import NCPoly
from hgauss.gaussian import GaussianDatum, heat_datum, random_datum, rotation_datum, solve_gaussian_space
from hgauss.hopf import group_algebra, o_n_plus, o_n_star, o_n_twisted, su_q2, u_n_plus, words_up_to
from hgauss.semigroup import (
    ExpState,
    Functional,
    convolution_power,
    convolve,
    degree_two_family,
    exp_state,
    state_positivity_probe,
)

G = NCPoly.gen


@pytest.fixture(scope="module")
def cz():
    return group_algebra("Z")


def test_convolution_power_basics(cz):
    heat = heat_datum(cz)
    x = G("u") * G("u") + 3
    assert convolution_power(heat, 0, x) == 4
    for n in range(5):
        assert convolution_power(heat, n, G("u")) == Scalar(Fraction(-1, 2)) ** n if n else True
    with pytest.raises(ValueError):
        convolution_power(heat, -1, x)


def test_group_like_powers(cz):
    heat = heat_datum(cz)
    for k in (1, 2, 3):
        base = Fraction(-k * k, 2)
        for n in range(1, 5):
            assert convolution_power(heat, n, G("u") ** k) == base**n


def test_drift_binomial_identity():
    rng = random.Random(5)
    p = su_q2(Fraction(1, 2))
    d = GaussianDatum.build(p, drift={"a": Scalar(0, 2), "as": Scalar(0, -2)})
    for _ in range(6):
        a = NCPoly.word(tuple(rng.choice(p.generators) for _ in range(rng.randint(1, 3))))
        b = NCPoly.word(tuple(rng.choice(p.generators) for _ in range(rng.randint(1, 3))))
        for k in range(6):
            lhs = convolution_power(d, k, a * b)
            rhs = sum(
                (convolution_power(d, j, a) * convolution_power(d, k - j, b) * comb(k, j) for j in range(k + 1)),
                ZERO,
            )
            assert lhs == rhs


def test_exp_state_examples(cz):
    heat = heat_datum(cz)
    r0 = exp_state(heat, 0, G("u") ** 2 + 5)
    assert r0.value == 6 and r0.converged
    for t in (0.1, 0.5, 1.0):
        for k in range(-5, 6):
            x = G("u") ** k if k >= 0 else G("ui") ** (-k)
            r = exp_state(heat, t, x)
            assert abs(r.value - math.exp(-k * k * t / 2)) <= 1e-9
            assert r.converged
    rot = rotation_datum(cz)
    for t in (0.3, 1.0, 2.5):
        assert abs(exp_state(rot, t, G("u")).value - cmath.exp(1j * t)) <= 1e-10
    with pytest.raises(ValueError):
        exp_state(heat, -1, G("u"))
    with pytest.raises(ValueError):
        exp_state(heat, 1, G("u"), order=0)


def test_non_convergence_is_flagged(cz):
    heat = heat_datum(cz)
    r = exp_state(heat, 3.0, G("u") ** 5, order=3, squarings=0)
    assert not r.converged
    assert r.last_term > 0


def test_semigroup_law():
    rng = random.Random(2)
    p = su_q2(Fraction(1, 2))
    f = Functional.from_datum(random_datum(p, rng))
    s, t = 0.3, 0.4
    es, et, est = ExpState(f, s), ExpState(f, t), ExpState(f, s + t)
    for w in list(words_up_to(p.generators, 2)) + [tuple(rng.choice(p.generators) for _ in range(4)) for _ in range(10)]:
        x = NCPoly.word(w)
        lhs = convolve(es.word, et.word, x, p)
        assert abs(lhs - est(x)) <= 1e-8


def test_drift_gives_character():
    rng = random.Random(4)
    p = group_algebra("F2")
    d = GaussianDatum.build(p, drift={"g1": Scalar(0, 1), "g1i": Scalar(0, -1), "g2": Scalar(0, 3), "g2i": Scalar(0, -3)})
    st = ExpState(Functional.from_datum(d), 0.7)
    for _ in range(15):
        x = NCPoly.word(tuple(rng.choice(p.generators) for _ in range(rng.randint(1, 3))))
        y = NCPoly.word(tuple(rng.choice(p.generators) for _ in range(rng.randint(1, 3))))
        assert abs(st(x * y) - st(x) * st(y)) <= 1e-10


def test_positivity_examples(cz):
    heat = heat_datum(cz)
    r = state_positivity_probe(heat, 0, [NCPoly.one()])
    assert r.psd and r.matrix == [[1]]
    fam = [NCPoly.one(), G("u"), G("u") ** 2]
    r = state_positivity_probe(heat, 1, fam)
    assert r.psd
    assert abs(r.matrix[0][2] - math.exp(-2)) < 1e-12
    neg = heat.scaled(-1)
    fails = [t for t in (0.5, 1, 2) if not state_positivity_probe(neg, t, degree_two_family(cz)).psd]
    assert fails


@pytest.mark.parametrize(
    "p",
    [su_q2(Fraction(1, 2)), su_q2(-1), o_n_plus(2), o_n_star(2), o_n_twisted(2), u_n_plus(2), group_algebra("Z2"), group_algebra("F2")],
    ids=lambda p: p.name,
)
def test_gaussian_states_are_positive(p):
    d = random_datum(p, random.Random(8), span=1)
    nontrivial = bool(d.drift) or any(x for row in d.gram.entries for x in row)
    # only the zero functional is Gaussian when the Gaussian space is trivial
    assert nontrivial == (solve_gaussian_space(p).dimension > 0)
    fam = degree_two_family(p)
    for t in (0.1, 1):
        assert state_positivity_probe(d, t, fam).psd
