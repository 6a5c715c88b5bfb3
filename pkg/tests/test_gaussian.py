import random
from fractions import Fraction

import pytest

from hgauss.exact import I, ONE, ZERO, Scalar, psd_check
from hgauss.freestar import NCPoly
from hgauss.gaussian import (
    GaussianDatum,
    check_classical,
    check_consistency,
    check_drift,
    heat_datum,
    pair_value,
    random_datum,
    rotation_datum,
    solve_gaussian_space,
    wick_eval,
    wick_eval_recursive,
)
from hgauss.hopf import free_star_algebra, group_algebra, o_n_plus, o_n_star, o_n_twisted, su_q2, words_up_to
from hgauss.ideals import kac_generators

G = NCPoly.gen
HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def cz():
    return group_algebra("Z")


@pytest.fixture(scope="module")
def suq():
    return su_q2(HALF)


def test_pair_value(cz):
    heat = heat_datum(cz)
    assert pair_value(heat, "u", "u") == -2
    assert pair_value(GaussianDatum.zero(cz), "u", "ui") == 0
    o2 = o_n_plus(2)
    d = GaussianDatum.build(o2, gram={("u12", "u12"): 1})
    assert pair_value(d, "u12", "u12") == 1
    with pytest.raises(KeyError):
        pair_value(heat, "u", "zz")


def test_wick_examples(cz):
    heat = heat_datum(cz)
    assert wick_eval(heat, G("u") ** 3) == Fraction(-9, 2)
    assert wick_eval(heat, NCPoly.one()) == 0
    assert wick_eval_recursive(heat, G("u") ** 4) == -8
    assert wick_eval(heat, G("u") ** 4) == -8
    for k in range(1, 7):
        assert wick_eval(heat, G("ui") ** k) == Fraction(-k * k, 2)
    o2 = o_n_plus(2)
    d = GaussianDatum.build(o2, gram={("u12", "u21"): Scalar(2, 1), ("u12", "u12"): 3, ("u21", "u21"): 3})
    w = G("u12") * G("u21") * G("u11")
    assert wick_eval(d, w) == wick_eval(d, G("u12") * G("u21")) == pair_value(d, "u12", "u21")


def test_consistency_examples(cz, suq):
    assert check_consistency(heat_datum(cz)).passed
    bad = GaussianDatum.build(suq, gram={("c", "c"): 1})
    rep = check_consistency(bad)
    assert not rep.passed
    assert any("a.c" in str(v) or "c.a" in str(v) for v in rep.violations)
    for p in (cz, suq, o_n_plus(2), o_n_star(2), o_n_twisted(2), group_algebra("F2")):
        assert check_consistency(GaussianDatum.zero(p)).passed


def test_drift_and_classical(cz):
    assert check_drift(rotation_datum(cz))
    assert not check_drift(heat_datum(cz))
    assert check_drift(GaussianDatum.zero(cz))
    fa = free_star_algebra(["a", "b"])
    assert check_classical(GaussianDatum.build(fa, gram={("a", "a"): 2, ("a", "b"): 1, ("b", "b"): 3}))
    assert not check_classical(GaussianDatum.build(fa, gram={("a", "b"): I}))


def test_solve_suq2(suq):
    space = solve_gaussian_space(suq)
    assert space.dimension == 2
    assert set(space.forced_zero_eta) == {"c", "cs"}
    assert set(space.forced_zero_drift) == {"c", "cs"}
    kac = {str(x) for _, _, x in kac_generators(suq.coreps[0])}
    for d in space.basis:
        assert check_consistency(d).passed
        for g in ("c", "cs"):
            assert d.drift_of(g) == 0
            assert all(d.gram_of(g, h) == 0 for h in suq.generators)
    assert kac == {"-1/2*cs", "c"}


def test_solve_o3_star():
    p = o_n_star(3)
    space = solve_gaussian_space(p)
    assert space.gram_forced_real
    assert space.cocycle_dimension == 3
    # every antisymmetric pattern satisfies the cocycle relations
    rng = random.Random(7)
    for _ in range(5):
        a = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i + 1, 3):
                a[i][j] = rng.randint(-5, 5)
                a[j][i] = -a[i][j]
        for rel in space.cocycle_relations:
            total = sum((c * a[int(g[1]) - 1][int(g[2]) - 1] for g, c in rel.items()), ZERO)
            assert total == 0
    for d in space.basis:
        # basis vectors span a linear space; PSD is a separate, post-hoc condition
        assert [v for v in check_consistency(d).violations if v[0] != "gram_psd"] == []
        assert check_classical(d)


def test_solve_twisted():
    p = o_n_twisted(3)
    space = solve_gaussian_space(p)
    off = {g for g in p.generators if g[1] != g[2]}
    assert off <= set(space.forced_zero_drift)


@pytest.mark.parametrize("name", ["suq", "cz", "o2", "f2"])
def test_random_data_oracle_and_k3(name, suq, cz):
    p = {"suq": suq, "cz": cz, "o2": o_n_plus(2), "f2": group_algebra("F2")}[name]
    rng = random.Random(11)
    for _ in range(3):
        d = random_datum(p, rng)
        assert check_consistency(d).passed
        eng = d.engine()
        for _ in range(40):
            w = tuple(rng.choice(p.generators) for _ in range(rng.randint(0, 6)))
            x = NCPoly.word(w)
            assert wick_eval(d, x, eng) == wick_eval_recursive(d, x, eng)
        for _ in range(20):
            cs = []
            for _ in range(3):
                w = NCPoly.word(tuple(rng.choice(p.generators) for _ in range(rng.randint(1, 2))))
                cs.append(w - p.counit(w))
            assert wick_eval(d, cs[0] * cs[1] * cs[2], eng) == 0


def test_conditional_positivity(suq):
    rng = random.Random(3)
    for p in (suq, group_algebra("Z"), o_n_plus(2)):
        d = random_datum(p, rng)
        fam = []
        for w in words_up_to(p.generators, 2, 1):
            x = NCPoly.word(w)
            fam.append(x - p.counit(x))
        m = [[wick_eval(d, p.star(a) * b) for b in fam] for a in fam]
        assert psd_check(m).is_psd
