import math
from fractions import Fraction

import pytest

from hgauss.freestar import NCPoly
from hgauss.hopf import Corepresentation, RelationSpan, free_star_algebra, group_algebra, o_n_plus, su_q2
from hgauss.ideals import (
    IN,
    INCONCLUSIVE,
    NOT_AT_BOUND,
    STRONG,
    TOTAL,
    WrongPresentation,
    build_bounded_quotient,
    filtration_probe,
    kac_generators,
    kinfty_probe,
    kn_span,
    membership,
    o2plus_descent_check,
    s_squared,
    scaling_action,
)

G = NCPoly.gen


@pytest.fixture(scope="module")
def z2():
    return group_algebra("Z2")


def test_quotient_dimensions(z2):
    assert build_bounded_quotient(z2, 3).dimension == 2
    assert build_bounded_quotient(free_star_algebra(["x"]), 3).dimension == 4
    o2 = o_n_plus(2)
    q = build_bounded_quotient(o2, 2)
    rank = RelationSpan(o2, 2).rank
    assert 0 < rank <= len(o2.relations)
    assert q.dimension == 1 + 4 + 16 - rank


def test_kn_in_z2(z2):
    q = build_bounded_quotient(z2, 3)
    k1 = kn_span(q, 1)
    assert k1.dimension == 1
    g = G("g")
    for n in range(1, 4):
        assert membership(kn_span(q, n), g - 1).status == IN
    assert kn_span(q, 5).empty_at_bound and kn_span(q, 5).warnings


def test_kn_chain_inclusions():
    for p in (group_algebra("Z"), su_q2(Fraction(1, 2)), o_n_plus(2), group_algebra("F2")):
        q = build_bounded_quotient(p, 4)
        prev = None
        for n in range(1, 5):
            h = kn_span(q, n)
            if prev is not None:
                assert h.dimension <= prev.dimension
                for b in h.basis():
                    assert prev.membership(b).status == IN
                    assert p.counit(b) == 0
            prev = h


def test_commutator_in_k3_free_group():
    p = group_algebra("F3")
    q = build_bounded_quotient(p, 8, lazy=True)
    g, h, k = G("g1"), G("g2"), G("g3")
    gi, hi, ki = G("g1i"), G("g2i"), G("g3i")
    comm = g * h * gi * hi
    cinv = h * g * hi * gi
    x = comm * k * cinv * ki - 1
    r = membership(kn_span(q, 3), x)
    assert r.status == IN
    assert membership(kn_span(q, 2), comm - 1).status == IN
    assert membership(kn_span(q, 2), g - 1).status == NOT_AT_BOUND


def test_projection_in_every_kn(z2):
    q = build_bounded_quotient(z2, 10)
    proj = (1 + G("g")).scale(Fraction(1, 2))
    x = proj - z2.counit(proj)
    for n in range(1, 11):
        assert membership(kn_span(q, n), x).status == IN


def test_not_in_span_is_one_sided():
    p = group_algebra("Z")
    q = build_bounded_quotient(p, 6)
    r = membership(kn_span(q, 2), G("u") - 1)
    assert r.status == NOT_AT_BOUND
    assert r.status != "not_in"
    assert r.exhaustive


def test_membership_monotone():
    p = group_algebra("Z2")
    x = G("g") - 1
    for d in (3, 5):
        assert build_bounded_quotient(p, d).membership(2, x).status == IN


def test_kinfty_examples(z2):
    r = kinfty_probe(build_bounded_quotient(z2, 6), 6)
    assert r.chain == [1] * 6 and r.verdict == TOTAL
    cz = kinfty_probe(build_bounded_quotient(group_algebra("Z"), 6), 6)
    assert cz.chain == [12, 11, 10, 9, 8, 7]
    assert cz.verdict == INCONCLUSIVE
    o2 = kinfty_probe(build_bounded_quotient(su_q2(-1), 6), 6)
    assert "c" in o2.persistent_generators and "cs" in o2.persistent_generators
    assert all(a >= b for a, b in zip(o2.chain, o2.chain[1:]))
    free = kinfty_probe(build_bounded_quotient(free_star_algebra(["x"]), 3), 3)
    assert free.verdict != STRONG or free.chain[-1] == 0


def test_o2plus_descent():
    for d in (4, 6):
        r = o2plus_descent_check(build_bounded_quotient(su_q2(-1), d), d)
        assert r.certified and r.identity_in_relations and r.sum_identity_in_relations
        assert [lv["status"] for lv in r.levels] == [IN] * d
    with pytest.raises(WrongPresentation):
        o2plus_descent_check(build_bounded_quotient(su_q2(Fraction(1, 2)), 2))


def test_kac_data():
    c = su_q2(Fraction(1, 2)).coreps[0]
    assert c.q_eigenvalues == (Fraction(1, 2), Fraction(2))
    gens = kac_generators(c)
    assert [(i, j) for i, j, _ in gens] == [(1, 2), (2, 1)]
    assert [str(x) for _, _, x in gens] == ["-1/2*cs", "c"]
    ratios = s_squared(c)
    assert ratios[(1, 2)] == Fraction(1, 4) and ratios[(2, 1)] == 4
    listed = {(i, j) for i, j, _ in gens}
    for key, v in ratios.items():
        assert (v != 1) == (key in listed)
    o2 = o_n_plus(2).coreps[0]
    assert kac_generators(o2) == []
    assert all(v == 1 for v in s_squared(o2).values())
    flat = Corepresentation(c.coeffs, (Fraction(1), Fraction(1)))
    assert kac_generators(flat) == []
    assert all(v == 1 for v in scaling_action(c, 0).values())
    for v in scaling_action(c, 0.7).values():
        assert math.isclose(abs(v), 1.0)
    assert scaling_action(c, 1.0)[(1, 2)] == pytest.approx(complex(math.cos(math.log(4)), math.sin(math.log(4))))


def test_filtration(z2):
    f2 = build_bounded_quotient(group_algebra("F2"), 4)
    assert filtration_probe(f2, 2).passed
    assert filtration_probe(f2, 4).passed
    assert filtration_probe(build_bounded_quotient(z2, 4), 4, mode="hopf").passed
    with pytest.raises(ValueError):
        filtration_probe(f2, 2, mode="other")
