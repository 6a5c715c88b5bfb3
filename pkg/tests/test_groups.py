import itertools
import random

import pytest

from hgauss.exact import ONE, Scalar
from hgauss.freestar import NCPoly
from hgauss.gaussian import check_consistency, wick_eval
from hgauss.hopf import hopf_axiom_probe, parse_group
from hgauss.ideals import IN, build_bounded_quotient, kn_span
from hgauss.groups import (
    Class2Arith,
    central_gaussian,
    class2_quotient,
    export_group,
    free_reduce,
    gaussian_part_dual,
    is_heisenberg,
    literal_central_functional,
    make_group,
    reduced_abelianization,
    torsion_free_reduce,
)

A = [("a", 1)]
B = [("b", 1)]


def comm(x, y):
    return [(x, 1), (y, 1), (x, -1), (y, -1)]


def test_free_reduce():
    assert free_reduce([("a", 1), ("b", 1), ("b", -1), ("a", -1)]) == ()
    with pytest.raises(ValueError):
        make_group(["a"], [[("c", 1)]])


def test_class2_examples():
    f2 = class2_quotient(parse_group("F2"))
    assert f2.abelianization == "Z^2" and f2.commutator_layer == "Z"
    assert list(f2.bracket_table.values()) == [(1,)]
    z2 = class2_quotient(make_group("ab", [comm("a", "b")], "Z^2"))
    assert z2.abelianization == "Z^2" and z2.commutator_layer == "0"
    dihedral = class2_quotient(make_group("ab", [A * 2, B * 2], "Z2*Z2"))
    assert dihedral.abelianization == "Z2 x Z2"
    # gamma_2 / gamma_3 = <t^2> / <t^4> in the infinite dihedral group
    assert dihedral.commutator_layer == "Z2"


def test_abelian_inputs_have_zero_layer():
    for g in ("Z", "Z^3", "Z2", "Z x Z3"):
        assert class2_quotient(parse_group(g)).commutator_layer == "0"


def test_class2_group_law():
    ar = Class2Arith.free(3)
    rng = random.Random(1)
    els = [(tuple(rng.randint(-3, 3) for _ in range(3)), tuple(rng.randint(-3, 3) for _ in range(3))) for _ in range(6)]
    for x, y, z in itertools.product(els[:3], repeat=3):
        assert ar.mul(ar.mul(x, y), z) == ar.mul(x, ar.mul(y, z))
    for x in els:
        assert ar.mul(x, ar.inv(x)) == ar.identity()
    for x, y, z in itertools.product(els[:3], repeat=3):
        assert ar.commutator(ar.commutator(x, y), z) == ar.identity()
    assert ar.power(els[0], 3) == ar.mul(els[0], ar.mul(els[0], els[0]))


def test_torsion_free_examples():
    h = torsion_free_reduce(class2_quotient(parse_group("F2")))
    assert is_heisenberg(h) and h.center_rank() == 1
    assert torsion_free_reduce(class2_quotient(make_group("ab", [A * 2, B * 2]))).is_trivial()
    zz3 = torsion_free_reduce(class2_quotient(parse_group("Z x Z3")))
    assert (zz3.top_rank, zz3.bottom_rank) == (1, 0)
    mixed = torsion_free_reduce(class2_quotient(make_group("ab", [A * 2 + B * 3])))
    assert (mixed.top_rank, mixed.bottom_rank) == (1, 0)
    sq = torsion_free_reduce(class2_quotient(make_group("abc", [comm("a", "b") + [("c", -1)] * 2])))
    assert (sq.top_rank, sq.bottom_rank) == (2, 1)
    assert sq.brackets == {(0, 1): (-2,)} or sq.brackets == {(0, 1): (2,)}


@pytest.mark.parametrize(
    "g",
    [
        parse_group("F2"),
        parse_group("F3"),
        parse_group("Z x Z3"),
        make_group("ab", [A * 2, B * 2]),
        make_group("ab", [A * 2 + B * 3]),
        make_group("abc", [comm("a", "b") + [("c", -1)] * 2]),
        make_group("ab", [comm("a", "b") * 3]),
    ],
)
def test_reduction_properties(g):
    c = torsion_free_reduce(class2_quotient(g))
    assert c.torsion_free
    assert torsion_free_reduce(c).as_dict() == c.as_dict()
    ar = c.arith()
    for r in g.relators:
        x = ar.identity()
        for name, e in r:
            img = c.quotient_map[name]
            x = ar.mul(x, img if e > 0 else ar.inv(img))
        assert x == ar.identity()


def test_gaussian_part_dual():
    d = gaussian_part_dual(parse_group("F2"))
    assert d.as_dict()["is_heisenberg"]
    assert len([g for g in d.algebra.generators if not g.endswith("i")]) == 3
    assert hopf_axiom_probe(d.algebra).passed
    trivial = gaussian_part_dual(make_group("ab", [A * 2, B * 2]))
    assert trivial.algebra.generators == ()
    assert trivial.quotient.is_trivial()
    torus = gaussian_part_dual(parse_group("Z^3"))
    assert torus.as_dict()["reduced_abelianization"] == "Z^3"
    assert torus.quotient.bottom_rank == 0


def test_central_gaussian_on_z():
    c = torsion_free_reduce(class2_quotient(parse_group("Z")))
    cg = central_gaussian(c)
    for k in range(-3, 4):
        assert cg.value(((k,), ())) == Scalar(-k * k)
    res, count = cg.conditional_positivity(2)
    assert res.is_psd and count == 5
    assert literal_central_functional(c).conditional_positivity(2)[0].is_psd


def test_central_gaussian_on_heisenberg():
    c = torsion_free_reduce(class2_quotient(parse_group("F2")))
    cg = central_gaussian(c)
    vals = cg.center_values()
    assert vals["z1"] != 0
    res, count = cg.conditional_positivity(3)
    assert res.is_psd and count > 50
    datum = cg.datum()
    assert check_consistency(datum).passed
    rng = random.Random(7)
    gens = datum.presentation.generators
    ar = cg.ar
    letter = {}
    for j, x in enumerate(cg.xs):
        letter[x] = ar.gen(j)
        letter[x + "i"] = ar.gen(j, -1)
    z = ((0, 0), (1,))
    letter["z1"], letter["z1i"] = z, ar.inv(z)
    for _ in range(30):
        w = tuple(rng.choice(gens) for _ in range(rng.randint(1, 5)))
        el = ar.identity()
        for g in w:
            el = ar.mul(el, letter[g])
        assert wick_eval(datum, NCPoly.word(w)) == cg.value(el)


def test_literal_functional_is_not_conditionally_positive_on_heisenberg():
    c = torsion_free_reduce(class2_quotient(parse_group("F2")))
    res, _ = literal_central_functional(c).conditional_positivity(2)
    assert not res.is_psd and res.witness is not None


def test_central_gaussian_rejects_torsion_input():
    with pytest.raises(ValueError):
        central_gaussian(class2_quotient(parse_group("F2")))


def test_commutators_in_k3_of_exported_algebra():
    c = torsion_free_reduce(class2_quotient(parse_group("F2")))
    p = gaussian_part_dual(parse_group("F2")).algebra
    q = build_bounded_quotient(p, 10, lazy=True)
    G = NCPoly.gen
    inv = p.inverses
    for g, h, k in [("x1", "x2", "x1"), ("x1", "x2", "x2"), ("x2", "z1", "x1")]:
        cm = G(g) * G(h) * G(inv[g]) * G(inv[h])
        ci = G(h) * G(g) * G(inv[h]) * G(inv[g])
        x = cm * G(k) * ci * G(inv[k]) - 1
        assert q.membership(3, x).status == IN
        assert q.membership(2, cm - 1).status == IN
