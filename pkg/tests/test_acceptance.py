"""Acceptance suite: one pass/fail line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import cmath
import math
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import pytest

from hgauss.exact import ZERO, Scalar
from hgauss.freestar import NCPoly
from hgauss.gaussian import (
    GaussianDatum,
    heat_datum,
    random_datum,
    rotation_datum,
    solve_gaussian_space,
    wick_eval,
    wick_eval_recursive,
)
from hgauss.groups import central_gaussian, class2_quotient, gaussian_part_dual, is_heisenberg, make_group
from hgauss.hopf import free_product, group_algebra, o_n_plus, o_n_star, o_n_twisted, parse_group, su_q2, u_n_plus
from hgauss.ideals import (
    IN,
    build_bounded_quotient,
    filtration_probe,
    kac_generators,
    o2plus_descent_check,
    s_squared,
    scaling_action,
)
from hgauss.semigroup import ExpState, Functional, convolution_power, exp_state

RESULTS: dict = {}
G = NCPoly.gen


def catalogue_entries():
    return [
        group_algebra("Z"),
        group_algebra("F2"),
        su_q2(Fraction(1, 2)),
        su_q2(-1),
        o_n_plus(3),
        u_n_plus(2),
        o_n_star(3),
        o_n_twisted(3),
        free_product(group_algebra("Z2"), group_algebra("Z3")),
    ]


@contextmanager
def criterion(n, title, limit=None):
    start = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        ok = True
    except AssertionError as e:
        note = str(e).splitlines()[0] if str(e) else "assertion failed"
        raise
    finally:
        elapsed = time.perf_counter() - start
        if ok and limit is not None and elapsed > limit:
            ok, note = False, f"runtime {elapsed:.1f}s over {limit}s"
        status = "PASS" if ok else "FAIL"
        RESULTS[n] = f"criterion {n:2d} {status}  {title} ({elapsed:.2f}s){'  ' + note if note else ''}"
        print(RESULTS[n])
    if limit is not None:
        assert elapsed <= limit, f"runtime {elapsed:.1f}s over {limit}s"


def random_word(rng, p, lo, hi):
    return tuple(rng.choice(p.generators) for _ in range(rng.randint(lo, hi)))


def test_criterion_01_wick_oracle():
    with criterion(1, "closed-form Wick evaluation equals the recursive oracle", 10):
        rng = random.Random(2024)
        for p in catalogue_entries():
            d = random_datum(p, rng, span=2)
            eng = d.engine()
            for _ in range(200):
                x = NCPoly.word(random_word(rng, p, 0, 6))
                assert wick_eval(d, x, eng) == wick_eval_recursive(d, x, eng), (p.name, str(x))


def test_criterion_02_k3_vanishing():
    with criterion(2, "wick_eval vanishes on explicit K3 products", 10):
        rng = random.Random(99)
        for p in catalogue_entries():
            d = random_datum(p, rng, span=2)
            eng = d.engine()
            for _ in range(100):
                x = NCPoly.one()
                for _ in range(3):
                    w = NCPoly.word(random_word(rng, p, 1, 2))
                    x = x * (w - p.counit(w))
                assert wick_eval(d, x, eng) == 0, (p.name, str(x))


def test_criterion_03_heat_semigroup():
    with criterion(3, "heat semigroup on C[Z] matches exp(-k^2 t / 2)", 5):
        cz = group_algebra("Z")
        heat = heat_datum(cz)
        for t in (0.1, 1.0):
            for k in range(-5, 6):
                x = G("u") ** k if k >= 0 else G("ui") ** (-k)
                r = exp_state(heat, t, x, order=30)
                assert abs(r.value - math.exp(-k * k * t / 2)) <= 1e-9, (t, k, r.value)


def test_criterion_04_drift_character():
    with criterion(4, "drift semigroups are characters; binomial convolution identity"):
        cz = group_algebra("Z")
        rot = rotation_datum(cz)
        f = Functional.from_datum(rot)

        def power(j):
            return G("u") ** j if j >= 0 else G("ui") ** (-j)

        for t in (0.3, 1.0, 2.5):
            st = ExpState(f, t)
            for j in range(-4, 5):
                for k in range(-4, 5):
                    lhs = st(power(j) * power(k))
                    assert abs(lhs - st(power(j)) * st(power(k))) <= 1e-10, (t, j, k)
                    assert abs(st(power(j)) - cmath.exp(1j * j * t)) <= 1e-10
        rng = random.Random(8)
        for _ in range(8):
            a = NCPoly.word(random_word(rng, cz, 1, 3))
            b = NCPoly.word(random_word(rng, cz, 1, 3))
            for k in range(6):
                lhs = convolution_power(rot, k, a * b)
                rhs = sum(
                    (comb(k, p) * convolution_power(rot, p, a) * convolution_power(rot, k - p, b) for p in range(k + 1)),
                    ZERO,
                )
                assert lhs == rhs


def test_criterion_05_suq2_classification():
    with criterion(5, "SU_1/2(2): gamma forced to zero, real dimension 2, Kac generators killed"):
        p = su_q2(Fraction(1, 2))
        space = solve_gaussian_space(p)
        assert space.dimension == 2
        assert set(space.forced_zero_eta) == {"c", "cs"}
        assert set(space.forced_zero_drift) == {"c", "cs"}
        kac = [x for _, _, x in kac_generators(p.coreps[0])]
        assert kac
        for d in space.basis:
            eng = d.engine()
            for x in kac:
                assert wick_eval(d, x, eng) == 0
                for g in p.generators:
                    y = G(g) - p.counit(G(g))
                    assert wick_eval(d, x * y, eng) == 0 and wick_eval(d, y * x, eng) == 0


def test_criterion_06_o3_star():
    with criterion(6, "O3*: cocycle space is the real antisymmetric 3x3 matrices"):
        p = o_n_star(3)
        space = solve_gaussian_space(p)
        assert space.gram_forced_real
        assert space.cocycle_dimension == 3
        for i in range(3):
            for j in range(i + 1, 3):
                a = {f"u{r}{s}": ZERO for r in range(1, 4) for s in range(1, 4)}
                a[f"u{i + 1}{j + 1}"] = Scalar(1)
                a[f"u{j + 1}{i + 1}"] = Scalar(-1)
                for rel in space.cocycle_relations:
                    assert sum((c * a[g] for g, c in rel.items()), ZERO) == 0
        # the diagonal and the symmetric part are killed
        for r in range(1, 4):
            a = {f"u{x}{y}": Scalar(1 if x == y == r else 0) for x in range(1, 4) for y in range(1, 4)}
            assert any(sum((c * a[g] for g, c in rel.items()), ZERO) != 0 for rel in space.cocycle_relations)


def test_criterion_07_twisted():
    with criterion(7, "twisted O3: phi(u_ij) = 0 forced off the diagonal"):
        p = o_n_twisted(3)
        space = solve_gaussian_space(p)
        off = {f"u{i}{j}" for i in range(1, 4) for j in range(1, 4) if i != j}
        assert off <= set(space.forced_zero_drift)
        for d in space.basis:
            for g in off:
                assert d.drift_of(g) == 0


def test_criterion_08_discrete_duals():
    with criterion(8, "discrete duals: Heisenberg for F2, trivial for Z2*Z2, central Gaussian"):
        h = gaussian_part_dual(parse_group("F2"))
        assert h.layered.abelianization == "Z^2"
        assert is_heisenberg(h.quotient) and h.quotient.center_rank() == 1
        assert h.layered.bracket_table == {("g1", "g2"): (1,)}
        d = gaussian_part_dual(make_group("ab", [[("a", 1)] * 2, [("b", 1)] * 2], "Z2*Z2"))
        assert d.quotient.is_trivial() and d.algebra.generators == ()
        cg = central_gaussian(h.quotient)
        res, count = cg.conditional_positivity(3)
        assert res.is_psd and count > 1
        assert all(v != 0 for v in cg.center_values().values())


def test_criterion_09_ideals():
    with criterion(9, "ideal machinery: commutators, projections, O2+ descent, filtration", 120):
        f3 = build_bounded_quotient(group_algebra("F3"), 8, lazy=True)
        g, h, k = G("g1"), G("g2"), G("g3")
        gi, hi, ki = G("g1i"), G("g2i"), G("g3i")
        x = (g * h * gi * hi) * k * (h * g * hi * gi) * ki - 1
        assert f3.membership(3, x).status == IN
        for name, order in (("Z2", 2), ("Z4", 4)):
            p = group_algebra(name)
            q = build_bounded_quotient(p, 10)
            gen = G(p.generators[0])
            proj = NCPoly.one()
            power = NCPoly.one()
            for _ in range(1, order):
                power = power * gen
                proj = proj + power
            proj = proj.scale(Fraction(1, order))
            centered = proj - p.counit(proj)
            for n in range(1, 11):
                assert q.membership(n, centered).status == IN, (name, n)
        rep = o2plus_descent_check(build_bounded_quotient(su_q2(-1), 6), 6)
        assert rep.certified
        f2 = build_bounded_quotient(group_algebra("F2"), 4)
        assert filtration_probe(f2, 2).passed and filtration_probe(f2, 4).passed


def test_criterion_10_kac():
    with criterion(10, "Kac generators, S^2 ratios and the scaling action at t = 0"):
        c = su_q2(Fraction(1, 2)).coreps[0]
        gens = kac_generators(c)
        assert [(i, j) for i, j, _ in gens] == [(1, 2), (2, 1)]
        for i, j, x in gens:
            # a nonzero multiple of the matrix coefficient u_ij
            assert set(x.terms) == set(c.coeffs[i - 1][j - 1].terms)
        q = c.q_eigenvalues
        ratios = s_squared(c)
        for (i, j), v in ratios.items():
            assert v == q[i - 1] / q[j - 1]
        assert all(v == 1 for v in scaling_action(c, 0).values())


def test_zz_summary():
    missing = [n for n in range(1, 11) if n not in RESULTS]
    print("\n" + "\n".join(RESULTS[n] for n in sorted(RESULTS)))
    assert not missing, f"criteria not run: {missing}"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
