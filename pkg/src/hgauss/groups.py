"""Class-2 nilpotent quotients of finitely presented groups and their Gaussian duals.

Elements of the free class-2 nilpotent group on g_1..g_n are stored as
(a, b) with a in Z^n and b in Z^m, m = n(n-1)/2, standing for the normal form
g_1^a_1 ... g_n^a_n times prod c_jk^b_jk, where c_jk = [g_j, g_k] = g_j g_k g_j^-1 g_k^-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exact import ONE, ZERO, Scalar, ScalarMatrix, as_scalar, nullspace, psd_check, rref, smith_normal_form
from .gaussian import GaussianDatum
from .hopf import GroupWords, HopfPresentation, group_algebra

FpGroupPresentation = GroupWords


def free_reduce(word: Sequence[tuple[str, int]]) -> tuple:
    out: list = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def make_group(generators: Sequence[str], relators: Sequence[Sequence[tuple[str, int]]], name: str = "G") -> GroupWords:
    gens = tuple(generators)
    for r in relators:
        for g, e in r:
            if g not in gens:
                raise ValueError(f"relator uses unknown generator {g!r}")
            if e not in (1, -1):
                raise ValueError("relator letters must have exponent +1 or -1")
    return GroupWords(gens, tuple(free_reduce(r) for r in relators), name=name)


# ---------------------------------------------------------------------------
# free class-2 nilpotent group
# ---------------------------------------------------------------------------


class Class2Arith:
    """Group law for class-2 normal forms with bracket constants.

    ``brackets[(j, k)]`` (j < k) is the central vector [x_j, x_k]. The free case
    uses unit vectors.
    """

    def __init__(self, n: int, m: int, brackets: dict):
        self.n = n
        self.m = m
        self.brackets = brackets

    @classmethod
    def free(cls, n: int) -> "Class2Arith":
        pairs = list(itertools.combinations(range(n), 2))
        m = len(pairs)
        br = {}
        for k, (i, j) in enumerate(pairs):
            v = [0] * m
            v[k] = 1
            br[(i, j)] = tuple(v)
        return cls(n, m, br)

    def beta(self, a, a2) -> list:
        out = [0] * self.m
        for (j, k), vec in self.brackets.items():
            f = -a[k] * a2[j]
            if f:
                for t, v in enumerate(vec):
                    out[t] += f * v
        return out

    def omega(self, a, a2) -> list:
        out = [0] * self.m
        for (j, k), vec in self.brackets.items():
            f = a[j] * a2[k] - a[k] * a2[j]
            if f:
                for t, v in enumerate(vec):
                    out[t] += f * v
        return out

    def identity(self):
        return (tuple([0] * self.n), tuple([0] * self.m))

    def mul(self, x, y):
        a, b = x
        a2, b2 = y
        be = self.beta(a, a2)
        return (
            tuple(p + q for p, q in zip(a, a2)),
            tuple(p + q + r for p, q, r in zip(b, b2, be)),
        )

    def inv(self, x):
        a, b = x
        be = self.beta(a, a)
        return (tuple(-p for p in a), tuple(-p + q for p, q in zip(b, be)))

    def power(self, x, k: int):
        base = x if k >= 0 else self.inv(x)
        k = abs(k)
        out = self.identity()
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def gen(self, i: int, e: int = 1):
        a = [0] * self.n
        a[i] = 1
        g = (tuple(a), tuple([0] * self.m))
        return g if e > 0 else self.inv(g)

    def commutator(self, x, y):
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))


# ---------------------------------------------------------------------------
# integer module helpers
# ---------------------------------------------------------------------------


def _module(rows: list[list[int]], width: int):
    """Z^width / span(rows): (invariants, coordinate matrix V) with v -> v V reduced mod invariants."""
    if not rows or width == 0:
        return [0] * width, [[1 if i == j else 0 for j in range(width)] for i in range(width)]
    _, d, v = smith_normal_form(rows)
    inv = [d[i][i] if i < len(d) else 0 for i in range(width)]
    return inv, v


def _describe(invariants: list[int]) -> str:
    parts = [f"Z{d}" for d in invariants if d > 1]
    free = sum(1 for d in invariants if d == 0)
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append(f"Z^{free}")
    return " x ".join(parts) if parts else "0"


def _coords(vec, v_matrix, invariants):
    y = [sum(vec[i] * v_matrix[i][j] for i in range(len(vec))) for j in range(len(invariants))]
    return tuple(c % d if d > 0 else c for c, d in zip(y, invariants) if d != 1)


def _lattice_basis(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    """Basis of the subgroup of Q^width generated by ``rows``."""
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, Fraction(x).denominator)
    ints = [[int(Fraction(x) * den) for x in r] for r in rows if any(r)]
    basis = []
    col = 0
    work = ints
    while work and col < width:
        work = [r for r in work if any(r)]
        nz = [r for r in work if r[col]]
        if not nz:
            col += 1
            continue
        # Euclid on column col
        while len([r for r in work if r[col]]) > 1:
            nz = sorted((r for r in work if r[col]), key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                new.append([x - q * y for x, y in zip(r, piv)])
            work = [r for r in work if not r[col]] + new
        piv = next(r for r in work if r[col])
        basis.append(piv)
        work = [r for r in work if r is not piv]
        col += 1
    return [[Fraction(x, den) for x in r] for r in basis]


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------


@dataclass
class Class2Quotient:
    """Layered description of a class-2 quotient.

    ``abelian_invariants`` and ``commutator_invariants`` list SNF diagonals
    (0 = free summand, 1 = trivial). For torsion-free output, the group is
    x_1..x_r (top) and z_1..z_s (central, bottom) with
    [x_j, x_k] = prod z^brackets[(j, k)].
    """

    source: GroupWords
    abelian_invariants: list
    commutator_invariants: list
    bracket_table: dict  # (g_j, g_k) -> coordinates in the commutator layer
    torsion_free: bool
    top_rank: int | None = None
    bottom_rank: int | None = None
    brackets: dict = field(default_factory=dict)  # (j, k) 0-based -> tuple of ints
    quotient_map: dict = field(default_factory=dict)  # source generator -> (alpha, gamma)

    @property
    def abelianization(self) -> str:
        return _describe(self.abelian_invariants)

    @property
    def commutator_layer(self) -> str:
        return _describe(self.commutator_invariants)

    def arith(self) -> Class2Arith:
        if self.top_rank is None:
            raise ValueError("group law available only after torsion_free_reduce")
        return Class2Arith(self.top_rank, self.bottom_rank, dict(self.brackets))

    def is_trivial(self) -> bool:
        if self.top_rank is not None:
            return self.top_rank == 0 and self.bottom_rank == 0
        return all(d == 1 for d in self.abelian_invariants) and all(d == 1 for d in self.commutator_invariants)

    def center_rank(self) -> int:
        """Hirsch length of the center of the torsion-free group."""
        r, s = self.top_rank, self.bottom_rank
        if r is None:
            raise ValueError("center available only after torsion_free_reduce")
        # alpha is central iff sum_j alpha_j [x_j, x_k] = 0 for every k
        rows = []
        for k in range(r):
            for t in range(s):
                row = [0] * r
                for j in range(r):
                    if j < k:
                        row[j] = self.brackets.get((j, k), (0,) * s)[t]
                    elif j > k:
                        row[j] = -self.brackets.get((k, j), (0,) * s)[t]
                rows.append(row)
        kernel = len(nullspace(rows, ncols=r)) if rows and r else r
        return s + kernel

    def generator_names(self) -> tuple[list[str], list[str]]:
        r, s = self.top_rank or 0, self.bottom_rank or 0
        return [f"x{i + 1}" for i in range(r)], [f"z{i + 1}" for i in range(s)]

    def as_dict(self) -> dict:
        out = {
            "source": self.source.name,
            "abelianization": self.abelianization,
            "commutator_layer": self.commutator_layer,
            "bracket_table": {f"[{a},{b}]": list(v) for (a, b), v in self.bracket_table.items()},
            "torsion_free": self.torsion_free,
        }
        if self.top_rank is not None:
            xs, zs = self.generator_names()
            out.update(
                {
                    "top_rank": self.top_rank,
                    "bottom_rank": self.bottom_rank,
                    "center_rank": self.center_rank(),
                    "brackets": {f"[{xs[j]},{xs[k]}]": list(v) for (j, k), v in sorted(self.brackets.items())},
                    "quotient_map": {g: {"x": list(a), "z": list(c)} for g, (a, c) in self.quotient_map.items()},
                    "trivial": self.is_trivial(),
                }
            )
        return out


def _relator_images(g: GroupWords, ar: Class2Arith):
    idx = {name: i for i, name in enumerate(g.generators)}
    out = []
    for r in g.relators:
        x = ar.identity()
        for name, e in r:
            x = ar.mul(x, ar.gen(idx[name], e))
        out.append(x)
    return out


def class2_quotient(g: GroupWords) -> Class2Quotient:
    """Gamma / gamma_3(Gamma) as layered Z-module data."""
    n = len(g.generators)
    ar = Class2Arith.free(n)
    m = ar.m
    imgs = _relator_images(g, ar)
    a_rows = [list(a) for a, _ in imgs]
    ab_inv, ab_v = _module([r for r in a_rows if any(r)], n)

    layer_rows: list[list[int]] = []
    for a, _ in imgs:
        for i in range(n):
            e = [0] * n
            e[i] = 1
            v = ar.omega(e, a)
            if any(v):
                layer_rows.append(v)
    if imgs:
        u, d, _ = smith_normal_form(a_rows)
        rank = sum(1 for i in range(min(len(d), n)) if d[i][i])
        for row in u[rank:]:
            x = ar.identity()
            for k, r in zip(row, imgs):
                if k:
                    x = ar.mul(x, ar.power(r, k))
            assert not any(x[0])
            if any(x[1]):
                layer_rows.append(list(x[1]))
    cm_inv, cm_v = _module(layer_rows, m)
    pairs = list(itertools.combinations(range(n), 2))
    table = {}
    for t, (j, k) in enumerate(pairs):
        e = [0] * m
        e[t] = 1
        table[(g.generators[j], g.generators[k])] = _coords(e, cm_v, cm_inv)
    tf = all(d in (0, 1) for d in ab_inv) and all(d in (0, 1) for d in cm_inv)
    return Class2Quotient(g, ab_inv, cm_inv, table, tf)


def torsion_free_reduce(c: Class2Quotient) -> Class2Quotient:
    """The largest torsion-free class-2 quotient, with an explicit Mal'cev basis."""
    if c.top_rank is not None:
        return c
    g = c.source
    n = len(g.generators)
    ar = Class2Arith.free(n)
    m = ar.m
    imgs = _relator_images(g, ar)

    def half_beta(a):
        return [Fraction(x, 2) for x in ar.beta(a, a)]

    # rational logs of relators: (a, b - beta(a, a)/2)
    logs = [(list(a), [Fraction(x) - h for x, h in zip(b, half_beta(a))]) for a, b in imgs]

    # central part C_Q of the ideal they generate
    central: list[list[Fraction]] = []
    for a, _ in logs:
        for i in range(n):
            e = [0] * n
            e[i] = 1
            v = ar.omega(e, a)
            if any(v):
                central.append([Fraction(x) for x in v])
    if logs:
        amat = [[Fraction(a[i]) for a, _ in logs] for i in range(n)]  # n x S
        for k in nullspace(amat, ncols=len(logs)):
            v = [sum((kk.re * b[t] for kk, (_, b) in zip(k, logs)), Fraction(0)) for t in range(m)]
            if any(v):
                central.append(v)
    cq = rref(central) if central else None
    cq_rows = [[x.re for x in row] for row in cq.basis] if cq else []
    cq_piv = list(cq.pivots) if cq else []
    free_cols = [t for t in range(m) if t not in cq_piv]

    def project(v: list[Fraction]) -> list[Fraction]:
        v = list(v)
        for row, p in zip(cq_rows, cq_piv):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return [v[t] for t in free_cols]

    # top layer: Z^n / saturation of the relator a-parts
    a_rows = [list(a) for a, _ in imgs if any(a)]
    if a_rows:
        _, d, V = smith_normal_form(a_rows)
        rank = sum(1 for i in range(min(len(d), n)) if d[i][i])
    else:
        V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        rank = 0
    # rows of V^-1 form a basis adapted to the relator lattice; alpha = a V
    Vinv = _int_inverse(V) if n else []
    Vcols = [list(row) for row in Vinv]
    sat_basis = Vcols[:rank]
    lifts = Vcols[rank:]
    r = len(lifts)

    def solve_in_logs(a: list[int]) -> list[Fraction]:
        """Rational k with sum k_s a_s = a (a in the rational span)."""
        S = len(logs)
        aug = [[Fraction(logs[s][0][i]) for s in range(S)] + [Fraction(a[i])] for i in range(n)]
        red = rref(aug)
        k = [Fraction(0)] * S
        for row, p in zip(red.basis, red.pivots):
            if p == S:
                raise ArithmeticError("vector not in the span of relator logs")
            k[p] = row[S].re
        return k

    def reduce_top(a: list[int], bl: list[Fraction]) -> list[Fraction]:
        """Bottom coordinate of (a, bl) after removing an ideal element with top part a."""
        k = solve_in_logs(a) if any(a) else []
        v = list(bl)
        for kk, (_, b) in zip(k, logs):
            if kk:
                v = [x - kk * y for x, y in zip(v, b)]
        return project(v)

    gens_bottom = []
    for t in range(m):
        e = [Fraction(0)] * m
        e[t] = Fraction(1)
        gens_bottom.append(project(e))
    for a in sat_basis:
        gens_bottom.append(reduce_top(a, [-h for h in half_beta(a)]))
    s_dim = len(free_cols)
    lattice = _lattice_basis(gens_bottom, s_dim)
    s = len(lattice)
    assert s == s_dim

    lat_mat = [[Scalar(x) for x in row] for row in lattice]

    def lattice_coords(y: list[Fraction]) -> list[Fraction]:
        if not s:
            return []
        # solve gamma * lattice = y
        aug = [[lat_mat[k][t] for k in range(s)] + [Scalar(y[t])] for t in range(s_dim)]
        red = rref(aug)
        out = [Fraction(0)] * s
        for row, p in zip(red.basis, red.pivots):
            if p == s:
                raise ArithmeticError("vector not in the lattice span")
            out[p] = row[s].re
        return out

    brackets = {}
    for j, k in itertools.combinations(range(r), 2):
        om = ar.omega(lifts[j], lifts[k])
        co = lattice_coords(project([Fraction(x) for x in om]))
        assert all(x.denominator == 1 for x in co)
        vec = tuple(int(x) for x in co)
        if any(vec):
            brackets[(j, k)] = vec
    red_ar = Class2Arith(r, s, brackets)

    # quotient map on source generators, through Lie coordinates
    x_bottom = [project([-h for h in half_beta(A)]) for A in lifts]

    def to_lambda(elem):
        a, b = elem
        alpha_full = [sum(a[q] * V[q][p] for q in range(n)) for p in range(n)]
        alpha = alpha_full[rank:]
        a_sat = [sum(Vcols[p][q] * alpha_full[p] for p in range(rank)) for q in range(n)]
        bl = [Fraction(x) - h for x, h in zip(b, half_beta(list(a)))]
        y = reduce_top(a_sat, bl)
        y = [yy - sum(aj * xb[u] for aj, xb in zip(alpha, x_bottom)) for u, yy in enumerate(y)]
        for (j, k), vec in brackets.items():
            f = Fraction(alpha[j] * alpha[k], 2)
            if f:
                for t in range(s):
                    y = [yy - f * vec[t] * lattice[t][u] for u, yy in enumerate(y)]
        gamma = lattice_coords(y)
        assert all(x.denominator == 1 for x in gamma)
        return (tuple(alpha), tuple(int(x) for x in gamma))

    qmap = {name: to_lambda(ar.gen(i)) for i, name in enumerate(g.generators)}
    return Class2Quotient(
        source=g,
        abelian_invariants=c.abelian_invariants,
        commutator_invariants=c.commutator_invariants,
        bracket_table=c.bracket_table,
        torsion_free=True,
        top_rank=r,
        bottom_rank=s,
        brackets=brackets,
        quotient_map=qmap,
    )


def _int_inverse(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(V)]
    red = rref(aug)
    return [[int(x.re) for x in row[n:]] for row in red.basis]


def reduced_abelianization(c: Class2Quotient) -> str:
    """Abelianization of the torsion-free quotient."""
    rows = [list(v) for v in c.brackets.values()]
    inv, _ = _module(rows, c.bottom_rank)
    return _describe([0] * c.top_rank + inv)


# ---------------------------------------------------------------------------
# export and the Gaussian dual
# ---------------------------------------------------------------------------


def export_group(c: Class2Quotient) -> GroupWords:
    """Mal'cev presentation: central z's, [x_j, x_k] = prod z^C."""
    xs, zs = c.generator_names()
    rels = []
    for z in zs:
        for other in xs + zs:
            if other != z and (other in xs or zs.index(other) > zs.index(z)):
                rels.append(((z, 1), (other, 1), (z, -1), (other, -1)))
    for j, k in itertools.combinations(range(len(xs)), 2):
        word = [(xs[j], 1), (xs[k], 1), (xs[j], -1), (xs[k], -1)]
        for t, e in enumerate(c.brackets.get((j, k), ())):
            word += [(zs[t], -1 if e > 0 else 1)] * abs(e)
        rels.append(tuple(word))
    name = "trivial" if c.is_trivial() else f"class2({c.source.name})"
    return GroupWords(tuple(xs + zs), tuple(rels), name=name)


@dataclass
class GaussianPartDual:
    layered: Class2Quotient
    quotient: Class2Quotient
    algebra: HopfPresentation

    def as_dict(self):
        out = self.quotient.as_dict()
        out["algebra"] = self.algebra.name
        out["algebra_generators"] = list(self.algebra.generators)
        out["reduced_abelianization"] = reduced_abelianization(self.quotient)
        out["is_heisenberg"] = is_heisenberg(self.quotient)
        return out


def is_heisenberg(c: Class2Quotient) -> bool:
    return c.top_rank == 2 and c.bottom_rank == 1 and c.brackets.get((0, 1)) in ((1,), (-1,))


def gaussian_part_dual(g: GroupWords) -> GaussianPartDual:
    layered = class2_quotient(g)
    red = torsion_free_reduce(layered)
    return GaussianPartDual(layered, red, group_algebra(export_group(red)))


class CentralGaussian:
    """A Gaussian functional on C[Lambda] that is nonzero on the center.

    With a in Z^r and gamma in Z^s the coordinates of x^a z^gamma:
    eta(x^a z^gamma) = A a with A*A = c I + i W, W_jk = l([x_j, x_k]) / 2,
    phi = -(c/2)|a|^2 - i l(gamma) + (i/2) l(beta(a, a)), l = sum of coordinates.
    """

    def __init__(self, c: Class2Quotient):
        if not c.torsion_free or c.top_rank is None:
            raise ValueError("central_gaussian needs a torsion-free reduced quotient")
        self.q = c
        self.ar = c.arith()
        r = c.top_rank
        w = [[Fraction(0)] * r for _ in range(r)]
        for (j, k), vec in c.brackets.items():
            val = Fraction(sum(vec), 2)
            w[j][k] = val
            w[k][j] = -val
        self.w = w
        total = sum(abs(w[j][k]) for j in range(r) for k in range(j + 1, r))
        self.c = max(Fraction(2), 2 * total)
        self.xs, self.zs = c.generator_names()
        self.algebra = group_algebra(export_group(c))

    def value(self, elem) -> Scalar:
        a, gamma = elem
        quad = -self.c / 2 * sum(x * x for x in a)
        lin = sum(gamma)
        be = sum(self.ar.beta(a, a))
        return Scalar(quad, Fraction(-lin) + Fraction(be, 2))

    def form(self, a, a2) -> Scalar:
        """<eta(g), eta(h)> = a^T (c I + i W) a2."""
        re = self.c * sum(x * y for x, y in zip(a, a2))
        im = sum(a[j] * self.w[j][k] * a2[k] for j in range(len(a)) for k in range(len(a)))
        return Scalar(re, im)

    def datum(self) -> GaussianDatum:
        p = self.algebra
        r = len(self.xs)
        drift = {}
        gram = {}
        inv = p.inverses
        for j, x in enumerate(self.xs):
            e = [0] * r
            e[j] = 1
            v = self.value(self.ar.gen(j))
            drift[x] = v
            drift[inv[x]] = v.conj()
        for t, z in enumerate(self.zs):
            g = [0] * len(self.zs)
            g[t] = 1
            v = self.value((tuple([0] * r), tuple(g)))
            drift[z] = v
            drift[inv[z]] = v.conj()
        for j, x in enumerate(self.xs):
            for k, y in enumerate(self.xs):
                ej = [0] * r
                ej[j] = 1
                ek = [0] * r
                ek[k] = 1
                f = self.form(ej, ek)
                gram[(x, y)] = f
                gram[(inv[x], y)] = -f
                gram[(x, inv[y])] = -f
                gram[(inv[x], inv[y])] = f
        return GaussianDatum.build(p, drift=drift, gram=gram, name="central")

    def elements(self, max_len: int) -> list:
        """Distinct group elements given by words of length <= max_len."""
        r, s = len(self.xs), len(self.zs)
        letters = [self.ar.gen(j, e) for j in range(r) for e in (1, -1)]
        for t in range(s):
            g = [0] * s
            g[t] = 1
            z = (tuple([0] * r), tuple(g))
            letters += [z, self.ar.inv(z)]
        seen = {self.ar.identity()}
        frontier = [self.ar.identity()]
        for _ in range(max_len):
            nxt = []
            for x in frontier:
                for l in letters:
                    y = self.ar.mul(x, l)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def conditional_positivity(self, max_len: int = 3):
        """psd_check of [phi(g^-1 h) - phi(g^-1) - phi(h)] over words of length <= max_len."""
        els = self.elements(max_len)
        vals = {}

        def phi(x):
            v = vals.get(x)
            if v is None:
                v = vals[x] = self.value(x)
            return v

        rows = []
        for g in els:
            gi = self.ar.inv(g)
            rows.append([phi(self.ar.mul(gi, h)) - phi(gi) - phi(h) for h in els])
        return psd_check(ScalarMatrix(rows)), len(els)

    def center_values(self) -> dict:
        out = {}
        r = len(self.xs)
        for t, z in enumerate(self.zs):
            g = [0] * len(self.zs)
            g[t] = 1
            out[z] = self.value((tuple([0] * r), tuple(g)))
        return out


def central_gaussian(c: Class2Quotient) -> CentralGaussian:
    return CentralGaussian(c)


def literal_central_functional(c: Class2Quotient):
    """phi = -|gamma|^2 on central elements x^0 z^gamma and 0 elsewhere.

    Kept for comparison: on groups with a nontrivial bracket this kernel is not
    conditionally positive (see ``conditional_positivity``).
    """
    cg = CentralGaussian(c)

    def value(elem):
        a, gamma = elem
        if any(a):
            return ZERO
        return as_scalar(-sum(x * x for x in gamma))

    cg.value = value
    return cg
