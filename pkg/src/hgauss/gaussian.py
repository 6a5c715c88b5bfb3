"""Gaussian generating functionals stored as (drift, Gram) data.

``gram[a][b]`` holds the inner product <eta(a), eta(b)> of cocycle values, so
the stored matrix is hermitian and positive semidefinite. The pairing
<eta(a*), eta(b)> that enters the Wick formula is derived from it through the
star table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .exact import (
    ONE,
    ZERO,
    Scalar,
    ScalarMatrix,
    SparseEchelon,
    as_scalar,
    nullspace,
    psd_check,
    rref,
)
from .freestar import NCPoly, Word, _format_terms
from .hopf import HopfPresentation


# ---------------------------------------------------------------------------
# linear forms over real unknowns (used by the solver)
# ---------------------------------------------------------------------------

CONST = -1  # key of the constant term


class Lin:
    """Complex-valued affine form sum_k c_k x_k + c_const in real unknowns x_k."""

    __slots__ = ("t",)

    def __init__(self, t: dict | None = None):
        self.t = {k: v for k, v in (t or {}).items() if v}

    @classmethod
    def var(cls, k: int, coeff: Any = ONE) -> "Lin":
        return cls({k: as_scalar(coeff)})

    @classmethod
    def const(cls, c: Any) -> "Lin":
        return cls({CONST: as_scalar(c)})

    def __add__(self, other: "Lin") -> "Lin":
        t = dict(self.t)
        for k, v in other.t.items():
            s = t.get(k, ZERO) + v
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        out = Lin.__new__(Lin)
        out.t = t
        return out

    def __neg__(self):
        return self * (-ONE)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c: Any) -> "Lin":
        c = as_scalar(c)
        out = Lin.__new__(Lin)
        out.t = {k: v * c for k, v in self.t.items()} if c else {}
        return out

    def conj(self) -> "Lin":
        out = Lin.__new__(Lin)
        out.t = {k: v.conj() for k, v in self.t.items()}
        return out

    def is_zero(self) -> bool:
        return not self.t

    def real_rows(self) -> list[dict]:
        """The two real equations Re = 0, Im = 0."""
        re = {k: Scalar(v.re) for k, v in self.t.items() if v.re}
        im = {k: Scalar(v.im) for k, v in self.t.items() if v.im}
        return [r for r in (re, im) if r]


# ---------------------------------------------------------------------------
# evaluation engine, generic over the value type
# ---------------------------------------------------------------------------


def eta_vector(p: HopfPresentation, x: NCPoly) -> dict[str, Scalar]:
    """Coefficients of eta(x) over the generators (Leibniz rule with counit weights)."""
    eps = p.counit_table
    out: dict[str, Scalar] = {}
    for w, c in x.terms.items():
        vals = [eps[g] for g in w]
        zeros = [k for k, v in enumerate(vals) if not v]
        if len(zeros) > 1:
            continue
        for k, g in enumerate(w):
            if zeros and zeros[0] != k:
                continue
            weight = c
            for j, v in enumerate(vals):
                if j != k:
                    weight = weight * v
            if weight:
                s = out.get(g, ZERO) + weight
                if s:
                    out[g] = s
                else:
                    out.pop(g, None)
    return out


class _Engine:
    """Wick evaluation for drift/Gram values of any additive type with Scalar multiplication."""

    def __init__(self, p: HopfPresentation, drift: Callable[[str], Any], gram: Callable[[str, str], Any], zero: Any):
        self.p = p
        self.drift = drift
        self.gram = gram
        self.zero = zero
        self.eps = p.counit_table
        self._pair: dict = {}
        self._rec: dict = {}
        self._star_eta: dict = {}

    def _check_word(self, w: Word):
        for g in w:
            if g not in self.eps:
                raise KeyError(f"unknown generator {g!r}")

    def star_eta(self, a: str) -> dict:
        v = self._star_eta.get(a)
        if v is None:
            v = self._star_eta[a] = eta_vector(self.p, self.p.star_table[a])
        return v

    def inner(self, left: Mapping[str, Scalar], right: Mapping[str, Scalar]):
        """<eta(x), eta(y)> from eta coefficient vectors."""
        acc = self.zero
        for g, cg in left.items():
            for h, ch in right.items():
                acc = acc + self.gram(g, h) * (cg.conj() * ch)
        return acc

    def pair(self, a: str, b: str):
        key = (a, b)
        v = self._pair.get(key)
        if v is None:
            v = self.drift(b) * self.eps[a] + self.drift(a) * self.eps[b]
            for g, cg in self.star_eta(a).items():
                v = v + self.gram(g, b) * cg.conj()
            self._pair[key] = v
        return v

    def word(self, w: Word):
        """Closed-form Wick expansion."""
        n = len(w)
        if n == 0:
            return self.zero
        if n == 1:
            return self.drift(w[0])
        if n == 2:
            return self.pair(w[0], w[1])
        eps = [self.eps[g] for g in w]
        zeros = [k for k, e in enumerate(eps) if not e]
        if len(zeros) > 2:
            return self.zero
        acc = self.zero
        for j in range(n):
            for k in range(j + 1, n):
                if any(z not in (j, k) for z in zeros):
                    continue
                rest = ONE
                for m, e in enumerate(eps):
                    if m != j and m != k:
                        rest = rest * e
                acc = acc + self.pair(w[j], w[k]) * rest
        if len(zeros) <= 1:
            for j in range(n):
                if zeros and zeros[0] != j:
                    continue
                rest = ONE
                for m, e in enumerate(eps):
                    if m != j:
                        rest = rest * e
                acc = acc - self.drift(w[j]) * (rest * (n - 2))
        return acc

    def _eps_word(self, w: Word) -> Scalar:
        out = ONE
        for g in w:
            out = out * self.eps[g]
            if not out:
                break
        return out

    def recursive(self, w: Word):
        """Collapse the last two letters with the three-point identity."""
        w = tuple(w)
        if len(w) == 0:
            return self.zero
        if len(w) == 1:
            return self.drift(w[0])
        if len(w) == 2:
            return self.pair(w[0], w[1])
        hit = self._rec.get(w)
        if hit is not None:
            return hit
        a, b, c = w[:-2], w[-2], w[-1]
        ea, eb, ec = self._eps_word(a), self.eps[b], self.eps[c]
        v = (
            self.recursive(a + (b,)) * ec
            + self.recursive(a + (c,)) * eb
            + self.pair(b, c) * ea
            - self.recursive(a) * (eb * ec)
            - self.drift(b) * (ea * ec)
            - self.drift(c) * (ea * eb)
        )
        self._rec[w] = v
        return v

    def evaluate(self, x: NCPoly, recursive: bool = False):
        fn = self.recursive if recursive else self.word
        acc = self.zero
        for w, c in x.terms.items():
            self._check_word(w)
            acc = acc + fn(w) * c
        return acc


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianDatum:
    presentation: HopfPresentation
    drift: Mapping[str, Scalar]
    gram: ScalarMatrix
    name: str = "phi"

    def __post_init__(self):
        n = len(self.presentation.generators)
        if self.gram.rows != n or self.gram.cols != n:
            raise ValueError(f"gram must be {n}x{n}")
        unknown = set(self.drift) - set(self.presentation.generators)
        if unknown:
            raise KeyError(f"unknown generator(s) in drift: {sorted(unknown)}")

    @classmethod
    def build(
        cls,
        p: HopfPresentation,
        drift: Mapping[str, Any] | None = None,
        gram: Mapping[tuple[str, str], Any] | None = None,
        pair: Mapping[tuple[str, str], Any] | None = None,
        name: str = "phi",
    ) -> "GaussianDatum":
        """Assemble a datum from sparse entries, completing the Gram hermitian-wise.

        ``gram`` entries are <eta(a), eta(b)>; ``pair`` entries are
        <eta(a*), eta(b)> and need generators whose star is a multiple of a generator.
        """
        idx = {g: k for k, g in enumerate(p.generators)}
        n = len(idx)
        grid: list[list[Scalar | None]] = [[None] * n for _ in range(n)]

        def put(i, j, v):
            for (r, c, val) in ((i, j, v), (j, i, v.conj())):
                old = grid[r][c]
                if old is not None and old != val:
                    raise ValueError(
                        f"inconsistent gram entries at ({p.generators[r]}, {p.generators[c]}): {old} vs {val}"
                    )
                grid[r][c] = val

        for (a, b), v in (gram or {}).items():
            if a not in idx or b not in idx:
                raise KeyError(f"unknown generator in gram entry ({a}, {b})")
            put(idx[a], idx[b], as_scalar(v))
        for (a, b), v in (pair or {}).items():
            if a not in idx or b not in idx:
                raise KeyError(f"unknown generator in pair entry ({a}, {b})")
            sa = p.star_table[a]
            if len(sa.terms) != 1 or len(next(iter(sa.terms))) != 1:
                raise ValueError(f"pair entries need star({a}) to be a multiple of a generator")
            ((g,), lam) = next(iter(sa.terms.items()))
            # <eta(a*), eta(b)> = conj(lam) <eta(g), eta(b)>
            put(idx[g], idx[b], as_scalar(v) * lam.conj().inverse())
        full = [[x if x is not None else ZERO for x in row] for row in grid]
        d = {g: as_scalar(v) for g, v in (drift or {}).items()}
        return cls(p, d, ScalarMatrix(full), name)

    @classmethod
    def zero(cls, p: HopfPresentation) -> "GaussianDatum":
        n = len(p.generators)
        return cls(p, {}, ScalarMatrix.zeros(n, n), "zero")

    def drift_of(self, g: str) -> Scalar:
        if g not in self.presentation.counit_table:
            raise KeyError(f"unknown generator {g!r}")
        return self.drift.get(g, ZERO)

    def gram_of(self, a: str, b: str) -> Scalar:
        idx = self._index()
        return self.gram.entries[idx[a]][idx[b]]

    def _index(self) -> dict:
        return {g: k for k, g in enumerate(self.presentation.generators)}

    def engine(self) -> _Engine:
        idx = self._index()
        e = self.gram.entries
        return _Engine(self.presentation, self.drift_of, lambda a, b: e[idx[a]][idx[b]], ZERO)

    def pair_matrix(self) -> ScalarMatrix:
        """Entries <eta(a*), eta(b)> over all generators."""
        eng = self.engine()
        gens = self.presentation.generators
        return ScalarMatrix(
            [[eng.inner(eng.star_eta(a), {b: ONE}) for b in gens] for a in gens]
        )

    def scaled(self, c: Any) -> "GaussianDatum":
        c = as_scalar(c)
        return GaussianDatum(
            self.presentation,
            {g: v * c for g, v in self.drift.items()},
            ScalarMatrix([[x * c for x in row] for row in self.gram.entries]),
            self.name,
        )

    def as_text(self, algebra_name: str | None = None) -> str:
        from .exact import format_scalar

        alg = algebra_name or self.presentation.name
        lines = [f"gaussian {self.name} on {alg} {{"]
        for g in self.presentation.generators:
            v = self.drift.get(g, ZERO)
            if v:
                lines.append(f"  drift {g} = {format_scalar(v)};")
        gens = self.presentation.generators
        for i, a in enumerate(gens):
            for j in range(i, len(gens)):
                v = self.gram.entries[i][j]
                if v:
                    lines.append(f"  gram ({a}, {gens[j]}) = {format_scalar(v)};")
        lines.append("}")
        return "\n".join(lines)


def pair_value(d: GaussianDatum, a: str, b: str) -> Scalar:
    for g in (a, b):
        if g not in d.presentation.counit_table:
            raise KeyError(f"unknown generator {g!r}")
    return d.engine().pair(a, b)


def wick_eval(d: GaussianDatum, x: NCPoly, engine: _Engine | None = None) -> Scalar:
    return (engine or d.engine()).evaluate(x)


def wick_eval_recursive(d: GaussianDatum, x: NCPoly, engine: _Engine | None = None) -> Scalar:
    return (engine or d.engine()).evaluate(x, recursive=True)


# ---------------------------------------------------------------------------
# consistency
# ---------------------------------------------------------------------------


@dataclass
class ConsistencyReport:
    passed: bool
    violations: list = field(default_factory=list)  # (constraint, subject, value)

    def as_dict(self):
        return {
            "passed": self.passed,
            "violations": [{"constraint": c, "subject": s, "value": v} for c, s, v in self.violations],
        }


def check_consistency(d: GaussianDatum) -> ConsistencyReport:
    p = d.presentation
    eng = d.engine()
    rep = ConsistencyReport(True)

    def bad(kind, subj, val):
        rep.passed = False
        rep.violations.append((kind, subj, str(val)))

    for g in p.generators:
        lhs = eng.evaluate(p.star_table[g])
        if lhs != d.drift_of(g).conj():
            bad("hermitian_drift", g, lhs - d.drift_of(g).conj())
    if not d.gram.is_hermitian():
        bad("gram_hermitian", "gram", "not hermitian")
    else:
        res = psd_check(d.gram)
        if not res.is_psd:
            bad("gram_psd", "gram", "witness " + ", ".join(str(x) for x in res.witness))
    gens = p.generators
    idx = {g: k for k, g in enumerate(gens)}
    for r in p.relations:
        subj = str(r)
        e = p.counit(r)
        if e:
            bad("counit_of_relation", subj, e)
        c = eta_vector(p, r)
        col = [sum((d.gram.entries[i][idx[g]] * v for g, v in c.items()), ZERO) for i in range(len(gens))]
        if any(col):
            bad("eta_relation", subj, "gram * eta(r) != 0")
        v = eng.evaluate(r)
        if v:
            bad("phi_relation", subj, v)
        for g in gens:
            gp = NCPoly.gen(g)
            for label, x in (("phi_left_multiple", gp * r), ("phi_right_multiple", r * gp)):
                v = eng.evaluate(x)
                if v:
                    bad(label, f"{g} * ({subj})" if label.endswith("left_multiple") else f"({subj}) * {g}", v)
    return rep


def check_drift(d: GaussianDatum) -> bool:
    """True iff d is a drift: zero Gram and consistent."""
    if any(x for row in d.gram.entries for x in row):
        return False
    return check_consistency(d).passed


def check_classical(d: GaussianDatum) -> bool:
    """<eta(x*), eta(y)> = <eta(y*), eta(x)> for all generators x, y."""
    m = d.pair_matrix().entries
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------


@dataclass
class GaussianSpace:
    presentation: HopfPresentation
    dimension: int
    basis: list  # GaussianDatum list, real coordinates
    forced_zero_eta: list
    forced_zero_drift: list
    cocycle_relations: list  # kernel vectors (dict gen -> Scalar) common to all solutions
    cocycle_dimension: int
    gram_forced_real: bool
    unknowns: int
    equations: int
    max_relation_degree: int

    def as_dict(self) -> dict:
        return {
            "algebra": self.presentation.name,
            "dimension": self.dimension,
            "forced_zero_eta": self.forced_zero_eta,
            "forced_zero_drift": self.forced_zero_drift,
            "cocycle_dimension": self.cocycle_dimension,
            "cocycle_relations": [
                _format_terms([(f"eta({g})", v) for g, v in rel.items()]) + " = 0" for rel in self.cocycle_relations
            ],
            "gram_forced_real": self.gram_forced_real,
            "unknowns": self.unknowns,
            "equations": self.equations,
            "max_relation_degree": self.max_relation_degree,
            "basis": [b.as_text() for b in self.basis],
        }


class _Unknowns:
    """Real coordinates: Re/Im of each drift value, then the Gram upper triangle."""

    def __init__(self, gens: Sequence[str], fixed_gram: ScalarMatrix | None = None):
        self.gens = list(gens)
        self.idx = {g: k for k, g in enumerate(gens)}
        self.names: list[str] = []
        self.drift_slots = {}
        for g in gens:
            self.drift_slots[g] = (self._new(f"Re phi({g})"), self._new(f"Im phi({g})"))
        self.fixed = fixed_gram
        self.gram_slots = {}
        if fixed_gram is None:
            n = len(gens)
            for i in range(n):
                for j in range(i, n):
                    re = self._new(f"Re G({gens[i]},{gens[j]})")
                    im = None if i == j else self._new(f"Im G({gens[i]},{gens[j]})")
                    self.gram_slots[(i, j)] = (re, im)

    def _new(self, name: str) -> int:
        self.names.append(name)
        return len(self.names) - 1

    def drift(self, g: str) -> Lin:
        re, im = self.drift_slots[g]
        return Lin({re: ONE, im: Scalar(0, 1)})

    def gram(self, a: str, b: str) -> Lin:
        i, j = self.idx[a], self.idx[b]
        if self.fixed is not None:
            v = self.fixed.entries[i][j]
            return Lin.const(v) if v else Lin()
        if i <= j:
            re, im = self.gram_slots[(i, j)]
            return Lin({re: ONE}) if im is None else Lin({re: ONE, im: Scalar(0, 1)})
        re, im = self.gram_slots[(j, i)]
        return Lin({re: ONE, im: Scalar(0, -1)})

    def datum(self, p: HopfPresentation, x: Sequence[Scalar], name: str) -> GaussianDatum:
        drift = {}
        for g, (re, im) in self.drift_slots.items():
            v = Scalar(x[re].re, x[im].re)
            if v:
                drift[g] = v
        n = len(self.gens)
        if self.fixed is not None:
            gram = self.fixed
        else:
            grid = [[ZERO] * n for _ in range(n)]
            for (i, j), (re, im) in self.gram_slots.items():
                v = Scalar(x[re].re, x[im].re if im is not None else 0)
                grid[i][j] = v
                grid[j][i] = v.conj()
            gram = ScalarMatrix(grid)
        return GaussianDatum(p, drift, gram, name)


def _constraints(p: HopfPresentation, unk: _Unknowns) -> Iterable[Lin]:
    eng = _Engine(p, unk.drift, unk.gram, Lin())
    for g in p.generators:
        yield eng.evaluate(p.star_table[g]) - unk.drift(g).conj()
    for r in p.relations:
        c = eta_vector(p, r)
        for a in p.generators:
            acc = Lin()
            for g, v in c.items():
                acc = acc + unk.gram(a, g) * v
            yield acc
        yield eng.evaluate(r)
        for g in p.generators:
            gp = NCPoly.gen(g)
            yield eng.evaluate(gp * r)
            yield eng.evaluate(r * gp)


def _echelon(p: HopfPresentation, unk: _Unknowns) -> tuple[SparseEchelon, int]:
    ech = SparseEchelon()
    count = 0
    for lin in _constraints(p, unk):
        for row in lin.real_rows():
            count += 1
            ech.add(row)
    return ech, count


def solve_gaussian_space(p: HopfPresentation) -> GaussianSpace:
    """All (drift, Gram) data satisfying the linear constraints, as a real vector space.

    Positivity of the Gram matrix is not imposed.
    """
    gens = list(p.generators)
    unk = _Unknowns(gens)
    ech, count = _echelon(p, unk)
    nvars = len(unk.names)
    rows = [[row.get(k, ZERO) for k in range(nvars)] for row in ech.rows.values()]
    vecs = nullspace(rows, ncols=nvars)
    basis = [unk.datum(p, v, f"basis{k + 1}") for k, v in enumerate(vecs)]

    n = len(gens)
    stacked = [row for b in basis for row in b.gram.entries]
    kernel = nullspace(stacked, ncols=n) if stacked else nullspace([], ncols=n)
    kernel = [list(v) for v in rref(kernel).basis] if kernel else []
    relations = [{gens[k]: v for k, v in enumerate(vec) if v} for vec in kernel]
    forced_eta = [g for k, g in enumerate(gens) if all(not b.gram.entries[k][j] for b in basis for j in range(n))]
    forced_drift = [g for g in gens if all(not b.drift.get(g) for b in basis)]
    real = all(x.is_real() for b in basis for row in b.gram.entries for x in row)
    return GaussianSpace(
        presentation=p,
        dimension=len(vecs),
        basis=basis,
        forced_zero_eta=forced_eta,
        forced_zero_drift=forced_drift,
        cocycle_relations=relations,
        cocycle_dimension=n - len(kernel),
        gram_forced_real=real,
        unknowns=nvars,
        equations=count,
        max_relation_degree=max((r.degree() for r in p.relations), default=0),
    )


def solve_drift_for_gram(p: HopfPresentation, gram: ScalarMatrix) -> tuple[dict | None, list[dict]]:
    """Drifts compatible with a fixed Gram: (particular solution or None, homogeneous basis)."""
    gens = list(p.generators)
    unk = _Unknowns(gens, fixed_gram=gram)
    nvars = len(unk.names)
    ech = SparseEchelon(lambda k: (k != CONST, k))  # constant column is never a pivot unless inconsistent
    for lin in _constraints(p, unk):
        for row in lin.real_rows():
            ech.add(row)
    if any(lead == CONST for lead in ech.rows):
        return None, []
    cols = list(range(nvars)) + [CONST]
    rows = [[row.get(k, ZERO) for k in cols] for row in ech.rows.values()]
    red = rref(rows) if rows else None
    x0 = [ZERO] * nvars
    free = set(range(nvars))
    if red:
        for row, piv in zip(red.basis, red.pivots):
            if piv == nvars:
                return None, []
            x0[piv] = -row[nvars]
            free.discard(piv)
    homog = []
    for f in sorted(free):
        v = [ZERO] * nvars
        v[f] = ONE
        if red:
            for row, piv in zip(red.basis, red.pivots):
                v[piv] = -row[f]
        homog.append(v)

    def to_drift(x):
        return {g: Scalar(x[re].re, x[im].re) for g, (re, im) in unk.drift_slots.items() if x[re] or x[im]}

    return to_drift(x0), [to_drift(v) for v in homog]


def _eta_constraint_space(p: HopfPresentation) -> list[list[Scalar]]:
    """Row vectors v over generators with v . eta(r) = 0 for every relation r."""
    gens = list(p.generators)
    rows = []
    for r in p.relations:
        c = eta_vector(p, r)
        if c:
            rows.append([c.get(g, ZERO) for g in gens])
    return nullspace(rows, ncols=len(gens)) if rows else nullspace([], ncols=len(gens))


def random_datum(
    p: HopfPresentation, rng: random.Random, rank: int = 2, real: bool | None = None, span: int = 3
) -> GaussianDatum:
    """A random consistent datum with PSD Gram.

    eta is drawn from the solutions of eta(r) = 0; drift then solves the remaining
    linear constraints. Falls back to real eta, then to a pure drift.
    """
    space = _eta_constraint_space(p)
    gens = list(p.generators)
    n = len(gens)

    def rnd():
        return Fraction(rng.randint(-span, span), rng.randint(1, span))

    attempts = [False, True] if real is None else [real]
    for use_real in attempts + ["zero"]:
        if use_real == "zero" or not space:
            gram = ScalarMatrix.zeros(n, n)
        else:
            vs = []
            for _ in range(rank):
                v = [ZERO] * n
                for basis_vec in space:
                    c = Scalar(rnd(), 0 if use_real else rnd())
                    v = [x + c * y for x, y in zip(v, basis_vec)]
                vs.append(v)
            # gram[a][b] = sum_k conj(v_k[a]) v_k[b]
            gram = ScalarMatrix(
                [[sum((vk[i].conj() * vk[j] for vk in vs), ZERO) for j in range(n)] for i in range(n)]
            )
        drift0, homog = solve_drift_for_gram(p, gram)
        if drift0 is None:
            continue
        drift = dict(drift0)
        for h in homog:
            c = rnd()
            for g, v in h.items():
                drift[g] = drift.get(g, ZERO) + v * c
        return GaussianDatum(p, {g: v for g, v in drift.items() if v}, gram, "random")
    return GaussianDatum.zero(p)


# ---------------------------------------------------------------------------
# named data
# ---------------------------------------------------------------------------


def heat_datum(p: HopfPresentation, generator: str = "u", scale: Any = 1) -> GaussianDatum:
    """Heat functional on a group-like generator g: eta(g) = s, eta(g^-1) = -s, phi(g) = -s^2/2."""
    s = as_scalar(scale)
    inv = p.inverses.get(generator)
    if inv is None:
        raise ValueError(f"{generator!r} has no recorded inverse in {p.name}")
    s2 = s * s.conj()
    gram = {(generator, generator): s2}
    if inv != generator:
        gram[(generator, inv)] = -s2
        gram[(inv, inv)] = s2
    half = s2 * Fraction(-1, 2)
    drift = {generator: half}
    if inv != generator:
        drift[inv] = half
    return GaussianDatum.build(p, drift=drift, gram=gram, name="heat")


def rotation_datum(p: HopfPresentation, generator: str = "u", speed: Any = 1) -> GaussianDatum:
    """Drift phi(g) = i*speed, phi(g^-1) = -i*speed."""
    v = Scalar(0, 1) * as_scalar(speed)
    drift = {generator: v}
    inv = p.inverses.get(generator)
    if inv is not None and inv != generator:
        drift[inv] = -v
    return GaussianDatum.build(p, drift=drift, name="rotation")
