"""Bounded-degree quotients, the K_n filtration and Kac-type data.

Membership in K_n works in centered coordinates c_g = g - eps(g). There K_n of
the free algebra is spanned by centered words of length >= n, so
x lies in K_n + (relations) iff the part of x of centered length < n lies in
the same truncation of the relation ideal. Only multiples u.r.u' with
|u| + |u'| <= n - 2 survive that truncation, which keeps the check finite.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import ONE, ZERO, ResourceLimitError, Scalar, SparseEchelon, basis_cap
from .freestar import NCPoly, TensorPoly, Word, format_word, word_key
from .hopf import Corepresentation, HopfPresentation, RelationSpan, count_words, words_up_to

IN = "certified_in"
NOT_AT_BOUND = "not_in_span_at_bound"


# ---------------------------------------------------------------------------
# centered coordinates
# ---------------------------------------------------------------------------


class Centering:
    """The substitution g -> c_g + eps(g) and its inverse on polynomials."""

    def __init__(self, p: HopfPresentation):
        self.p = p
        self.eps = p.counit_table
        self._fwd: dict = {}

    def word(self, w: Word) -> dict:
        hit = self._fwd.get(w)
        if hit is not None:
            return hit
        out = {(): ONE}
        for g in w:
            e = self.eps[g]
            nxt: dict = {}
            for u, c in out.items():
                k = u + (g,)
                nxt[k] = nxt.get(k, ZERO) + c
                if e:
                    nxt[u] = nxt.get(u, ZERO) + c * e
            out = {k: v for k, v in nxt.items() if v}
        self._fwd[w] = out
        return out

    def poly(self, x: NCPoly) -> dict:
        acc: dict = {}
        for w, c in x.terms.items():
            for u, v in self.word(w).items():
                s = acc.get(u, ZERO) + c * v
                if s:
                    acc[u] = s
                else:
                    acc.pop(u, None)
        return acc

    def centered_word(self, u: Word) -> NCPoly:
        """(u_1 - eps(u_1)) ... (u_k - eps(u_k)) in ordinary coordinates."""
        out = NCPoly.one()
        for g in u:
            out = out * (NCPoly.gen(g) - self.eps[g])
        return out


class TruncatedIdeal:
    """Centered truncation below length m of the relation ideal.

    Multiples u.T(r).u' are used with |u| + |u'| <= min(m - 2, limit - deg r);
    ``exhaustive`` says whether the first bound was the binding one for every
    relation, in which case the truncation equals that of the whole ideal.
    """

    def __init__(self, p: HopfPresentation, m: int, limit: int | None = None, centering: Centering | None = None):
        self.p = p
        self.m = m
        self.limit = limit
        cen = centering or Centering(p)
        k = len(p.generators)
        self.coordinates = count_words(k, m - 1) if m >= 1 else 0
        cap = basis_cap()
        budget = 0
        plan = []
        self.exhaustive = True
        for r in p.relations:
            room = m - 2
            if limit is not None and limit - r.degree() < room:
                room = limit - r.degree()
                self.exhaustive = False
            if room < 0:
                continue
            plan.append((r, room))
            budget += sum((n + 1) * k**n for n in range(room + 1))
        if budget > cap or self.coordinates > cap:
            raise ResourceLimitError(f"truncated ideal below length {m} for {p.name}", max(budget, self.coordinates), cap)
        self.echelon = SparseEchelon(word_key)
        for r, room in plan:
            tr = [(w, c) for w, c in cen.poly(r).items() if len(w) < m]
            if not tr:
                continue
            for n in range(room + 1):
                for ctx in itertools.product(p.generators, repeat=n):
                    for cut in range(n + 1):
                        left, right = ctx[:cut], ctx[cut:]
                        row = {left + w + right: c for w, c in tr if len(w) + n < m}
                        if row:
                            self.echelon.add(row)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def contains(self, vec: dict) -> bool:
        low = {w: c for w, c in vec.items() if len(w) < self.m}
        return not self.echelon.reduce(low)

    def residue(self, vec: dict) -> dict:
        return self.echelon.reduce({w: c for w, c in vec.items() if len(w) < self.m})


# ---------------------------------------------------------------------------
# bounded quotient and K_n spans
# ---------------------------------------------------------------------------


@dataclass
class MembershipResult:
    status: str
    n: int
    degree: int
    exhaustive: bool
    detail: str = ""

    @property
    def certified(self) -> bool:
        return self.status == IN

    def as_dict(self):
        return {
            "status": self.status,
            "n": self.n,
            "degree": self.degree,
            "exhaustive": self.exhaustive,
            "detail": self.detail,
        }


class BoundedQuotient:
    """Words of length <= d modulo the relation multiples of degree <= d."""

    def __init__(self, p: HopfPresentation, d: int):
        if d < 1:
            raise ValueError("degree bound must be at least 1")
        self.p = p
        self.degree = d
        self.centering = Centering(p)
        self._span: RelationSpan | None = None
        self._trunc: dict = {}

    @property
    def word_count(self) -> int:
        return count_words(len(self.p.generators), self.degree)

    def relation_span(self) -> RelationSpan:
        if self._span is None:
            cap = basis_cap()
            if self.word_count > cap:
                raise ResourceLimitError(f"word basis at degree {self.degree} for {self.p.name}", self.word_count, cap)
            self._span = RelationSpan(self.p, self.degree)
        return self._span

    @property
    def dimension(self) -> int:
        return self.word_count - self.relation_span().rank

    def truncated(self, m: int) -> TruncatedIdeal:
        t = self._trunc.get(m)
        if t is None:
            t = self._trunc[m] = TruncatedIdeal(self.p, m, self.degree, self.centering)
        return t

    def normal_form(self, x: NCPoly) -> NCPoly:
        return self.relation_span().normal_form(x)

    def basis_words(self) -> list[Word]:
        """Words not eliminated by the relation span (a basis of the quotient)."""
        pivots = set(self.relation_span().echelon.rows)
        return [w for w in words_up_to(self.p.generators, self.degree) if w not in pivots]

    def kn_span(self, n: int) -> "SubspaceHandle":
        return SubspaceHandle(self, n)

    def membership(self, n: int, x: NCPoly) -> MembershipResult:
        return self.kn_span(n).membership(x)

    def as_dict(self) -> dict:
        return {
            "algebra": self.p.name,
            "degree": self.degree,
            "words": self.word_count,
            "relation_rank": self.relation_span().rank,
            "dimension": self.dimension,
        }


def build_bounded_quotient(p: HopfPresentation, d: int, lazy: bool = False) -> BoundedQuotient:
    """Set up the degree-d quotient.

    With ``lazy`` the full relation span is only built when a dimension, basis or
    normal form is requested. Membership tests never need it, so they stay
    available past the word-basis cap.
    """
    q = BoundedQuotient(p, d)
    if not lazy:
        q.relation_span()
    return q


class SubspaceHandle:
    """K_n intersected with degree <= d, inside a bounded quotient."""

    def __init__(self, q: BoundedQuotient, n: int):
        if n < 1:
            raise ValueError("n must be at least 1")
        self.q = q
        self.n = n
        self.warnings: list[str] = []
        if n > q.degree:
            self.warnings.append(f"n = {n} exceeds the degree bound {q.degree}: the span is empty at this bound")

    @property
    def empty_at_bound(self) -> bool:
        return self.n > self.q.degree

    @property
    def dimension(self) -> int:
        if self.empty_at_bound:
            return 0
        t = self.q.truncated(self.n)
        return self.q.dimension - (t.coordinates - t.rank)

    def membership(self, x: NCPoly) -> MembershipResult:
        p = self.q.p
        unknown = x.letters() - set(p.generators)
        if unknown:
            raise KeyError(f"unknown generator(s) {sorted(unknown)}")
        t = self.q.truncated(self.n)
        vec = self.q.centering.poly(x)
        if t.contains(vec):
            return MembershipResult(IN, self.n, self.q.degree, t.exhaustive, "low centered part lies in the relation ideal")
        detail = "low centered part not reached by relation multiples"
        if t.exhaustive:
            detail += " (all multiples that can reach it were included)"
        return MembershipResult(NOT_AT_BOUND, self.n, self.q.degree, t.exhaustive, detail)

    def spanning_elements(self, max_length: int | None = None) -> Iterable[NCPoly]:
        """Centered products of length n .. d."""
        top = self.q.degree if max_length is None else max_length
        for w in words_up_to(self.q.p.generators, top, self.n):
            yield self.q.centering.centered_word(w)

    def basis(self) -> list[NCPoly]:
        """Explicit echelon basis of normal forms (small cases only)."""
        ech = SparseEchelon(word_key)
        for x in self.spanning_elements():
            ech.add(self.q.normal_form(x).terms)
        return [NCPoly(r) for _, r in sorted(ech.rows.items(), key=lambda kv: word_key(kv[0]))]


def kn_span(q: BoundedQuotient, n: int) -> SubspaceHandle:
    return q.kn_span(n)


def membership(s: SubspaceHandle, x: NCPoly) -> MembershipResult:
    return s.membership(x)


# ---------------------------------------------------------------------------
# K_infinity probe
# ---------------------------------------------------------------------------

STRONG = "strong-connectedness evidence"
TOTAL = "total-disconnection evidence"
INCONCLUSIVE = "inconclusive"


@dataclass
class ChainReport:
    chain: list
    stabilized: bool
    verdict: str
    persistent_generators: list
    degree: int
    warnings: list = field(default_factory=list)

    def as_dict(self):
        return {
            "chain": self.chain,
            "stabilized": self.stabilized,
            "verdicts": [self.verdict],
            "persistent_generators": self.persistent_generators,
            "degree": self.degree,
            "certificates": [f"{g} - eps({g}) certified in K_n for n <= {len(self.chain)}" for g in self.persistent_generators],
            "warnings": self.warnings,
        }


def kinfty_probe(q: BoundedQuotient, n_max: int) -> ChainReport:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    warnings = []
    if n_max > q.degree:
        warnings.append(f"n_max reduced from {n_max} to the degree bound {q.degree}")
        n_max = q.degree
    chain = [q.kn_span(n).dimension for n in range(1, n_max + 1)]
    stabilized = len(chain) >= 2 and chain[-1] == chain[-2]
    if stabilized and chain[-1] == 0:
        verdict = STRONG
    elif stabilized and chain[-1] == chain[0]:
        verdict = TOTAL
    else:
        verdict = INCONCLUSIVE
    persistent = []
    top = q.kn_span(n_max)
    for g in q.p.generators:
        x = NCPoly.gen(g) - q.p.counit_table[g]
        if x and top.membership(x).certified:
            persistent.append(g)
    return ChainReport(chain, stabilized, verdict, persistent, q.degree, warnings)


# ---------------------------------------------------------------------------
# the O_2^+ descent
# ---------------------------------------------------------------------------


class WrongPresentation(ValueError):
    pass


@dataclass
class DescentReport:
    certified: bool
    identity_in_relations: bool
    sum_identity_in_relations: bool
    levels: list
    degree: int
    steps: list = field(default_factory=list)

    def as_dict(self):
        return {
            "certified": self.certified,
            "identity_in_relations": self.identity_in_relations,
            "sum_identity_in_relations": self.sum_identity_in_relations,
            "levels": self.levels,
            "degree": self.degree,
            "steps": self.steps,
        }


def o2plus_descent_check(q: BoundedQuotient, n_max: int | None = None) -> DescentReport:
    """Certify that c (the gamma generator) lies in every K_n for su_q2(-1)."""
    p = q.p
    if p.params.get("q") != -1 or set(p.generators) != {"a", "as", "c", "cs"}:
        raise WrongPresentation("wrong presentation: o2plus_descent_check needs su_q2(-1)")
    n_max = q.degree if n_max is None else n_max
    a, as_, c, cs = (NCPoly.gen(g) for g in ("a", "as", "c", "cs"))
    beta = a - 1
    s = beta + p.star(beta)
    span = RelationSpan(p, 2)
    ident = c + (c * s + s * c).scale(Fraction(1, 4))
    ident_ok = span.contains(ident)
    # beta + beta* equals minus (beta* beta + gamma* gamma) modulo the relations
    sum_ok = span.contains(s + p.star(beta) * beta + cs * c)
    steps = [
        "gamma = -(1/4)(gamma (beta + beta*) + (beta + beta*) gamma) modulo relations",
        "beta + beta* = -(beta* beta + gamma* gamma) lies in K_2",
        "so gamma in K_n implies gamma in K_(n+2); gamma in K_1 and gamma = (...) in K_3 covers both parities",
    ]
    levels = []
    for n in range(1, n_max + 1):
        r = q.membership(n, c)
        levels.append({"n": n, "status": r.status})
    ok = ident_ok and sum_ok and all(lv["status"] == IN for lv in levels)
    return DescentReport(ok, ident_ok, sum_ok, levels, q.degree, steps)


# ---------------------------------------------------------------------------
# Kac data
# ---------------------------------------------------------------------------


def kac_generators(c: Corepresentation) -> list[tuple[int, int, NCPoly]]:
    """Coefficients u_ij (1-based indices) with q_i != q_j."""
    q = c.q_eigenvalues
    return [(i + 1, j + 1, x) for i, j, x in c.entries() if q[i] != q[j]]


def s_squared(c: Corepresentation) -> dict:
    """(i, j) -> q_i / q_j, the eigenvalue of the squared antipode on u_ij."""
    q = c.q_eigenvalues
    return {(i + 1, j + 1): Fraction(q[i]) / Fraction(q[j]) for i in range(c.dim) for j in range(c.dim)}


def scaling_action(c: Corepresentation, t: float) -> dict:
    """(i, j) -> exp(-i t ln(q_i / q_j))."""
    q = c.q_eigenvalues
    out = {}
    for i in range(c.dim):
        for j in range(c.dim):
            ratio = float(Fraction(q[i]) / Fraction(q[j]))
            out[(i + 1, j + 1)] = cmath.exp(-1j * t * math.log(ratio))
    return out


# ---------------------------------------------------------------------------
# filtration probe
# ---------------------------------------------------------------------------


@dataclass
class FiltrationReport:
    passed: bool
    n: int
    mode: str
    elements: int
    failures: list
    degree: int

    def as_dict(self):
        return {
            "passed": self.passed,
            "n": self.n,
            "mode": self.mode,
            "elements": self.elements,
            "failures": self.failures,
            "degree": self.degree,
            "verdicts": ["pass" if self.passed else "fail"],
        }


def _centered_tensor(cen: Centering, t: TensorPoly) -> dict:
    out: dict = {}
    for (w1, w2), c in t.terms.items():
        for u, a in cen.word(w1).items():
            for v, b in cen.word(w2).items():
                k = (u, v)
                s = out.get(k, ZERO) + c * a * b
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
    return out


def filtration_probe(q: BoundedQuotient, n: int, mode: str = "sum") -> FiltrationReport:
    """Check Delta(K_n) against the expected filtered target on every spanning element.

    ``sum``: Delta(K_n) in sum_l K_l (x) K_(n-l).
    ``hopf``: Delta(K_n) in K_k (x) A + A (x) K_k with k = n // 2.
    Terms outside the target are truncated away in centered coordinates and the
    remainder must lie in R (x) A + A (x) R.
    """
    if mode not in ("sum", "hopf"):
        raise ValueError("mode must be 'sum' or 'hopf'")
    p = q.p
    cen = q.centering
    half = n // 2

    def low(i: int, j: int) -> bool:
        return i + j < n if mode == "sum" else (i < half and j < half)

    def room(j: int) -> int:
        # largest m with low(i, j) for all i < m
        if mode == "sum":
            return max(n - j, 0)
        return half if j < half else 0

    trunc: dict[int, TruncatedIdeal] = {}

    def ideal(m: int) -> TruncatedIdeal | None:
        if m <= 0:
            return None
        if m not in trunc:
            trunc[m] = TruncatedIdeal(p, m, None, cen)
        return trunc[m]

    # echelon of the truncated R(x)A + A(x)R
    target = SparseEchelon(lambda k: (word_key(k[0]), word_key(k[1])))
    top = n - 1 if mode == "sum" else half - 1
    for v in words_up_to(p.generators, max(top, -1)):
        t = ideal(room(len(v)))
        if t is None:
            continue
        for row in t.echelon.rows.values():
            left = {(w, v): c for w, c in row.items() if low(len(w), len(v))}
            right = {(v, w): c for w, c in row.items() if low(len(v), len(w))}
            for r in (left, right):
                if r:
                    target.add(r)

    failures = []
    count = 0
    for w in words_up_to(p.generators, q.degree, n):
        count += 1
        x = cen.centered_word(w)
        vec = _centered_tensor(cen, p.coproduct(x))
        lowpart = {k: c for k, c in vec.items() if low(len(k[0]), len(k[1]))}
        if lowpart and target.reduce(lowpart):
            failures.append(format_word(w))
    return FiltrationReport(not failures, n, mode, count, failures[:20], q.degree)
