"""Convolution powers, the convolution exponential and state positivity."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .exact import ONE, ZERO, Scalar, as_scalar
from .freestar import NCPoly, Word, format_word
from .gaussian import GaussianDatum
from .hopf import HopfPresentation


class Functional:
    """A linear functional given by its values on words."""

    def __init__(self, p: HopfPresentation, word_value: Callable[[Word], Any], name: str = "phi"):
        self.presentation = p
        self._fn = word_value
        self.name = name
        self._cache: dict = {}

    @classmethod
    def from_datum(cls, d: GaussianDatum) -> "Functional":
        eng = d.engine()
        return cls(d.presentation, eng.word, d.name)

    @classmethod
    def from_table(cls, p: HopfPresentation, table: Mapping[Word, Any], name: str = "table") -> "Functional":
        vals = {tuple(w): as_scalar(v) for w, v in table.items()}

        def fn(w):
            if w not in vals:
                raise KeyError(f"no value for word {format_word(w)}")
            return vals[w]

        return cls(p, fn, name)

    def word(self, w: Word):
        v = self._cache.get(w)
        if v is None:
            v = self._cache[w] = self._fn(w)
        return v

    def __call__(self, x: NCPoly):
        acc = ZERO
        for w, c in x.terms.items():
            acc = acc + self.word(w) * c
        return acc


class _Powers:
    """Memoized exact convolution powers phi^{*n} on words."""

    def __init__(self, phi: Functional):
        self.phi = phi
        self.p = phi.presentation
        self._delta: dict = {}
        self._val: dict = {}

    def delta(self, w: Word):
        d = self._delta.get(w)
        if d is None:
            d = self._delta[w] = list(self.p.word_coproduct(w).terms.items())
        return d

    def counit(self, w: Word) -> Scalar:
        out = ONE
        for g in w:
            out = out * self.p.counit_table[g]
        return out

    def word(self, n: int, w: Word) -> Scalar:
        if n == 0:
            return self.counit(w)
        if n == 1:
            return as_scalar(self.phi.word(w))
        key = (n, w)
        v = self._val.get(key)
        if v is None:
            v = ZERO
            for (w1, w2), c in self.delta(w):
                a = self.word(n - 1, w1)
                if a:
                    b = self.phi.word(w2)
                    if b:
                        v = v + c * a * b
            self._val[key] = v
        return v


def convolution_power(phi: Functional | GaussianDatum, n: int, x: NCPoly, p: HopfPresentation | None = None) -> Scalar:
    """phi^{*n}(x); n = 0 gives the counit."""
    if n < 0:
        raise ValueError("n must be non-negative")
    f = phi if isinstance(phi, Functional) else Functional.from_datum(phi)
    if p is not None and p is not f.presentation:
        f = Functional(p, f._fn, f.name)
    pw = _Powers(f)
    acc = ZERO
    for w, c in x.terms.items():
        acc = acc + pw.word(n, w) * c
    return acc


@dataclass
class ExpResult:
    value: complex
    last_term: float
    converged: bool
    squarings: int
    order: int
    difference: float = 0.0

    def as_dict(self):
        return {
            "value": [self.value.real, self.value.imag],
            "last_term": self.last_term,
            "converged": self.converged,
            "squarings": self.squarings,
            "order": self.order,
            "doubling_difference": self.difference,
        }


class ExpState:
    """phi_t = exp_*(t phi) on words, by Taylor series at t/2^s followed by s convolution squarings."""

    def __init__(self, phi: Functional, t: float, order: int = 30, squarings: int | None = None):
        if order < 1:
            raise ValueError("order must be at least 1")
        if t < 0:
            raise ValueError("t must be non-negative")
        self.phi = phi
        self.t = float(t)
        self.order = order
        self.powers = _Powers(phi)
        self.fixed_squarings = squarings
        self.last_term = 0.0
        self._level: dict = {}

    def _choose_squarings(self, w: Word) -> int:
        if self.fixed_squarings is not None:
            return self.fixed_squarings
        # scale so that t * |phi| <= 1/2 on the words reached by the coproduct of w
        words = {w} | {w1 for (w1, _), _c in self.powers.delta(w)} | {w2 for (_, w2), _c in self.powers.delta(w)}
        m = max((abs(complex(as_scalar(self.phi.word(v)))) for v in words), default=0.0)
        if self.t * m <= 0.5:
            return 0
        return max(0, math.ceil(math.log2(2 * self.t * m)))

    def _taylor(self, w: Word, tau: float) -> complex:
        total = complex(self.powers.counit(w))
        fact = 1.0
        last = 0.0
        for n in range(1, self.order + 1):
            fact *= n
            term = complex(self.powers.word(n, w)) * (tau**n) / fact
            total += term
            last = abs(term)
        self.last_term = max(self.last_term, last)
        return total

    def word(self, w: Word, s: int | None = None) -> complex:
        s = self._choose_squarings(w) if s is None else s
        return self._at_level(w, s, s)

    def _at_level(self, w: Word, level: int, s: int) -> complex:
        key = (w, level, s)
        v = self._level.get(key)
        if v is not None:
            return v
        if level == 0:
            v = self._taylor(w, self.t / 2**s)
        else:
            v = 0j
            for (w1, w2), c in self.powers.delta(w):
                a = self._at_level(w1, level - 1, s)
                if a:
                    v += complex(c) * a * self._at_level(w2, level - 1, s)
        self._level[key] = v
        return v

    def __call__(self, x: NCPoly) -> complex:
        acc = 0j
        s = max((self._choose_squarings(w) for w in x.terms), default=0)
        for w, c in x.terms.items():
            acc += complex(c) * self.word(w, s)
        return acc


def exp_state(
    phi: Functional | GaussianDatum,
    t: float,
    x: NCPoly,
    p: HopfPresentation | None = None,
    order: int = 30,
    tol: float = 1e-10,
    squarings: int | None = None,
) -> ExpResult:
    """exp_*(t phi)(x) with a doubling-order convergence check."""
    f = phi if isinstance(phi, Functional) else Functional.from_datum(phi)
    if t == 0:
        eps = complex(sum((c * _counit(f.presentation, w) for w, c in x.terms.items()), ZERO))
        return ExpResult(eps, 0.0, True, 0, order)
    e1 = ExpState(f, t, order, squarings)
    v1 = e1(x)
    e2 = ExpState(f, t, 2 * order, squarings)
    v2 = e2(x)
    diff = abs(v1 - v2)
    s = max((e1._choose_squarings(w) for w in x.terms), default=0)
    return ExpResult(v1, e1.last_term, diff <= tol * max(1.0, abs(v2)), s, order, diff)


def _counit(p: HopfPresentation, w: Word) -> Scalar:
    out = ONE
    for g in w:
        out = out * p.counit_table[g]
    return out


def convolve(f: Callable[[Word], complex], g: Callable[[Word], complex], x: NCPoly, p: HopfPresentation) -> complex:
    """(f * g)(x) = (f (x) g) Delta(x) for word-level functionals."""
    acc = 0j
    for w, c in x.terms.items():
        for (w1, w2), d in p.word_coproduct(w).terms.items():
            acc += complex(c * d) * f(w1) * g(w2)
    return acc


@dataclass
class PositivityReport:
    psd: bool
    min_eigenvalue: float
    matrix: list = field(default_factory=list)
    tolerance: float = 1e-8

    def as_dict(self):
        return {
            "psd": self.psd,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix],
        }


def state_positivity_probe(
    phi: Functional | GaussianDatum,
    t: float,
    family: Sequence[NCPoly],
    p: HopfPresentation | None = None,
    order: int = 30,
    tol: float = 1e-8,
) -> PositivityReport:
    """Is [phi_t(b_i* b_j)] positive semidefinite up to ``tol``?"""
    f = phi if isinstance(phi, Functional) else Functional.from_datum(phi)
    pres = p or f.presentation
    if t == 0:
        def ev(x):
            return complex(sum((c * _counit(pres, w) for w, c in x.terms.items()), ZERO))
    else:
        st = ExpState(f, t, order)
        ev = st
    n = len(family)
    m = [[0j] * n for _ in range(n)]
    for i, bi in enumerate(family):
        bis = pres.star(bi)
        for j, bj in enumerate(family):
            m[i][j] = ev(bis * bj)
    arr = np.array(m, dtype=complex) if n else np.zeros((0, 0), dtype=complex)
    herm = (arr + arr.conj().T) / 2
    lam = float(np.linalg.eigvalsh(herm).min()) if n else 0.0
    asym = float(np.abs(arr - arr.conj().T).max()) if n else 0.0
    return PositivityReport(lam >= -tol and asym <= 1e-6, lam, m, tol)


def degree_two_family(p: HopfPresentation) -> list[NCPoly]:
    """{1} together with w - eps(w) for all words of length 1 and 2."""
    fam = [NCPoly.one()]
    for g in p.generators:
        x = NCPoly.gen(g)
        fam.append(x - p.counit(x))
    for a in p.generators:
        for b in p.generators:
            x = NCPoly.word((a, b))
            fam.append(x - p.counit(x))
    return fam
