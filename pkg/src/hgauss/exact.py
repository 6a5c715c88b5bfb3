"""Exact complex-rational scalars and the dense/sparse linear algebra built on them.

Everything algebraic in the package runs through :class:`Scalar`; floats only
appear when a value is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import heapq
from math import gcd
from typing import Any, Callable, Hashable, Iterable, Sequence


def _frac(x: Any):
    """Exact rational as an int when integral, else a Fraction."""
    if type(x) is int:
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    f = x if isinstance(x, Fraction) else Fraction(x)
    return f.numerator if f.denominator == 1 else f


def _norm(x):
    if type(x) is int:
        return x
    return x.numerator if x.denominator == 1 else x


class Scalar:
    """A complex number with arbitrary-precision rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("cannot combine a Scalar real part with an imaginary part")
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im)
            return
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    @staticmethod
    def _make(re, im) -> "Scalar":
        s = object.__new__(Scalar)
        object.__setattr__(s, "re", _norm(re))
        object.__setattr__(s, "im", _norm(im))
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = other if type(other) is Scalar else as_scalar(other)
        if not self.im and not o.im:
            return Scalar._make(self.re + o.re, 0)
        return Scalar._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if type(other) is Scalar else as_scalar(other)
        if not self.im and not o.im:
            return Scalar._make(self.re - o.re, 0)
        return Scalar._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __neg__(self):
        return Scalar._make(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar._make(self.re * other, self.im * other)
            return NotImplemented
        if not other.im:
            if not self.im:
                return Scalar._make(self.re * other.re, self.im)
            return Scalar._make(self.re * other.re, self.im * other.re)
        if not self.im:
            return Scalar._make(self.re * other.re, self.re * other.im)
        return Scalar._make(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._make(Fraction(1) / self.re, 0)
        n = Fraction(self.re * self.re + self.im * self.im)
        return Scalar._make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = as_scalar(other)
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._make(Fraction(self.re) / o.re, Fraction(self.im) / o.re)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(k)):
            result = result * base
        return result

    def conj(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # views ------------------------------------------------------------------
    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_complex(self) -> complex:
        return complex(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar._make(0, 0)
ONE = Scalar._make(1, 0)
I = Scalar._make(0, 1)


def as_scalar(x: Any) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar._make(x, 0)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact Scalar")


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical text: ``3``, ``-1/2``, ``3/4i``, ``-i``, ``(1/2 + 3/4i)``."""
    if not s.im:
        return _fmt_frac(s.re)
    if s.im == 1:
        im = "i"
    elif s.im == -1:
        im = "-i"
    else:
        im = _fmt_frac(s.im) + "i"
    if not s.re:
        return im
    sign = "-" if s.im < 0 else "+"
    mag = abs(s.im)
    mag_txt = "i" if mag == 1 else _fmt_frac(mag) + "i"
    return f"({_fmt_frac(s.re)} {sign} {mag_txt})"


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`; also accepts plain ints and ``a/b``."""
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        inner = t[1:-1].strip()
        # split on the last top-level sign that is not the leading one
        for pos in range(len(inner) - 1, 0, -1):
            if inner[pos] in "+-" and inner[pos - 1] in " 0123456789":
                return parse_scalar(inner[:pos]) + parse_scalar(inner[pos:].replace(" ", ""))
        return parse_scalar(inner)
    t = t.replace(" ", "")
    if t.startswith("+"):
        t = t[1:]
    if t.endswith("i"):
        body = t[:-1]
        if body in ("", "+"):
            return I
        if body == "-":
            return -I
        return Scalar(0, Fraction(body))
    return Scalar(Fraction(t))


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------


class ScalarMatrix:
    """Dense immutable grid of Scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[Any]]):
        grid = tuple(tuple(as_scalar(x) for x in row) for row in entries)
        widths = {len(r) for r in grid}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", widths.pop() if widths else 0)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ScalarMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "ScalarMatrix":
        return cls([[ZERO] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, ScalarMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(map(str, r)) for r in self.entries)
        return f"ScalarMatrix([{body}])"

    def is_hermitian(self) -> bool:
        if self.rows != self.cols:
            return False
        e = self.entries
        return all(e[i][j] == e[j][i].conj() for i in range(self.rows) for j in range(i, self.rows))

    def conj_transpose(self) -> "ScalarMatrix":
        return ScalarMatrix([[self.entries[i][j].conj() for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [() for _ in range(other.cols)]
        return ScalarMatrix(
            [[_dot(r, c) for c in cols] for r in self.entries]
        )

    def apply(self, v: Sequence[Any]) -> list[Scalar]:
        vec = [as_scalar(x) for x in v]
        return [_dot(r, vec) for r in self.entries]

    def quadratic_form(self, v: Sequence[Any]) -> Scalar:
        """v* M v."""
        vec = [as_scalar(x) for x in v]
        mv = self.apply(vec)
        return _dot([x.conj() for x in vec], mv)

    def to_complex(self) -> list[list[complex]]:
        return [[complex(x) for x in r] for r in self.entries]


def _dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Scalar:
    acc = ZERO
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


@dataclass(frozen=True)
class RrefResult:
    rank: int
    pivots: tuple[int, ...]
    basis: tuple[tuple[Scalar, ...], ...]


def rref(m: ScalarMatrix | Sequence[Sequence[Any]]) -> RrefResult:
    """Reduced row echelon form; pivot = leftmost nonzero entry, first row wins."""
    if not isinstance(m, ScalarMatrix):
        m = ScalarMatrix(m)
    rows = [list(r) for r in m.entries]
    ncols = m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return RrefResult(r, tuple(pivots), tuple(tuple(row) for row in rows[:r]))


def nullspace(m: ScalarMatrix | Sequence[Sequence[Any]], ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of {x : m x = 0}, one vector per free column, in column order."""
    if not isinstance(m, ScalarMatrix):
        m = ScalarMatrix(m) if len(m) else None
    n = ncols if m is None else m.cols
    if m is None or m.rows == 0:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    red = rref(m)
    pivset = set(red.pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [ZERO] * n
        v[free] = ONE
        for row, p in zip(red.basis, red.pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class PsdResult:
    is_psd: bool
    witness: tuple[Scalar, ...] | None = None

    def __bool__(self):
        return self.is_psd


def psd_check(m: ScalarMatrix | Sequence[Sequence[Any]]) -> PsdResult:
    """Exact positive-semidefiniteness by symmetric elimination.

    A negative pivot, or a zero pivot with a nonzero entry in its row, yields a
    vector v with v* m v < 0, normalised so its first nonzero entry is 1.
    """
    if not isinstance(m, ScalarMatrix):
        m = ScalarMatrix(m)
    if not m.is_hermitian():
        raise ValueError("psd_check needs a hermitian matrix")
    n = m.rows
    a = [list(r) for r in m.entries]
    # current a == L m L*; witness x for a maps to v = L* x for m
    L = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = a[k][k].re
        if piv < 0:
            return _witness(L, {k: ONE}, n, m)
        if piv == 0:
            j = next((j for j in range(k + 1, n) if a[k][j]), None)
            if j is None:
                continue
            off = a[k][j]
            d = a[j][j].re
            s = Fraction(abs(d) + 1) / off.abs2()
            t = -(off * s)
            return _witness(L, {k: t, j: ONE}, n, m)
        inv = Fraction(1) / piv
        for i in range(k + 1, n):
            if not a[i][k]:
                continue
            f = a[i][k] * inv
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
            L[i] = [x - f * y for x, y in zip(L[i], L[k])]
            fc = f.conj()
            for r in range(n):
                a[r][i] = a[r][i] - a[r][k] * fc
    return PsdResult(True)


def _witness(L, x: dict[int, Scalar], n: int, m: ScalarMatrix) -> PsdResult:
    v = [ZERO] * n
    for i, xi in x.items():
        for c in range(n):
            if L[i][c]:
                v[c] = v[c] + L[i][c].conj() * xi
    lead = next(c for c in v if c)
    v = [c / lead for c in v]
    assert m.quadratic_form(v).re < 0
    return PsdResult(False, tuple(v))


# ---------------------------------------------------------------------------
# Smith normal form over the integers
# ---------------------------------------------------------------------------


def _identity_int(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U m V = D, U and V unimodular and d_i | d_{i+1}."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in r] for r in m]
    U = _identity_int(rows)
    V = _identity_int(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: fold any offending entry into row t
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, a, V


def int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


# ---------------------------------------------------------------------------
# sparse incremental echelon form
# ---------------------------------------------------------------------------


class _Desc:
    """Reverses the order of a key so heapq pops the largest first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


class SparseEchelon:
    """Incrementally maintained echelon basis of sparse vectors.

    Vectors are dicts ``key -> Scalar``; the pivot of a row is its largest key
    under ``order`` so that reduction eliminates the "leading" terms first.
    """

    def __init__(self, order: Callable[[Hashable], Any] | None = None):
        self._order = order or (lambda k: k)
        self.rows: dict[Hashable, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _lead(self, vec: dict) -> Hashable:
        return max(vec, key=self._order)

    def reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if c}
        order = self._order
        # max-heap of candidate leads; stale entries are skipped
        heap = [(_Desc(order(k)), k) for k in v]
        heapq.heapify(heap)
        done: dict = {}
        while heap:
            _, lead = heapq.heappop(heap)
            f = v.pop(lead, None)
            if f is None:
                continue
            row = self.rows.get(lead)
            if row is None:
                done[lead] = f
                continue
            for k, c in row.items():
                if k == lead:
                    continue
                old = v.get(k)
                nv = (old if old is not None else ZERO) - f * c
                if nv:
                    if old is None:
                        heapq.heappush(heap, (_Desc(order(k)), k))
                    v[k] = nv
                else:
                    v.pop(k, None)
        return done

    def add(self, vec: dict) -> bool:
        r = self.reduce(vec)
        if not r:
            return False
        lead = self._lead(r)
        inv = r[lead].inverse()
        self.rows[lead] = {k: c * inv for k, c in r.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


class ResourceLimitError(RuntimeError):
    """A computation would exceed the configured size cap."""

    def __init__(self, message: str, required: int, cap: int):
        super().__init__(f"{message}: needs {required}, cap is {cap} (raise it with HGAUSS_MAX_BASIS)")
        self.required = required
        self.cap = cap


def basis_cap() -> int:
    import os

    return int(os.environ.get("HGAUSS_MAX_BASIS", "200000"))
