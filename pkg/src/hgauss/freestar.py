"""Free *-monomials, noncommutative polynomials and tensor polynomials over Scalar."""

from __future__ import annotations

from typing import Any, Callable, Iterable, Mapping

from .exact import ONE, ZERO, Scalar, as_scalar, format_scalar

Word = tuple  # tuple[str, ...]; the empty tuple is the unit

RESERVED_NAMES = frozenset({"i"})


def word_key(w: Word):
    """Global degree-lex order on words."""
    return (len(w), w)


def format_word(w: Word) -> str:
    return ".".join(w) if w else "1"


def _format_terms(pieces: list[tuple[str, Scalar]]) -> str:
    """Render (monomial text, coefficient) pairs; monomial '' means a constant."""
    if not pieces:
        return "0"
    out = []
    for k, (mono, c) in enumerate(pieces):
        if not mono:
            txt = format_scalar(c)
        elif c == 1:
            txt = mono
        elif c == -1:
            txt = "-" + mono
        else:
            txt = f"{format_scalar(c)}*{mono}"
        if k == 0:
            out.append(txt)
        elif txt.startswith("-"):
            out.append(" - " + txt[1:])
        else:
            out.append(" + " + txt)
    return "".join(out)


class NCPoly:
    """Finite linear combination of words with nonzero Scalar coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, Any] | None = None):
        clean = {}
        if terms:
            for w, c in terms.items():
                c = as_scalar(c)
                if c:
                    clean[tuple(w)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("NCPoly is immutable")

    @staticmethod
    def _raw(terms: dict) -> "NCPoly":
        p = object.__new__(NCPoly)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls._raw({(): ONE})

    @classmethod
    def const(cls, c: Any) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def gen(cls, name: str) -> "NCPoly":
        return cls._raw({(name,): ONE})

    @classmethod
    def word(cls, w: Iterable[str], c: Any = ONE) -> "NCPoly":
        return cls({tuple(w): c})

    # queries ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def constant_term(self) -> Scalar:
        return self.terms.get((), ZERO)

    def coefficient(self, w: Word) -> Scalar:
        return self.terms.get(tuple(w), ZERO)

    def words(self) -> list[Word]:
        return sorted(self.terms, key=word_key)

    def letters(self) -> set[str]:
        return {g for w in self.terms for g in w}

    def items(self) -> list[tuple[Word, Scalar]]:
        """Terms in the canonical (descending degree-lex) print order."""
        return [(w, self.terms[w]) for w in sorted(self.terms, key=word_key, reverse=True)]

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == NCPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for w, c in o.terms.items():
            v = t.get(w, ZERO) + c
            if v:
                t[w] = v
            else:
                t.pop(w, None)
        return NCPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return _as_poly(other) - self

    def scale(self, c: Any) -> "NCPoly":
        c = as_scalar(c)
        if not c:
            return NCPoly.zero()
        return NCPoly._raw({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return multiply(self, other)
        if isinstance(other, (int, Scalar)) or type(other).__name__ == "Fraction":
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)) or type(other).__name__ == "Fraction":
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = NCPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        return _format_terms([(format_word(w) if w else "", c) for w, c in self.items()])

    def __repr__(self):
        return f"NCPoly({self})"


def _as_poly(x) -> NCPoly | None:
    if isinstance(x, NCPoly):
        return x
    try:
        return NCPoly.const(as_scalar(x))
    except TypeError:
        return None


def multiply(p: NCPoly, q: NCPoly) -> NCPoly:
    """Bilinear extension of word concatenation."""
    out: dict = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in q.terms.items():
            w = w1 + w2
            v = out.get(w, ZERO) + c1 * c2
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return NCPoly._raw(out)


def star(p: NCPoly, star_table: Mapping[str, NCPoly]) -> NCPoly:
    """Antilinear, antimultiplicative extension of a generator involution."""
    out = NCPoly.zero()
    cache: dict[Word, NCPoly] = {}
    for w, c in p.terms.items():
        img = cache.get(w)
        if img is None:
            img = NCPoly.one()
            for g in reversed(w):
                if g not in star_table:
                    raise KeyError(f"no star for generator {g!r}")
                img = img * star_table[g]
            cache[w] = img
        out = out + img.scale(c.conj())
    return out


def check_involutive(star_table: Mapping[str, NCPoly]) -> list[str]:
    """Generators g whose star(star(g)) differs from g in the free algebra."""
    bad = []
    for g in star_table:
        try:
            if star(star_table[g], star_table) != NCPoly.gen(g):
                bad.append(g)
        except KeyError:
            bad.append(g)
    return bad


HOMOMORPHIC = "homomorphic"
ANTIHOMOMORPHIC = "antihomomorphic"
DERIVATION = "derivation"


def apply_generator_map(
    p: NCPoly,
    table: Mapping[str, Any],
    mode: str = HOMOMORPHIC,
    *,
    counit: Mapping[str, Scalar] | None = None,
    one: Any = None,
    zero: Any = None,
) -> Any:
    """Extend a map given on generators to all of ``p``.

    ``homomorphic`` and ``antihomomorphic`` multiply the images (in reversed
    order for the latter). ``derivation`` is the Leibniz rule with counit
    weights, eta(w) = sum_k eps(prefix) eta(w_k) eps(suffix), and needs ``counit``.
    Targets only need ``+`` and scalar multiplication (and ``*`` for the two
    multiplicative modes).
    """
    missing = p.letters() - set(table)
    if missing:
        raise KeyError(f"generator map has no entry for {sorted(missing)}")
    if mode == DERIVATION:
        if counit is None:
            raise ValueError("derivation mode needs counit values")
        acc = zero
        for w, c in p.terms.items():
            eps = [as_scalar(counit[g]) for g in w]
            for k, g in enumerate(w):
                weight = c
                for j, e in enumerate(eps):
                    if j != k:
                        weight = weight * e
                        if not weight:
                            break
                if weight:
                    term = table[g] * weight
                    acc = term if acc is None else acc + term
        return acc
    if mode not in (HOMOMORPHIC, ANTIHOMOMORPHIC):
        raise ValueError(f"unknown mode {mode!r}")
    if one is None:
        sample = next(iter(table.values()), None)
        one = NCPoly.one() if isinstance(sample, NCPoly) else ONE
    acc = zero
    for w, c in p.terms.items():
        letters = w if mode == HOMOMORPHIC else tuple(reversed(w))
        val = one
        for g in letters:
            val = val * table[g]
        term = val * c
        acc = term if acc is None else acc + term
    if acc is None:
        return one * ZERO
    return acc


# ---------------------------------------------------------------------------
# tensor polynomials
# ---------------------------------------------------------------------------


class TensorPoly:
    """Finite sum of elementary tensors w_1 (x) ... (x) w_n of words."""

    __slots__ = ("legs", "terms")

    def __init__(self, legs: int, terms: Mapping[tuple, Any] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(tuple(w) for w in key)
            if len(key) != legs:
                raise ValueError("tensor term with wrong number of legs")
            c = as_scalar(c)
            if c:
                clean[key] = c
        object.__setattr__(self, "legs", legs)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TensorPoly is immutable")

    @classmethod
    def _raw(cls, legs: int, terms: dict) -> "TensorPoly":
        t = object.__new__(cls)
        object.__setattr__(t, "legs", legs)
        object.__setattr__(t, "terms", terms)
        return t

    @classmethod
    def from_poly(cls, p: NCPoly) -> "TensorPoly":
        return cls._raw(1, {(w,): c for w, c in p.terms.items()})

    @classmethod
    def elementary(cls, *factors: NCPoly) -> "TensorPoly":
        """Multilinear tensor product of polynomials."""
        acc = {(): ONE}
        for f in factors:
            nxt = {}
            for key, c in acc.items():
                for w, d in f.terms.items():
                    k2 = key + (w,)
                    nxt[k2] = nxt.get(k2, ZERO) + c * d
            acc = {k: v for k, v in nxt.items() if v}
        return cls._raw(len(factors), acc)

    @classmethod
    def one(cls, legs: int) -> "TensorPoly":
        return cls._raw(legs, {((),) * legs: ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorPoly) and self.legs == other.legs and self.terms == other.terms

    def __hash__(self):
        return hash((self.legs, frozenset(self.terms.items())))

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        if self.legs != other.legs:
            raise ValueError("leg count mismatch")
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = t.get(k, ZERO) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return TensorPoly._raw(self.legs, t)

    def __neg__(self):
        return TensorPoly._raw(self.legs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Any) -> "TensorPoly":
        c = as_scalar(c)
        if not c:
            return TensorPoly._raw(self.legs, {})
        return TensorPoly._raw(self.legs, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorPoly):
            if self.legs != other.legs:
                raise ValueError("leg count mismatch")
            out: dict = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    v = out.get(k, ZERO) + c1 * c2
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
            return TensorPoly._raw(self.legs, out)
        return self.scale(other)

    __rmul__ = scale

    def map_leg(self, index: int, fn: Callable[[Word], "TensorPoly"]) -> "TensorPoly":
        """Replace leg ``index`` by a tensor (of any leg count) computed from its word."""
        out: TensorPoly | None = None
        cache: dict = {}
        for key, c in self.terms.items():
            img = cache.get(key[index])
            if img is None:
                img = cache[key[index]] = fn(key[index])
            pre = {key[:index]: ONE}
            post = {key[index + 1 :]: ONE}
            piece = TensorPoly._raw(
                self.legs - 1 + img.legs,
                {k0 + ki + k1: c * ci for k0 in pre for k1 in post for ki, ci in img.terms.items()},
            )
            out = piece if out is None else out + piece
        if out is None:
            return TensorPoly._raw(self.legs, {})
        return out

    def contract(self, fns: list[Callable[[Word], Scalar]]) -> Scalar:
        """Apply one linear functional per leg and multiply the results."""
        total = ZERO
        for key, c in self.terms.items():
            v = c
            for f, w in zip(fns, key):
                v = v * f(w)
                if not v:
                    break
            total = total + v
        return total

    def items(self) -> list:
        return sorted(
            self.terms.items(),
            key=lambda kv: (sum(len(w) for w in kv[0]), tuple(word_key(w) for w in kv[0])),
            reverse=True,
        )

    def __str__(self):
        pieces = []
        for key, c in self.items():
            pieces.append((" (x) ".join(format_word(w) for w in key), c))
        if not pieces:
            return "0"
        return _format_terms(pieces)

    def __repr__(self):
        return f"TensorPoly({self})"


def parse_poly(text: str, inverses: Mapping[str, str] | None = None) -> NCPoly:
    """Parse the canonical text rendering (plus ``g^k`` / ``g^-1`` sugar)."""
    from .syntax import ExprParser

    return ExprParser(text, inverses=inverses).parse_poly_only()


def parse_tensor(text: str, inverses: Mapping[str, str] | None = None) -> TensorPoly:
    from .syntax import ExprParser

    return ExprParser(text, inverses=inverses).parse_tensor_only()
