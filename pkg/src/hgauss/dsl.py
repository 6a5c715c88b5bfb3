"""Reader and printer for ``.hga`` workspace files.

::

    file     := item*
    item     := algebra | group | gaussian | corep | config
    algebra  := "algebra" NAME "=" (call | "{" body "}") ";"
    body     := "gens" names ";" ("star" g "=" poly ";")* ("counit" g "=" scalar ";")*
                ("coproduct" g "=" tensor ";")* ("antipode" g "=" poly ";")* ("rel" poly ";")*
    group    := "group" NAME ("{" "gens" names ";" "rels" [word ("," word)*] ";" "}" [";"]
                            | "=" (call | NAME) ";")
    gaussian := "gaussian" NAME "on" NAME "{" (("drift" g | "gram" "(" g "," g ")"
                | "pair" "(" g "," g ")") "=" scalar ";")* "}" [";"]
    corep    := "corep" NAME "on" NAME "{" ("row" poly ("," poly)* ";")+ ["q" scalar ("," scalar)* ";"] "}" [";"]
    config   := "config" NAME "=" scalar ";"
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import ONE, Scalar, format_scalar
from .freestar import NCPoly, TensorPoly
from .gaussian import GaussianDatum
from .groups import Class2Quotient, class2_quotient, gaussian_part_dual, make_group, torsion_free_reduce
from .hopf import (
    CATALOGUE_NAMES,
    Corepresentation,
    GroupWords,
    HopfPresentation,
    catalogue,
    free_product,
    group_algebra,
    hopf_axiom_probe,
    parse_group,
)
from .syntax import ExprParser, ParseError, Token, TokenStream, describe

CONFIG_DEFAULTS = {"degree": 6, "nmax": 6, "order": 30, "tol": Fraction(1, 10**8), "cap": 200000}
GROUP_PIPELINES = ("class2_quotient", "torsion_free_reduce", "gaussian_part_dual")
ITEM_KEYWORDS = ("algebra", "group", "gaussian", "corep", "config")


@dataclass
class CatalogueCall:
    name: str
    args: tuple  # (keyword or None, value text)

    def text(self) -> str:
        inner = ", ".join(v if k is None else f"{k} = {v}" for k, v in self.args)
        return f"{self.name}({inner})"


@dataclass
class Workspace:
    algebras: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)
    gaussians: dict = field(default_factory=dict)
    coreps: dict = field(default_factory=dict)  # name -> (algebra name, Corepresentation)
    config: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    sources: dict = field(default_factory=dict)  # (kind, name) -> CatalogueCall, for printing
    order: list = field(default_factory=list)  # (kind, name) in declaration order
    gaussian_algebra: dict = field(default_factory=dict)

    def setting(self, key: str):
        return self.config.get(key, CONFIG_DEFAULTS[key])

    def to_text(self) -> str:
        return print_workspace(self)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Reader:
    def __init__(self, text: str, probe: bool = True):
        self.ts = TokenStream(text)
        self.ws = Workspace()
        self.probe = probe

    def err(self, msg: str, tok: Token | None = None, expected=()) -> ParseError:
        tok = tok or self.ts.peek()
        return ParseError(msg, tok.line, tok.col, tuple(expected))

    def keyword(self, *words: str) -> str:
        t = self.ts.peek()
        if t.kind == "IDENT" and t.text in words:
            self.ts.next()
            return t.text
        raise self.err(f"unexpected {describe(t)}", expected=tuple(repr(w) for w in words))

    def at_keyword(self, *words: str) -> bool:
        t = self.ts.peek()
        return t.kind == "IDENT" and t.text in words

    def new_name(self, kind: str) -> Token:
        tok = self.ts.expect_ident()
        table = self._table(kind)
        if tok.text in table:
            raise self.err(f"duplicate {kind} name {tok.text!r}", tok)
        return tok

    def _table(self, kind: str) -> dict:
        return {
            "algebra": self.ws.algebras,
            "group": self.ws.groups,
            "gaussian": self.ws.gaussians,
            "corep": self.ws.coreps,
        }[kind]

    def ref(self, kind: str) -> tuple[Token, Any]:
        tok = self.ts.expect_ident()
        table = self._table(kind)
        if tok.text not in table:
            raise self.err(f"unknown reference to {kind} {tok.text!r}", tok)
        return tok, table[tok.text]

    # items ------------------------------------------------------------------
    def file(self) -> Workspace:
        while self.ts.peek().kind != "EOF":
            kw = self.keyword(*ITEM_KEYWORDS)
            getattr(self, "item_" + kw)()
        return self.ws

    def _end_block(self):
        self.ts.expect("}")
        self.ts.accept(";")

    def item_config(self):
        tok = self.ts.expect_ident()
        if tok.text not in CONFIG_DEFAULTS:
            raise self.err(f"unknown config key {tok.text!r}", tok, tuple(CONFIG_DEFAULTS))
        self.ts.expect("=")
        vtok = self.ts.peek()
        v = self.scalar()
        if v.im or v.re <= 0:
            raise self.err(f"config {tok.text} must be a positive real number", vtok)
        val = v.re
        if tok.text != "tol":
            if val.denominator != 1:
                raise self.err(f"config {tok.text} must be an integer", vtok)
            val = int(val)
        self.ws.config[tok.text] = val
        self.ts.expect(";")
        self.ws.order.append(("config", tok.text))

    def item_algebra(self):
        name = self.new_name("algebra")
        self.ts.expect("=")
        if self.ts.accept("{"):
            p = self.algebra_body(name.text)
            self._end_block()
        else:
            call_tok = self.ts.peek()
            call = self.call()
            p = self.instantiate(call, call_tok, name.text)
            self.ws.sources[("algebra", name.text)] = call
            self.ts.expect(";")
        self.ws.algebras[name.text] = p
        self.ws.order.append(("algebra", name.text))
        if self.probe:
            rep = hopf_axiom_probe(p, None, 2)
            for f in rep.failures:
                self.ws.warnings.append(f"algebra {name.text}: axiom probe: {f}")

    def call(self) -> CatalogueCall:
        fn = self.ts.expect_ident()
        self.ts.expect("(")
        args = []
        if not self.ts.at(")"):
            while True:
                key = None
                if self.ts.peek().kind == "IDENT" and self.ts.peek(1).kind == "OP" and self.ts.peek(1).text == "=":
                    key = self.ts.next().text
                    self.ts.next()
                args.append((key, self.arg_text()))
                if not self.ts.accept(","):
                    break
        self.ts.expect(")")
        return CatalogueCall(fn.text, tuple(args))

    def arg_text(self) -> str:
        """A scalar (possibly signed or parenthesized) or a name, returned as canonical text."""
        t = self.ts.peek()
        if t.kind == "IDENT":
            self.ts.next()
            return t.text
        return format_scalar(self.scalar())

    def scalar(self) -> Scalar:
        tok = self.ts.peek()
        p = ExprParser(self.ts, generators=())
        try:
            x = p.poly()
        except ParseError as e:
            raise ParseError(e.message, e.line, e.col, e.expected or ("scalar",)) from None
        if any(w for w in x.terms):
            raise self.err("expected a scalar", tok, ("scalar",))
        return x.constant_term()

    def instantiate(self, call: CatalogueCall, tok: Token, name: str) -> HopfPresentation:
        if call.name not in CATALOGUE_NAMES:
            raise self.err(f"unknown catalogue entry {call.name!r}", tok, CATALOGUE_NAMES)
        try:
            if call.name == "group_algebra":
                if len(call.args) != 1:
                    raise ValueError("group_algebra takes one group")
                return group_algebra(self._group_arg(call.args[0][1], tok))
            if call.name == "free_product":
                if len(call.args) != 2:
                    raise ValueError("free_product takes two algebras")
                parts = []
                for _, v in call.args:
                    if v not in self.ws.algebras:
                        raise self.err(f"unknown reference to algebra {v!r}", tok)
                    parts.append(self.ws.algebras[v])
                return free_product(*parts)
            args, kwargs = [], {}
            for k, v in call.args:
                val = _value(v)
                if k is None:
                    args.append(val)
                else:
                    kwargs["q" if k == "q" else k] = val
            if call.name in ("o_n_plus", "o_n_star", "o_n_twisted", "u_n_plus"):
                kwargs = {("N" if k in ("n", "N") else k): v for k, v in kwargs.items()}
            return catalogue(call.name, *args, **kwargs)
        except ParseError:
            raise
        except (ValueError, TypeError) as e:
            raise self.err(f"parameter out of range: {e}", tok) from None

    def _group_arg(self, text: str, tok: Token) -> GroupWords:
        g = self.ws.groups.get(text)
        if isinstance(g, GroupWords):
            return g
        if isinstance(g, Class2Quotient):
            from .groups import export_group

            if g.top_rank is None:
                raise ValueError(f"group {text!r} is a layered quotient; reduce it first")
            return export_group(g)
        try:
            return parse_group(text)
        except ValueError:
            raise self.err(f"unknown reference to group {text!r}", tok) from None

    def algebra_body(self, name: str) -> HopfPresentation:
        self.keyword("gens")
        gens = self.names()
        self.ts.expect(";")
        gset = set(gens)
        star, counit, cop, anti, rels = {}, {}, {}, {}, []
        order = ("star", "counit", "coproduct", "antipode", "rel")
        stage = 0
        while not self.ts.at("}"):
            kw_tok = self.ts.peek()
            kw = self.keyword(*order)
            k = order.index(kw)
            if k < stage:
                raise self.err(f"{kw!r} statements must come before {order[stage]!r}", kw_tok)
            stage = k
            if kw == "rel":
                rels.append(ExprParser(self.ts, generators=gset).poly())
            else:
                g = self.ts.expect_ident()
                if g.text not in gset:
                    raise self.err(f"unknown generator {g.text!r}", g)
                self.ts.expect("=")
                if kw == "counit":
                    counit[g.text] = self.scalar()
                elif kw == "coproduct":
                    t = ExprParser(self.ts, generators=gset).expr()
                    if t.legs != 2:
                        raise self.err("coproduct must have two legs", g)
                    cop[g.text] = t
                else:
                    (star if kw == "star" else anti)[g.text] = ExprParser(self.ts, generators=gset).poly()
            self.ts.expect(";")
        missing = [(kw, g) for kw, tab in (("star", star), ("counit", counit), ("coproduct", cop), ("antipode", anti))
                   for g in gens if g not in tab]
        if missing:
            kw, g = missing[0]
            raise self.err(f"missing {kw} for generator {g!r}")
        inverses = {}
        for g in gens:
            a = anti[g]
            if len(a.terms) == 1:
                ((w, c),) = a.terms.items()
                if len(w) == 1 and c == ONE and cop[g] == TensorPoly.elementary(NCPoly.gen(g), NCPoly.gen(g)):
                    inverses[g] = w[0]
        return HopfPresentation(
            name=name,
            generators=tuple(gens),
            star_table=star,
            counit_table=counit,
            coproduct_table=cop,
            antipode_table=anti,
            relations=tuple(rels),
            inverses=inverses,
        )

    def names(self) -> list[str]:
        out = [self.ts.expect_ident()]
        while self.ts.accept(","):
            out.append(self.ts.expect_ident())
        seen = set()
        for t in out:
            if t.text in seen:
                raise self.err(f"duplicate generator {t.text!r}", t)
            seen.add(t.text)
        return [t.text for t in out]

    def item_group(self):
        name = self.new_name("group")
        if self.ts.accept("{"):
            self.keyword("gens")
            gens = self.names()
            self.ts.expect(";")
            self.keyword("rels")
            rels = []
            if not self.ts.at(";"):
                rels.append(self.word(set(gens)))
                while self.ts.accept(","):
                    rels.append(self.word(set(gens)))
            self.ts.expect(";")
            self._end_block()
            g: Any = make_group(gens, rels, name.text)
        else:
            self.ts.expect("=")
            tok = self.ts.peek()
            if self.ts.peek(1).kind == "OP" and self.ts.peek(1).text == "(":
                call = self.call()
                if call.name not in GROUP_PIPELINES:
                    raise self.err(f"unknown group operation {call.name!r}", tok, GROUP_PIPELINES)
                if len(call.args) != 1:
                    raise self.err(f"{call.name} takes one argument", tok)
                arg = call.args[0][1]
                src = self.ws.groups.get(arg)
                if src is None:
                    try:
                        src = parse_group(arg)
                    except ValueError:
                        raise self.err(f"unknown reference to group {arg!r}", tok) from None
                if call.name == "torsion_free_reduce":
                    c = src if isinstance(src, Class2Quotient) else class2_quotient(src)
                    g = torsion_free_reduce(c)
                elif isinstance(src, Class2Quotient):
                    if call.name == "gaussian_part_dual":
                        g = torsion_free_reduce(src)
                    else:
                        g = src
                elif call.name == "class2_quotient":
                    g = class2_quotient(src)
                else:
                    g = gaussian_part_dual(src).quotient
                self.ws.sources[("group", name.text)] = call
            else:
                ident = self.ts.expect_ident()
                try:
                    g = parse_group(ident.text)
                except ValueError:
                    raise self.err(f"unknown catalogue group {ident.text!r}", ident) from None
                self.ws.sources[("group", name.text)] = CatalogueCall(ident.text, ())
            self.ts.expect(";")
        self.ws.groups[name.text] = g
        self.ws.order.append(("group", name.text))

    def word(self, gens: set) -> tuple:
        letters = []
        if self.ts.peek().kind == "NUM" and self.ts.peek().text == "1":
            self.ts.next()
            return ()
        while True:
            g = self.ts.expect_ident()
            if g.text not in gens:
                raise self.err(f"unknown generator {g.text!r}", g)
            k = 1
            if self.ts.accept("^"):
                neg = self.ts.accept("-")
                k = self.ts.expect_int()
                k = -k if neg else k
            letters += [(g.text, 1 if k > 0 else -1)] * abs(k)
            if not self.ts.at("*", "."):
                break
            self.ts.next()
        return tuple(letters)

    def item_gaussian(self):
        name = self.new_name("gaussian")
        self.keyword("on")
        atok, p = self.ref("algebra")
        self.ts.expect("{")
        drift, gram, pair = {}, {}, {}
        gset = set(p.generators)

        def gen():
            t = self.ts.expect_ident()
            if t.text not in gset:
                raise self.err(f"unknown generator {t.text!r} of algebra {atok.text}", t)
            return t.text

        while not self.ts.at("}"):
            kw = self.keyword("drift", "gram", "pair")
            if kw == "drift":
                g = gen()
                self.ts.expect("=")
                drift[g] = self.scalar()
            else:
                self.ts.expect("(")
                a = gen()
                self.ts.expect(",")
                b = gen()
                self.ts.expect(")")
                self.ts.expect("=")
                (gram if kw == "gram" else pair)[(a, b)] = self.scalar()
            self.ts.expect(";")
        end = self.ts.peek()
        self._end_block()
        try:
            d = GaussianDatum.build(p, drift=drift, gram=gram, pair=pair, name=name.text)
        except (ValueError, KeyError) as e:
            raise self.err(str(e), end) from None
        self.ws.gaussians[name.text] = d
        self.ws.gaussian_algebra[name.text] = atok.text
        self.ws.order.append(("gaussian", name.text))

    def item_corep(self):
        name = self.new_name("corep")
        self.keyword("on")
        atok, p = self.ref("algebra")
        self.ts.expect("{")
        rows = []
        q = None
        gset = set(p.generators)
        while self.at_keyword("row"):
            self.ts.next()
            row = [ExprParser(self.ts, generators=gset).poly()]
            while self.ts.accept(","):
                row.append(ExprParser(self.ts, generators=gset).poly())
            self.ts.expect(";")
            rows.append(tuple(row))
        if not rows:
            raise self.err("corep needs at least one row", expected=("'row'",))
        if self.at_keyword("q"):
            self.ts.next()
            q = [self.scalar()]
            while self.ts.accept(","):
                q.append(self.scalar())
            self.ts.expect(";")
        end = self.ts.peek()
        self._end_block()
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise self.err("corep rows must form a square matrix", end)
        if q is not None and len(q) != n:
            raise self.err("q needs one eigenvalue per row", end)
        qvals = tuple(x.re for x in q) if q is not None else tuple([Fraction(1)] * n)
        self.ws.coreps[name.text] = (atok.text, Corepresentation(tuple(rows), qvals))
        self.ws.order.append(("corep", name.text))


def _value(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return text


def parse(text: str, probe: bool = True) -> Workspace:
    """Parse a workspace; raises :class:`ParseError` with line, column and expected tokens."""
    return _Reader(text, probe).file()


def parse_file(path: str, probe: bool = True) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), probe)


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------


def print_algebra(name: str, p: HopfPresentation, call: CatalogueCall | None = None) -> str:
    if call is not None:
        return f"algebra {name} = {call.text()};"
    lines = [f"algebra {name} = {{", f"  gens {', '.join(p.generators)};"]
    for g in p.generators:
        lines.append(f"  star {g} = {p.star_table[g]};")
    for g in p.generators:
        lines.append(f"  counit {g} = {format_scalar(p.counit_table[g])};")
    for g in p.generators:
        lines.append(f"  coproduct {g} = {p.coproduct_table[g]};")
    for g in p.generators:
        lines.append(f"  antipode {g} = {p.antipode_table[g]};")
    for r in p.relations:
        lines.append(f"  rel {r};")
    lines.append("};")
    return "\n".join(lines)


def _word_text(w) -> str:
    if not w:
        return "1"
    return "*".join(g if e > 0 else f"{g}^-1" for g, e in w)


def print_group(name: str, g: Any, call: CatalogueCall | None = None) -> str:
    if call is not None:
        if call.args:
            return f"group {name} = {call.text()};"
        return f"group {name} = {call.name};"
    rels = ", ".join(_word_text(r) for r in g.relators)
    return f"group {name} {{ gens {', '.join(g.generators)}; rels {rels}; }}"


def print_workspace(ws: Workspace) -> str:
    out = []
    for kind, name in ws.order:
        if kind == "config":
            v = ws.config[name]
            out.append(f"config {name} = {format_scalar(Scalar(v))};")
        elif kind == "algebra":
            out.append(print_algebra(name, ws.algebras[name], ws.sources.get(("algebra", name))))
        elif kind == "group":
            out.append(print_group(name, ws.groups[name], ws.sources.get(("group", name))))
        elif kind == "gaussian":
            out.append(ws.gaussians[name].as_text(ws.gaussian_algebra[name]))
        elif kind == "corep":
            alg, c = ws.coreps[name]
            lines = [f"corep {name} on {alg} {{"]
            for row in c.coeffs:
                lines.append("  row " + ", ".join(str(x) for x in row) + ";")
            lines.append("  q " + ", ".join(format_scalar(Scalar(x)) for x in c.q_eigenvalues) + ";")
            lines.append("}")
            out.append("\n".join(lines))
    return "\n".join(out) + ("\n" if out else "")
