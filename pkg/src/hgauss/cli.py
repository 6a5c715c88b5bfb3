"""Command-line interface: ``hgauss <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction
from typing import Any

from . import gaussian as gs
from . import groups as gr
from . import ideals as idl
from . import semigroup as sg
from .dsl import CONFIG_DEFAULTS, Workspace, parse_file
from .exact import ResourceLimitError, Scalar, format_scalar
from .freestar import NCPoly, parse_poly
from .hopf import (
    GroupWords,
    HopfPresentation,
    Corepresentation,
    catalogue,
    free_star_algebra,
    group_algebra,
    hopf_axiom_probe,
    parse_group,
)
from .syntax import ParseError

EXIT_OK, EXIT_USAGE, EXIT_CAP = 0, 1, 2
NAMED_FUNCTIONALS = ("heat", "rotation", "negheat", "zero", "random")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# resolution of inputs
# ---------------------------------------------------------------------------


def resolve_algebra(spec: str, ws: Workspace | None) -> HopfPresentation:
    """NAME from --file, or catalogue specs like su_q2:1/2, group:Z2, o_n_star:3, free:x,y."""
    if ws is not None and spec in ws.algebras:
        return ws.algebras[spec]
    name, _, arg = spec.partition(":")
    try:
        if name == "group":
            if ws is not None and arg in ws.groups:
                g = ws.groups[arg]
                if isinstance(g, gr.Class2Quotient):
                    g = gr.export_group(gr.torsion_free_reduce(g))
                return group_algebra(g)
            return group_algebra(arg)
        if name == "free":
            return free_star_algebra([x.strip() for x in arg.split(",") if x.strip()])
        if name in ("su_q2",):
            return catalogue(name, Fraction(arg))
        if name in ("o_n_plus", "o_n_star", "o_n_twisted", "u_n_plus"):
            return catalogue(name, int(arg))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad algebra spec {spec!r}: {e}") from None
    raise UsageError(
        f"unknown algebra {spec!r}; use a name from --file or one of su_q2:Q, group:G, o_n_plus:N, "
        "o_n_star:N, o_n_twisted:N, u_n_plus:N, free:x,y"
    )


def resolve_group(spec: str, ws: Workspace | None) -> Any:
    if ws is not None and spec in ws.groups:
        return ws.groups[spec]
    try:
        g = parse_group(spec)
    except ValueError as e:
        raise UsageError(str(e)) from None
    # involutions are implicit in the group algebra; the group needs them as relators
    rels = tuple(g.relators) + tuple(((x, 1), (x, 1)) for x in sorted(g.involutions))
    return GroupWords(g.generators, rels, frozenset(), g.name)


def _default_generator(p: HopfPresentation) -> str:
    if "u" in p.generators:
        return "u"
    for g in p.generators:
        if p.inverses.get(g) not in (None, g):
            return g
    for g in p.generators:
        if g in p.inverses:
            return g
    raise UsageError(f"{p.name} has no group-like generator for a named functional")


def resolve_functional(spec: str, p: HopfPresentation, ws: Workspace | None, generator: str | None):
    if ws is not None and spec in ws.gaussians:
        d = ws.gaussians[spec]
        if d.presentation.generators != p.generators:
            raise UsageError(f"functional {spec!r} is defined on another algebra")
        return d
    name, _, arg = spec.partition(":")
    if name == "zero":
        return gs.GaussianDatum.zero(p)
    if name == "random":
        seed = int(arg) if arg else 0
        return gs.random_datum(p, random.Random(seed))
    g = generator or _default_generator(p)
    if g not in p.generators:
        raise UsageError(f"unknown generator {g!r}")
    if name == "heat":
        return gs.heat_datum(p, g)
    if name == "negheat":
        d = gs.heat_datum(p, g).scaled(-1)
        return gs.GaussianDatum(d.presentation, d.drift, d.gram, "negheat")
    if name == "rotation":
        return gs.rotation_datum(p, g)
    raise UsageError(f"unknown functional {spec!r}; use a gaussian from --file or one of {', '.join(NAMED_FUNCTIONALS)}")


def _poly(text: str, p: HopfPresentation) -> NCPoly:
    x = parse_poly(text, p.inverses)
    unknown = x.letters() - set(p.generators)
    if unknown:
        raise UsageError(f"unknown generator(s) {sorted(unknown)} in {text!r}")
    return x


def _corep(args, p: HopfPresentation, ws: Workspace | None) -> Corepresentation:
    if args.corep:
        if ws is None or args.corep not in ws.coreps:
            raise UsageError(f"unknown corep {args.corep!r}")
        return ws.coreps[args.corep][1]
    if not p.coreps:
        raise UsageError(f"{p.name} has no recorded corepresentation; pass --corep")
    return p.coreps[0]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _num(x: float) -> float:
    if math.isnan(x) or math.isinf(x):
        return x
    return float(f"{x:.12g}")


def to_jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return _num(x)
    if isinstance(x, complex):
        return [_num(x.real), _num(x.imag)]
    if isinstance(x, Scalar):
        return format_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, NCPoly):
        return str(x)
    if isinstance(x, dict):
        return {_key(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=str) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    if hasattr(x, "as_dict"):
        return to_jsonable(x.as_dict())
    return str(x)


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return "(" + ", ".join(str(to_jsonable(v)) for v in k) + ")"
    return str(to_jsonable(k))


def _has_dict(v: Any) -> bool:
    if isinstance(v, dict):
        return True
    return isinstance(v, list) and any(_has_dict(e) for e in v)


def _inline(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(e) for e in v) + "]"
    return _scalar_text(v)


def render_text(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if v == {}:
                lines.append(f"{pad}{k}: {{}}")
            elif isinstance(v, dict) and not any(_has_dict(e) or isinstance(e, list) for e in v.values()):
                lines.append(f"{pad}{k}: " + ", ".join(f"{a}={_scalar_text(b)}" for a, b in sorted(v.items())))
            elif _has_dict(v):
                lines.append(f"{pad}{k}:")
                lines += render_text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(value, list):
        for e in value:
            if _has_dict(e):
                lines.append(f"{pad}-")
                lines += render_text(e, indent + 1)
            else:
                lines.append(f"{pad}- {_inline(e)}")
    else:
        lines.append(f"{pad}{_scalar_text(value)}")
    return lines


def _scalar_text(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_eval(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    x = _poly(a.word, p)
    if a.power is not None:
        v = sg.convolution_power(d, a.power, x)
        return {"value": v, "power": a.power}, []
    return {"value": gs.wick_eval(d, x)}, []


def cmd_wick(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    x = _poly(a.word, p)
    closed = gs.wick_eval(d, x)
    rec = gs.wick_eval_recursive(d, x)
    return {"closed_form": closed, "recursive": rec, "agree": closed == rec}, []


def cmd_check_gaussian(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    return gs.check_consistency(d).as_dict(), []


def cmd_check_drift(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    return {"is_drift": gs.check_drift(d), "consistent": gs.check_consistency(d).passed}, []


def cmd_check_classical(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    return {"classical": gs.check_classical(d)}, []


def cmd_solve(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    return gs.solve_gaussian_space(p).as_dict(), []


def cmd_exp_state(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    x = _poly(a.word, p)
    r = sg.exp_state(d, float(a.t), x, order=cfg["order"], tol=float(cfg["tol"]))
    warnings = [] if r.converged else [f"not converged: doubling the order changed the value by {r.difference:.3g}"]
    return r.as_dict(), warnings


def cmd_positivity(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    d = resolve_functional(a.functional, p, ws, a.generator)
    fam = [_poly(t, p) for t in a.family.split(";")] if a.family else sg.degree_two_family(p)
    r = sg.state_positivity_probe(d, float(a.t), fam, order=cfg["order"], tol=float(cfg["tol"]))
    out = r.as_dict()
    out["family"] = [str(b) for b in fam]
    return out, []


def _quotient(a, ws, cfg, lazy=False):
    p = resolve_algebra(a.algebra, ws)
    return idl.build_bounded_quotient(p, cfg["degree"], lazy=lazy)


def cmd_kn(a, ws, cfg):
    q = _quotient(a, ws, cfg)
    h = q.kn_span(a.n)
    out = {"n": a.n, "degree": q.degree, "quotient_dimension": q.dimension, "kn_dimension": h.dimension}
    if a.basis:
        out["basis"] = [str(b) for b in h.basis()]
    return out, list(h.warnings)


def cmd_kinfty(a, ws, cfg):
    q = _quotient(a, ws, cfg)
    r = idl.kinfty_probe(q, cfg["nmax"])
    return r.as_dict(), list(r.warnings)


def cmd_membership(a, ws, cfg):
    q = _quotient(a, ws, cfg, lazy=True)
    h = q.kn_span(a.n)
    x = _poly(a.word, q.p)
    return h.membership(x).as_dict(), list(h.warnings)


def cmd_kac_gens(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    c = _corep(a, p, ws)
    gens = idl.kac_generators(c)
    return {
        "generators": [{"i": i, "j": j, "coefficient": str(x)} for i, j, x in gens],
        "s_squared": {f"({i}, {j})": str(v) for (i, j), v in idl.s_squared(c).items()},
    }, []


def cmd_scaling(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    c = _corep(a, p, ws)
    act = idl.scaling_action(c, float(a.t))
    return {"t": float(a.t), "factors": {f"({i}, {j})": v for (i, j), v in act.items()}}, []


def cmd_filtration(a, ws, cfg):
    q = _quotient(a, ws, cfg)
    return idl.filtration_probe(q, a.n, a.mode).as_dict(), []


def cmd_o2plus_descent(a, ws, cfg):
    q = _quotient(a, ws, cfg)
    try:
        r = idl.o2plus_descent_check(q, cfg["nmax"])
    except idl.WrongPresentation as e:
        raise UsageError(str(e)) from None
    return r.as_dict(), []


def _group_input(a, ws):
    g = resolve_group(a.group, ws)
    return g


def cmd_class2(a, ws, cfg):
    g = _group_input(a, ws)
    c = g if isinstance(g, gr.Class2Quotient) else gr.class2_quotient(g)
    return c.as_dict(), []


def cmd_torsion_free(a, ws, cfg):
    g = _group_input(a, ws)
    c = g if isinstance(g, gr.Class2Quotient) else gr.class2_quotient(g)
    return gr.torsion_free_reduce(c).as_dict(), []


def cmd_gaussian_part_dual(a, ws, cfg):
    g = _group_input(a, ws)
    if isinstance(g, gr.Class2Quotient):
        g = g.source
    dual = gr.gaussian_part_dual(g)
    out = dual.as_dict()
    warnings = []
    if a.central:
        red = dual.quotient
        if red.top_rank + red.bottom_rank == 0:
            warnings.append("trivial group: the only Gaussian functional is zero")
        else:
            cg = gr.central_gaussian(red)
            res, n = cg.conditional_positivity(a.length)
            out["central_gaussian"] = {
                "center_values": cg.center_values(),
                "conditionally_positive": res.is_psd,
                "elements_checked": n,
                "word_length": a.length,
                "consistency": gs.check_consistency(cg.datum()).passed,
            }
    return out, warnings


def cmd_axioms(a, ws, cfg):
    p = resolve_algebra(a.algebra, ws)
    r = hopf_axiom_probe(p, None, a.probe_degree)
    return {
        "algebra": p.name,
        "passed": r.passed,
        "checked": r.checked,
        "failures": [list(f) for f in r.failures],
        "degree": r.degree,
    }, []


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

_D = CONFIG_DEFAULTS

COMMANDS = {
    "eval": (cmd_eval, "Evaluate a Gaussian functional (or its convolution power) on a polynomial; exact.", "af"),
    "wick": (cmd_wick, "Closed-form Wick evaluation checked against the recursive three-point oracle; exact.", "af"),
    "check-gaussian": (cmd_check_gaussian, "Check a Gaussian datum against the relations (hermitian drift, PSD Gram, eta and phi on relations).", "af"),
    "check-drift": (cmd_check_drift, "Is the datum a drift (eta = 0)?", "af"),
    "check-classical": (cmd_check_classical, "Is the pairing <eta(a*), eta(b)> symmetric (classical Gaussian)?", "af"),
    "solve": (cmd_solve, "Solve for the real vector space of Gaussian data on the algebra; exact.", "a"),
    "exp-state": (cmd_exp_state, "phi_t = exp_*(t phi)(x) by Taylor series plus scaling and squaring; flags non-convergence.", "aft"),
    "positivity": (cmd_positivity, "PSD probe of [phi_t(b_i* b_j)] up to the tolerance.", "aft"),
    "kn": (cmd_kn, "Dimension of K_n inside the degree-bounded quotient.", "aq"),
    "kinfty": (cmd_kinfty, "K_n chain up to nmax with a connectedness verdict.", "aq"),
    "membership": (cmd_membership, "One-sided certificate: certified_in or not_in_span_at_bound.", "aq"),
    "kac-gens": (cmd_kac_gens, "Coefficients u_ij with q_i != q_j generating the Kac ideal; S^2 ratios.", "a"),
    "scaling": (cmd_scaling, "Scaling group factors exp(-i t ln(q_i/q_j)) on corepresentation coefficients.", "a"),
    "filtration": (cmd_filtration, "Check Delta(K_n) against the filtered target at bounded degree.", "aq"),
    "o2plus-descent": (cmd_o2plus_descent, "Certify gamma in K_n for su_q2(-1) through the descent identity.", "aq"),
    "class2": (cmd_class2, "Class-2 nilpotent quotient Gamma/gamma_3 as layered Z-modules.", "g"),
    "torsion-free": (cmd_torsion_free, "Largest torsion-free class-2 quotient with a Mal'cev basis.", "g"),
    "gaussian-part-dual": (cmd_gaussian_part_dual, "Torsion-free class-2 quotient exported as a group algebra; optional central Gaussian.", "g"),
    "axioms": (cmd_axioms, "Probe the Hopf *-algebra axioms modulo the bounded relation span.", "a"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgauss", description="Gaussian functionals on algebraic quantum groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, doc, kinds) in COMMANDS.items():
        sp = sub.add_parser(name, help=doc, description=doc, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sp.add_argument("--file", help="workspace file (.hga) with named algebras, groups and functionals")
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.add_argument("--cap", type=int, default=None, help="basis cap (overrides HGAUSS_MAX_BASIS)")
        if "a" in kinds:
            default = "su_q2:-1" if name == "o2plus-descent" else ("group:Z" if "f" in kinds else None)
            sp.add_argument("--algebra", required=default is None, default=default,
                            help="algebra name from --file or a catalogue spec (su_q2:1/2, group:Z2, o_n_star:3)")
        if "f" in kinds:
            sp.add_argument("--functional", default="heat", help="gaussian name from --file or heat|rotation|negheat|zero|random:SEED")
            sp.add_argument("--generator", default=None, help="generator used by the named functionals")
        if name in ("eval", "wick", "exp-state", "membership"):
            sp.add_argument("--word", required=True, help="polynomial, e.g. 'u^3' or '2*a.c - 1'")
        if name == "eval":
            sp.add_argument("--power", type=int, default=None, help="evaluate the n-th convolution power instead")
        if "t" in kinds or name == "scaling":
            sp.add_argument("--t", type=Fraction, default=Fraction(1), help="time parameter")
        if name in ("exp-state", "positivity"):
            sp.add_argument("--order", type=int, default=None, help=f"Taylor order (default {_D['order']})")
            sp.add_argument("--tol", type=Fraction, default=None, help=f"tolerance (default {float(_D['tol'])})")
        if name == "positivity":
            sp.add_argument("--family", default=None, help="';'-separated polynomials (default: degree-two family)")
        if "q" in kinds:
            sp.add_argument("--degree", type=int, default=None, help=f"degree bound d (default {_D['degree']})")
        if name in ("kinfty", "o2plus-descent"):
            sp.add_argument("--nmax", type=int, default=None, help=f"largest n (default {_D['nmax']})")
        if name in ("kn", "membership", "filtration"):
            sp.add_argument("--n", type=int, required=True, help="filtration level")
        if name == "kn":
            sp.add_argument("--basis", action="store_true", help="list a basis of the span")
        if name == "filtration":
            sp.add_argument("--mode", choices=("sum", "hopf"), default="sum")
        if name in ("kac-gens", "scaling"):
            sp.add_argument("--corep", default=None, help="corep name from --file (default: the algebra's fundamental)")
        if "g" in kinds:
            sp.add_argument("--group", required=True, help="group name from --file or a catalogue group (F2, Z2*Z2, Z x Z3)")
        if name == "gaussian-part-dual":
            sp.add_argument("--central", action="store_true", help="also build and check the central Gaussian")
            sp.add_argument("--length", type=int, default=3, help="word length for the conditional positivity check")
        if name == "axioms":
            sp.add_argument("--probe-degree", type=int, default=None, help="degree of the relation span")
    return parser


def _config(args, ws: Workspace | None) -> dict:
    cfg = {k: (ws.setting(k) if ws is not None else v) for k, v in CONFIG_DEFAULTS.items()}
    for key in ("degree", "nmax", "order", "tol", "cap"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    for key in ("degree", "nmax", "order"):
        if cfg[key] < 1:
            raise UsageError(f"--{key} must be at least 1")
    if cfg["tol"] <= 0:
        raise UsageError("--tol must be positive")
    return cfg


def _inputs(args) -> dict:
    skip = {"json", "command", "cap", "degree", "nmax", "order", "tol"}
    return {k: to_jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        ws = parse_file(args.file) if args.file else None
        cfg = _config(args, ws)
        saved = os.environ.get("HGAUSS_MAX_BASIS")
        if args.cap is not None or (ws is not None and "cap" in ws.config):
            os.environ["HGAUSS_MAX_BASIS"] = str(cfg["cap"])
        try:
            result, warnings = fn(args, ws, cfg)
        finally:
            if saved is None:
                os.environ.pop("HGAUSS_MAX_BASIS", None)
            else:
                os.environ["HGAUSS_MAX_BASIS"] = saved
        if ws is not None:
            warnings = list(ws.warnings) + list(warnings)
    except ParseError as e:
        print(f"hgauss: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, KeyError, OSError) as e:
        print(f"hgauss: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as e:
        print(f"hgauss: resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    payload = {
        "command": args.command,
        "inputs": _inputs(args),
        "config": to_jsonable(cfg),
        "result": to_jsonable(result),
        "warnings": [str(w) for w in warnings],
    }
    if args.json:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        lines = [f"{args.command}:"] + render_text(payload["result"], 1)
        lines += [f"warning: {w}" for w in payload["warnings"]]
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
