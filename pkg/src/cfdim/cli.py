"""Command-line front end.

Every subcommand writes one JSON document (sorted keys, all numbers as strings)
or CSV rows to stdout. Diagnostics go to stderr. Exit status: 0 success,
1 bad input, 2 budget exhausted.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from mpmath import mpf

from . import __version__
from ._num import MIN_PRECISION, get_precision, mp_str, set_precision
from .cfcore import as_word, convergents, cylinder, cylinder_denominator, determinant, expand, verify_bounds
from .construct import (
    DEFAULT_BIT_BUDGET,
    RULES,
    TSequence,
    build_F_point,
    build_point,
    build_xtilde,
    check_F_point,
    check_point,
    d_sequence,
    membership_stats,
    word_to_json,
)
from .enumeration import FamilySpec, count, enumerate_family
from .errors import BracketFailure, BudgetExceeded, CFDimError
from .estimator import DEFAULT_WORD_BUDGET, MODES, cover_sum, critical_exponent
from .montecarlo import mc_growth_law
from .psi import equivalence_diagnostic, growth_constants, parse_psi, predict_dimensions, xi

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2
FORMATS = ("json", "csv", "pretty")


class InputError(Exception):
    pass


@dataclass
class Config:
    precision: int = 128
    budget_words: int = DEFAULT_WORD_BUDGET
    budget_bits: int = DEFAULT_BIT_BUDGET
    tol: float = 1e-3
    seed: int = 0
    format: str = "json"
    workers: int = 1

    def validate(self) -> None:
        if self.precision < MIN_PRECISION:
            raise InputError(f"precision must be >= {MIN_PRECISION} bits")
        if self.budget_words < 1 or self.budget_bits < 1:
            raise InputError("budgets must be positive")
        if self.tol <= 0:
            raise InputError("tol must be positive")
        if self.format not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


_CONFIG_TYPES = {
    "precision": int,
    "budget_words": int,
    "budget_bits": int,
    "tol": float,
    "seed": int,
    "format": str,
    "workers": int,
}


def read_config_file(path: str) -> dict[str, Any]:
    """key = value lines; '#' starts a comment; dashes in keys read as underscores."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONFIG_TYPES:
            raise InputError(f"{path}:{lineno}: expected one of {sorted(_CONFIG_TYPES)} = value")
        try:
            out[key] = _CONFIG_TYPES[key](value.strip())
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def resolve_config(args: argparse.Namespace, environ=os.environ) -> Config:
    """Defaults, then --config file, then environment, then explicit flags."""
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for key, env in (("precision", "CFDIM_PRECISION"), ("seed", "CFDIM_SEED")):
        if env in environ:
            try:
                values[key] = int(environ[env])
            except ValueError:
                raise InputError(f"{env} must be an integer") from None
    for key in _CONFIG_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = Config(**values)
    cfg.validate()
    return cfg


# -- serialisation -----------------------------------------------------------------------


def jsonable(x: Any) -> Any:
    """Recursively turn numbers into strings; keep bools, None, lists and dicts."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, float, Fraction, mpf)):
        return mp_str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return mp_str(x.item())
    raise TypeError(f"cannot serialise {type(x).__name__}")


def render(payload: dict, fmt: str, rows: list[dict] | None = None) -> str:
    doc = jsonable(payload)
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is not None:
            rows = jsonable(rows)
            header = list(rows[0]) if rows else []
            writer.writerow(header)
            for r in rows:
                writer.writerow([_cell(r.get(h)) for h in header])
        else:
            writer.writerow(["key", "value"])
            for key, value in _flatten(doc):
                writer.writerow([key, value])
        return buf.getvalue()
    lines = [f"{key}: {value}" for key, value in _flatten(doc)]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    return "" if v is None else (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else str(v))


def _flatten(doc, prefix: str = ""):
    if isinstance(doc, dict):
        for k in sorted(doc):
            yield from _flatten(doc[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(doc, list) and doc and all(isinstance(v, (dict, list)) for v in doc):
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}[{i}]")
    elif isinstance(doc, list):
        yield prefix, " ".join("null" if v is None else str(v) for v in doc)
    else:
        yield prefix, "null" if doc is None else str(doc).lower() if isinstance(doc, bool) else doc


# -- argument helpers --------------------------------------------------------------------


def parse_word(text: str) -> tuple[int, ...]:
    body = text.strip().strip("[]")
    try:
        return as_word(int(t) for t in body.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"bad word {text!r}: {exc}") from None


def parse_int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise InputError(f"empty list {text!r}")
    return out


def parse_family(text: str) -> FamilySpec:
    try:
        return FamilySpec.parse(text)
    except ValueError as exc:
        raise InputError(f"bad family {text!r}: {exc}") from None


def t_sequence(args, N: int, cfg: Config) -> TSequence:
    chosen = [o for o in ("t_power", "t_psi", "t_values", "t_d") if getattr(args, o, None) is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --t-power, --t-psi, --t-values, --t-d")
    if args.t_power is not None:
        return TSequence.power(args.t_power, N)
    if args.t_psi is not None:
        return TSequence.from_psi(parse_psi(args.t_psi), N, cfg.budget_bits)
    if args.t_values is not None:
        vals = parse_int_list(args.t_values)
        if len(vals) < N:
            raise InputError(f"--t-values has {len(vals)} terms, need {N}")
        return TSequence.explicit(vals[:N])
    if args.A is None or args.eps is None:
        raise InputError("--t-d needs --A and --eps")
    return TSequence.from_d(parse_psi(args.t_d), args.A, args.eps, N, cfg.budget_bits)


def _add_t_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("t sequence (choose one)")
    g.add_argument("--t-power", metavar="ALPHA", help="t_n = 2 floor(n^(ALPHA-1))")
    g.add_argument("--t-psi", metavar="PSI", help="t_n = floor(exp(psi(n)+1))")
    g.add_argument("--t-values", metavar="LIST", help="explicit comma-separated t_1, t_2, ...")
    g.add_argument("--t-d", metavar="PSI", help="t_n = 2 floor(d_{n+1}) (needs --A, --eps)")
    g.add_argument("--A", help="growth constant A for --t-d")
    g.add_argument("--eps", help="epsilon for --t-d")


# -- subcommands -------------------------------------------------------------------------


def cmd_expand(args, cfg):
    try:
        word = expand(args.x, max_n=args.max_n)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    return {"input": args.x, "word": list(word)}


def cmd_convergents(args, cfg):
    w = parse_word(args.word)
    conv = convergents(w)
    return {
        "word": list(w),
        "convergents": [{"n": n, "p": c.p, "q": c.q} for n, c in enumerate(conv, 1)],
        "determinant": determinant(w),
    }


def cmd_cylinder(args, cfg):
    w = parse_word(args.word)
    I = cylinder(w)
    return {
        "word": list(w),
        "lo": I.lo,
        "hi": I.hi,
        "length": I.length,
        "denominator": cylinder_denominator(w),
        "bounds": verify_bounds(w).as_dict(),
    }


def cmd_count(args, cfg):
    fam = parse_family(args.family)
    return {"family": str(fam), "count": count(fam)}


def cmd_enumerate(args, cfg):
    fam = parse_family(args.family)
    n = count(fam)
    if args.limit is None:
        words = list(enumerate_family(fam, budget=cfg.budget_words))
    else:
        if args.limit < 0:
            raise InputError("--limit must be >= 0")
        if args.limit > cfg.budget_words:
            raise BudgetExceeded("--limit", args.limit, cfg.budget_words)
        it = enumerate_family(fam)
        words = [w for _, w in zip(range(args.limit), it)]
    payload = {"family": str(fam), "count": n, "words": [list(w) for w in words], "truncated": len(words) < n}
    return payload, [{"index": i, "word": " ".join(map(str, w))} for i, w in enumerate(words)]


def _estimate(e):
    return {"value": e.value, "trend": list(e.trend), "regime": e.regime()}


def cmd_psi(args, cfg):
    spec = parse_psi(args.spec)
    if args.N < 16:
        raise InputError("--N must be >= 16")
    out: dict[str, Any] = {"psi": str(spec), "N": args.N}
    modes = [m for m in ("constants", "predict", "equivalence") if getattr(args, m)]
    if not modes:
        modes = ["predict"]
    if "constants" in modes:
        r = growth_constants(spec, args.N, args.tail)
        out["constants"] = {
            "alpha": _estimate(r.alpha),
            "psi_over_n": _estimate(r.linear),
            "A": r.A,
            "B": r.B,
            "C": r.C.value,
            "gamma": r.gamma,
            "log_A": _estimate(r.log_A),
            "log_B": _estimate(r.log_B),
            "C_estimate": _estimate(r.C),
            "diverges": r.diverges,
            "abc_chain": r.abc_chain,
        }
    if "predict" in modes:
        preds = predict_dimensions(spec, args.N, cfg.tol)
        out["dimensions"] = {p.set_id: (p.marker if p.marker is not None else p.value) for p in preds}
        out["provenance"] = {p.set_id: p.provenance for p in preds}
        out["uncertain"] = any(p.uncertain for p in preds)
    if "equivalence" in modes:
        eq = equivalence_diagnostic(spec, args.N, cfg.tol)
        out["equivalence"] = {"verdict": eq.verdict, "deviation": list(eq.deviation)}
    return out


def cmd_xi(args, cfg):
    t = t_sequence(args, args.N + 1, cfg)
    est = xi(t, args.N, cfg.tol)
    return {"N": args.N, "rule": t.rule, "xi": est.value, "trend": list(est.trend), "regime": est.regime,
            "dimension": est.dimension}


def cmd_construct(args, cfg):
    what = args.what
    if args.N < 1:
        raise InputError("--N must be >= 1")
    if what == "point":
        t = t_sequence(args, args.N, cfg)
        w = build_point(t, args.N, args.rule, cfg.budget_bits)
        chk = check_point(w, t)
        return {"kind": "point", "rule": args.rule, "t_rule": t.rule, "N": args.N, "word": word_to_json(w),
                "membership": {"ok": chk.ok, "exact": chk.exact, "first_failure": chk.first_failure}}
    if what == "xtilde":
        spec = _need_spec(args)
        x = build_xtilde(spec, args.N, cfg.budget_bits, cfg.tol)
        st = membership_stats(x.word, spec)
        return {"kind": "xtilde", "psi": str(spec), "N": args.N, "equivalence": x.equivalence,
                "word": word_to_json(x.word), "ratios": list(x.ratios), "nondecreasing": st.nondecreasing,
                "tail_min": st.tail_min, "tail_max": st.tail_max}
    if what == "fset":
        if args.a is None or args.b is None:
            raise InputError("construct fset needs --a and --b")
        w = build_F_point(args.a, args.b, args.N, cfg.budget_bits)
        return {"kind": "fset", "a": args.a, "b": args.b, "N": args.N, "word": word_to_json(w),
                "membership": check_F_point(w, args.a, args.b), "nondecreasing": w.is_nondecreasing()}
    spec = _need_spec(args)
    if args.A is None or args.eps is None:
        raise InputError("construct dseq needs --A and --eps")
    d = d_sequence(spec, args.A, args.eps, args.N, cfg.tol)
    return {"kind": "dseq", "psi": str(spec), "N": args.N, "A": d.A, "eps": d.epsilon, "log_d": list(d.log_d),
            "product_branch": list(d.product_branch), "monotone": d.monotone,
            "first_monotone_failure": d.first_monotone_failure,
            "log_d_over_log_n": list(d.log_d_over_log_n), "growth_regime": d.growth_regime,
            "prefix_ratio_max": d.prefix_ratio_max, "prefix_ratio_ok": d.prefix_ratio_ok, "log_d_over_psi": list(d.cn_trend),
            "theta_exact": d.theta_exact}


def _need_spec(args):
    if args.psi is None:
        raise InputError(f"construct {args.what} needs --psi")
    return parse_psi(args.psi)


def cmd_cover_sum(args, cfg):
    fam = parse_family(args.family)
    r = cover_sum(fam, args.k, args.s, args.mode, cfg.budget_words, cfg.workers)
    return {"family": str(r.family), "k": r.k, "s": args.s, "mode": r.mode, "log_sum": r.log_sum,
            "words": r.words, "exact_sum": r.exact_sum}


def cmd_critical(args, cfg):
    fam = parse_family(args.family)
    ks = parse_int_list(args.k) if args.k is not None else [fam._length()]
    # for this command --tol is the bisection width
    tol = getattr(args, "tol", None) or 1e-4
    rows = []
    for k in ks:
        try:
            c = critical_exponent(fam, k, tol, args.mode, cfg.budget_words, cfg.workers)
            rows.append({"k": k, "s_star": c.s_star, "s_lo": c.bracket[0], "s_hi": c.bracket[1],
                         "iterations": c.iterations, "status": "ok"})
        except BracketFailure as exc:
            print(f"k={k}: {exc}", file=sys.stderr)
            rows.append({"k": k, "s_star": None, "s_lo": None, "s_hi": None, "iterations": 0,
                         "status": "bracket-failure"})
    payload = {"family": str(fam), "mode": args.mode, "tol": tol, "results": rows}
    return payload, [{"k": r["k"], "s_star": r["s_star"], "status": r["status"]} for r in rows]


def cmd_mc_growth(args, cfg):
    seed = cfg.seed
    r = mc_growth_law(args.samples, args.N, seed, args.fixed_x, cfg.workers)
    return {"samples": r.samples, "N": r.N, "seed": r.seed, "median": r.median,
            "quantiles": {mp_str(q): v for q, v in r.quantiles.items()}, "discarded": r.discarded}


# -- parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("global options")
    g.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="working precision in bits (>= 64)")
    g.add_argument("--budget-words", type=int, default=argparse.SUPPRESS, help="maximum family size to enumerate")
    g.add_argument("--budget-bits", type=int, default=argparse.SUPPRESS, help="maximum total bits of digits")
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="regime tolerance")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    g.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker processes")
    g.add_argument("--config", default=argparse.SUPPRESS, help="key=value configuration file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="cfdim", description=__doc__.splitlines()[0], parents=[common], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"cfdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_, allow_abbrev=False)
        p.set_defaults(func=func)
        return p

    p = add("expand", cmd_expand, "partial quotients of a rational p/q in (0, 1]")
    p.add_argument("x")
    p.add_argument("--max-n", type=int)
    p = add("convergents", cmd_convergents, "convergents p_n/q_n of a word")
    p.add_argument("word", help="digits, e.g. 1,2,3")
    p = add("cylinder", cmd_cylinder, "cylinder interval of a word, with the length inequalities")
    p.add_argument("word")
    p = add("count", cmd_count, "exact size of a word family")
    p.add_argument("family", help="e.g. D:l=5,n=5 or A:k=6,alpha1=2,alpha2=2,eps=0.05")
    p = add("enumerate", cmd_enumerate, "list the words of a family in lexicographic order")
    p.add_argument("family")
    p.add_argument("--limit", type=int)
    p = add("psi", cmd_psi, "growth constants and dimension predictions for psi")
    p.add_argument("spec", help="alog:A, pow:B, exp:B, table:FILE, expr:E or a bare expression in n")
    p.add_argument("--N", type=int, default=4096, help="horizon (default 4096)")
    p.add_argument("--constants", action="store_true")
    p.add_argument("--predict", action="store_true")
    p.add_argument("--equivalence", action="store_true")
    p.add_argument("--tail", choices=("half", "sqrt"), default="half", help="tail window for --constants")
    p = add("xi", cmd_xi, "exponent xi of a t sequence and the dimension 1/(2+xi)")
    p.add_argument("--N", type=int, default=1000)
    _add_t_options(p)
    p = add("construct", cmd_construct, "explicit points of the target sets")
    p.add_argument("what", choices=("point", "xtilde", "fset", "dseq"))
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--rule", choices=RULES, default="low")
    p.add_argument("--psi")
    p.add_argument("--a")
    p.add_argument("--b")
    _add_t_options(p)
    p = add("cover-sum", cmd_cover_sum, "log of the covering sum over a family")
    p.add_argument("family")
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--mode", choices=MODES, default="exact")
    p = add("critical", cmd_critical, "critical exponent s*(k) of a family template")
    p.add_argument("family")
    p.add_argument("--k", help="depths, e.g. 6,8,10 or 6-12")
    p.add_argument("--mode", choices=MODES, default="exact")
    p = add("mc-growth", cmd_mc_growth, "Monte Carlo tail statistic of log a_n / log n")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--fixed-x", help="use this rational instead of random draws")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None, environ=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved = get_precision()
    try:
        cfg = resolve_config(args, os.environ if environ is None else environ)
        set_precision(cfg.precision)
        result = args.func(args, cfg)
        payload, rows = result if isinstance(result, tuple) else (result, None)
        payload = {"command": args.command, **payload}
        stdout.write(render(payload, cfg.format, rows))
        return EXIT_OK
    except BudgetExceeded as exc:
        print(f"cfdim: budget exhausted: {exc}", file=stderr)
        return EXIT_BUDGET
    except (InputError, CFDimError, ValueError, ArithmeticError, OSError) as exc:
        print(f"cfdim: error: {exc}", file=stderr)
        return EXIT_INPUT
    finally:
        set_precision(saved)


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))
