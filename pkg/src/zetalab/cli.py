"""Command-line entry point: ``zetalab <subcommand> ...``.

Exit codes: 0 on success, 1 when an evaluation fails (or ``verify`` reports
a failing identity), 2 on usage errors.  ``ZETALAB_PREC``, ``ZETALAB_BUDGET``
and ``ZETALAB_WORKERS`` supply defaults for the matching flags.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import apery, cmzv, legendre, suite, sums, words, xprec
from .compositions import (CompositionSyntaxError, format_composition, hoffman_dual,
                           parse)
from .xprec import XComplex, XReal, xr

__all__ = ["Config", "main", "build_parser", "format_value"]


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    digits: int = 32
    budget: int = 10 ** 6
    workers: int = 1
    output: str = "text"

    def __post_init__(self):
        if self.digits < 16:
            raise UsageError("--prec must be at least 16")
        if self.budget < 10 ** 3:
            raise UsageError("--budget must be at least 1000")
        if self.workers < 1:
            raise UsageError("--workers must be positive")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get("ZETALAB_" + name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(float(raw))
    except ValueError:
        raise UsageError(f"ZETALAB_{name} must be an integer, got {raw!r}") from None


def format_value(v, digits: int) -> str:
    """Decimal text with ``digits - 2`` significant digits."""
    sig = max(digits - 2, 1)
    if isinstance(v, XComplex):
        if float(v.im.hi) == 0.0:
            return v.re.to_decimal_string(sig)
        im = v.im.to_decimal_string(sig)
        sign = "" if im.startswith("-") else "+"
        return f"{v.re.to_decimal_string(sig)} {sign}{im}i"
    if isinstance(v, Fraction):
        return str(v) if v.denominator == 1 else f"{v}  ({XReal.from_fraction(v).to_decimal_string(sig)})"
    return xr(v).to_decimal_string(sig)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zetalab", description="Apery-type series, harmonic sums and level-4 CMZVs.")
    p.add_argument("--prec", type=int, default=None, help="working precision in digits (default 32)")
    p.add_argument("--budget", type=int, default=None, help="maximal number of series terms")
    p.add_argument("--workers", type=int, default=None, help="parallel workers for verify")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="evaluate registered identities")
    v.add_argument("--filter", default="*", help="glob on identity ids")
    v.add_argument("--digits", type=int, default=None, help="alias of --prec")
    v.add_argument("--workers", type=int, default=None, dest="sub_workers")
    v.add_argument("--json", default=None, metavar="PATH", help="write the JSON report here")

    e = sub.add_parser("eval-series", help="sum a central-binomial series")
    e.add_argument("--spec", required=True)
    e.add_argument("--digits", type=int, default=20, help="target absolute digits")
    e.add_argument("--route", choices=("series", "integral", "both"), default="series")

    c = sub.add_parser("constant", help="evaluate z(...), t(...), M(...;...), R(...), Li(...;...), II(...)")
    c.add_argument("--expr", required=True)

    f = sub.add_parser("finsum", help="finite multiple harmonic (t-)sums")
    f.add_argument("--kind", required=True, choices=sums.KINDS)
    f.add_argument("--comp", required=True)
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--alpha", default=None, help="shift parameter P/Q (z and z* only)")
    f.add_argument("--x", default=None, help="weight x^{n_r} on the innermost index (star kinds)")

    d = sub.add_parser("dual", help="Hoffman dual of a composition")
    d.add_argument("comp")

    s = sub.add_parser("stuffle", help="stuffle product of two compositions")
    s.add_argument("u")
    s.add_argument("v")

    h = sub.add_parser("shuffle", help="shuffle product of two letter words over 0,1,-1,i,-i")
    h.add_argument("u")
    h.add_argument("v")

    fl = sub.add_parser("fl", help="Fourier-Legendre coefficient by formula and by quadrature")
    fl.add_argument("--fn", choices=("logm", "logm-sqrt"), required=True)
    fl.add_argument("--m", type=int, required=True)
    fl.add_argument("--n", type=int, required=True)

    x = sub.add_parser("explain", help="show how an identity is evaluated")
    x.add_argument("id")
    return p


def _config(args) -> Config:
    digits = args.prec if args.prec is not None else _env_int("PREC", 32)
    if getattr(args, "digits", None) is not None and args.command == "verify":
        digits = args.digits
    workers = getattr(args, "sub_workers", None) or args.workers
    return Config(digits=digits,
                  budget=args.budget if args.budget is not None else _env_int("BUDGET", 10 ** 6),
                  workers=workers if workers is not None else _env_int("WORKERS", 1))


def _word_text(key) -> str:
    return " ".join(key) if key else "()"


def _lincomb_text(lc, fmt) -> str:
    if not lc:
        return "0"
    out = []
    for key, c in sorted(lc.items(), key=lambda kv: (len(kv[0]), str(kv[0]))):
        coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
        out.append(f"{coef}{fmt(key)}")
    return " + ".join(out).replace("+ -", "- ")


def _stuffle_key_text(key) -> str:
    parts = tuple(k for k, _ in key)
    twists = tuple(s for _, s in key)
    from .compositions import TwistedComposition
    return "(" + format_composition(TwistedComposition(parts, twists)) + ")"


def _cmd_verify(args, cfg: Config, out) -> int:
    rep = suite.run(args.filter, precision=cfg.digits, workers=cfg.workers, budget=cfg.budget)
    print(rep.text(), file=out)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(rep.to_json())
    return 0 if rep.ok else 1


def _cmd_eval_series(args, cfg: Config, out) -> int:
    spec = apery.parse_series_spec(args.spec)
    status = 0
    if args.route in ("series", "both"):
        try:
            r = apery.eval_series(spec, target_digits=args.digits, budget=cfg.budget, full=True)
        except apery.TargetNotReached as exc:
            r = exc.result
            print(f"warning: {exc}", file=sys.stderr)
            status = 1
        print(f"value  {format_value(r.value, cfg.digits)}", file=out)
        print(f"error  {r.error:.1e}", file=out)
        print(f"terms  {r.terms}", file=out)
        print(f"route  series ({r.method})", file=out)
    if args.route in ("integral", "both"):
        rep = apery.find_representation(spec)[0]
        v, e = apery.eval_series_integral(spec, with_error=True)
        print(f"value  {format_value(v, cfg.digits)}", file=out)
        print(f"error  {e:.1e}", file=out)
        print("terms  -", file=out)
        print(f"route  integral ({rep.name})", file=out)
    return status


def _cmd_constant(args, cfg: Config, out) -> int:
    v, err = cmzv.evaluate_expression(args.expr)
    print(f"{format_value(v, cfg.digits)}", file=out)
    print(f"error  {err:.1e}", file=out)
    return 0


def _cmd_finsum(args, cfg: Config, out) -> int:
    if args.x is not None:
        if args.alpha is not None:
            raise UsageError("--alpha and --x cannot be combined")
        x = Fraction(args.x)
        val = sums.partial_star(args.kind, args.comp, args.n, XReal.from_fraction(x))
    else:
        alpha = Fraction(args.alpha) if args.alpha is not None else None
        val = sums.finite_sum(args.kind, parse(args.comp), args.n, alpha=alpha)
    print(format_value(val, cfg.digits), file=out)
    return 0


def _cmd_fl(args, cfg: Config, out) -> int:
    n, m = args.n, args.m
    if args.fn == "logm":
        exact = legendre.fl_coeff_logm(n, m, exact=True)

        def f(x, cx):
            return legendre.legendre_P(n, 2 * x - 1) * xprec.log(x) ** m
        tags = "log-lower"
    else:
        exact = legendre.fl_coeff_logm_sqrt(n, m, exact=True)

        def f(x, cx):
            return legendre.legendre_P(n, 2 * x - 1) * xprec.log(x) ** m / xprec.sqrt(x)
        tags = "sqrt-lower"
    q, e = legendre.integrate(f, tags, with_error=True, complement=True)
    print(f"formula     {format_value(exact, cfg.digits)}", file=out)
    print(f"quadrature  {format_value(q, cfg.digits)}  (error {e:.1e})", file=out)
    return 0


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
    except UsageError as exc:
        print(f"zetalab: {exc}", file=sys.stderr)
        return 2
    cmd = args.command
    try:
        if cmd == "verify":
            return _cmd_verify(args, cfg, out)
        if cmd == "eval-series":
            return _cmd_eval_series(args, cfg, out)
        if cmd == "constant":
            return _cmd_constant(args, cfg, out)
        if cmd == "finsum":
            return _cmd_finsum(args, cfg, out)
        if cmd == "dual":
            print(format_composition(hoffman_dual(parse(args.comp))), file=out)
            return 0
        if cmd == "stuffle":
            lc = words.stuffle(parse(args.u), parse(args.v))
            print(_lincomb_text(lc, _stuffle_key_text), file=out)
            return 0
        if cmd == "shuffle":
            print(_lincomb_text(words.shuffle(args.u, args.v), _word_text), file=out)
            return 0
        if cmd == "fl":
            return _cmd_fl(args, cfg, out)
        if cmd == "explain":
            print(suite.explain(args.id), file=out)
            return 0
    except (UsageError, CompositionSyntaxError, apery.SeriesSpecError, apery.NoRepresentation,
            suite.RegistryError) as exc:
        print(f"zetalab: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, KeyError) as exc:
        print(f"zetalab: evaluation failed: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
