"""Command-line front end.

Exact results are printed as rational strings ("n/d"); ``--decimal D``
switches them to D significant digits.  Exit status: 0 on success, 1 for
invalid input, 2 when an exact identity or a numerical routine fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from decimal import Context, Decimal
from fractions import Fraction

from .algebra import RatPolynomial, format_rational, parse_rational
from .errors import CueMomentsError, IoFailure, ValidationError

__all__ = ["main", "build_parser", "emit"]

log = logging.getLogger("cue_moments")

FORMATS = ("json", "csv", "plain")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _number(text: str):
    """Integer if the literal is one, otherwise a float."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


class Output:
    """What a subcommand produced, plus how to render it in each format."""

    def __init__(self, value, *, plain=None, rows=None, header=None, json_value=None, csv_text=None):
        self.value = value
        self.csv_text = csv_text
        self.plain = plain
        self.rows = rows
        self.header = header
        self.json_value = json_value


def _exact(value, decimal_digits):
    if isinstance(value, Fraction):
        if decimal_digits:
            ctx = Context(prec=decimal_digits)
            q = Fraction(value)
            return str(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)))
        return format_rational(value)
    return value


def _jsonable(value, decimal_digits):
    if isinstance(value, Fraction):
        return _exact(value, decimal_digits)
    if isinstance(value, RatPolynomial):
        return [_exact(a, decimal_digits) for a in value.coefficients]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _jsonable(v, decimal_digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, decimal_digits) for v in value]
    return value


def emit(out: Output, fmt: str, decimal_digits: int | None = None) -> str:
    """Render ``out`` as text in ``fmt``."""
    if fmt == "json":
        payload = out.json_value if out.json_value is not None else out.value
        return json.dumps(_jsonable(payload, decimal_digits)) + "\n"
    if fmt == "csv":
        if out.csv_text is not None:
            return out.csv_text
        if out.rows is None:
            rows = [[_exact(out.value, decimal_digits)]]
        else:
            rows = [[_exact(c, decimal_digits) for c in r] for r in out.rows]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if out.header:
            w.writerow(out.header)
        w.writerows(rows)
        return buf.getvalue()
    if out.plain is not None:
        text = out.plain(decimal_digits) if callable(out.plain) else out.plain
    elif isinstance(out.value, RatPolynomial) and decimal_digits:
        text = " + ".join(f"{_exact(a, decimal_digits)}*N^{i}" for i, a in enumerate(out.value.coefficients) if a)
    else:
        text = str(_exact(out.value, decimal_digits))
    return text + "\n"


# subcommands ---------------------------------------------------------------

def cmd_moment(args) -> Output:
    from .moments import deriv_moment

    method = args.method or ("laguerre_k" if args.q == 1 else "general_x")
    return Output(Fraction(deriv_moment(args.n, args.k, args.q, method)))


def cmd_f_poly(args) -> Output:
    from .moments import f_ratio

    p = f_ratio(args.k, args.method, args.threads)
    return Output(p, rows=[[i, a] for i, a in enumerate(p.coefficients)], header=["power", "coefficient"])


def cmd_mod_check(args) -> Output:
    from .modular import verify_mod_theorem

    r = verify_mod_theorem(args.k, args.method, args.threads)
    record = {
        "k": r.k,
        "p": r.p,
        "holds": r.holds,
        "lhs": list(r.lhs.coefficients),
        "rhs": list(r.rhs.coefficients),
        "denominator_p_power": r.denominator_p_power,
    }
    plain = (f"k = {r.k}, p = {r.p}: {'holds' if r.holds else 'FAILS'}\n"
             f"p-power in denominators: {r.denominator_p_power}\n"
             f"lhs: {r.lhs}\nrhs: {r.rhs}")
    rows = [[i, a, b] for i, (a, b) in enumerate(zip(_pad(r.lhs.coefficients, r.rhs.coefficients),
                                                     _pad(r.rhs.coefficients, r.lhs.coefficients)))]
    return Output(record, plain=plain, rows=rows, header=["power", "lhs", "rhs"])


def _pad(a, b):
    return list(a) + [0] * max(0, len(b) - len(a))


def cmd_painleve(args) -> Output:
    from .painleve import painleve_coefficients

    order = args.order or 2 * args.k
    s = painleve_coefficients(args.n, args.k, order, resolve_free=args.resolve_free)
    cs = list(s.coefficients)

    def plain(d):
        lines = [f"c_{j} = {_exact(c, d)}" for j, c in enumerate(cs, 1)]
        if s.resolved_from_determinant:
            lines.append(f"taken from the determinant: {', '.join(f'c_{j}' for j in s.resolved_from_determinant)}")
        return "\n".join(lines)

    return Output(cs, plain=plain, rows=[[j, c] for j, c in enumerate(cs, 1)], header=["j", "c_j"])


def cmd_n2_moment(args) -> Output:
    from .n2 import u2_moment_real_k, u2_moment_sum

    if args.q is None and args.x is None:
        raise ValidationError("give --q (|x|^2, rational) or --x (|x|, real)")
    if isinstance(args.k, int) and args.q is not None:
        return Output(u2_moment_sum(args.k, args.q))
    x = args.x if args.x is not None else float(args.q) ** 0.5
    return Output(u2_moment_real_k(float(args.k), x))


def cmd_n2_logmoment(args) -> Output:
    from .n2 import u2_log_moment

    return Output(u2_log_moment(args.r))


def cmd_n2_zerocount(args) -> Output:
    from .n2 import u2_mean_zero_count

    return Output(u2_mean_zero_count(args.u))


def _mc_output(est) -> Output:
    d = est.to_dict()
    plain = (f"mean = {est.mean!r} +- {est.std_error!r}  "
             f"(samples={est.samples}, seed={est.seed}, chunk_size={est.chunk_size})")
    return Output(d, plain=plain, rows=[list(d.values())], header=list(d))


def cmd_mc_moment(args) -> Output:
    from .haar import mc_moment

    x = complex(args.x) if args.x is not None else complex(args.q ** 0.5)
    return _mc_output(mc_moment(args.n, args.k, x, args.samples, args.seed,
                                chunk_size=args.chunk_size, workers=args.threads))


def cmd_mc_logmoment(args) -> Output:
    from .haar import mc_log_moment

    return _mc_output(mc_log_moment(args.n, args.r, args.samples, args.seed,
                                    chunk_size=args.chunk_size, workers=args.threads))


def cmd_mc_zeros(args) -> Output:
    from .haar import mc_zero_radii

    h = mc_zero_radii(args.n, args.samples, args.seed, args.bins,
                      chunk_size=args.chunk_size, workers=args.threads)
    record = {
        "N": h.N, "edges": list(h.edges), "counts": list(h.counts), "total": h.total,
        "samples": h.samples, "max_modulus": h.max_modulus, "seed": h.seed, "chunk_size": h.chunk_size,
    }
    return Output(record, plain=h.to_csv().rstrip("\n"), csv_text=h.to_csv())


def cmd_roots_f(args) -> Output:
    from .moments import roots_of_f

    roots, residuals = roots_of_f(args.k, args.method)
    return Output(
        {"roots": [[z.real, z.imag] for z in roots], "residuals": residuals},
        plain="\n".join(f"{z.real!r} {z.imag!r}   residual {r:.3g}" for z, r in zip(roots, residuals)),
        rows=[[_short(z.real), _short(z.imag)] for z in roots],
        header=["re", "im"],
    )


def _short(v: float):
    return 0 if v == 0 else v


def cmd_b_k(args) -> Output:
    from .moments import b_k_leading

    return Output(b_k_leading(args.k))


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .moments import METHODS, POLY_METHODS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="plain", help="output format (default: plain)")
    common.add_argument("--decimal", type=int, metavar="DIGITS",
                        help="print exact rationals as decimals with this many significant digits")
    common.add_argument("--threads", type=int, help="worker cap (default: $CUE_MOMENT_THREADS or 1)")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true", help="progress messages on stderr")

    p = argparse.ArgumentParser(
        prog="cue-moments",
        description="Exact and Monte Carlo moments of the derivative of CUE characteristic polynomials.",
        parents=[common],
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("moment", parents=[common], help="exact E|Lambda'(x)|^{2k} for given N, k, |x|^2")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--q", type=_rational, default=Fraction(1), help="|x|^2 as a rational (default 1)")
    s.add_argument("--method", choices=METHODS, help="engine (default laguerre_k, or general_x when q != 1)")
    s.set_defaults(func=cmd_moment)

    s = sub.add_parser("f-poly", parents=[common], help="the ratio polynomial f(N,k), ascending coefficients")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=POLY_METHODS, default="laguerre_k")
    s.set_defaults(func=cmd_f_poly)

    s = sub.add_parser("mod-check", parents=[common], help="check the mod (4k-1) factorisation")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=POLY_METHODS, default="painleve")
    s.set_defaults(func=cmd_mod_check)

    s = sub.add_parser("painleve", parents=[common], help="series coefficients c_j of the sigma-form solution")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--order", type=int, help="number of coefficients (default 2k)")
    s.add_argument("--resolve-free", action="store_true",
                   help="take the free coefficient c_{2k+1} from the Laguerre determinant")
    s.set_defaults(func=cmd_painleve)

    s = sub.add_parser("n2", parents=[common], help="closed forms for N = 2")
    n2 = s.add_subparsers(dest="n2_command", required=True)
    t = n2.add_parser("moment", parents=[common], help="E|Lambda'(x)|^{2k}; exact for integer k with --q")
    t.add_argument("--k", type=_number, required=True)
    t.add_argument("--q", type=_rational, help="|x|^2 (rational)")
    t.add_argument("--x", type=float, help="|x| (real, >= 1 for non-integer k)")
    t.set_defaults(func=cmd_n2_moment)
    t = n2.add_parser("logmoment", parents=[common], help="E log|Lambda'(r)| for 0 <= r < 1")
    t.add_argument("--r", type=float, required=True)
    t.set_defaults(func=cmd_n2_logmoment)
    t = n2.add_parser("zerocount", parents=[common], help="expected zeros of Lambda' in |z| <= u")
    t.add_argument("--u", type=float, required=True)
    t.set_defaults(func=cmd_n2_zerocount)

    s = sub.add_parser("mc", parents=[common], help="Monte Carlo over Haar U(N)")
    mc = s.add_subparsers(dest="mc_command", required=True)
    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--n", type=int, required=True)
    sampling.add_argument("--samples", type=int, default=100_000)
    sampling.add_argument("--seed", type=int, default=0)
    sampling.add_argument("--chunk-size", type=int, default=20_000)
    t = mc.add_parser("moment", parents=[common, sampling], help="mean of |Lambda'(x)|^{2k}")
    t.add_argument("--k", type=float, required=True)
    t.add_argument("--x", type=complex, help="evaluation point (default: sqrt of --q)")
    t.add_argument("--q", type=float, default=1.0, help="|x|^2 when --x is not given")
    t.set_defaults(func=cmd_mc_moment)
    t = mc.add_parser("logmoment", parents=[common, sampling], help="mean of log|Lambda'(r)|")
    t.add_argument("--r", type=float, required=True)
    t.set_defaults(func=cmd_mc_logmoment)
    t = mc.add_parser("zeros", parents=[common, sampling], help="histogram of zero moduli of Lambda'")
    t.add_argument("--bins", type=int, default=100)
    t.set_defaults(func=cmd_mc_zeros)

    s = sub.add_parser("roots-f", parents=[common], help="complex roots of f(N,k)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=POLY_METHODS, default="painleve")
    s.set_defaults(func=cmd_roots_f)

    s = sub.add_parser("b-k", parents=[common], help="leading coefficient b_k from the Bessel determinant")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_b_k)
    return p


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 1
    try:
        out = args.func(args)
        text = emit(out, args.format, args.decimal)
        _write(text, args.output)
    except (ValidationError, IoFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CueMomentsError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
