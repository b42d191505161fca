"""Command-line front end: ``padlfun <subcommand> ...``.

Data goes to stdout; the precision ledger (claimed precision per output) goes
to stderr.  Exit codes: 0 ok, 1 internal cross-check failed, 2 bad
configuration, 3 pole, 4 precision exhausted, 5 factorization incomplete.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import FactorizationError, is_probable_prime, zeta_neg
from .eisenstein import HalfIntMatrix, build_family, eval_family, p_regular_coeff
from .lambda_algebra import DEFAULT_D, DEFAULT_N, PoleError, PrecisionError
from .mass import Lattice, format_mass_table, mass_constant, mass_table, theta_series
from .measures import default_c, iwasawa_series, reciprocal_zeta_routes
from .padic import from_rat

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_POLE, EXIT_PRECISION, EXIT_FACTOR = 0, 1, 2, 3, 4, 5


class ConfigError(ValueError):
    pass


class MismatchError(ArithmeticError):
    pass


def _ledger(msg: str) -> None:
    print(f"[precision] {msg}", file=sys.stderr)


def _prime(p: int) -> int:
    if p < 3 or not is_probable_prime(p):
        raise ConfigError(f"p = {p} must be an odd prime")
    return p


def zetap_table(p: int, prec: int = 5, max_2k: int | None = None, c: int | None = None) -> list[tuple[int, object]]:
    """Rows (2k, 1/(zeta(1-2k)(1-p^(2k-1)))) at relative precision ``prec``.

    Each row is cross-checked against the Iwasawa-function route; a
    disagreement raises MismatchError.
    """
    _prime(p)
    max_2k = p - 1 if max_2k is None else max_2k
    rows = []
    for k2 in range(2, max_2k + 1, 2):
        exact = 1 / (zeta_neg(k2) * (1 - Fraction(p) ** (k2 - 1)))
        shown = from_rat(exact, p, prec=prec)
        a, b = reciprocal_zeta_routes(p, k2, int(shown.absprec), c)
        check = int(min(a.absprec, b.absprec, shown.absprec))
        if not (a.agrees(b, check) and shown.agrees(b, check)):
            raise MismatchError(f"route disagreement at 2k={k2}: {a} vs {b}")
        rows.append((k2, shown))
    return rows


def cmd_zetap_table(args) -> int:
    if args.paper:
        args.p, args.prec, args.max = 37, 5, 36
    rows = zetap_table(_prime(args.p), args.prec, args.max, args.c)
    if args.json:
        print(json.dumps({"schema": "padlfun.zetap-table/1", "p": args.p, "prec": args.prec,
                          "rows": [{"2k": k, "value": str(v), "padic": v.to_json()} for k, v in rows]}))
    else:
        for k, v in rows:
            print(f"{k}\t{v}")
    for k, v in rows:
        _ledger(f"2k={k}: O({args.p}^{v.absprec}), routes agree")
    return EXIT_OK


def cmd_mass(args) -> int:
    if args.rank is not None:
        if args.rank % 2:
            raise ConfigError("rank must be even")
        k = args.rank // 2
    else:
        k = args.k
    if k is None or k < 1:
        raise ConfigError("give --k or --rank")
    m = mass_constant(k)
    if args.json:
        print(json.dumps({"schema": "padlfun.mass/1", "k": k, "rank": 2 * k, "mass": str(m)}))
    else:
        print(m)
    return EXIT_OK


def cmd_mass_table(args) -> int:
    if args.paper:
        args.max, args.factor = 20, True
    rows = mass_table(args.max, with_factorization=args.factor)
    fmt = "json" if args.json else args.format
    print(format_mass_table(rows, fmt) if args.factor or fmt == "json" else
          "\n".join(f"{r.k}\t{r.mass}" for r in rows))
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"k={r.k}: {r.error}", file=sys.stderr)
    return EXIT_FACTOR if failed else EXIT_OK


def cmd_iwasawa(args) -> int:
    p = _prime(args.p)
    method = {"interp": "interpolation"}.get(args.method, args.method)
    c = default_c(p) if args.c is None else args.c
    br = iwasawa_series(p, args.branch, c, args.coeffs, args.prec, method)
    G = br.G
    if args.json:
        print(json.dumps({"schema": "padlfun.iwasawa/1", "p": p, "branch": br.j, "c": c, "method": method,
                          "mu": br.mu, "lambda": br.lam, "G": G.to_json(), "P": br.P.to_json()}))
    else:
        print(f"branch omega^{br.j}  c={c}  method={method}")
        for n in range(min(args.coeffs, G.D)):
            print(f"a_{n}\t{G.coeffs[n]}")
        print(f"mu\t{br.mu}")
        print(f"lambda\t{br.lam}")
        print(f"P\t{br.P}")
    for n in range(min(args.coeffs, G.D)):
        _ledger(f"a_{n}: O({p}^{G.coeffs[n].absprec})")
    return EXIT_OK


def _parse_h(text: str) -> HalfIntMatrix:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad --h {text!r}") from exc
    return HalfIntMatrix.of(*vals)


def cmd_family(args) -> int:
    p = _prime(args.p)
    h = _parse_h(args.h)
    if h.m != args.m:
        raise ConfigError(f"--h has {len(h.entries)} entries, which does not fit m={args.m}")
    fam = build_family(h, p, args.ch, args.branch, args.coeffs, args.prec)
    # held out: past the last interpolation node of every branch involved
    start = (args.coeffs + args.prec + 2) * (p - 1) + p
    start += (fam.r - start) % (p - 1)
    ks = [start + i * (p - 1) for i in range(3)]
    checks = []
    claim = 6
    for k in ks:
        got = eval_family(fam, k)
        want = p_regular_coeff(h, k, h.m, p, fam.M)
        checks.append((k, got, want, got.agrees(want, claim)))
    if args.json:
        print(json.dumps({"schema": "padlfun.family/1", "p": p, "m": h.m, "h": list(h.entries), "c": fam.c,
                          "branch": fam.r, "mu": fam.mu, "S": fam.S.to_json(), "P": fam.P.to_json(),
                          "factors": fam.audit(),
                          "checks": [{"k": k, "family": str(g), "exact": str(w), "match": ok}
                                     for k, g, w, ok in checks]}))
    else:
        print(f"h=({h})  m={h.m}  p={p}  c={fam.c}  k = {fam.r} mod {p - 1}")
        for n in range(min(6, fam.S.D)):
            print(f"S_{n}\t{fam.S.coeffs[n]}")
        print(f"P\t{fam.P}")
        if fam.mu:
            print(f"mu\t{fam.mu}")
        for k, g, w, ok in checks:
            print(f"k={k}\t{g}\t{'match' if ok else 'MISMATCH'}")
    for k, g, _, _ in checks:
        _ledger(f"k={k}: family value O({p}^{g.absprec}), compared mod {p}^{claim}")
    return EXIT_OK if all(ok for *_, ok in checks) else EXIT_MISMATCH


def cmd_theta(args) -> int:
    if args.lattice:
        with open(args.lattice) as fh:
            lat = Lattice.from_json(json.load(fh))
    else:
        lat = Lattice.e8()
    th = theta_series(lat, args.cutoff)
    coeffs = [int(th[n]) for n in range(args.cutoff + 1)]
    if args.json:
        print(json.dumps({"schema": "padlfun.theta/1", "rank": lat.rank, "cutoff": args.cutoff, "coeffs": coeffs}))
    else:
        print(", ".join(map(str, coeffs)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padlfun", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    sp = sub.add_parser("zetap-table", help="1/(zeta(1-2k)(1-p^(2k-1))) for 2k up to p-1")
    common(sp)
    sp.add_argument("--p", type=int, default=37)
    sp.add_argument("--prec", type=int, default=5)
    sp.add_argument("--max", type=int, default=None)
    sp.add_argument("--c", type=int, default=None)
    sp.add_argument("--paper", action="store_true", help="pin p=37, prec=5, max=36")
    sp.set_defaults(func=cmd_zetap_table)

    sp = sub.add_parser("mass", help="mass constant m_k")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--rank", type=int)
    sp.set_defaults(func=cmd_mass)

    sp = sub.add_parser("mass-table", help="m_k for even k with denominator factorizations")
    common(sp)
    sp.add_argument("--max", type=int, default=20)
    sp.add_argument("--factor", action="store_true")
    sp.add_argument("--format", choices=["plain", "csv", "json"], default="plain")
    sp.add_argument("--paper", action="store_true", help="pin max=20 with factorizations")
    sp.set_defaults(func=cmd_mass_table)

    sp = sub.add_parser("iwasawa", help="Iwasawa series of one branch of the zeta measure")
    common(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--branch", type=int, required=True)
    sp.add_argument("--c", type=int, default=None)
    sp.add_argument("--coeffs", type=int, default=DEFAULT_D)
    sp.add_argument("--prec", type=int, default=DEFAULT_N)
    sp.add_argument("--method", choices=["interp", "interpolation", "riemann"], default="interpolation")
    sp.set_defaults(func=cmd_iwasawa)

    sp = sub.add_parser("family", help="S/P family of a p-regular Eisenstein coefficient")
    common(sp)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, choices=[1, 2], default=1)
    sp.add_argument("--h", required=True, help="n for m=1, a,b,c for m=2")
    sp.add_argument("--ch", type=int, default=None)
    sp.add_argument("--branch", type=int, default=0)
    sp.add_argument("--coeffs", type=int, default=DEFAULT_D)
    sp.add_argument("--prec", type=int, default=DEFAULT_N)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("theta-e8", help="theta series of E8 (or --lattice JSON)")
    common(sp)
    sp.add_argument("--cutoff", type=int, default=8)
    sp.add_argument("--lattice", default=None)
    sp.set_defaults(func=cmd_theta)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return EXIT_CONFIG
    except PoleError as exc:
        print(f"pole: {exc} at {exc.location}", file=sys.stderr)
        return EXIT_POLE
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except FactorizationError as exc:
        print(f"factorization incomplete: {exc}", file=sys.stderr)
        return EXIT_FACTOR
    except MismatchError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
