"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 resonance, 4 mismatch between
algorithms (or a failed self-test).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from .algebra.poly import UsageError
from .algebra.rational import Q, format_rational, parse_rational
from .algebra.series import ResonanceError
from .lattice import ModelParams, QuantumNumbers

EXIT_CONFIG = 2
EXIT_RESONANCE = 3
EXIT_MISMATCH = 4


@dataclass
class RunConfig:
    subcommand: str
    N: int
    n: tuple
    lam: object  # Rational, or None in symbolic mode
    Lq: int
    Sg: int
    fmt: str
    cache_dir: str | None
    W: int | None
    Dmax: int | None

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.N, self.lam)


def _common(p: argparse.ArgumentParser, formats=("json", "text")):
    p.add_argument("-N", type=int, default=2, help="particle number")
    p.add_argument("-n", required=True, help="quantum numbers, comma separated")
    p.add_argument("--lambda", dest="lam", help="coupling lambda as p/q")
    p.add_argument("--symbolic", action="store_true", help="work over Q(P) (N=2 only)")
    p.add_argument("--Lq", type=int, default=2, help="q^2 truncation order")
    p.add_argument("--Sgamma", type=int, default=None, help="gamma truncation order")
    p.add_argument("--format", dest="fmt", choices=formats, default=formats[0])
    p.add_argument("--cache-dir", default=None, help="G_k cache directory (else $ECS_CACHE_DIR)")
    p.add_argument("-W", "--window", dest="W", type=int, default=None, help="coefficient window top")
    p.add_argument("--Dmax", type=int, default=None, help="exponent window")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecsolve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eigenvalue", help="eigenvalue series")
    _common(p, ("json", "text", "latex"))
    p.add_argument("--algorithm", choices=["lagrange", "q2", "fixpoint", "all"], default="lagrange")

    p = sub.add_parser("alpha", help="eigenfunction coefficient table")
    _common(p)

    p = sub.add_parser("jack", help="trigonometric eigenfunction on the monomial basis")
    _common(p)

    p = sub.add_parser("fhat", help="building block or assembled eigenfunction as a Laurent series")
    _common(p)
    p.add_argument("--phi", action="store_true", help="assemble the eigenfunction instead of one block")

    p = sub.add_parser("verify", help="compare the series with the Galerkin eigensolver (CSV)")
    _common(p, ("csv",))
    p.add_argument("--q", default="0,0.02,0.04,0.08", help="comma separated nomes")
    p.add_argument("--M", type=int, default=61, help="Galerkin basis size (odd)")
    p.add_argument("--digits", type=int, default=40,
                   help="working digits of the Galerkin refinement (0: double precision only)")

    p = sub.add_parser("selftest", help="golden, inversion and divisor-sum checks")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    return parser


def make_config(args) -> RunConfig:
    if args.subcommand == "selftest":
        return RunConfig("selftest", 2, (), None, 0, 0, args.fmt, None, None, None)
    n = QuantumNumbers.parse(args.n) if args.subcommand != "fhat" else tuple(
        int(t) for t in args.n.split(",") if t.strip())
    if len(n) != args.N:
        raise UsageError(f"expected {args.N} quantum numbers, got {len(n)}")
    if args.symbolic:
        if args.N != 2:
            raise UsageError("symbolic mode requires N=2")
        if args.lam is not None:
            raise UsageError("--symbolic and --lambda are exclusive")
        lam = None
    else:
        if args.lam is None:
            raise UsageError("--lambda is required in numeric mode")
        lam = parse_rational(args.lam)
        if lam <= 0:
            raise UsageError("lambda must be positive")
    if args.Lq < 0:
        raise UsageError("Lq must be >= 0")
    Sg = args.Sgamma if args.Sgamma is not None else max(2 * args.Lq, 2)
    if Sg < 0:
        raise UsageError("Sgamma must be >= 0")
    return RunConfig(args.subcommand, args.N, tuple(n), lam, args.Lq, Sg, args.fmt,
                     args.cache_dir, args.W, args.Dmax)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


# -- subcommands -----------------------------------------------------------------

def cmd_eigenvalue(cfg: RunConfig, algorithm: str = "lagrange"):
    from .eigenvalue import (
        eigenvalue_via_fixed_point,
        eigenvalue_via_lagrange,
        eigenvalue_via_q2_recursion_n2,
    )

    params = cfg.params
    runs = {}
    names = ["lagrange", "fixpoint", "q2"] if algorithm == "all" else [algorithm]
    if algorithm == "all" and cfg.N != 2:
        names.remove("q2")
    for name in names:
        if name == "lagrange":
            runs[name] = eigenvalue_via_lagrange(cfg.n, params, cfg.Lq, cfg.Sg, cache_dir=cfg.cache_dir)
        elif name == "fixpoint":
            runs[name] = eigenvalue_via_fixed_point(cfg.n, params, cfg.Lq, cfg.Sg, cache_dir=cfg.cache_dir)
        else:
            runs[name] = eigenvalue_via_q2_recursion_n2(cfg.n, params, cfg.Lq, cfg.Sg)[0]
    first = runs[names[0]]
    diffs = []
    for name in names[1:]:
        other = runs[name]
        if other.tilde_e != first.tilde_e:
            keys = sorted(first.tilde_e.support() | other.tilde_e.support())
            for key in keys:
                a, b = first.tilde_e.coeff(*key), other.tilde_e.coeff(*key)
                if a != b:
                    diffs.append(f"{names[0]} vs {name} at q^{2 * key[0]} gamma^{key[1]}: {a} != {b}")
    if cfg.fmt == "latex":
        if params.lam is not None:
            raise UsageError("--format latex needs --symbolic")
        from .latex import eigenvalue_series_tex

        text = eigenvalue_series_tex(first)
    elif cfg.fmt == "text":
        lines = [f"E0 = {first.e0}"]
        for (l, s), v in first.tilde_e.terms():
            lines.append(f"q^{2 * l} gamma^{s}: {v}")
        text = "\n".join(lines)
    else:
        obj = first.to_json()
        if algorithm == "all":
            obj["algorithms"] = names
            obj["agree"] = not diffs
        text = _dump(obj)
    return text, diffs


def cmd_alpha(cfg: RunConfig):
    from .eigenfunction import alpha_table, corollary_residual

    table = alpha_table(cfg.n, cfg.params, cfg.Lq, cfg.Sg, W=cfg.W)
    report = corollary_residual(table)
    if cfg.fmt == "text":
        lines = []
        for mu in sorted(table.entries):
            lines.append(f"{list(mu)}: {table.entries[mu]!r}")
        lines.append(f"max_residual: {report.max_interior}")
        lines.append(f"interior_points: {report.interior}")
        lines.append(f"boundary_points: {report.boundary}")
        return "\n".join(lines)
    obj = table.to_json()
    obj["residual"] = report.to_json()
    return _dump(obj)


def cmd_jack(cfg: RunConfig):
    from .eigenfunction import default_window, trig_alpha_table
    from .fhat import assemble_phi

    params = cfg.params
    if params.lam is None:
        raise UsageError("jack needs a numeric lambda")
    W = cfg.W if cfg.W is not None else default_window(cfg.n, 0)
    Smax = (cfg.N - 1) * W
    table = trig_alpha_table(cfg.n, params, W, Smax)
    phi = assemble_phi(cfg.n, table, params, 0, cfg.Dmax)
    coeffs = {}
    for e, c in phi.specialize(params.gamma).items():
        key = tuple(sorted(e, reverse=True))
        if key == e:
            coeffs[key] = c
    lead = coeffs.get(tuple(cfg.n))
    rows = []
    for key in sorted(coeffs, reverse=True):
        row = {"partition": list(key), "coefficient": format_rational(coeffs[key])}
        if lead:
            row["normalized"] = format_rational(coeffs[key] / lead)
        rows.append(row)
    if cfg.fmt == "text":
        return "\n".join(f"m{r['partition']}: {r.get('normalized', r['coefficient'])}" for r in rows)
    return _dump({"N": cfg.N, "n": list(cfg.n), "lambda": format_rational(params.lam),
                  "monomials": rows})


def cmd_fhat(cfg: RunConfig, phi: bool = False):
    from .fhat import assemble_phi, fhat_series

    params = cfg.params
    if params.lam is None:
        raise UsageError("fhat needs a numeric lambda")
    if phi:
        from .eigenfunction import alpha_table

        table = alpha_table(cfg.n, params, cfg.Lq, cfg.Sg, W=cfg.W)
        poly = assemble_phi(cfg.n, table, params, cfg.Lq, cfg.Dmax)
    else:
        poly = fhat_series(cfg.n, params, cfg.Lq, cfg.Dmax)
    if cfg.fmt == "text":
        return "\n".join(f"{list(e)}: {poly.terms[e]!r}" for e in sorted(poly.terms, reverse=True))
    return _dump(poly.to_json())


def verify_rows(n, lam, Lq: int, Sg: int, qs, M: int = 61, digits: int = 40):
    """Rows ``(q, lambda, n, E_series, E_galerkin, abs_err, slope)``."""
    import mpmath

    from .eigenvalue import eigenvalue_via_lagrange
    from .oracle.galerkin import galerkin_energy, refine_energy
    from .oracle.special import EllipticParams

    params = ModelParams(2, lam)
    series = eigenvalue_via_lagrange(n, params, Lq, Sg)
    rows = []
    prev = None
    for q in qs:
        ep = EllipticParams.from_q(q)
        if digits:
            with mpmath.workdps(digits):
                g = mpmath.mpf(int(params.gamma.numerator)) / int(params.gamma.denominator)
                x = mpmath.mpf(q) ** 2
                es = mpmath.mpf(int(series.e0.numerator)) / int(series.e0.denominator)
                for (l, s), v in series.tilde_e.terms():
                    es += mpmath.mpf(int(v.numerator)) / int(v.denominator) * x**l * g**s
                eg = refine_energy(n, lam, ep, M, dps=digits)
                err = abs(es - eg)
                es, eg, err = float(es), float(eg), float(err)
        else:
            es = series.evaluate(q)
            eg = galerkin_energy(n, float(lam), ep, M)
            err = abs(es - eg)
        slope = ""
        if prev is not None and prev[0] > 0 and q > 0 and prev[1] > 0 and err > 0:
            slope = math.log(err / prev[1]) / math.log(q / prev[0])
        rows.append((q, format_rational(lam), ",".join(map(str, n)), es, eg, err, slope))
        prev = (q, err)
    return rows


def cmd_verify(cfg: RunConfig, qs, M: int, digits: int):
    if cfg.N != 2 or cfg.lam is None:
        raise UsageError("verify supports N=2 with a numeric lambda")
    rows = verify_rows(cfg.n, cfg.lam, cfg.Lq, cfg.Sg, qs, M, digits)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "lambda", "n", "E_series", "E_galerkin", "abs_err", "slope"])
    for q, lam, n, es, eg, err, slope in rows:
        w.writerow([f"{q:g}", lam, n, f"{es:.17g}", f"{eg:.17g}", f"{err:.6e}",
                    "" if slope == "" else f"{slope:.3f}"])
    return buf.getvalue()


def selftest_results() -> list[tuple[str, bool, str]]:
    from .eigenvalue import (
        combinations_check,
        eigenvalue_via_fixed_point,
        eigenvalue_via_lagrange,
        eigenvalue_via_q2_recursion_n2,
    )
    from .golden import CORRECTED, GOLDEN, divisor_sum

    out = []
    sym = ModelParams.symbolic()
    series = eigenvalue_via_lagrange((1, 0), sym, 4, 8)
    for l in range(1, 5):
        bad, known = [], []
        for s in range(9):
            got = series.tilde_e.coeff(l, s)
            want = GOLDEN[l].get(s, 0)
            if got != want:
                (known if CORRECTED.get((l, s)) == got else bad).append(s)
        note = "" if not known else f"printed gamma^{known} differs; matches the corrected form"
        out.append((f"golden E{l}", not bad, note))
    fp = eigenvalue_via_fixed_point((1, 0), sym, 4, 8)
    q2, _ = eigenvalue_via_q2_recursion_n2((1, 0), sym, 4, 8)
    out.append(("lagrange = fixed point = q2 recursion (symbolic, Lq=4)",
                series.tilde_e == fp.tilde_e == q2.tilde_e, ""))
    out.append(("inversion coefficients vs iteration, n <= 8", combinations_check(8), ""))
    g2 = eigenvalue_via_lagrange((1, 0), sym, 7, 2)
    ok = all(g2.tilde_e.coeff(l, 2) == divisor_sum(l) for l in range(1, 8))
    out.append(("divisor sum, l <= 7", ok, ""))
    return out


def cmd_selftest(cfg: RunConfig):
    results = selftest_results()
    if cfg.fmt == "json":
        text = _dump([{"check": c, "pass": ok, "note": note} for c, ok, note in results])
    else:
        text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {c}" + (f"  ({note})" if note else "")
                         for c, ok, note in results)
    return text, all(ok for _, ok, _ in results)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        if cfg.subcommand == "eigenvalue":
            text, diffs = cmd_eigenvalue(cfg, args.algorithm)
            print(text)
            if diffs:
                print("\n".join(diffs), file=sys.stderr)
                return EXIT_MISMATCH
        elif cfg.subcommand == "alpha":
            print(cmd_alpha(cfg))
        elif cfg.subcommand == "jack":
            print(cmd_jack(cfg))
        elif cfg.subcommand == "fhat":
            print(cmd_fhat(cfg, args.phi))
        elif cfg.subcommand == "verify":
            qs = [float(t) for t in args.q.split(",") if t.strip()]
            if any(not 0 <= q < 1 for q in qs):
                raise UsageError("nomes must lie in [0, 1)")
            print(cmd_verify(cfg, qs, args.M, args.digits), end="")
        else:
            text, ok = cmd_selftest(cfg)
            print(text)
            if not ok:
                return EXIT_MISMATCH
    except ResonanceError as exc:
        root = f" at mu = {list(exc.root)}" if exc.root is not None else ""
        print(f"resonance{root}: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
