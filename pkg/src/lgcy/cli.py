"""Command-line front end.

    verify [--suite NAME ...] [--order N] [--precision BITS] ...
    verify dump {icy,ilg,tower,mirror,f1,continued} [--side cy|lg] [--order N]

Every flag can also be set through an environment variable named after
it, e.g. LGCY_ORDER=14 or LGCY_SUITE=pf,tower.  Command-line flags win.
Exit codes: 0 all checks passed, 1 some check failed, 2 bad configuration.
"""

import argparse
import csv
import io
import os
import sys
from fractions import Fraction

from .suites import SUITES, ConfigError, RunConfig, run_suite

ENV_PREFIX = "LGCY_"
DUMP_SELECTORS = ("icy", "ilg", "tower", "mirror", "f1", "continued")


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _suite_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part == "all":
            out.extend(SUITES)
        else:
            out.append(part)
    return out


def _common(p, order_default):
    p.add_argument("--order", type=int, default=_env("order", order_default))
    p.add_argument("--precision", type=int, default=_env("precision", 256))
    p.add_argument("--tolerance", type=str, default=_env("tolerance"))
    p.add_argument("--mu-cap", type=int, default=_env("mu_cap", 2))
    p.add_argument("--format", dest="fmt", default=_env("format", "text"))


def _verify_parser():
    p = argparse.ArgumentParser(prog="verify", description="Run the LG/CY verification suites.")
    _common(p, 12)
    p.add_argument("--suite", action="append", default=None,
                   help=f"suite(s) to run, comma separated or repeated; one of {', '.join(SUITES)} or all")
    p.add_argument("--path-file", default=_env("path_file"), help="JSON file with transport waypoints")
    p.add_argument("--report", default=_env("report"), help="write the JSON report to this file")
    return p


def _dump_parser():
    p = argparse.ArgumentParser(prog="verify dump", description="Print series coefficients.")
    p.add_argument("what", choices=DUMP_SELECTORS)
    p.add_argument("--side", choices=("cy", "lg"), default=_env("side", "cy"))
    _common(p, 12)
    return p


def _config_from(args):
    suites = []
    for s in args.suite or [_env("suite", "all")]:
        suites.extend(_suite_list(s))
    path = taylor = None
    precision = int(args.precision)
    if args.path_file:
        from .coeff import build_constant_pool
        from .continuation import path_from_json

        try:
            with open(args.path_file) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read path file: {exc}") from exc
        ctx = build_constant_pool(max(precision, 64)).ctx
        try:
            path, taylor, file_prec = path_from_json(text, ctx)
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad path file: {exc}") from exc
        if file_prec and "--precision" not in sys.argv and _env("precision") is None:
            precision = int(file_prec)
        if len(path) < 2:
            raise ConfigError("a path needs at least two waypoints")
    tol = None
    if args.tolerance is not None:
        try:
            tol = Fraction(args.tolerance) if "/" in args.tolerance else float(args.tolerance)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance {args.tolerance!r}") from exc
        if tol <= 0:
            raise ConfigError("tolerance must be positive")
        tol = str(tol) if isinstance(tol, float) else tol
    return RunConfig(
        order=int(args.order),
        precision=precision,
        tolerance=tol,
        mu_cap=int(args.mu_cap),
        path=path,
        taylor_order=taylor,
        suites=tuple(dict.fromkeys(suites)),
        report=args.report,
        fmt=args.fmt,
    ).validate()


# --- dump ------------------------------------------------------------------------------

def _fmt(c, digits):
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, int):
        return str(c)
    import mpmath

    return mpmath.nstr(c, digits)


def dump_series(what, side, order, precision, mu_cap=2):
    """(headers, rows) for the selected series; rows are lists of strings."""
    from .coeff import build_constant_pool
    from .genus_one import continuation_inputs, f1_closed_form_deriv
    from .ifunctions import build_icy, build_ilg, mirror_map
    from .series import LogSeries
    from .tower import build_tower, rational_part

    digits = max(6, int(precision * 0.30103) // 2)
    if what == "icy":
        ifn = build_icy(order)
        cols = {"I_0^CY": ifn.I0.part(0), "I_1^CY (log-free part)": ifn.I1.part(0)}
        var = "d"
    elif what == "ilg":
        ifn = build_ilg(order)
        cols = {f"I_{j}^LG": ifn.component(j) for j in range(4)}
        var = "a"
    elif what == "mirror":
        ifn = build_icy(order) if side == "cy" else build_ilg(order)
        tau = mirror_map(ifn)
        if isinstance(tau, LogSeries):
            cols = {"tau^CY - log q": tau.part(0)}
        else:
            cols = {"tau^LG": tau}
        var = "n"
    elif what == "tower":
        tw = build_tower(side, P=4, order=order, mu_cap=0)
        cols = {f"I_{p}{p}^{side.upper()}": rational_part(tw.diag(p)).truncate(order) for p in range(5)}
        var = "n"
    elif what == "f1":
        label = "(q d/dq) F_1^CY" if side == "cy" else "dF_1^LG/dt"
        cols = {label: f1_closed_form_deriv(side, order)}
        var = "n"
    elif what == "continued":
        pool = build_constant_pool(precision)
        _, cont, _ = continuation_inputs(max(order, 8), pool)
        cols = {f"I~_{i}^CY": cont.components[i].truncate(order) for i in range(4)}
        cols["tau^C"] = cont.mirror_map().truncate(order)
        var = "n"
    else:
        raise ConfigError(f"unknown selector {what!r}")
    headers = [var] + list(cols)
    rows = []
    for n in range(order + 1):
        rows.append([str(n)] + [_fmt(s[n], digits) if n <= s.order else "" for s in cols.values()])
    return headers, rows


def _emit_table(headers, rows, fmt, out):
    if fmt == "csv":
        w = csv.writer(out)
        w.writerow(headers)
        w.writerows(rows)
        return
    if fmt == "json":
        import json

        out.write(json.dumps({"columns": headers, "rows": rows}, indent=2) + "\n")
        return
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def main(argv=None, out=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    if argv and argv[0] == "verify":
        argv = argv[1:]
    try:
        if argv and argv[0] == "dump":
            args = _dump_parser().parse_args(argv[1:])
            if args.fmt not in ("text", "csv", "json"):
                raise ConfigError("dump format must be text, csv or json")
            if int(args.order) < 1:
                raise ConfigError("order must be at least 1")
            headers, rows = dump_series(args.what, args.side, int(args.order), int(args.precision))
            _emit_table(headers, rows, args.fmt, out)
            return 0
        args = _verify_parser().parse_args(argv)
        config = _config_from(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:      # argparse
        return 2 if exc.code else 0
    report = run_suite(config)
    if config.report:
        with open(config.report, "w") as fh:
            fh.write(report.to_json() + "\n")
    out.write((report.to_json() if config.fmt == "json" else report.to_text()) + "\n")
    if not report.passed:
        for c in report.failures():
            print(f"FAIL {c.id}: residual {c.residual} > tolerance {c.tolerance}", file=sys.stderr)
        return 1
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
