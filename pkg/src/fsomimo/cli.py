"""Command line: BER curves, BER/outage surfaces, optimization, validation.

Every command writes CSV (see :mod:`fsomimo.table`) or a short text summary
to stdout. Exit codes: 0 success, 1 validation gate failure, 2 usage or
domain error.
"""

import argparse
import math
import sys
import warnings

from . import oracle
from .channel import ChannelParams, PdfVariant
from .exceptions import ConvergenceError, DomainError, ModelRangeWarning, QuadratureError
from .optimizer import optimize_beam_width, optimize_xi
from .performance import DpskForm, Modulation, SnrSpec, ber_closed, outage_probability
from .table import CsvTable

EXIT_OK, EXIT_GATE, EXIT_USAGE = 0, 1, 2


def db_grid(start, stop, step):
    """Inclusive arithmetic grid ``start, start+step, ..., stop``."""
    if not step > 0:
        raise DomainError(f"grid step must be > 0, got {step!r}", "step")
    if stop < start:
        raise DomainError(f"grid stop {stop!r} is below start {start!r}", "stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def _channel(args, xi):
    return ChannelParams.from_apertures(args.m, args.n, xi, args.a0)


def _add_link(p, xi=True):
    p.add_argument("--modulation", default="bpsk", choices=["bpsk", "qpsk", "8psk", "dpsk"])
    p.add_argument("--m", type=int, default=6, help="receive apertures")
    p.add_argument("--n", type=int, default=6, help="transmit apertures")
    if xi:
        p.add_argument("--xi", type=float, required=True)
    p.add_argument("--a0", type=float, default=1.0)
    p.add_argument("--dpsk-form", choices=["derived", "printed"], default="derived")


def _add_snr_grid(p):
    p.add_argument("--snr-db-start", type=float, default=0.0)
    p.add_argument("--snr-db-stop", type=float, default=30.0)
    p.add_argument("--snr-db-step", type=float, default=5.0)


def cmd_ber_curve(args):
    mod = Modulation.parse(args.modulation)
    p = _channel(args, args.xi)
    form = DpskForm(args.dpsk_form)
    header = ["snr_db", "ber_closed"]
    if args.oracle != "none":
        header += ["ber_oracle", "oracle_stderr"]
    table = CsvTable(header)
    for snr_db in db_grid(args.snr_db_start, args.snr_db_stop, args.snr_db_step):
        g = SnrSpec.from_db(snr_db).gamma_avg
        row = [snr_db, ber_closed(mod, g, p, form)]
        if args.oracle == "quad":
            q = oracle.quad_ber(mod, g, p, PdfVariant(args.pdf))
            row += [q.value, q.abs_error_estimate]
        elif args.oracle == "mc":
            est = oracle.mc_ber(mod, g, p, args.samples, seed=args.seed, chunks=args.chunks)
            row += [est.mean, est.std_error]
        table.append(row)
    sys.stdout.write(table.to_csv())
    return EXIT_OK


def cmd_surface(args):
    mod = Modulation.parse(args.modulation)
    form = DpskForm(args.dpsk_form)
    xis = db_grid(args.xi_start, args.xi_stop, args.xi_step)
    params = [_channel(args, xi) for xi in xis]
    table = CsvTable(["snr_db", "xi", "value"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelRangeWarning)
        for snr_db in db_grid(args.snr_db_start, args.snr_db_stop, args.snr_db_step):
            g = SnrSpec.from_db(snr_db).gamma_avg
            for xi, p in zip(xis, params):
                if args.metric == "ber":
                    value = ber_closed(mod, g, p, form)
                else:
                    value = outage_probability(10.0 ** (args.gamma_th_db / 10.0), g, p)
                table.append((snr_db, xi, value))
    sys.stdout.write(table.to_csv())
    return EXIT_OK


def cmd_optimize(args):
    mod = Modulation.parse(args.modulation)
    form = DpskForm(args.dpsk_form)
    g = SnrSpec.from_db(args.snr_db).gamma_avg
    mn = args.m * args.n
    if args.mode == "xi":
        res = optimize_xi(mod, g, mn, args.a0, method=args.method, dpsk_form=form)
        fields = [
            ("xi_star", res.xi_star),
            ("ber_at_optimum", res.ber_at_optimum),
            ("method", res.method.value),
            ("derivative_residual", res.derivative_residual),
        ]
    else:
        missing = [f for f in ("r", "sigma_s", "wz_lo", "wz_hi") if getattr(args, f) is None]
        if missing:
            raise DomainError("beam mode needs --r, --sigma-s, --wz-lo, --wz-hi", "beam")
        res = optimize_beam_width(
            mod, g, mn, args.r, args.sigma_s, (args.wz_lo, args.wz_hi), dpsk_form=form
        )
        fields = [
            ("wz_star", res.wz_star),
            ("xi_star", res.xi_star),
            ("A0", res.A0_at_star),
            ("ber_at_optimum", res.ber),
            ("method", "GoldenSection"),
            ("derivative_residual", math.nan),
        ]
        if res.at_boundary:
            print(
                "warning: GoldenSection optimum lies on the beam-width bracket boundary; "
                "widen the bracket",
                file=sys.stderr,
            )
    if args.csv:
        numeric = [(k, v) for k, v in fields if not isinstance(v, str)]
        table = CsvTable([k for k, _ in numeric], [tuple(v for _, v in numeric)])
        sys.stdout.write(table.to_csv())
    else:
        for k, v in fields:
            text = v if isinstance(v, str) else f"{v:.11e}"
            print(f"{k} = {text}")
    return EXIT_OK


def cmd_validate(args):
    instances = oracle.acceptance_grid() + oracle.random_mc_instances(args.mc_instances)
    report = oracle.discrepancy_report(
        instances, n_samples=args.samples, seed=args.seed, chunks=args.chunks
    )
    flags, ok = oracle.gate_report(report, tol=args.tol)
    out = CsvTable(report.header + ("pass",))
    for row, flag in zip(report.rows, flags):
        out.append(row + (1 if flag else 0,))
    text = out.to_csv()
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = flags.count(False)
    print(
        f"validate: {len(flags) - failed}/{len(flags)} rows pass"
        + ("" if ok else f"; {failed} failing rows flagged pass=0"),
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_GATE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fsomimo", allow_abbrev=False, description=__doc__.splitlines()[0]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber-curve", allow_abbrev=False, help="BER versus average SNR")
    _add_link(p)
    _add_snr_grid(p)
    p.add_argument("--oracle", choices=["none", "quad", "mc"], default="none")
    p.add_argument("--pdf", choices=["paper", "exact"], default="paper",
                   help="density used by --oracle quad")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chunks", type=int, default=1)
    p.set_defaults(func=cmd_ber_curve)

    p = sub.add_parser(
        "surface", allow_abbrev=False, help="BER or outage over (SNR, xi), long format"
    )
    p.add_argument("--metric", choices=["ber", "outage"], default="ber")
    _add_link(p, xi=False)
    _add_snr_grid(p)
    p.add_argument("--xi-start", type=float, default=1.0)
    p.add_argument("--xi-stop", type=float, default=6.0)
    p.add_argument("--xi-step", type=float, default=0.1)
    p.add_argument("--gamma-th-db", type=float, default=0.0)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("optimize", allow_abbrev=False, help="BER-minimizing xi or beam width")
    p.add_argument("--mode", choices=["xi", "beam"], default="xi")
    _add_link(p, xi=False)
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--method", choices=["auto", "root", "golden"], default="auto")
    p.add_argument("--r", type=float)
    p.add_argument("--sigma-s", type=float)
    p.add_argument("--wz-lo", type=float)
    p.add_argument("--wz-hi", type=float)
    p.add_argument("--csv", action="store_true", help="print a one-row CSV instead of text")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser(
        "validate", allow_abbrev=False, help="closed form vs quadrature vs Monte Carlo report"
    )
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--chunks", type=int, default=1)
    p.add_argument("--mc-instances", type=int, default=10)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ConvergenceError, QuadratureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
