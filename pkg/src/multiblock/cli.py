"""Command-line front end: invariants, carve, simulate, rates, chernoff,
catalog-verify.  All output is CSV on stdout (or --output) with the run
configuration echoed as '# key = value' header lines, so identical configs
produce identical bytes.

SNR convention: P is the per-channel-use average power against unit-variance
noise, SNR_dB = 10 log10 P.

Exit codes: 0 success, 2 configuration or catalog error, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import ratecalc, sim
from .catalog import load_catalog
from .channel import FadingModel
from .codebook import carve, save_codebook
from .cyclic_algebra import NaturalOrder, order_lattice
from .errors import (BudgetExceeded, CarveFailed, CatalogError,
                     DegenerateLattice, DomainError, EmptyBall,
                     PrecisionFailure)
from .lattice import field_lattice, invariant_report, min_pdet

CONFIG_ERROR, NUMERICAL_ERROR = 2, 3


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


class Output:
    def __init__(self, path=None):
        self.fh = open(path, "w", encoding="utf-8") if path else sys.stdout
        self.owned = path is not None

    def header(self, config):
        for key in sorted(config):
            self.fh.write(f"# {key} = {config[key]}\n")

    def row(self, values):
        self.fh.write(",".join(_fmt(v) for v in values) + "\n")

    def close(self):
        if self.owned:
            self.fh.close()


def _config_dict(args, keys):
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _load_lattice(cat, args):
    """Lattice plus its algebraic det_min certificate, if any."""
    if args.field:
        f = cat.field(args.field)
        return field_lattice(f), f.name, 1.0, "algebraic", f
    alg = cat.algebra(args.algebra)
    lat = order_lattice(NaturalOrder(alg))
    cert = "algebraic" if alg.division_asserted else None
    det_min = 1.0 if alg.division_asserted else None
    return lat, alg.name, det_min, cert, alg.center


def _model_from_args(args, n):
    fixed = None
    if args.model == "constant":
        if args.fixed_h_file:
            rows = [[complex(tok) for tok in line.split()]
                    for line in open(args.fixed_h_file, encoding="utf-8")
                    if line.strip()]
            fixed = np.array(rows, dtype=complex)
        else:
            fixed = np.eye(args.nr, n, dtype=complex)
    return FadingModel(kind=args.model, n=n, n_r=args.nr, fixed_H=fixed,
                       rho=args.rho)


def cmd_invariants(args):
    cat = load_catalog()
    names = []
    if args.all:
        names = [("field", f) for f in sorted(cat.fields)] + \
                [("algebra", a) for a in sorted(cat.algebras)]
    elif args.field:
        names = [("field", args.field)]
    elif args.algebra:
        names = [("algebra", args.algebra)]
    else:
        raise CatalogError("need --field, --algebra or --all")

    out = Output(args.output)
    out.header(_config_dict(args, ["field", "algebra", "all", "radius", "budget"]))
    out.row(["name", "kind", "n", "k", "rank", "vol", "hermite", "det_min",
             "certificate", "delta", "rh_lower", "root_disc", "table_target",
             "meets_target"])
    for kind, name in names:
        if kind == "field":
            f = cat.field(name)
            lat, det_min, cert = field_lattice(f), 1.0, "algebraic"
        else:
            alg = cat.algebra(name)
            f = alg.center
            lat = order_lattice(NaturalOrder(alg))
            det_min = 1.0 if alg.division_asserted else None
            cert = "algebraic" if alg.division_asserted else None
        rep = invariant_report(lat, name=name, det_min=det_min,
                               certificate=cert or "enumerated-upper-bound",
                               radius=args.radius, budget=args.budget)
        target = f.table_target()
        meets = f.meets_table_target()
        out.row([name, kind, lat.n, lat.k, lat.rank, lat.volume, rep.hermite,
                 rep.det_min, rep.det_min_certificate, rep.delta, rep.rh_lower,
                 f.root_discriminant(),
                 "" if target is None else target,
                 "" if meets is None else meets])
    out.close()
    return 0


def cmd_carve(args):
    cat = load_catalog()
    lat, name, _, _, _ = _load_lattice(cat, args)
    P = 10.0 ** (args.snr_db / 10.0)
    book = carve(lat, P, args.rate, args.trials, args.seed, budget=args.budget)
    if args.export:
        save_codebook(book, args.export)
    out = Output(args.output)
    out.header(_config_dict(args, ["field", "algebra", "snr_db", "rate",
                                   "trials", "seed"]))
    out.row(["name", "snr_db", "rate_target", "codewords", "realized_rate", "alpha"])
    out.row([name, args.snr_db, args.rate, len(book), book.realized_rate, book.alpha])
    out.close()
    return 0


def cmd_simulate(args):
    cat = load_catalog()
    lat, name, _, _, _ = _load_lattice(cat, args)
    model = _model_from_args(args, lat.n)
    decoders = {"ml": ("ml",), "lattice": ("lattice",),
                "both": ("ml", "lattice")}[args.decoder]
    out = Output(args.output)
    out.header(_config_dict(args, ["field", "algebra", "model", "nr", "rho",
                                   "snr_db", "rate", "trials", "seed",
                                   "decoder", "infinite", "noiseless"]))
    out.row(["name", "snr_db", "rate", "decoder", "trials", "word_errors",
             "wer", "stderr", "avg_nodes", "flag"])
    for snr_db in args.snr_db:
        P = 10.0 ** (snr_db / 10.0)
        if args.infinite:
            pt = sim.simulate_infinite_wer(lat, model, P, args.rate,
                                           args.trials, args.seed,
                                           budget=args.budget,
                                           noiseless=args.noiseless)
            points = [pt]
        else:
            try:
                book = carve(lat, P, args.rate, args.carve_trials, args.seed,
                             budget=args.budget)
            except CarveFailed as exc:
                out.row([name, snr_db, args.rate, args.decoder, args.trials,
                         "", "", "", "", f"carve_failed:{exc.best_count}"])
                continue
            points = sim.simulate_codebook_wer(book, model, args.trials,
                                               args.seed, decoders,
                                               budget=args.budget,
                                               noiseless=args.noiseless)
        for pt in points:
            out.row([name, snr_db, pt.rate, pt.decoder, pt.trials, pt.errors,
                     pt.wer, pt.stderr, pt.avg_nodes, pt.flag])
    out.close()
    return 0


def cmd_rates(args):
    model = FadingModel(kind=args.model, n=args.n, n_r=args.nr, rho=args.rho,
                        fixed_H=np.eye(args.nr, args.n) if args.model == "constant"
                        else None)
    out = Output(args.output)
    out.header(_config_dict(args, ["n", "nr", "model", "rho", "snr_db", "cl",
                                   "delta", "samples", "seed"]))
    out.row(["P_dB", "C_est", "C_stderr", "R_thm", "gap", "v_delta", "K"])
    for snr_db in args.snr_db:
        P = 10.0 ** (snr_db / 10.0)
        rep = ratecalc.rate_report(model, P, args.cl, samples=args.samples,
                                   seed=args.seed, delta=args.delta)
        out.row([snr_db, rep.capacity, rep.capacity_stderr,
                 max(0.0, rep.rate), rep.gap,
                 "" if rep.v_delta is None else rep.v_delta,
                 "" if rep.exponent is None else rep.exponent])
    out.close()
    return 0


def cmd_chernoff(args):
    out = Output(args.output)
    out.header(_config_dict(args, ["n", "nr", "delta"]))
    out.row(["delta_nats", "v_delta", "K"])
    for d in args.delta:
        out.row([d, ratecalc.chernoff_vdelta(args.n, args.nr, d),
                 ratecalc.chernoff_exponent(args.n, args.nr, d)])
    out.close()
    return 0


def cmd_catalog_verify(args):
    import warnings
    out = Output(args.output)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cat = load_catalog()
    out.row(["name", "kind", "check", "status"])
    failures = 0
    for name, f in sorted(cat.fields.items()):
        d = f.discriminant()
        out.row([name, "field", f"disc={d}", "ok"])
        meets = f.meets_table_target()
        if meets is False and not f.suboptimal:
            out.row([name, "field", "root_disc_above_target_unflagged", "FAIL"])
            failures += 1
        else:
            out.row([name, "field", f"root_disc={f.root_discriminant():.4f}", "ok"])
    for name, alg in sorted(cat.algebras.items()):
        order = NaturalOrder(alg)
        lat = order_lattice(order)
        d = order.z_discriminant()
        q = d / alg.center.discriminant() ** (alg.n ** 2)
        ok = abs(q - round(q)) < 1e-9
        out.row([name, "algebra", f"zdisc={d}", "ok" if ok else "FAIL"])
        failures += 0 if ok else 1
        # division falsification probe: no tiny product determinants among
        # small order elements
        try:
            val, _ = min_pdet(lat, 1.5 * np.sqrt(lat.n * lat.k), args.budget)
            probe_ok, probe_msg = val > 1e-6, f"division_probe_min_pdet={val:.6f}"
        except EmptyBall:
            probe_ok, probe_msg = True, "division_probe_empty_ball"
        out.row([name, "algebra", probe_msg, "ok" if probe_ok else "FAIL"])
        failures += 0 if probe_ok else 1
    out.close()
    return 0 if failures == 0 else CONFIG_ERROR


def _add_lattice_args(p):
    p.add_argument("--field", help="catalog field name (n = 1 lattice)")
    p.add_argument("--algebra", help="catalog algebra name (order lattice)")


def _add_model_args(p, need_nr=True):
    p.add_argument("--model", default="constant",
                   choices=["constant", "iid_rayleigh", "gauss_markov"])
    p.add_argument("--nr", type=int, default=1, help="receive antennas")
    p.add_argument("--rho", type=float, default=0.0,
                   help="gauss_markov correlation in [0, 1)")
    p.add_argument("--fixed-h-file", dest="fixed_h_file",
                   help="text file with the constant H block")


def build_parser():
    ap = argparse.ArgumentParser(prog="multiblock",
                                 description="multiblock lattice code laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="geometric invariants of catalog lattices")
    _add_lattice_args(p)
    p.add_argument("--all", action="store_true")
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--output")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("carve", help="carve a power-constrained codebook")
    _add_lattice_args(p)
    p.add_argument("--snr-db", dest="snr_db", type=float, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--trials", type=int, default=16)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--export", help="write the codebook in matrix text format")
    p.add_argument("--output")
    p.set_defaults(func=cmd_carve)

    p = sub.add_parser("simulate", help="word error rate over a fading channel")
    _add_lattice_args(p)
    _add_model_args(p)
    p.add_argument("--snr-db", dest="snr_db", type=lambda s: [float(x) for x in s.split(",")],
                   required=True, help="comma-separated SNR grid in dB")
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--decoder", default="both", choices=["ml", "lattice", "both"])
    p.add_argument("--infinite", action="store_true",
                   help="skip carving; lattice-decode the infinite lattice")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--carve-trials", dest="carve_trials", type=int, default=16)
    p.add_argument("--budget", type=int, default=10 ** 8)
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rates", help="capacity, achievable rate, gap, exponent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--model", default="iid_rayleigh",
                   choices=["constant", "iid_rayleigh", "gauss_markov"])
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--snr-db", dest="snr_db", type=lambda s: [float(x) for x in s.split(",")],
                   required=True)
    p.add_argument("--cl", type=float, required=True,
                   help="lattice family constant C_L")
    p.add_argument("--delta", type=float, default=None,
                   help="large-deviation delta in nats")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("chernoff", help="v_delta and exponent K")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--delta", type=lambda s: [float(x) for x in s.split(",")],
                   required=True, help="comma-separated deltas in nats")
    p.add_argument("--output")
    p.set_defaults(func=cmd_chernoff)

    p = sub.add_parser("catalog-verify", help="validate every catalog entry")
    p.add_argument("--budget", type=int, default=10 ** 7)
    p.add_argument("--output")
    p.set_defaults(func=cmd_catalog_verify)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CatalogError, CarveFailed, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except (PrecisionFailure, DegenerateLattice, BudgetExceeded, EmptyBall) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
