"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric degeneracy.
"""

import argparse
import math
import sys
import warnings

import numpy as np

from . import bootstrap as bs
from .errors import DataError, NumericDegeneracy
from .estimators import (
    axial_dispersion,
    directional_dispersion,
    mean_axis,
    mean_direction,
    resultant_mean,
)
from .geometry import PolarRecord, polar_to_cartesian
from .io import dumps, ingest, result_document, sample_digest, vector_report
from .plot import render_lambert
from .trend import running_mean_trend


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--seed must be an unsigned 64-bit integer, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"--seed must be an unsigned 64-bit integer, got {text!r}")
    return v


def _beta(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--beta must be a number in (0, 1), got {text!r}")
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"--beta must lie in (0, 1), got {text!r}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--kind", choices=("direction", "axis"), default="direction")
    common.add_argument("--format", choices=("cartesian", "polar"), default="cartesian")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--beta", type=_beta, default=0.9)
    common.add_argument("--B", type=_positive_int, default=None, dest="B")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument(
        "--half-dispersion", action="store_true", help="also report half the dispersion"
    )
    with_input = _Parser(add_help=False, parents=[common])
    with_input.add_argument("--input", required=True)

    parser = _Parser(prog="spherestats", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("estimate", parents=[with_input], help="point estimates only")
    sub.add_parser("cone", parents=[with_input], help="confidence cone for the mean direction")
    sub.add_parser("axial-cone", parents=[with_input], help="confidence double cone for the mean axis")
    sub.add_parser("interval", parents=[with_input], help="dispersion interval (axial with --kind axis)")
    sub.add_parser("axial-interval", parents=[with_input], help="axial dispersion interval")
    p = sub.add_parser("dist-test", parents=[with_input], help="half-space confidence set membership")
    p.add_argument("--candidate", required=True, help="reference sample of the candidate distribution")
    p.add_argument("--kn", type=_positive_int, default=None, help="direction pool size")
    p = sub.add_parser("trend", parents=[with_input], help="running-mean trend")
    p.add_argument("--window", type=_positive_int, required=True)
    p = sub.add_parser("simulate", parents=[common], help="coverage simulation")
    p.add_argument("--gen", required=True, help="'uniform' or 'vmf:kappa=K'")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--trials", type=_positive_int, required=True)
    p.add_argument("--set-kind", choices=bs.SET_KINDS, default="cone")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--kn", type=_positive_int, default=None)
    p = sub.add_parser("plot", parents=[with_input], help="equal-area SVG plot")
    p.add_argument("--pole", default="0,90", help="plot center as 'lon,lat' in degrees")
    p.add_argument("--cone", action="store_true", help="overlay the confidence (double) cone")
    return parser


def _direction_estimates(sample, half):
    m = resultant_mean(sample)
    delta = directional_dispersion(sample)
    est = {
        "mean_direction": vector_report(mean_direction(sample)),
        "resultant_length": float(np.sqrt(m @ m)),
        "dispersion": delta,
    }
    if half:
        est["half_dispersion"] = delta / 2.0
    return est


def _axis_estimates(sample, half):
    loc = mean_axis(sample)
    gamma = axial_dispersion(sample)
    est = {
        "mean_axis": vector_report(loc.axis),
        "lambda_max": loc.lambda_max,
        "eigen_gap": loc.eigen_gap,
        "axial_dispersion": gamma,
    }
    if half:
        est["half_axial_dispersion"] = gamma / 2.0
    return est


def _estimates(sample, kind, half):
    return _axis_estimates(sample, half) if kind == "axis" else _direction_estimates(sample, half)


def _cone_info(cset):
    info = {
        "type": "cone" if isinstance(cset, bs.Cone) else "double-cone",
        "beta": cset.beta,
        "B": cset.B,
        "critical_value": cset.critical,
    }
    if isinstance(cset, bs.Cone):
        info["apex"] = vector_report(cset.apex)
    else:
        info["axis"] = vector_report(cset.axis)
    info["half_angle_rad"] = cset.half_angle
    info["half_angle_deg"] = round(math.degrees(cset.half_angle), 4)
    info["degenerate_replicates"] = cset.n_degenerate
    return info


def _interval_info(iv, half):
    info = {
        "type": "interval",
        "parameter": "dispersion" if iv.kind == "directional" else "axial_dispersion",
        "beta": iv.beta,
        "B": iv.B,
        "critical_value": iv.critical,
        "estimate": iv.estimate,
        "lo": iv.lo,
        "hi": iv.hi,
    }
    if half:
        info["half_lo"], info["half_hi"] = iv.lo / 2.0, iv.hi / 2.0
    return info


def _parse_pole(text):
    try:
        lon, lat = (float(t) for t in text.split(","))
    except ValueError:
        raise DataError(f"--pole must be 'lon,lat' in degrees, got {text!r}") from None
    return polar_to_cartesian(PolarRecord("lonlat-3d", (lon, lat)))


def _run(args):
    if args.command == "simulate":
        gen = bs.parse_generator(args.gen, args.q)
        default_B = bs.DEFAULT_B_DISTRIBUTION if args.set_kind == "dist" else bs.DEFAULT_B
        B = args.B or default_B
        res = bs.coverage_simulation(
            gen, args.n, args.beta, B, args.trials, args.seed, args.set_kind,
            workers=args.threads, kn=args.kn,
        )
        body = {
            "simulation": {
                "generator": args.gen,
                "q": args.q,
                "set_kind": res.set_kind,
                "n": res.n,
                "beta": res.beta,
                "B": res.B,
                "trials": res.trials,
                "covered": res.covered,
                "errors": res.errors,
                "coverage": res.coverage,
                "standard_error": res.standard_error,
            }
        }
        return dumps(result_document("simulate", None, body, args.seed))

    kind = args.kind
    if args.command in ("axial-cone", "axial-interval"):
        kind = "axis"
    sample = ingest(args.input, args.format, kind)
    digest = sample_digest(sample, kind)
    half = args.half_dispersion
    cmd = args.command

    if cmd == "estimate":
        body = {"estimates": _estimates(sample, kind, half)}
        return dumps(result_document(cmd, digest, body))
    if cmd == "plot":
        summary = None
        if args.cone:
            B = args.B or bs.DEFAULT_B
            if kind == "axis":
                summary = bs.confidence_double_cone(sample, args.beta, B, args.seed, args.threads)
            else:
                summary = bs.confidence_cone(sample, args.beta, B, args.seed, args.threads)
        return render_lambert(sample, summary, _parse_pole(args.pole))
    if cmd == "trend":
        res = running_mean_trend(sample, args.window)
        body = {
            "trend": {
                "window": args.window,
                "fitted": [None if m else [float(v) for v in row]
                           for row, m in zip(res.fitted, res.undefined_mask)],
                "undefined": [int(i) for i in np.flatnonzero(res.undefined_mask)],
            }
        }
        return dumps(result_document(cmd, digest, body))

    body = {"estimates": _estimates(sample, kind, half)}
    if cmd in ("cone", "axial-cone"):
        B = args.B or bs.DEFAULT_B
        if kind == "axis":
            cset = bs.confidence_double_cone(sample, args.beta, B, args.seed, args.threads)
        else:
            cset = bs.confidence_cone(sample, args.beta, B, args.seed, args.threads)
        body["confidence"] = _cone_info(cset)
    elif cmd in ("interval", "axial-interval"):
        B = args.B or bs.DEFAULT_B
        iv_kind = "axial" if kind == "axis" else "directional"
        iv = bs.dispersion_interval(sample, iv_kind, args.beta, B, args.seed, args.threads)
        body["confidence"] = _interval_info(iv, half)
    elif cmd == "dist-test":
        B = args.B or bs.DEFAULT_B_DISTRIBUTION
        candidate = ingest(args.candidate, args.format, kind)
        if candidate.dim != sample.dim:
            raise DataError("candidate and input have different dimensions")
        band = bs.distribution_confidence(sample, args.beta, B, args.seed, kn=args.kn,
                                          workers=args.threads)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            root = band.root(candidate)
        body["confidence"] = {
            "type": "distribution-band",
            "beta": band.beta,
            "B": band.B,
            "critical_value": band.critical,
            "band_halfwidth": band.band_halfwidth,
            "pool_size": band.pool.k,
            "candidate_n": candidate.n,
            "candidate_root": root,
            "accepted": bool(root <= band.critical),
        }
    return dumps(result_document(cmd, digest, body, args.seed))


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        text = _run(args)
    except NumericDegeneracy as exc:
        print(f"spherestats: numeric degeneracy: {exc}", file=sys.stderr)
        return 3
    except (DataError, OSError) as exc:
        print(f"spherestats: data error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
