"""Command-line front end.

Every pipeline is a subcommand with JSON output on stdout and a run
manifest (command, inputs, seed, version, timestamp) on stderr or next to
the output file, so any run can be replayed bit-for-bit with `replay`.

Exit codes: 0 success; 1 certificate did not pass; 2 malformed input;
3 degree cap exceeded; 4 numerical failure; 5 all certificate trials
failed; 6 satellite search failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .errors import (
    AllTrialsFailed,
    DegreeCapExceeded,
    OrbitmultError,
    PersistenceLost,
    SatelliteNotFound,
    SeedSearchFailed,
)
from .hypmodel import attracting_audit, mu_multiplier, mu_param_from_multiplier
from .jsonio import dumps_canonical, pair
from .multmap import independence_certificate
from .orbits import orbits_of_exact_period
from .poly import CentPoly
from .steer import construct_attracting

DEGREE_CAP_ENV = "MULTMAP_DEGREE_CAP"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_DEGREE_CAP = 3
EXIT_NUMERICAL = 4
EXIT_ALL_TRIALS = 5
EXIT_SATELLITE = 6


def _degree_cap() -> int | None:
    raw = os.environ.get(DEGREE_CAP_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(
            f"{DEGREE_CAP_ENV} must be an integer, got {raw!r}"
        )


def _parse_complex(text: str) -> complex:
    re_s, _, im_s = text.partition(",")
    try:
        return complex(float(re_s), float(im_s or "0"))
    except ValueError:
        raise ValueError(f"expected 're,im', got {text!r}")


def _parse_periods(text: str, n: int) -> tuple[int, ...]:
    periods = tuple(int(x) for x in text.split(","))
    if len(periods) != n - 1:
        raise ValueError(
            f"need {n - 1} comma-separated periods for n={n}, got {len(periods)}"
        )
    if any(m < 1 for m in periods):
        raise ValueError("periods must be positive")
    return periods


def _manifest(command: str, inputs: dict, seed: int) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _write(report: dict, manifest: dict, output: str | None) -> None:
    text = dumps_canonical(report)
    if output:
        Path(output).write_text(text)
        mpath = Path(output).with_suffix(".manifest.json")
        mpath.write_text(dumps_canonical(manifest))
    else:
        sys.stdout.write(text)
        sys.stderr.write(dumps_canonical(manifest))


def _load_poly(args) -> CentPoly:
    if args.poly:
        raw = Path(args.poly).read_text()
    else:
        raw = sys.stdin.read()
    return CentPoly.from_json(json.loads(raw))


def cmd_orbits(args) -> int:
    p = _load_poly(args)
    orbs = orbits_of_exact_period(p, args.period, degree_cap=_degree_cap())
    report = {
        "degree": p.degree,
        "period": args.period,
        "count": len(orbs),
        "orbits": [
            {
                "points": [pair(w) for w in o.points],
                "exact_period": o.exact_period,
                "multiplier": pair(o.multiplier),
                "multiple": o.multiple_flag,
            }
            for o in orbs
        ],
    }
    inputs = {"poly": p.to_json(), "period": args.period}
    _write(report, _manifest("orbits", inputs, 0), args.output)
    return EXIT_OK


def cmd_certify(args) -> int:
    periods = _parse_periods(args.periods, args.n)
    rep = independence_certificate(
        args.n, periods, args.trials, args.seed, degree_cap=_degree_cap()
    )
    report = rep.to_json()
    inputs = {
        "n": args.n,
        "periods": list(periods),
        "trials": args.trials,
        "seed": args.seed,
    }
    _write(report, _manifest("certify", inputs, args.seed), args.output)
    if args.csv:
        _trials_csv(args.csv, rep.to_json()["trials"])
    return EXIT_OK if rep.passed else EXIT_FAIL


def _trials_csv(path: str, trials: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["seed_index", "status", "sigma_min", "rank"])
        for t in trials:
            writer.writerow(
                [t["seed_index"], t["status"], t["sigma_min"], t["rank"]]
            )


def cmd_construct(args) -> int:
    periods = _parse_periods(args.periods, args.n)
    cfg, path = construct_attracting(
        args.n, periods, args.seed, trace=args.trace, degree_cap=_degree_cap()
    )
    audit = attracting_audit(cfg.poly, max(periods), degree_cap=_degree_cap())
    report = {
        "config": cfg.to_json(),
        "path": path.to_json(),
        "audit": audit.to_json(),
    }
    inputs = {
        "n": args.n,
        "periods": list(periods),
        "seed": args.seed,
        "trace": args.trace,
    }
    _write(report, _manifest("construct", inputs, args.seed), args.output)
    if args.csv:
        _path_csv(args.csv, path)
    got = sorted(o.exact_period for o in audit.attracting)
    ok = audit.bound_ok and got == sorted(periods)
    return EXIT_OK if ok else EXIT_FAIL


def _path_csv(path: str, steer_path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n = steer_path.steps[0].poly.degree
        header = ["step_index", "step_size"]
        header += [f"c{k}_{part}" for k in range(n - 1) for part in ("re", "im")]
        header += [f"lam{j}_{part}" for j in range(n - 1) for part in ("re", "im")]
        writer.writerow(header)
        for i, s in enumerate(steer_path.steps):
            row = [i, s.step_size]
            for c in s.poly.coeffs:
                row += [c.real, c.imag]
            for w in s.multipliers:
                row += [w.real, w.imag]
            writer.writerow(row)


def cmd_blaschke(args) -> int:
    if (args.a is None) == (args.lam is None):
        raise ValueError("exactly one of --a or --lambda is required")
    if args.a is not None:
        a = _parse_complex(args.a)
        if abs(a) >= 1:
            raise ValueError(f"|a| must be < 1, got {abs(a):.6g}")
        lam = mu_multiplier(a)
        report = {
            "a": pair(a),
            "multiplier": pair(lam),
            "modulus_identity_error": abs(abs(lam) - abs(a)),
        }
        inputs = {"a": pair(a)}
    else:
        lam = _parse_complex(args.lam)
        if abs(lam) >= 1:
            raise ValueError(f"|lambda| must be < 1, got {abs(lam):.6g}")
        a = mu_param_from_multiplier(lam).a
        report = {
            "lambda": pair(lam),
            "a": pair(a),
            "modulus_identity_error": abs(abs(lam) - abs(a)),
            "roundtrip_error": abs(mu_multiplier(a) - lam),
        }
        inputs = {"lambda": pair(lam)}
    _write(report, _manifest("blaschke", inputs, 0), args.output)
    return EXIT_OK


def cmd_replay(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    command = manifest["command"]
    inputs = manifest["inputs"]
    argv = [command]
    if command == "orbits":
        poly_path = Path(args.manifest).with_suffix(".replay-poly.json")
        poly_path.write_text(json.dumps(inputs["poly"]))
        argv += ["--poly", str(poly_path), "--period", str(inputs["period"])]
    elif command == "certify":
        argv += [
            "--n", str(inputs["n"]),
            "--periods", ",".join(str(m) for m in inputs["periods"]),
            "--trials", str(inputs["trials"]),
            "--seed", str(inputs["seed"]),
        ]
    elif command == "construct":
        argv += [
            "--n", str(inputs["n"]),
            "--periods", ",".join(str(m) for m in inputs["periods"]),
            "--seed", str(inputs["seed"]),
        ]
        if inputs.get("trace"):
            argv += ["--trace"]
    elif command == "blaschke":
        if "a" in inputs:
            argv += ["--a", f"{inputs['a'][0]},{inputs['a'][1]}"]
        else:
            argv += ["--lambda", f"{inputs['lambda'][0]},{inputs['lambda'][1]}"]
    else:
        raise ValueError(f"cannot replay command {command!r}")
    if args.output:
        argv += ["-o", args.output]
    return main(argv)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitmult",
        description="Periodic-orbit multiplier toolkit for centered monic "
        "complex polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_orbits = sub.add_parser(
        "orbits", help="enumerate orbits of one exact period"
    )
    p_orbits.add_argument("--poly", help="CentPoly JSON file (default: stdin)")
    p_orbits.add_argument("--period", type=int, required=True)
    p_orbits.add_argument("-o", "--output")
    p_orbits.set_defaults(func=cmd_orbits)

    p_cert = sub.add_parser(
        "certify", help="rank certificate for the multiplier-map Jacobian"
    )
    p_cert.add_argument("--n", type=int, required=True)
    p_cert.add_argument("--periods", required=True)
    p_cert.add_argument("--trials", type=int, default=50)
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.add_argument("--csv", help="write per-trial rows to a CSV file")
    p_cert.add_argument("-o", "--output")
    p_cert.set_defaults(func=cmd_certify)

    p_cons = sub.add_parser(
        "construct",
        help="build a polynomial with attracting cycles of given periods",
    )
    p_cons.add_argument("--n", type=int, required=True)
    p_cons.add_argument("--periods", required=True)
    p_cons.add_argument("--seed", type=int, default=0)
    p_cons.add_argument(
        "--trace", action="store_true",
        help="retain every accepted continuation step (default: endpoints)",
    )
    p_cons.add_argument("--csv", help="write path steps to a CSV file")
    p_cons.add_argument("-o", "--output")
    p_cons.set_defaults(func=cmd_construct)

    p_bla = sub.add_parser(
        "blaschke", help="disk-model multiplier and its inverse"
    )
    p_bla.add_argument("--a", help="parameter as 're,im'")
    p_bla.add_argument("--lambda", dest="lam", help="multiplier as 're,im'")
    p_bla.add_argument("-o", "--output")
    p_bla.set_defaults(func=cmd_blaschke)

    p_rep = sub.add_parser("replay", help="re-run a recorded manifest")
    p_rep.add_argument("--manifest", required=True)
    p_rep.add_argument("-o", "--output")
    p_rep.set_defaults(func=cmd_replay)
    return parser


def _mend_negative_pairs(argv: list[str]) -> list[str]:
    """Join '--a -0.5,0' into '--a=-0.5,0' so argparse does not read the
    negative component as an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok in ("--a", "--lambda")
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = parser.parse_args(_mend_negative_pairs(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, OSError) as exc:
        print(f"orbitmult: bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DegreeCapExceeded as exc:
        print(f"orbitmult: {exc}", file=sys.stderr)
        return EXIT_DEGREE_CAP
    except AllTrialsFailed as exc:
        print(f"orbitmult: {exc}", file=sys.stderr)
        return EXIT_ALL_TRIALS
    except (SatelliteNotFound, PersistenceLost, SeedSearchFailed) as exc:
        print(f"orbitmult: {exc}", file=sys.stderr)
        return EXIT_SATELLITE
    except OrbitmultError as exc:
        print(f"orbitmult: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
