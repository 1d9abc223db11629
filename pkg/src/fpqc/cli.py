"""Command-line entry point: ``fpqc {verify,sweep,concentration,bounds,state-info}``.

Precedence for experiment settings is flags > ``--config`` file > defaults.
Exit codes: 0 success, 1 failed check or I/O error, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time

import numpy as np

from . import bounds, channels, experiments, gaussian, majorana, metrics

FAILED, USAGE = 1, 2


class UsageError(Exception):
    pass


def _order(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    value = float(text)
    if value < 1:
        raise argparse.ArgumentTypeError("norm order must be >= 1 or 'inf'")
    return value


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}") from None


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated number list, got {text!r}") from None


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="ExperimentConfig JSON file (path)")
    p.add_argument("--modes", type=int, help="number of fermionic modes M (count; default 3)")
    p.add_argument("--p", type=_order, help="Schatten norm order, >= 1 or 'inf' (dimensionless; default 1)")
    p.add_argument("--epsilon", type=float, help="target distance epsilon (trace-norm units; default 0.1)")
    p.add_argument("--subset-sizes", type=_int_list, help="comma list of Kraus cardinalities |U| (count)")
    p.add_argument("--trials", type=int, help="channel draws per subset size (count; default 50)")
    p.add_argument("--num-states", type=int, help="surrogate-net size (count of pure states; default 100)")
    p.add_argument("--seed", type=int, help="64-bit master seed (integer)")
    p.add_argument("--channel-family", choices=("paper", "random_monomial"), help="Kraus family (default random_monomial)")
    p.add_argument("--workers", type=int, help=f"worker processes (count; default ${experiments.WORKERS_ENV} or 1)")
    p.add_argument("--out", help="output file (path; default standard output)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")


_FLAG_KEYS = ("modes", "p", "epsilon", "subset_sizes", "trials", "num_states", "seed", "channel_family")


def _build_config(args) -> experiments.ExperimentConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    for key in _FLAG_KEYS:
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    try:
        return experiments.ExperimentConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid config: {exc}") from exc


def _emit(results, args) -> None:
    if args.out:
        experiments.export(results, args.out, args.format)
        return
    if args.format == "json":
        json.dump(experiments.to_json(results), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        import csv

        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(experiments.CSV_HEADER)
        for size, stat, value in experiments._csv_records(results):
            writer.writerow((size, stat, experiments._fmt(value)))


def _check(name: str, ok: bool, detail: str, failures: list) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    if not ok:
        failures.append({"check": name, "detail": detail})


def run_verify(args) -> int:
    modes = args.modes or 3
    rng = np.random.default_rng(args.seed)
    failures: list = []
    start = time.perf_counter()

    err = 0.0
    for m in range(1, min(modes, 4) + 1):
        c = majorana.majorana_matrices(m)
        eye = np.eye(2**m)
        for k in range(2 * m):
            for ell in range(2 * m):
                err = max(err, np.max(np.abs(majorana.anticommutator(c[k], c[ell]) - 2 * (k == ell) * eye)))
    _check("car", err <= 1e-12, f"max anticommutator error {err:.3g} (M <= {min(modes, 4)})", failures)

    err, lam_ok = 0.0, True
    for _ in range(20):
        r = rng.standard_normal((2 * modes, 2 * modes))
        g = r - r.T
        nf = gaussian.normal_form(g)
        err = max(err, np.max(np.abs(nf.reconstruct() - g)))
        lam = np.tanh(nf.spectrum)
        lam_ok &= bool(np.all((lam >= 0) & (lam <= 1)))
    _check("normal_form", err <= 1e-10 and lam_ok, f"max reconstruction residual {err:.3g}", failures)

    if modes <= channels.EXPANSION_BUDGET:
        full = channels.fpqc_full(modes)
        states = np.array([gaussian.random_gaussian_state(modes, "mixed", rng).density() for _ in range(5)])
        dist = float(np.max(metrics.distance_to_mms(channels.apply(full, states), 1)))
        _check("fpqc_full", dist <= 1e-10, f"max trace distance to 1/d {dist:.3g}", failures)

    state = gaussian.random_gaussian_state(modes, "mixed", rng)
    out = channels.apply(channels.fpqc_paper(modes), state.density())
    err = float(np.max(np.abs(gaussian.covariance_of(out) - (modes - 2) / modes * state.covariance())))
    _check("covariance_contraction", err <= 1e-10, f"max deviation from factor (M-2)/M {err:.3g}", failures)

    print(f"verify: {len(failures)} failure(s) in {time.perf_counter() - start:.2f} s")
    if failures:
        json.dump({"status": "failed", "failures": failures}, sys.stderr)
        sys.stderr.write("\n")
        return FAILED
    return 0


def run_sweep(args) -> int:
    config = _build_config(args)
    _emit(experiments.sweep_cardinality(config, args.workers), args)
    return 0


def run_concentration(args) -> int:
    config = _build_config(args)
    result = experiments.concentration_experiment(config, args.t_grid, args.workers)
    _emit(result, args)
    failed = [a.subset_size for a in result.audits if not a.within_limit]
    failed += [(r.subset_size, r.t) for r in result.rows if not r.within_bound]
    if failed:
        json.dump({"status": "failed", "failures": [str(f) for f in failed]}, sys.stderr)
        sys.stderr.write("\n")
        return FAILED
    return 0


def run_bounds(args) -> int:
    try:
        q = bounds.BoundQuery(
            epsilon=args.epsilon, modes=args.modes, p=args.p, cardinality=args.cardinality,
            t=args.t, c=args.c, kappa=args.kappa,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = json.dumps(bounds.evaluate_all(q), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def run_state_info(args) -> int:
    try:
        if args.lambdas is not None:
            lam = args.lambdas
            modes = len(lam)
            frame = np.eye(2 * modes) if args.seed is None else gaussian.random_orthogonal(2 * modes, args.seed)
            state = gaussian.state_from_spectrum(lam, frame)
        else:
            state = gaussian.random_gaussian_state(args.modes, args.purity, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    info = {
        "M": state.modes,
        "spectrum": state.lam.tolist(),
        "entropy_bits": state.entropy(),
        "purity": state.purity(),
    }
    if state.modes <= majorana.DEFAULT_DENSE_BUDGET:
        rho = state.density()
        info["dense_purity"] = float(np.real(np.trace(rho @ rho)))
        info["trace_distance_to_mms"] = float(metrics.distance_to_mms(rho, 1))
    print(json.dumps(info, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpqc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the fast invariant suite")
    p.add_argument("--modes", type=int, default=3, help="number of fermionic modes M (count; default 3)")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (integer; default 0)")
    p.set_defaults(func=run_verify)

    p = sub.add_parser("sweep", help="distance to the maximally mixed state versus |U|")
    _experiment_flags(p)
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("concentration", help="empirical tail frequencies and bounded-difference audit")
    _experiment_flags(p)
    p.add_argument("--t-grid", type=_float_list, default=[0.1, 0.2, 0.4],
                   help="comma list of tail offsets t (trace-norm units; default 0.1,0.2,0.4)")
    p.set_defaults(func=run_concentration)

    p = sub.add_parser("bounds", help="evaluate every closed-form bound as JSON")
    p.add_argument("--epsilon", type=float, default=0.1, help="epsilon (trace-norm units; default 0.1)")
    p.add_argument("--modes", type=int, default=3, help="number of fermionic modes M (count; default 3)")
    p.add_argument("--p", type=_order, default=1.0, help="Schatten order, >= 1 or 'inf' (dimensionless; default 1)")
    p.add_argument("--cardinality", type=int, default=16, help="Kraus cardinality |U| (count; default 16)")
    p.add_argument("--t", type=float, default=0.1, help="tail offset t (trace-norm units; default 0.1)")
    p.add_argument("--c", type=float, default=1.0, help="absolute constant c (dimensionless; default 1)")
    p.add_argument("--kappa", type=float, help="absolute constant kappa (dimensionless; default derived from c)")
    p.add_argument("--out", help="output file (path; default standard output)")
    p.set_defaults(func=run_bounds)

    p = sub.add_parser("state-info", help="spectrum, entropy and purity of a Gaussian state")
    p.add_argument("--lambdas", type=_float_list, help="comma list of mode spectra in [0, 1] (dimensionless)")
    p.add_argument("--modes", type=int, default=3, help="modes of a random state (count; default 3)")
    p.add_argument("--purity", choices=("pure", "mixed"), default="mixed", help="random state kind (default mixed)")
    p.add_argument("--seed", type=int, help="seed for the random frame/state (integer)")
    p.set_defaults(func=run_state_info)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        json.dump({"status": "usage_error", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return USAGE
    except (OSError, ArithmeticError, ValueError) as exc:
        json.dump({"status": "failed", "message": f"{type(exc).__name__}: {exc}"}, sys.stderr)
        sys.stderr.write("\n")
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
