"""Command-line entry point: ``python -m notouch <command> ...``.

Exit codes: 0 success, 2 input error, 3 acceptance failure, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from scipy.stats import unitary_group

from . import fock_algebra as fa
from . import interferometer as ifm
from . import protocol, schmidt_canonical as sc, slocc_benchmark as sb

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ACCEPTANCE = 3
EXIT_ORACLE = 4

FIDELITY_TOL = 1e-9
PROBABILITY_TOL = 1e-9
ORACLE_TOL = 1e-10


class InputError(Exception):
    pass


def _read_json(path: str | None):
    try:
        text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text)


def _statistics(text: str) -> fa.ExchangeStatistics:
    try:
        return fa.ExchangeStatistics.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_state(path: str | None) -> sc.ThreeQubitState:
    try:
        return sc.ThreeQubitState.from_dict(_read_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"invalid three-qubit state: {exc}") from exc


def probability_label(p: float) -> str | None:
    return "1/18" if abs(p - protocol.SUCCESS_PROBABILITY) < PROBABILITY_TOL else None


# --- commands ----------------------------------------------------------------


def cmd_prepare(args) -> int:
    target = _load_state(args.input)
    stats = _statistics(args.statistics)
    result, _ = protocol.prepare(target, stats)
    fidelity = target.fidelity(result.qubit_state)
    doc = result.to_dict()
    doc["fidelity"] = fidelity
    doc["statistics"] = stats.label()
    doc["probability_rational"] = probability_label(result.success_probability)
    _emit(json.dumps(doc, indent=2), args.out)
    ok = fidelity >= 1 - FIDELITY_TOL and abs(result.success_probability - 1 / 18) < PROBABILITY_TOL
    if not ok:
        print(f"acceptance failed: fidelity={fidelity!r} p={result.success_probability!r}",
              file=sys.stderr)
        return EXIT_ACCEPTANCE
    return EXIT_OK


def cmd_decompose(args) -> int:
    params = sc.decompose(_load_state(args.input))
    _emit(json.dumps(params.to_dict(), indent=2), args.out)
    return EXIT_OK


def verify_trial(seed: int, stats: fa.ExchangeStatistics) -> tuple[float, float]:
    target = sc.random_state(seed)
    result, _ = protocol.prepare(target, stats)
    return (target.fidelity(result.qubit_state),
            abs(result.success_probability - protocol.SUCCESS_PROBABILITY))


def verify(trials: int, seed: int, statistics, workers: int = 1) -> dict:
    """Monte Carlo over random targets; trial ``i`` uses seed ``seed + i``."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    by_stats = {}
    for stats in statistics:
        seeds = [seed + i for i in range(trials)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(lambda s: verify_trial(s, stats), seeds))
        else:
            outcomes = [verify_trial(s, stats) for s in seeds]
        fids, devs = zip(*outcomes)
        by_stats[stats.label()] = {"min_fidelity": min(fids), "max_prob_deviation": max(devs)}
    return {
        "trials": trials,
        "seed": seed,
        "min_fidelity": min(v["min_fidelity"] for v in by_stats.values()),
        "max_prob_deviation": max(v["max_prob_deviation"] for v in by_stats.values()),
        "by_statistics": by_stats,
    }


def cmd_verify(args) -> int:
    stats = [_statistics(s) for s in args.statistics]
    report = verify(args.trials, args.seed, stats, args.workers)
    _emit(json.dumps(report, indent=2), args.out)
    ok = (report["min_fidelity"] >= 1 - FIDELITY_TOL
          and report["max_prob_deviation"] < PROBABILITY_TOL)
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().replace(",", "x").split("x")
    try:
        dims = [int(p) for p in parts if p]
    except ValueError as exc:
        raise InputError(f"bad grid {text!r}") from exc
    if len(dims) == 1:
        dims *= 2
    if len(dims) != 2 or min(dims) < 2:
        raise InputError("grid needs two dimensions, each >= 2")
    return dims[0], dims[1]


def cmd_slocc_sweep(args) -> int:
    n_chi, n_alpha = parse_grid(args.grid)
    chis, alphas = sb.default_grid(n_chi, n_alpha, args.chi_min, args.alpha_min)
    table = sb.sweep(chis, alphas, args.norm, workers=args.workers)
    _emit(table.to_csv(), args.out)
    below = table.below_optical()
    print(
        f"{below.sum()} of {below.size} cells below the optical 1/18; "
        f"min p_succ {table.p_succ.min():.6g} at chi={chis[-1]:.6g}, alpha={alphas[0]:.6g}",
        file=sys.stderr,
    )
    return EXIT_OK


def oracle_check(unitaries, statistics=(fa.BOSONS, fa.FERMIONS)) -> dict:
    """Compare the polynomial engine with permanents/determinants.

    Every unitary is validated before any comparison is made.
    """
    unitaries = [np.asarray(U, dtype=complex) for U in unitaries]
    for k, U in enumerate(unitaries):
        if U.shape != (fa.N_MODES, fa.N_MODES) or not ifm.is_unitary(U, 1e-10):
            raise InputError(f"matrix {k} is not a {fa.N_MODES}x{fa.N_MODES} unitary")
    source = fa.monomial_to_occupation(protocol.INPUT_MODES)
    worst_amp = 0.0
    worst_norm = 0.0
    for stats in statistics:
        basis = fa.fock_basis(3, fa.N_MODES, stats)
        for U in unitaries:
            engine = fa.substitute_modes(fa.product_state(protocol.INPUT_MODES, stats), U)
            amps = engine.fock_amplitudes()
            total = 0.0
            for occ in basis:
                ref = fa.transition_amplitude_oracle(source, occ, U, stats)
                worst_amp = max(worst_amp, abs(amps.get(occ, 0.0) - ref))
                total += abs(ref) ** 2
            worst_norm = max(worst_norm, abs(total - 1.0))
    return {
        "count": len(unitaries),
        "max_amplitude_deviation": float(worst_amp),
        "max_norm_deviation": float(worst_norm),
        "passed": bool(worst_amp <= ORACLE_TOL and worst_norm <= ORACLE_TOL),
    }


def random_unitaries(count: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [unitary_group.rvs(fa.N_MODES, random_state=rng) for _ in range(count)]


def cmd_oracle_check(args) -> int:
    if args.input:
        data = _read_json(args.input)
        try:
            mats = data["unitaries"] if isinstance(data, dict) else data
            unitaries = [ifm.matrix_from_pairs(m) for m in mats]
        except (ValueError, TypeError, KeyError) as exc:
            raise InputError(f"invalid unitary file: {exc}") from exc
    else:
        if args.count < 1:
            raise InputError("count must be >= 1")
        unitaries = random_unitaries(args.count, args.seed)
    report = oracle_check(unitaries)
    _emit(json.dumps(report, indent=2), args.out)
    if not report["passed"]:
        print(f"oracle mismatch: worst deviation {report['max_amplitude_deviation']:.3g}",
              file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="notouch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="prepare a target state and post-select")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--statistics", default="boson")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("decompose", help="canonical five-term form of a state")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="Monte Carlo check of fidelity and efficiency")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--statistics", nargs="+", default=["boson"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("slocc-sweep", help="SLOCC success probability on a (chi, alpha) grid")
    p.add_argument("--grid", default="50x50")
    p.add_argument("--norm", choices=sb.NORM_KINDS, default="spectral")
    p.add_argument("--chi-min", type=float, default=1e-3)
    p.add_argument("--alpha-min", type=float, default=1e-3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_slocc_sweep)

    p = sub.add_parser("oracle-check", help="polynomial engine vs permanent/determinant")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="input", help="JSON list of 10x10 [re, im] matrices")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
