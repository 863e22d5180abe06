"""Command-line experiment runner.

One experiment per invocation; every run is deterministic in its seed and
writes a single JSON or CSV artifact that embeds the resolved
configuration and package version, so identical invocations produce
byte-identical files.  Exit codes: 0 success, 2 configuration error,
3 cap/size error, 4 numerical-invariant violation, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInputError, NumericalInvariantError, SizeLimitError
from .intertwiner import (
    block_gaps,
    build_chain,
    distance_crossing_level,
    separation_rows,
    truncated_product_state,
)
from .linalg import haar_unitary, phase_align, random_unit_vector
from .orbit import (
    min_distance_bruteforce,
    min_distance_closed_form,
    product_min_distance,
    state_min_distance_bruteforce,
)
from .seeding import derive_seeds
from .sequences import angles_from_descriptor, classify_pair, partial_products, weierstrass_bounds, WindowPolicy
from .states import VectorState, pullback, state_distance
from .witness import (
    distance_bound_check,
    enumerate_net,
    net_density_report,
    random_net,
    build_test_element_net,
    witness_search,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIZE = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

OUTPUT_DIR_ENV = "CARLAB_OUT"


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _to_json(value, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {_to_json(v, indent + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not len(value):
            return "[]"
        parts = [f"{inner}{_to_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(value)
    return str(value)


def write_artifact(path: Path, experiment: str, config: dict, rows: list, summary: dict) -> None:
    fmt = config["format"]
    if fmt == "json":
        doc = {
            "experiment": experiment,
            "config": config,
            "rows": rows,
            "summary": summary,
        }
        text = _to_json(doc) + "\n"
    else:
        lines = [
            f"# experiment = {experiment}",
            f"# config = {json.dumps(config, default=str, separators=(',', ':'))}",
            f"# summary = {json.dumps({k: _csv_cell(v) for k, v in summary.items()}, separators=(',', ':'))}",
        ]
        if rows:
            keys = list(rows[0].keys())
            lines.append(",".join(keys))
            for row in rows:
                lines.append(",".join(_csv_cell(row[k]) for k in keys))
        text = "\n".join(lines) + "\n"
    path.write_text(text)


def _resolve_output(args, experiment: str) -> Path:
    if args.output:
        return Path(args.output)
    out_dir = args.out_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    ext = "json" if args.out == "json" else "csv"
    return Path(out_dir) / f"{experiment.replace('-', '_')}.{ext}"


def _config_dict(args, fields: list[str]) -> dict:
    config = {"version": __version__, "format": args.out}
    for name in fields:
        config[name] = getattr(args, name.replace("-", "_"))
    return config


# ---------------------------------------------------------------- experiments


def run_min_distance(args):
    """Closed form vs exact-image search oracle on random vector pairs."""
    rows = []
    worst = 0.0
    for trial, seed in enumerate(derive_seeds(args.seed, args.trials)):
        rng = np.random.default_rng(seed)
        xi = random_unit_vector(args.dim, rng)
        # states forget global phases, so compare on the aligned representative
        eta = phase_align(xi, random_unit_vector(args.dim, rng))
        report = min_distance_closed_form(xi, eta)
        found = min_distance_bruteforce(xi, eta, budget=args.budget, seed=seed)
        err = abs(found - report.closed_form_distance)
        worst = max(worst, err)
        rows.append(
            {
                "trial": trial,
                "abs_overlap": report.abs_overlap,
                "closed_form": report.closed_form_distance,
                "oracle": found,
                "abs_error": err,
            }
        )
    summary = {
        "trials": args.trials,
        "max_abs_error": worst,
        "tolerance": 1e-4,
        "within_tolerance": worst <= 1e-4,
    }
    return rows, summary


def run_product_distance(args):
    """Adjudicate the two rival product-state constants with the oracle."""
    rows = []
    max_err_single = 0.0
    min_dev_doubled = np.inf
    for pair, seed in enumerate(derive_seeds(args.seed, args.pairs)):
        rng = np.random.default_rng(seed)
        x1, x2 = random_unit_vector(2, rng), random_unit_vector(2, rng)
        e1, e2 = random_unit_vector(2, rng), random_unit_vector(2, rng)
        report = product_min_distance([x1, x2], [e1, e2])
        xi, eta = np.kron(x1, x2), np.kron(e1, e2)
        found = state_min_distance_bruteforce(xi, eta, budget=args.budget, seed=seed)
        err_single = abs(found - report.distance_single)
        dev_doubled = abs(found - report.distance_doubled)
        max_err_single = max(max_err_single, err_single)
        min_dev_doubled = min(min_dev_doubled, dev_doubled)
        rows.append(
            {
                "pair": pair,
                "overlap_product": report.overlap_product,
                "distance_single": report.distance_single,
                "distance_doubled": report.distance_doubled,
                "oracle": found,
                "error_single": err_single,
                "deviation_doubled": dev_doubled,
            }
        )
    summary = {
        "pairs": args.pairs,
        "max_error_single": max_err_single,
        "min_deviation_doubled": float(min_dev_doubled),
        "tolerance": 1e-3,
        "single_within_tolerance": max_err_single <= 1e-3,
    }
    return rows, summary


def run_reduce(args):
    """Per-level chain table plus the scalar trend classification."""
    length = max(args.length, args.levels)
    alpha = angles_from_descriptor(args.alpha, length)
    beta = angles_from_descriptor(args.beta, length)
    chain = build_chain(alpha, beta, args.levels, phase_policy=args.phase_policy)
    rows = []
    for record in chain.levels:
        n = record.n
        prod = float(partial_products(np.cos(chain.thetas[:n]))[-1])
        dist = state_distance(
            truncated_product_state(alpha, n), truncated_product_state(beta, n)
        )
        expected = 2.0 * np.sqrt(max(1.0 - prod * prod, 0.0))
        if abs(dist - expected) > 1e-8:
            raise NumericalInvariantError(
                f"distance/overlap duality off by {abs(dist - expected):.3e} at n={n}"
            )
        rows.append(
            {
                "n": n,
                "gap_to_prev": record.gap_to_prev,
                "overlap_bound": record.overlap_bound,
                "eigenphase_norm": record.eigenphase_norm,
                "overlap_product": prod,
                "state_distance": dist,
            }
        )
    policy = WindowPolicy(
        min_length=args.min_length,
        sum_tolerance=args.sum_tolerance,
        product_floor=args.product_floor,
    )
    diag = classify_pair(alpha, beta, policy)
    summary = {
        "classification": diag.classification,
        "l2_total": diag.l2_total,
        "l2_tail_increment": diag.l2_tail_increment,
        "half_angle_total": diag.half_angle_total,
        "half_angle_tail_increment": diag.half_angle_tail_increment,
        "overlap_product": diag.overlap_product,
        "log_overlap_product": diag.log_overlap_product,
        "l2_converging": diag.l2_converging,
        "half_angle_converging": diag.half_angle_converging,
        "product_positive": diag.product_positive,
        "diagnostic_length": length,
    }
    return rows, summary


def run_cauchy_gaps(args):
    """Chain block gaps: dense measurement vs closed form vs claimed bound."""
    length = max(args.levels, 1)
    alpha = angles_from_descriptor(args.alpha, length)
    beta = angles_from_descriptor(args.beta, length)
    chain = build_chain(alpha, beta, args.levels, phase_policy=args.phase_policy)
    gaps = block_gaps(chain, max_span=args.max_span)
    rows = []
    worst_mismatch = 0.0
    flagged = 0
    for g in gaps:
        mismatch = abs(g.measured - g.eigenphase_norm)
        worst_mismatch = max(worst_mismatch, mismatch)
        flagged += int(g.exceeds_bound)
        rows.append(
            {
                "start": g.start,
                "end": g.end,
                "measured": g.measured,
                "eigenphase_norm": g.eigenphase_norm,
                "overlap_bound": g.overlap_bound,
                "exceeds_bound": g.exceeds_bound,
            }
        )
    summary = {
        "blocks": len(rows),
        "flagged_blocks": flagged,
        "max_spectral_mismatch": worst_mismatch,
        "spectral_agreement": worst_mismatch <= 1e-8,
    }
    return rows, summary


def run_separation(args):
    """Tail-state overlap decay, distances, and separating witnesses."""
    length = max(args.search_limit, args.start + args.levels - 1)
    alpha = angles_from_descriptor(args.alpha, length)
    beta = angles_from_descriptor(args.beta, length)
    crossing = distance_crossing_level(
        alpha, beta, threshold=args.threshold, start=args.start, limit=args.search_limit
    )
    stop = args.start + args.levels - 1
    table = separation_rows(alpha, beta, start=args.start, stop=stop)
    rows = [
        {
            "n": r.n,
            "overlap": r.overlap,
            "state_distance": r.state_distance,
            "witness_first": r.witness_first,
            "witness_second": r.witness_second,
            "witness_norm": r.witness_norm,
        }
        for r in table
    ]
    summary = {
        "threshold": args.threshold,
        "crossing_level": crossing,
        "search_limit": args.search_limit,
    }
    return rows, summary


def run_fsigma_search(args):
    """Witness search over a unitary net for pulled-back state pairs."""
    if args.net == "exhaustive" or (args.net == "auto" and args.dim == 2):
        net = enumerate_net(args.dim, args.epsilon)
    else:
        net = random_net(args.dim, args.epsilon, size=args.net_size, seed=args.seed)
    seeds = derive_seeds(args.seed, args.pairs + 1)
    tests = build_test_element_net(args.dim, n_random=args.test_elements, seed=seeds[-1])
    rows = []
    found_count = 0
    for pair, seed in enumerate(seeds[: args.pairs]):
        rng = np.random.default_rng(seed)
        psi = VectorState(random_unit_vector(args.dim, rng))
        v = haar_unitary(args.dim, rng)
        phi = pullback(psi, v)
        result = witness_search(phi, psi, net, tests)
        if result is None:
            rows.append(
                {
                    "pair": pair,
                    "found": False,
                    "witness_index": None,
                    "gap": None,
                    "norm_distance": None,
                    "below_two": False,
                }
            )
            continue
        found_count += 1
        bound = distance_bound_check(phi, psi, result.unitary)
        rows.append(
            {
                "pair": pair,
                "found": True,
                "witness_index": result.index,
                "gap": result.gap,
                "norm_distance": bound.norm_distance,
                "below_two": bound.below_two,
            }
        )
    summary = {
        "pairs": args.pairs,
        "found": found_count,
        "all_found": found_count == args.pairs,
        "net_mode": net.mode,
        "net_size": len(net),
        "net_resolution": net.resolution,
    }
    if args.density_check:
        report = net_density_report(net, probes=args.density_probes, seed=args.seed)
        summary["density_probes"] = report.probes
        summary["density_max_distance"] = report.max_distance
        summary["density_mean_distance"] = report.mean_distance
        summary["density_within_resolution"] = report.within_resolution
    return rows, summary


_FAMILIES = {
    "geometric": lambda n: 1.0 - 0.5 ** np.arange(1, n + 1),
    "telescoping": lambda n: 1.0 - 1.0 / np.arange(2, n + 2),
}


def run_product_test(args):
    """Running products of a factor family against their sandwich bounds."""
    factors = _FAMILIES[args.family](args.terms)
    products = partial_products(factors)
    lower, upper = weierstrass_bounds(factors)
    rows = []
    sandwich_ok = True
    for j in range(args.terms):
        exact = 1.0 / (j + 2) if args.family == "telescoping" else None
        sandwich_ok &= bool(
            lower[j] - 1e-12 <= products[j] <= upper[j] + 1e-12
        )
        rows.append(
            {
                "term": j + 1,
                "factor": float(factors[j]),
                "partial_product": float(products[j]),
                "lower_bound": float(lower[j]),
                "upper_bound": float(upper[j]),
                "exact": exact,
            }
        )
    summary = {
        "family": args.family,
        "terms": args.terms,
        "sandwich_holds": sandwich_ok,
        "final_product": float(products[-1]),
    }
    if args.family == "geometric":
        # first factor pulled out, Weierstrass applied to the tail
        refined = float(factors[0]) * (1.0 - float(np.sum(1.0 - factors[1:])))
        summary["refined_floor"] = refined
        summary["floor_holds"] = bool(products[-1] >= refined - 1e-12)
    if args.family == "telescoping":
        exact_vals = 1.0 / np.arange(2, args.terms + 2)
        summary["max_exact_error"] = float(np.max(np.abs(products - exact_vals)))
    return rows, summary


# --------------------------------------------------------------------- parser


def _add_common(sub, defaults: dict) -> None:
    sub.add_argument("--seed", type=int, default=defaults.get("seed", 7))
    sub.add_argument("--out", choices=("json", "csv"), default="json")
    sub.add_argument("--out-dir", default=None, help=f"default: ${OUTPUT_DIR_ENV} or cwd")
    sub.add_argument("--output", default=None, help="explicit output file path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carlab",
        description="Deterministic experiments on pure states of 2^n matrix truncations.",
    )
    parser.add_argument("--version", action="version", version=f"carlab {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser(
        "min-distance",
        help="closed-form minimum unitary distance vs the exact-image search oracle",
    )
    p.add_argument("--dim", type=int, choices=(2, 3, 4), default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--budget", type=int, default=2000)
    _add_common(p, {})
    p.set_defaults(run=run_min_distance, fields=["seed", "dim", "trials", "budget"])

    p = subs.add_parser(
        "product-distance",
        help="adjudicate the product-state distance constant with the state-mode oracle",
    )
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--budget", type=int, default=6000)
    _add_common(p, {})
    p.set_defaults(run=run_product_distance, fields=["seed", "pairs", "budget"])

    p = subs.add_parser(
        "reduce",
        help="per-level chain table and the trend classification of an angle pair",
    )
    p.add_argument("--alpha", required=True, help="sequence descriptor")
    p.add_argument("--beta", required=True, help="sequence descriptor")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--length", type=int, default=400, help="diagnostic sequence length")
    p.add_argument("--phase-policy", choices=("none", "eigenvalue-one"), default="none")
    p.add_argument("--min-length", type=int, default=16)
    p.add_argument("--sum-tolerance", type=float, default=1e-6)
    p.add_argument("--product-floor", type=float, default=0.05)
    _add_common(p, {})
    p.set_defaults(
        run=run_reduce,
        fields=[
            "seed", "alpha", "beta", "levels", "length", "phase_policy",
            "min_length", "sum_tolerance", "product_floor",
        ],
    )

    p = subs.add_parser(
        "cauchy-gaps",
        help="chain block gaps: dense vs eigenphase closed form vs claimed bound",
    )
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--max-span", type=int, default=6)
    p.add_argument("--phase-policy", choices=("none", "eigenvalue-one"), default="none")
    _add_common(p, {})
    p.set_defaults(
        run=run_cauchy_gaps,
        fields=["seed", "alpha", "beta", "levels", "max_span", "phase_policy"],
    )

    p = subs.add_parser(
        "separation",
        help="tail-state overlap decay, distances, and separating witnesses",
    )
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--threshold", type=float, default=1.9)
    p.add_argument("--search-limit", type=int, default=64)
    _add_common(p, {})
    p.set_defaults(
        run=run_separation,
        fields=["seed", "alpha", "beta", "start", "levels", "threshold", "search_limit"],
    )

    p = subs.add_parser(
        "fsigma-search",
        help="witness search over a unitary net for pulled-back state pairs",
    )
    p.add_argument("--dim", type=int, choices=(2, 4, 8, 16), default=2)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=0.4)
    p.add_argument("--net", choices=("auto", "exhaustive", "random"), default="auto")
    p.add_argument("--net-size", type=int, default=3000)
    p.add_argument("--test-elements", type=int, default=24)
    p.add_argument("--density-check", action="store_true")
    p.add_argument("--density-probes", type=int, default=100)
    _add_common(p, {})
    p.set_defaults(
        run=run_fsigma_search,
        fields=[
            "seed", "dim", "pairs", "epsilon", "net", "net_size",
            "test_elements", "density_check", "density_probes",
        ],
    )

    p = subs.add_parser(
        "product-test",
        help="running products of a factor family against sandwich bounds",
    )
    p.add_argument("--family", choices=tuple(_FAMILIES), required=True)
    p.add_argument("--terms", type=int, default=40)
    _add_common(p, {})
    p.set_defaults(run=run_product_test, fields=["seed", "family", "terms"])

    return parser


def _error_record(kind: str, exc: Exception, code: int) -> int:
    record = {"error": kind, "message": str(exc), "exit_code": code}
    if isinstance(exc, SizeLimitError) and exc.estimated_size is not None:
        record["estimated_size"] = float(exc.estimated_size)
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return EXIT_OK if code == 0 else EXIT_CONFIG
    try:
        rows, summary = args.run(args)
        config = _config_dict(args, args.fields)
        path = _resolve_output(args, args.command)
        write_artifact(path, args.command, config, rows, summary)
    except SizeLimitError as exc:
        return _error_record("size-limit", exc, EXIT_SIZE)
    except InvalidInputError as exc:
        return _error_record("config", exc, EXIT_CONFIG)
    except NumericalInvariantError as exc:
        return _error_record("numerical-invariant", exc, EXIT_NUMERIC)
    except OSError as exc:
        return _error_record("io", exc, EXIT_IO)
    print(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
