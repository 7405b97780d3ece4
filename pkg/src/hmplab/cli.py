"""Command line front end.

Subcommands generate matching families, run the quantum fingerprint protocol,
search for cheapest classical protocols, run extraction accounting, and sweep
cost comparisons over n. Output is JSON (default) or CSV; every run is
reproducible from --seed. Exit codes: 0 success, 2 invalid values, 3 search
or generation gave up within its declared limits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence

from .classical import (
    SearchSpaceError,
    bruteforce_min_cost,
    evaluate_protocol,
    parity_protocol,
    protocol_from_doc,
    protocol_to_doc,
    verbatim_protocol,
)
from .families import (
    cyclic_family,
    dump_family,
    load_family,
    projective_plane_family,
    random_girth_family,
    save_family,
)
from .information import information_accounting
from .model import HmpInstance, encode_matching_index, relation_holds
from .quantum import cost_report, run_quantum_smp
from .seeding import derive_seed


class GiveUp(Exception):
    """Generation or search stopped within its declared limits (exit 3)."""


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def emit(rows: List[Dict], config: Dict, fieldnames: Sequence[str], args) -> None:
    """Serialize rows as JSON (with config and a timestamp) or CSV (config as
    a leading comment so the data bytes stay deterministic)."""
    if args.format == "json":
        doc = {"config": config, "generated_at": _utc_now(), "rows": rows}
        _write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return
    buf = io.StringIO()
    buf.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _write_text(buf.getvalue(), args.out)


def _plot_path(args) -> str:
    if args.out is None:
        raise ValueError("--plot needs --out so the figure has a sibling path")
    return os.path.splitext(args.out)[0] + ".png"


def _rates_text(rates: Dict) -> str:
    return ";".join(f"{k}={float(v):.6g}" for k, v in sorted(rates.items()))


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen_family(args) -> int:
    if args.construction == "cyclic":
        if args.n is None:
            raise ValueError("cyclic construction needs --n")
        family = cyclic_family(args.n)
    elif args.construction == "projective-plane":
        if args.q is None:
            raise ValueError("projective-plane construction needs --q")
        family = projective_plane_family(args.q)
    else:
        if args.n is None or args.t is None or args.d is None:
            raise ValueError("random-girth construction needs --n, --t and --d")
        rng = derive_seed(args.seed, "gen-family", "random-girth", args.n, args.t, args.d)
        result = random_girth_family(args.n, args.t, args.d, rng)
        if not result.found:
            raise GiveUp(
                f"no family found after {result.attempts} attempts: {result.message}"
            )
        family = result.family
    if args.out is None:
        sys.stdout.write(dump_family(family))
    else:
        save_family(family, args.out)
    return 0


def cmd_run_quantum(args) -> int:
    family = load_family(args.family)
    n = family.n
    t = len(family.matchings)
    k = args.k
    r = max(1, (t - 1).bit_length())
    rng = derive_seed(args.seed, "run-quantum", os.path.basename(args.family), args.samples)
    import random as _random

    gen = _random.Random(rng)

    fixed_alphas = None
    if args.alphas is not None:
        fixed_alphas = tuple(args.alphas.split(","))
    if args.c is not None and len(args.c) != n:
        raise ValueError(f"--c must be {n} bits for this family")

    rows = []
    for idx in range(args.samples):
        if fixed_alphas is not None:
            alphas = fixed_alphas
        else:
            alphas = encode_matching_index(gen.randrange(t) + 1, r, k - 1)
        c = args.c if args.c is not None else "".join(gen.choice("01") for _ in range(n))
        instance = HmpInstance(n=n, k=k, r=r, alphas=alphas, c=c)
        answer, costs = run_quantum_smp(instance, family, gen)
        rows.append(
            {
                "sample": idx,
                "alphas": "|".join(alphas),
                "c": c,
                "i1": answer.i1,
                "i2": answer.i2,
                "e": answer.e,
                "valid": relation_holds(instance, family, answer),
                "qubits": costs.qubits,
                "classical_bits": costs.classical_bits,
                "total_bits": costs.total,
            }
        )
    config = {
        "command": "run-quantum",
        "family": os.path.basename(args.family),
        "n": n,
        "t": t,
        "k": k,
        "r": r,
        "samples": args.samples,
        "seed": args.seed,
    }
    emit(rows, config, list(rows[0].keys()), args)
    return 0


def cmd_bruteforce(args) -> int:
    family = load_family(args.family)
    result = bruteforce_min_cost(family, args.epsilon)
    report = evaluate_protocol(result.protocol, family)
    rows = [
        {
            "n": family.n,
            "t": len(family.matchings),
            "epsilon": args.epsilon,
            "min_bits": result.cost,
            "worst_case_error": float(report.worst_case_error),
            "average_error": float(report.average_error),
            "nodes_explored": result.nodes_explored,
            "label": result.protocol.label,
        }
    ]
    if args.protocol_out is not None:
        doc = protocol_to_doc(result.protocol)
        _write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.protocol_out)
    config = {
        "command": "bruteforce-classical",
        "family": os.path.basename(args.family),
        "epsilon": args.epsilon,
    }
    emit(rows, config, list(rows[0].keys()), args)
    return 0


def cmd_extract(args) -> int:
    family = load_family(args.family)
    if args.protocol is not None:
        with open(args.protocol, "r", encoding="utf-8") as fh:
            protocol = protocol_from_doc(json.load(fh))
    elif args.pins is not None:
        pins = []
        for part in args.pins.split(","):
            u, _, v = part.partition("-")
            pins.append((int(u), int(v)))
        protocol = parity_protocol(family, pins)
    else:
        protocol = verbatim_protocol(family)
    rng = derive_seed(args.seed, "extract", os.path.basename(args.family), args.mode)
    report = information_accounting(
        protocol,
        family,
        mode=args.mode,
        rng=rng,
        samples=args.samples,
        epsilon=args.epsilon,
    )
    row = {
        "mode": report.mode,
        "count": report.count,
        "protocol": protocol.label,
        "cost_bits": protocol.cost,
        "bundle_bits": report.bundle_bits,
        "s_min": report.s_min,
        "s_max": report.s_max,
        "mean_s": report.mean_s,
        "entropy_w": report.entropy_w,
        "mutual_information_bits": report.mutual_information_bits,
        "bundle_ceiling_ok": report.bundle_ceiling_ok,
        "success_rates": _rates_text(report.success_rates),
        "s_counts": _rates_text(report.s_counts),
        "span_floor": report.span_floor,
        "meets_span_floor": report.meets_span_floor,
        "xi": report.xi,
    }
    config = {
        "command": "extract",
        "family": os.path.basename(args.family),
        "mode": args.mode,
        "samples": args.samples,
        "seed": args.seed,
        "protocol": protocol.label,
    }
    emit([row], config, list(row.keys()), args)
    if args.plot:
        from .plotting import render_extraction_figure

        render_extraction_figure(report.s_counts, report.success_rates, _plot_path(args))
    return 0


def cmd_sweep(args) -> int:
    ns = [int(x) for x in args.n_values.split(",")]
    rows = []
    import random as _random

    for n in ns:
        family = cyclic_family(n)
        t = len(family.matchings)
        r = max(1, (t - 1).bit_length())
        costs = cost_report(n, t)
        gen = _random.Random(derive_seed(args.seed, "sweep", n))
        good = 0
        for _ in range(args.quantum_samples):
            alphas = encode_matching_index(gen.randrange(t) + 1, r, 1)
            c = "".join(gen.choice("01") for _ in range(n))
            instance = HmpInstance(n=n, k=2, r=r, alphas=alphas, c=c)
            answer, _ = run_quantum_smp(instance, family, gen)
            good += relation_holds(instance, family, answer)
        classical_bits = None
        if n <= 6:
            classical_bits = bruteforce_min_cost(family, args.epsilon).cost
        rows.append(
            {
                "n": n,
                "t": t,
                "quantum_qubits": costs.qubits,
                "quantum_classical_bits": costs.classical_bits,
                "quantum_total_bits": costs.total,
                "quantum_success_rate": good / args.quantum_samples,
                "classical_min_bits": classical_bits,
            }
        )
    config = {
        "command": "sweep",
        "n_values": ns,
        "epsilon": args.epsilon,
        "quantum_samples": args.quantum_samples,
        "seed": args.seed,
    }
    emit(rows, config, list(rows[0].keys()), args)
    if args.plot:
        from .plotting import render_sweep_figure

        render_sweep_figure(rows, _plot_path(args))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmplab",
        description="hidden-matching communication lab: families, quantum runs, "
        "classical search, extraction accounting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("gen-family", help="generate and save a matching family")
    p.add_argument(
        "--construction",
        choices=("cyclic", "projective-plane", "random-girth"),
        required=True,
    )
    p.add_argument("--n", type=int, default=None, help="number of vertices / bits of c")
    p.add_argument("--q", type=int, default=None, help="prime order for projective plane")
    p.add_argument("--t", type=int, default=None, help="number of matchings")
    p.add_argument("--d", type=int, default=None, help="girth exponent (girth must exceed 2d)")
    common(p)
    p.set_defaults(func=cmd_gen_family)

    p = sub.add_parser("run-quantum", help="run the fingerprint protocol on sampled instances")
    p.add_argument("--family", required=True, help="family JSON path")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--k", type=int, default=2, help="number of players (default 2)")
    p.add_argument("--alphas", default=None, help="fixed index strings, comma separated")
    p.add_argument("--c", default=None, help="fixed c bit string")
    common(p)
    p.set_defaults(func=cmd_run_quantum)

    p = sub.add_parser("bruteforce-classical", help="exact minimum one-way cost (k=2, n<=6)")
    p.add_argument("--family", required=True)
    p.add_argument("--epsilon", type=float, default=0.0, help="worst-case error budget")
    p.add_argument("--protocol-out", default=None, help="save the witness protocol JSON here")
    common(p)
    p.set_defaults(func=cmd_bruteforce)

    p = sub.add_parser("extract", help="extraction accounting for a protocol's bundle")
    p.add_argument("--family", required=True)
    p.add_argument("--protocol", default=None, help="protocol doc JSON (default: verbatim)")
    p.add_argument("--pins", default=None, help="build a pinned-parity protocol, e.g. 1-4,1-5")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--samples", type=int, default=2000, help="c samples in sampled mode")
    p.add_argument("--epsilon", type=float, default=None, help="error level for the xi readout")
    p.add_argument("--plot", action="store_true", help="render a PNG next to --out")
    common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sweep", help="cost comparison over n for the cyclic families")
    p.add_argument("--n-values", default="2,4,6", help="comma separated even n list")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--quantum-samples", type=int, default=200)
    p.add_argument("--plot", action="store_true", help="render a PNG next to --out")
    common(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SearchSpaceError, GiveUp) as exc:
        print(f"gave up: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
