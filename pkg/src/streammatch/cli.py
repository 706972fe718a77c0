"""Command-line front end.

Subcommands: run, gen hard|random, rs build|certify|lambda, oracle,
experiment.  Exit codes: 0 success, 1 usage error, 2 input format
error, 3 certification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import asdict

from .algorithms import MetaParams, predicted_factor, two_pass
from .graph import BipartiteGraph, GraphFormatError, read_graph
from .instances import gen_hard_instance, gen_random_planted
from .oracle import maximum_matching_size
from .rs import ColouringParams, build_rs_instance, certify_rs, gen_lambda

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_CERT = 3

CSV_HEADER = [
    "mode", "d", "p", "trial", "seed", "predicted", "realized", "mu",
    "first_pass", "sampled", "s_l", "s_r", "candidates", "q", "final",
    "epsilon", "peak_space", "passes", "status",
]


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; usage errors are 1 here
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_p(text: str) -> float:
    """Sampling probability; accepts the literals sqrt2-1 and 2sqrt2-2."""
    cleaned = text.strip().lower()
    if cleaned == "sqrt2-1":
        return math.sqrt(2.0) - 1.0
    if cleaned == "2sqrt2-2":
        return 2.0 * math.sqrt(2.0) - 2.0
    try:
        return float(cleaned)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse p value {text!r}") from exc


def _parse_p_list(text: str) -> list[float]:
    """Comma list of p values, or start:stop:step for a grid."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be start:stop:step")
        start, stop, step = (float(t) for t in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + 1e-12:
                break
            values.append(round(v, 12))
            k += 1
        return values
    return [parse_p(tok) for tok in text.split(",") if tok.strip()]


def _parse_d_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse d list {text!r}") from exc
    if not values or any(d < 1 for d in values):
        raise argparse.ArgumentTypeError("d values must be positive integers")
    return values


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def build_parser() -> _Parser:
    parser = _Parser(prog="streammatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the two-pass algorithm on one instance")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="graph file in the text format")
    src.add_argument("--hard-n", type=int, metavar="N",
                     help="generate the layered worst case in-process")
    p_run.add_argument("--d", type=int, default=1)
    p_run.add_argument("--p", type=parse_p, default="sqrt2-1")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--no-oracle", action="store_true",
                       help="skip the exact oracle (no realized ratio)")
    p_run.add_argument("--format", choices=["text", "csv"], default="text")
    p_run.set_defaults(func=cmd_run)

    p_gen = sub.add_parser("gen", help="generate instance files")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    p_hard = gen_sub.add_parser("hard", help="layered worst case")
    p_hard.add_argument("--N", type=int, required=True)
    p_hard.add_argument("--out", required=True)
    p_hard.set_defaults(func=cmd_gen_hard)
    p_rand = gen_sub.add_parser("random", help="planted random graph")
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--density", type=float, default=0.001)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("--out", required=True)
    p_rand.set_defaults(func=cmd_gen_random)

    p_rs = sub.add_parser("rs", help="induced-matching constructions")
    rs_sub = p_rs.add_subparsers(dest="kind", required=True)
    p_build = rs_sub.add_parser("build", help="build, certify, and write the construction")
    p_build.add_argument("--m", type=int, required=True)
    p_build.add_argument("--k", type=int, required=True)
    p_build.add_argument("--out", required=True, help="output directory")
    p_build.set_defaults(func=cmd_rs_build)
    p_cert = rs_sub.add_parser("certify", help="build and certify, print the verdicts")
    p_cert.add_argument("--m", type=int, required=True)
    p_cert.add_argument("--k", type=int, required=True)
    p_cert.set_defaults(func=cmd_rs_certify)
    p_lambda = rs_sub.add_parser("lambda", help="sample a padded hard instance")
    p_lambda.add_argument("--m", type=int, required=True)
    p_lambda.add_argument("--k", type=int, required=True)
    p_lambda.add_argument("--plus", action="store_true",
                          help="overlay a perfect matching streamed first")
    p_lambda.add_argument("--seed", type=int, default=0)
    p_lambda.add_argument("--subsample-size", type=int, default=None)
    p_lambda.add_argument("--designated", type=int, default=0)
    p_lambda.add_argument("--out", required=True, help="graph file; manifest goes next to it")
    p_lambda.set_defaults(func=cmd_rs_lambda)

    p_oracle = sub.add_parser("oracle", help="print the maximum matching size of a file")
    p_oracle.add_argument("--input", required=True)
    p_oracle.set_defaults(func=cmd_oracle)

    p_exp = sub.add_parser("experiment", help="sweep (d, p) grids to CSV")
    p_exp.add_argument("--d", type=_parse_d_list, default="1",
                       help="comma list of degree caps")
    p_exp.add_argument("--p", type=_parse_p_list, default="sqrt2-1",
                       help="comma list of p values or start:stop:step grid")
    p_exp.add_argument("--analytic", action="store_true",
                       help="emit predicted_factor only, no instances")
    esrc = p_exp.add_mutually_exclusive_group()
    esrc.add_argument("--input", help="fixed graph file for every trial")
    esrc.add_argument("--hard-n", type=int, metavar="N")
    esrc.add_argument("--planted-n", type=int, metavar="N")
    p_exp.add_argument("--density", type=float, default=0.001,
                       help="extra-edge density for --planted-n")
    p_exp.add_argument("--trials", type=int, default=1)
    p_exp.add_argument("--seed-base", type=int, default=0)
    p_exp.add_argument("--no-oracle", action="store_true")
    p_exp.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def _coerce_p(value) -> float:
    # argparse applies type= only to strings given on the command line;
    # string defaults are coerced here
    return parse_p(value) if isinstance(value, str) else value


def _report_row(mode: str, d: int, p: float, trial, seed, report, predicted: float) -> list[str]:
    realized = None
    if report.mu:
        realized = report.final_size / report.mu
    return [
        mode, _fmt(d), _fmt(p), _fmt(trial), _fmt(seed), _fmt(predicted),
        _fmt(realized), _fmt(report.mu), _fmt(report.first_pass_size),
        _fmt(report.sampled_size), _fmt(report.wing_sizes[0]),
        _fmt(report.wing_sizes[1]), _fmt(report.num_candidates),
        _fmt(report.num_augmentations), _fmt(report.final_size),
        _fmt(report.epsilon), _fmt(report.peak_space), _fmt(report.passes), "ok",
    ]


def cmd_run(args) -> int:
    p = _coerce_p(args.p)
    params = MetaParams(p=p, d=args.d, seed=args.seed)
    if args.hard_n is not None:
        source = gen_hard_instance(args.hard_n)
        mu = source.mu
        mode = "hard"
    else:
        source = read_graph(args.input)
        mu = None if args.no_oracle else maximum_matching_size(source)
        mode = "file"
    _, report = two_pass(source, params, mu=mu)
    predicted = predicted_factor(p, args.d)

    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerow(_report_row(mode, args.d, p, 0, args.seed, report, predicted))
        return EXIT_OK

    for key, value in asdict(report).items():
        print(f"{key} {_fmt(value)}")
    print(f"predicted_factor {_fmt(predicted)}")
    if report.mu:
        print(f"realized_ratio {_fmt(report.final_size / report.mu)}")
    return EXIT_OK


def cmd_gen_hard(args) -> int:
    instance = gen_hard_instance(args.N)
    _write_streamable(args.out, instance, f"layered worst case N={args.N}")
    print(f"wrote {args.out}: {instance.n_a}+{instance.n_b} vertices, "
          f"{instance.num_edges} edges")
    return EXIT_OK


def cmd_gen_random(args) -> int:
    graph, planted = gen_random_planted(args.n, args.density, args.seed)
    _write_streamable(
        args.out, graph,
        f"planted random graph n={args.n} density={args.density} seed={args.seed}",
    )
    print(f"wrote {args.out}: {graph.n_a}+{graph.n_b} vertices, "
          f"{graph.num_edges} edges, planted mu={len(planted)}")
    return EXIT_OK


def _write_streamable(path: str, source, comment: str) -> None:
    import numpy as np

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {comment}\n")
        fh.write(f"{source.n_a} {source.n_b} {source.num_edges}\n")
        for ea, eb in source.stream_blocks():
            np.savetxt(fh, np.column_stack((ea, eb)), fmt="%d")


def _manifest_text(instance, cert) -> str:
    lines = [
        f"m {instance.params.m}",
        f"k {instance.params.k}",
        f"delta {instance.params.delta}",
        f"w {instance.params.w}",
        f"shift {instance.params.shift}",
        f"n_side {instance.n_side}",
        f"family_size {len(instance.family)}",
        f"family {' '.join('{' + ','.join(str(i) for i in sorted(s)) + '}' for s in instance.family)}",
    ]
    return "\n".join(lines) + "\n" + cert.to_text() + "\n"


def cmd_rs_build(args) -> int:
    params = ColouringParams(args.m, args.k)
    instance = build_rs_instance(params)
    cert = certify_rs(instance)
    os.makedirs(args.out, exist_ok=True)
    graph_path = os.path.join(args.out, "graph.txt")
    _write_streamable(graph_path, instance.to_graph(),
                      f"induced-matching union graph m={args.m} k={args.k}")
    manifest_path = os.path.join(args.out, "manifest.txt")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write(_manifest_text(instance, cert))
    print(f"wrote {graph_path} and {manifest_path}")
    if not cert.ok:
        print("certification FAILED", file=sys.stderr)
        return EXIT_CERT
    print(f"certified: {len(instance.family)} matching pairs, "
          f"{instance.num_edges()} edges")
    return EXIT_OK


def cmd_rs_certify(args) -> int:
    params = ColouringParams(args.m, args.k)
    instance = build_rs_instance(params)
    cert = certify_rs(instance)
    print(_manifest_text(instance, cert), end="")
    return EXIT_OK if cert.ok else EXIT_CERT


def cmd_rs_lambda(args) -> int:
    params = ColouringParams(args.m, args.k)
    instance = build_rs_instance(params)
    cert = certify_rs(instance)
    if not cert.ok:
        print("certification FAILED; refusing to sample", file=sys.stderr)
        return EXIT_CERT
    lam = gen_lambda(
        instance,
        plus=args.plus,
        seed=args.seed,
        subsample_size=args.subsample_size,
        designated=args.designated,
    )
    kind = "padded instance with overlay" if args.plus else "padded instance"
    _write_streamable(args.out, lam.graph,
                      f"{kind} m={args.m} k={args.k} seed={args.seed}")
    manifest_path = args.out + ".manifest.txt"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write(_manifest_text(instance, cert))
        fh.write(f"plus {lam.plus}\n")
        fh.write(f"seed {lam.seed}\n")
        fh.write(f"special_index {lam.special_index}\n")
        fh.write(f"subsample_size {lam.subsample_size}\n")
        fh.write(f"pads {lam.pad_a} {lam.pad_b}\n")
        fh.write(f"mu_witness {lam.mu_witness}\n")
        fh.write(f"mu {_fmt(lam.mu)}\n")
        if lam.overlay is not None:
            fh.write(f"overlay_size {len(lam.overlay)}\n")
    print(f"wrote {args.out} and {manifest_path}: "
          f"{lam.graph.n_a}+{lam.graph.n_b} vertices, {lam.graph.num_edges} edges")
    return EXIT_OK


def cmd_oracle(args) -> int:
    graph = read_graph(args.input)
    print(maximum_matching_size(graph))
    return EXIT_OK


def cmd_experiment(args) -> int:
    d_values = _parse_d_list(args.d) if isinstance(args.d, str) else args.d
    p_values = _parse_p_list(args.p) if isinstance(args.p, str) else args.p
    if args.trials < 1:
        print("streammatch: error: --trials must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if not args.analytic and not (args.input or args.hard_n or args.planted_n):
        print("streammatch: error: experiment needs --analytic or an instance source",
              file=sys.stderr)
        return EXIT_USAGE

    file_graph = None
    file_mu = None
    if args.input:
        file_graph = read_graph(args.input)
        if not args.no_oracle:
            file_mu = maximum_matching_size(file_graph)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for d in d_values:
        for p in p_values:
            if args.analytic:
                try:
                    predicted = predicted_factor(p, d)
                except ValueError as exc:
                    writer.writerow(["analytic", _fmt(d), _fmt(p)] + [""] * 15
                                    + [f"error: {exc}"])
                    continue
                writer.writerow(
                    ["analytic", _fmt(d), _fmt(p), "", "", _fmt(predicted)]
                    + [""] * 12 + ["ok"]
                )
                continue
            for trial in range(args.trials):
                seed = args.seed_base + trial
                try:
                    row = _experiment_trial(args, d, p, trial, seed, file_graph, file_mu)
                except Exception as exc:  # flagged row, sweep continues
                    row = (["hard" if args.hard_n else "planted" if args.planted_n
                            else "file", _fmt(d), _fmt(p), _fmt(trial), _fmt(seed)]
                           + [""] * 13 + [f"error: {exc}"])
                writer.writerow(row)

    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _experiment_trial(args, d: int, p: float, trial: int, seed: int,
                      file_graph: BipartiteGraph | None, file_mu: int | None) -> list[str]:
    params = MetaParams(p=p, d=d, seed=seed)
    if args.hard_n:
        source = gen_hard_instance(args.hard_n)
        mu = source.mu
        mode = "hard"
    elif args.planted_n:
        source, planted = gen_random_planted(args.planted_n, args.density, seed)
        mu = len(planted)
        mode = "planted"
    else:
        source = file_graph
        mu = file_mu
        mode = "file"
    _, report = two_pass(source, params, mu=mu)
    return _report_row(mode, d, p, trial, seed, report, predicted_factor(p, d))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"streammatch: input format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"streammatch: input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:
        print(f"streammatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
