"""Command-line interface.

Subcommands mirror the pipeline stages::

    advorder synth      write a seeded synthetic corpus
    advorder prune      print surviving LF names + dependency diagnostics
    advorder label      print per-sample probabilistic labels
    advorder intervals  print per-sample confidence intervals
    advorder curate     print the nested-dataset manifest
    advorder validate   print the validation report (needs --truth)
    advorder run        full pipeline; writes an artifact directory

An invalid adversarial ordering is a reported finding, not a failure:
``run`` and ``validate`` exit 0 either way.  Nonzero exits are reserved
for operational errors (bad files, bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .kernels import ConvergenceError
from .labeling import GENERATIVE, MAJORITY_VOTE
from .matrix import (
    GroundTruth,
    LabelMatrix,
    MatrixFormatError,
    load_corpus,
    load_ground_truth,
)
from .pipeline import (
    PipelineConfig,
    prune_with_diagnostics,
    run_comparatives,
    run_pipeline,
    write_artifacts,
)
from .synth import LFSpec, SynthConfig, demo_config, generate

_LABELER_FLAGS = {"majority": MAJORITY_VOTE, "generative": GENERATIVE}


def _add_input_flags(p: argparse.ArgumentParser, with_truth: bool = True) -> None:
    p.add_argument("--input", required=True, help="label matrix (CSV or JSON)")
    p.add_argument("--fmt", choices=("csv", "json"), default=None,
                   help="input format (default: by file extension)")
    if with_truth:
        p.add_argument("--truth", default=None,
                       help="true labels (CSV column or JSON list)")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=float, default=0.5,
                   help="correlation threshold for LF dependence (default 0.5)")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="interval significance level (default 0.05)")
    p.add_argument("--gamma", type=float, default=0.05,
                   help="ordering significance threshold (default 0.05)")
    p.add_argument("--num-datasets", type=int, default=10, metavar="N",
                   help="number of nested datasets (default 10)")
    p.add_argument("--labeler", choices=sorted(_LABELER_FLAGS), default="generative",
                   help="weighting scheme (default generative)")
    p.add_argument("--skip-pruning", action="store_true",
                   help="use all LFs instead of the independent subset")


def _config_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        delta=args.delta,
        alpha=args.alpha,
        gamma=args.gamma,
        num_datasets=args.num_datasets,
        labeler=_LABELER_FLAGS[args.labeler],
        skip_pruning=args.skip_pruning,
    )


def _load_inputs(args) -> tuple[LabelMatrix, GroundTruth | None]:
    matrix, embedded = load_corpus(args.input, args.fmt)
    truth = embedded
    if getattr(args, "truth", None):
        truth = load_ground_truth(args.truth, matrix)
    return matrix, truth


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_synth(args) -> int:
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        specs = tuple(
            LFSpec(
                accuracy=s["accuracy"],
                abstain_rate=s.get("abstain_rate", 0.0),
                duplicate_of=s.get("duplicate_of"),
                hard_stratum_accuracy=s.get("hard_stratum_accuracy"),
            )
            for s in raw["lf_specs"]
        )
        cfg = SynthConfig(
            num_samples=raw["num_samples"],
            num_classes=raw["num_classes"],
            class_prior=tuple(raw["class_prior"]),
            lf_specs=specs,
            hard_fraction=raw.get("hard_fraction", 0.0),
            seed=args.seed if args.seed is not None else raw.get("seed", 0),
        )
    else:
        cfg = demo_config(
            num_samples=args.samples,
            seed=args.seed if args.seed is not None else 0,
        )
    matrix, truth, _ = generate(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        (out / "corpus.json").write_text(
            json.dumps(matrix.to_json_obj(truth), indent=2, sort_keys=True) + "\n"
        )
        print(f"wrote {out / 'corpus.json'}")
    else:
        (out / "matrix.csv").write_text(matrix.to_csv_text())
        (out / "truth.csv").write_text(
            "true_label\n" + "\n".join(str(int(v)) for v in truth.labels) + "\n"
        )
        print(f"wrote {out / 'matrix.csv'} and {out / 'truth.csv'}")
    return 0


def _cmd_prune(args) -> int:
    matrix, _ = _load_inputs(args)
    diag = prune_with_diagnostics(matrix, args.delta)
    _emit(diag.to_json_obj(matrix.lf_names), args.out)
    return 0


def _cmd_label(args) -> int:
    matrix, _ = _load_inputs(args)
    result = run_pipeline(matrix, _config_from_args(args))
    records = [
        {
            "index": i,
            "label": int(result.labels[i]),
            "confidence": float(result.confidences[i]),
            "n": int(result.vote_counts[i]),
        }
        for i in range(matrix.num_samples)
    ]
    _emit(records, args.out)
    return 0


def _cmd_intervals(args) -> int:
    matrix, _ = _load_inputs(args)
    result = run_pipeline(matrix, _config_from_args(args))
    records = [
        {
            "index": i,
            "label": int(result.labels[i]),
            "confidence": float(result.confidences[i]),
            "n": iv.n,
            "s": iv.s,
            "theta_l": iv.lower,
            "theta_u": iv.upper,
        }
        for i, iv in enumerate(result.intervals)
    ]
    _emit(records, args.out)
    return 0


def _cmd_curate(args) -> int:
    matrix, _ = _load_inputs(args)
    result = run_pipeline(matrix, _config_from_args(args))
    seq = result.sequence
    obj = {
        "N": seq.num_datasets,
        "ordering": list(seq.ordering),
        "datasets": [
            {
                "n": n,
                "size": seq.prefix_sizes[n - 1],
                "indices": list(seq.dataset_indices(n)),
                "labels": list(seq.dataset_labels(n)),
            }
            for n in range(1, seq.num_datasets + 1)
        ],
    }
    _emit(obj, args.out)
    return 0


def _cmd_validate(args) -> int:
    matrix, truth = _load_inputs(args)
    if truth is None:
        print("error: validate needs --truth (or truth embedded in the corpus)",
              file=sys.stderr)
        return 2
    result = run_pipeline(matrix, _config_from_args(args), truth)
    _emit(result.report.to_json_obj(), args.out)
    if args.plot_data:
        lines = ["fraction,accuracy,halfwidth"]
        n_sets = result.sequence.num_datasets
        for n in range(n_sets):
            lines.append(
                f"{(n + 1) / n_sets:.6f},"
                f"{result.report.accuracies[n]:.6f},"
                f"{result.report.ci_halfwidths[n]:.6f}"
            )
        Path(args.plot_data).write_text("\n".join(lines) + "\n")
    return 0


def _cmd_run(args) -> int:
    matrix, truth = _load_inputs(args)
    config = _config_from_args(args)
    result = run_pipeline(matrix, config, truth)
    table = None
    if args.comparatives:
        if truth is None:
            print("error: --comparatives needs ground truth", file=sys.stderr)
            return 2
        table = run_comparatives(matrix, config, truth)
    written = write_artifacts(result, args.out, comparatives=table)
    for name in written:
        print(f"wrote {Path(args.out) / name}")
    if result.report is not None:
        print(
            f"verdict: {result.report.verdict} "
            f"(rho={result.report.rho:.3f}, p={result.report.p_value:.3f})"
        )
    if table is not None:
        print("comparatives (rho, p, verdict):")
        for cell in table.cells:
            print(
                f"  {cell.ordering_key:>15s} / {cell.lf_subset:<16s} "
                f"{cell.rho:+.3f}  {cell.p_value:.3f}  {cell.verdict}"
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advorder",
        description="Curate adversarially ordered datasets from weak labels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a seeded synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--seed", type=int, default=None, help="64-bit RNG seed")
    p.add_argument("--config", default=None, help="JSON generator config")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("prune", help="select independent LFs")
    _add_input_flags(p, with_truth=False)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_prune)

    for name, fn, help_text in (
        ("label", _cmd_label, "combine weak labels into probabilistic labels"),
        ("intervals", _cmd_intervals, "attach confidence intervals"),
        ("curate", _cmd_curate, "emit the nested-dataset manifest"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_input_flags(p, with_truth=False)
        _add_config_flags(p)
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")
        p.set_defaults(func=fn)

    p = sub.add_parser("validate", help="validate the adversarial ordering")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.add_argument("--plot-data", default=None, help="also write plot-data CSV here")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("run", help="full pipeline into an artifact directory")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--out", required=True, help="artifact directory")
    p.add_argument("--comparatives", action="store_true",
                   help="also tabulate the four comparative orderings")
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except MatrixFormatError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
