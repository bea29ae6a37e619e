"""Command-line front end: generate, fit, transform, classify, experiment.

Every subcommand is deterministic given its flags and seed. Logs go to
stderr; stdout carries human-readable summaries, or a single value under
--quiet where one is defined (classify prints the total cost). All
experiment parameters can come from a TOML config file, with command-line
flags taking precedence.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import __version__
from ._text import fmt
from .classify import KnnModel, confusion, save_confusion_csv
from .costmodel import load_cost_matrix
from .costmodel import total_cost as compute_total_cost
from .datagen import (
    RNG_FAMILY,
    GenerativeSpec,
    SeedStream,
    generate_case_study,
    load_dataset_csv,
    save_dataset_csv,
)
from .errors import CostdimError, FileFormatError, MissingCostMatrix
from .experiment import (
    ExperimentConfig,
    render_boxplot_svg,
    run_experiment,
    write_results_csv,
    write_summary_csv,
)
from .reducers import (
    COST_INFORMED,
    LDA,
    METHODS,
    PCA,
    fit_cost_informed,
    fit_lda,
    fit_pca,
    load_projection,
    save_projection,
    transform,
)
from .scatter import Dataset


def _log(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


# --- config file ------------------------------------------------------------

def _field(table: dict, dotted: str, expected, default):
    node = table
    parts = dotted.split(".")
    for part in parts[:-1]:
        node = node.get(part, {})
        if not isinstance(node, dict):
            raise FileFormatError(f"config field '{'.'.join(parts)}' is misplaced")
    if parts[-1] not in node:
        return default
    value = node[parts[-1]]
    if expected is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, expected if isinstance(expected, tuple) else (expected,)):
        raise FileFormatError(
            f"config field '{dotted}' must be {getattr(expected, '__name__', expected)}, "
            f"got {type(value).__name__}"
        )
    return value


def load_experiment_config(path) -> ExperimentConfig:
    """Parse a TOML experiment config; paths inside are relative to the file.

    Schema (all fields optional, defaults are the benchmark protocol):

        [experiment]
        replications = 500
        per_class_train = 50
        knn_k = 5
        dims = [3, 2, 1]
        methods = ["pca", "lda", "cost-informed"]
        seed = 0
        cost_matrix = "path/to/costs.csv"   # omitted -> built-in benchmark costs

        [generative]
        dim = 3
        points_per_class = 100
        iw_scale = 0.15      # scale matrix is iw_scale * identity
        iw_dof = 8.0
    """
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            table = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise FileFormatError(f"{path}: invalid TOML: {exc}") from None

    dim = _field(table, "generative.dim", int, 3)
    from .datagen import cube_vertex_means

    generative = GenerativeSpec(
        dim=dim,
        class_means=cube_vertex_means(dim),
        iw_scale=_field(table, "generative.iw_scale", float, 0.15) * np.eye(dim),
        iw_dof=_field(table, "generative.iw_dof", float, 8.0),
        points_per_class=_field(table, "generative.points_per_class", int, 100),
    )

    cost_path = _field(table, "experiment.cost_matrix", str, None)
    if cost_path is None:
        from .costmodel import case_study_cost_matrix

        cost_matrix = case_study_cost_matrix()
    else:
        cost_matrix = load_cost_matrix(path.parent / cost_path)

    dims = _field(table, "experiment.dims", list, [3, 2, 1])
    methods = _field(table, "experiment.methods", list, list(METHODS))
    try:
        return ExperimentConfig(
            replications=_field(table, "experiment.replications", int, 500),
            per_class_train=_field(table, "experiment.per_class_train", int, 50),
            knn_k=_field(table, "experiment.knn_k", int, 5),
            dims=tuple(dims),
            methods=tuple(methods),
            cost_matrix=cost_matrix,
            generative=generative,
            root_seed=_field(table, "experiment.seed", int, 0),
        )
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


# --- subcommands ------------------------------------------------------------

def cmd_generate(args) -> int:
    spec = GenerativeSpec(
        iw_scale=args.iw_scale * np.eye(3),
        iw_dof=args.iw_dof,
        points_per_class=args.points_per_class,
    )
    data, _ = generate_case_study(spec, SeedStream(args.seed))
    save_dataset_csv(data, args.out)
    _say(
        args,
        f"wrote {args.out}: N={data.n_points} D={data.dim} K={data.class_count}",
    )
    return 0


def _fit_projection(args, data: Dataset):
    if args.method == COST_INFORMED:
        if args.costs is None:
            raise MissingCostMatrix(
                "method 'cost-informed' requires --costs <file>"
            )
        return fit_cost_informed(data, load_cost_matrix(args.costs))
    if args.method == LDA:
        return fit_lda(data)
    return fit_pca(data)


def cmd_fit(args) -> int:
    data = load_dataset_csv(args.data)
    projection = _fit_projection(args, data)
    save_projection(projection, args.out)
    spectrum = " ".join(fmt(v) for v in projection.eigenvalues)
    _say(args, f"{projection.method} eigenvalues: {spectrum}")
    return 0


def cmd_transform(args) -> int:
    data = load_dataset_csv(args.data)
    projection = load_projection(args.projection)
    reduced = transform(projection, data, args.dim)
    save_dataset_csv(reduced, args.out)
    _say(args, f"wrote {args.out}: N={reduced.n_points} D={reduced.dim}")
    return 0


def cmd_classify(args) -> int:
    train = load_dataset_csv(args.train)
    test = load_dataset_csv(args.test)
    class_count = max(train.class_count, test.class_count)
    train = Dataset(train.features, train.labels, class_count)
    test = Dataset(test.features, test.labels, class_count)
    if args.projection is not None:
        projection = load_projection(args.projection)
        train = transform(projection, train, args.dim)
        test = transform(projection, test, args.dim)
    costs = load_cost_matrix(args.costs)
    model = KnnModel(train.features, train.labels, args.k, class_count)
    cm = confusion(model, test)
    cost = compute_total_cost(cm, costs)
    if args.out is not None:
        save_confusion_csv(cm, args.out)
        _say(args, f"wrote confusion matrix to {args.out}")
    if args.quiet:
        print(fmt(cost))
    else:
        print(f"total misclassification cost: {fmt(cost)}")
    return 0


def cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config)
    if args.replications is not None:
        cfg = dataclasses.replace(cfg, replications=args.replications)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, root_seed=args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _log(
        args,
        f"experiment: replications={cfg.replications} rng={RNG_FAMILY} "
        f"seed={cfg.root_seed} threads={args.threads}",
    )
    results, summary = run_experiment(cfg, threads=args.threads)
    write_results_csv(results, out_dir / "results.csv")
    write_summary_csv(summary, out_dir / "summary.csv")
    if args.svg:
        (out_dir / "boxplot.svg").write_text(
            render_boxplot_svg(summary), encoding="utf-8"
        )
    _log(args, f"wrote results.csv and summary.csv to {out_dir}")
    for (method, d), stats in summary.items():
        _say(args, f"{method} d={d}: median cost {fmt(stats.median)}")
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costdim",
        description=(
            "Cost-informed linear dimensionality reduction: fit projections, "
            "classify with KNN under a misclassification-cost matrix, and run "
            "the synthetic benchmark."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress chatter")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "generate", parents=[common], help="write a synthetic benchmark dataset"
    )
    p.add_argument("--out", required=True, help="output dataset CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points-per-class", type=int, default=100)
    p.add_argument("--iw-scale", type=float, default=0.15,
                   help="covariance prior scale (times identity)")
    p.add_argument("--iw-dof", type=float, default=8.0,
                   help="covariance prior degrees of freedom")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", parents=[common], help="fit a projection to a dataset")
    p.add_argument("--data", required=True, help="input dataset CSV")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--costs", help="cost matrix CSV (required for cost-informed)")
    p.add_argument("--out", required=True, help="output projection file")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser(
        "transform", parents=[common], help="project a dataset to d dimensions"
    )
    p.add_argument("--data", required=True)
    p.add_argument("--projection", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser(
        "classify",
        parents=[common],
        help="KNN-classify a test set and report the total misclassification cost",
    )
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--costs", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--projection", help="optional projection to apply first")
    p.add_argument("--dim", type=int, default=1,
                   help="target dimensionality when --projection is given")
    p.add_argument("--out", help="optional confusion-matrix CSV")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser(
        "experiment", parents=[common], help="run the Monte-Carlo benchmark"
    )
    p.add_argument("--config", required=True, help="TOML experiment config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads (never changes outputs)")
    p.add_argument("--svg", action="store_true", help="also emit boxplot.svg")
    p.add_argument("--replications", type=int, help="override config replications")
    p.add_argument("--seed", type=int, help="override config seed")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CostdimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
