"""Monte-Carlo benchmark harness: replicate, fit, reduce, classify, score.

Each replication owns the seed substream (root, replication_id): child 0
generates the dataset, child 1 drives the train/test split. All methods
inside a replication therefore see the same data and the same split,
isolating method effects. Results are keyed and ordered by replication
id, so the worker count never changes a single emitted byte.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._text import fmt
from .classify import ConfusionMatrix, KnnModel, confusion
from .costmodel import CostMatrix, total_cost
from .datagen import (
    GenerativeSpec,
    SeedStream,
    generate_case_study,
    stratified_split,
)
from .errors import EmptyInput
from .reducers import (
    COST_INFORMED,
    LDA,
    METHODS,
    PCA,
    Projection,
    fit_cost_informed,
    fit_lda,
    fit_pca,
    transform,
)


@dataclass(frozen=True)
class ExperimentConfig:
    replications: int
    per_class_train: int
    knn_k: int
    dims: tuple[int, ...]
    methods: tuple[str, ...]
    cost_matrix: CostMatrix
    generative: GenerativeSpec
    root_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not self.dims:
            raise ValueError("at least one target dimensionality is required")
        for d in self.dims:
            if not 1 <= d <= self.generative.dim:
                raise ValueError(
                    f"target dim {d} outside 1..{self.generative.dim}"
                )
        if not self.methods:
            raise ValueError("at least one method is required")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        if self.cost_matrix.class_count != self.generative.class_count:
            raise ValueError(
                f"cost matrix is {self.cost_matrix.class_count}-class, "
                f"generative model has {self.generative.class_count}"
            )


def case_study_config(
    replications: int = 500,
    root_seed: int = 0,
    cost_matrix: CostMatrix | None = None,
    generative: GenerativeSpec | None = None,
) -> ExperimentConfig:
    """The benchmark protocol: 50/50 split per class, KNN with k=5, d in 3..1."""
    from .costmodel import case_study_cost_matrix

    return ExperimentConfig(
        replications=replications,
        per_class_train=50,
        knn_k=5,
        dims=(3, 2, 1),
        methods=(PCA, LDA, COST_INFORMED),
        cost_matrix=cost_matrix or case_study_cost_matrix(),
        generative=generative or GenerativeSpec(),
        root_seed=root_seed,
    )


@dataclass(frozen=True)
class CellResult:
    """Outcome of one (method, dimensionality) cell within a replication."""

    total_cost: float
    confusion: ConfusionMatrix


@dataclass(frozen=True)
class ReplicationResult:
    replication: int
    cells: dict  # (method, dim) -> CellResult, in cfg.methods x cfg.dims order


@dataclass(frozen=True)
class BoxPlotStats:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    whisker_low: float
    whisker_high: float
    outliers: tuple
    mean: float


def summarize(costs) -> BoxPlotStats:
    """Quartiles by linear interpolation; whiskers at the most extreme
    datapoints within 1.5 IQR of the quartiles; points beyond are outliers."""
    values = np.asarray(list(costs), dtype=float)
    if values.size == 0:
        raise EmptyInput("cannot summarize an empty cost list")
    values = np.sort(values)
    q1, median, q3 = np.percentile(values, [25.0, 50.0, 75.0], method="linear")
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    inside = values[(values >= low_fence) & (values <= high_fence)]
    outliers = values[(values < low_fence) | (values > high_fence)]
    return BoxPlotStats(
        minimum=float(values[0]),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        maximum=float(values[-1]),
        whisker_low=float(inside[0]),
        whisker_high=float(inside[-1]),
        outliers=tuple(float(v) for v in outliers),
        mean=float(values.mean()),
    )


def _fit(method: str, train, cost_matrix: CostMatrix) -> Projection:
    if method == PCA:
        return fit_pca(train)
    if method == LDA:
        return fit_lda(train)
    return fit_cost_informed(train, cost_matrix)


def run_replication(cfg: ExperimentConfig, replication_id: int) -> ReplicationResult:
    """Generate, split, fit every method, and score every dimensionality."""
    rep_stream = SeedStream(cfg.root_seed).child(replication_id)
    data, _ = generate_case_study(cfg.generative, rep_stream.child(0))
    train, test = stratified_split(
        data, cfg.per_class_train, rep_stream.child(1).generator()
    )
    cells = {}
    for method in cfg.methods:
        projection = _fit(method, train, cfg.cost_matrix)
        for d in cfg.dims:
            reduced_train = transform(projection, train, d)
            reduced_test = transform(projection, test, d)
            model = KnnModel(
                reduced_train.features,
                reduced_train.labels,
                cfg.knn_k,
                reduced_train.class_count,
            )
            cm = confusion(model, reduced_test)
            cells[(method, d)] = CellResult(
                total_cost=total_cost(cm, cfg.cost_matrix), confusion=cm
            )
    return ReplicationResult(replication=replication_id, cells=cells)


def run_experiment(cfg: ExperimentConfig, threads: int = 1):
    """All replications plus per-(method, dim) box-plot statistics.

    Results come back ordered by replication id no matter how many worker
    threads ran them.
    """
    ids = range(cfg.replications)
    if threads <= 1:
        results = [run_replication(cfg, i) for i in ids]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: run_replication(cfg, i), ids))
    summary = {}
    for method in cfg.methods:
        for d in cfg.dims:
            summary[(method, d)] = summarize(
                [r.cells[(method, d)].total_cost for r in results]
            )
    return results, summary


def write_results_csv(results, path) -> None:
    """One row per (replication, method, dim): replication,method,dim,total_cost."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("replication,method,dim,total_cost\n")
        for result in results:
            for (method, d), cell in result.cells.items():
                handle.write(
                    f"{result.replication},{method},{d},{fmt(cell.total_cost)}\n"
                )


def write_summary_csv(summary, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("method,dim,min,q1,median,q3,max,mean,n_outliers\n")
        for (method, d), stats in summary.items():
            fields = [
                method,
                str(d),
                fmt(stats.minimum),
                fmt(stats.q1),
                fmt(stats.median),
                fmt(stats.q3),
                fmt(stats.maximum),
                fmt(stats.mean),
                str(len(stats.outliers)),
            ]
            handle.write(",".join(fields) + "\n")


# --- SVG box plot -----------------------------------------------------------

_SVG_COLORS = ("#4878a8", "#e49444", "#6aa56e")


def render_boxplot_svg(summary) -> str:
    """Self-contained SVG: one box per (method, dim), grouped by dimensionality
    in descending order. Pure string construction, byte-deterministic."""
    methods = []
    dims = []
    for method, d in summary.keys():
        if method not in methods:
            methods.append(method)
        if d not in dims:
            dims.append(d)
    dims = sorted(dims, reverse=True)

    box_w, box_gap, group_gap = 46.0, 14.0, 42.0
    margin_left, margin_right, margin_top, margin_bottom = 64.0, 16.0, 24.0, 56.0
    plot_h = 320.0
    group_w = len(methods) * box_w + (len(methods) - 1) * box_gap
    plot_w = len(dims) * group_w + (len(dims) - 1) * group_gap
    width = margin_left + plot_w + margin_right
    height = margin_top + plot_h + margin_bottom

    lows, highs = [], []
    for stats in summary.values():
        lows.append(min(stats.whisker_low, *(stats.outliers or (stats.whisker_low,))))
        highs.append(max(stats.whisker_high, *(stats.outliers or (stats.whisker_high,))))
    lo, hi = min(lows), max(highs)
    span = hi - lo if hi > lo else 1.0
    lo -= 0.05 * span
    hi += 0.05 * span

    def y(value: float) -> float:
        return margin_top + plot_h * (hi - value) / (hi - lo)

    def c(value: float) -> str:
        return f"{value:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{c(width)}" '
        f'height="{c(height)}" viewBox="0 0 {c(width)} {c(height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{c(margin_left)}" y1="{c(margin_top)}" x2="{c(margin_left)}" '
        f'y2="{c(margin_top + plot_h)}" stroke="black"/>',
        f'<line x1="{c(margin_left)}" y1="{c(margin_top + plot_h)}" '
        f'x2="{c(margin_left + plot_w)}" y2="{c(margin_top + plot_h)}" stroke="black"/>',
        f'<text x="12" y="{c(margin_top + plot_h / 2)}" font-size="12" '
        f'transform="rotate(-90 12 {c(margin_top + plot_h / 2)})" '
        f'text-anchor="middle">total misclassification cost</text>',
    ]
    for i in range(5):
        tick = lo + (hi - lo) * i / 4.0
        ty = y(tick)
        parts.append(
            f'<line x1="{c(margin_left - 4)}" y1="{c(ty)}" x2="{c(margin_left)}" '
            f'y2="{c(ty)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{c(margin_left - 7)}" y="{c(ty + 3.5)}" font-size="10" '
            f'text-anchor="end">{tick:.3g}</text>'
        )

    for g, d in enumerate(dims):
        gx = margin_left + g * (group_w + group_gap)
        parts.append(
            f'<text x="{c(gx + group_w / 2)}" y="{c(height - 10)}" font-size="12" '
            f'text-anchor="middle">d = {d}</text>'
        )
        for m, method in enumerate(methods):
            stats = summary[(method, d)]
            color = _SVG_COLORS[m % len(_SVG_COLORS)]
            x0 = gx + m * (box_w + box_gap)
            mid = x0 + box_w / 2
            parts.append(
                f'<line x1="{c(mid)}" y1="{c(y(stats.whisker_low))}" x2="{c(mid)}" '
                f'y2="{c(y(stats.q1))}" stroke="black"/>'
            )
            parts.append(
                f'<line x1="{c(mid)}" y1="{c(y(stats.q3))}" x2="{c(mid)}" '
                f'y2="{c(y(stats.whisker_high))}" stroke="black"/>'
            )
            for w in (stats.whisker_low, stats.whisker_high):
                parts.append(
                    f'<line x1="{c(mid - box_w / 4)}" y1="{c(y(w))}" '
                    f'x2="{c(mid + box_w / 4)}" y2="{c(y(w))}" stroke="black"/>'
                )
            parts.append(
                f'<rect x="{c(x0)}" y="{c(y(stats.q3))}" width="{c(box_w)}" '
                f'height="{c(y(stats.q1) - y(stats.q3))}" fill="{color}" '
                f'fill-opacity="0.65" stroke="black"/>'
            )
            parts.append(
                f'<line x1="{c(x0)}" y1="{c(y(stats.median))}" '
                f'x2="{c(x0 + box_w)}" y2="{c(y(stats.median))}" '
                f'stroke="black" stroke-width="1.5"/>'
            )
            for v in stats.outliers:
                parts.append(
                    f'<circle cx="{c(mid)}" cy="{c(y(v))}" r="2" fill="none" '
                    f'stroke="black"/>'
                )
            parts.append(
                f'<text x="{c(mid)}" y="{c(height - 26)}" font-size="10" '
                f'text-anchor="middle">{method}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
