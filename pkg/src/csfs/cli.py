"""Command-line entry point: ``csfs <subcommand> ...``.

Exit status is 0 on success, 1 for usage errors and 2 for data errors.
Output files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import warnings
from pathlib import Path

from . import synth
from .data import load_csv, read_feature_rows, write_csv
from .errors import DataError, UsageError
from .evaluation import Pipeline, evaluate, select
from .matrix import RelevanceMatrix, build_matrix
from .measures import DiscretizationSpec, MeasureSpec
from .schemes import THREE_LAYER, TOPOLOGIES, SchemeSpec, TrainedScheme, build_scheme
from .classifiers import BaseClassifierSpec
from .selection import (
    AGGREGATES,
    AggregateSpec,
    GlobalRanking,
    PairwiseRelevanceTable,
    RelevanceThreshold,
    collapse,
    dove,
    ova,
    ove,
    rank_global,
    ranking_from_json,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None


def _load_artifact(path: str):
    obj = _read_json(path)
    if "diagonal" in obj:
        return RelevanceMatrix.from_json(obj)
    return ranking_from_json(obj)


def _ranking_csv(r) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(r, GlobalRanking):
        w.writerow(["feature", "score"])
        for f, s in zip(r.features, r.scores):
            w.writerow([f, repr(float(s))])
    elif isinstance(r, PairwiseRelevanceTable):
        w.writerow(["p", "q", *r.features])
        for (p, q), row in zip(r.pairs, r.scores):
            w.writerow([p, q, *(repr(float(s)) for s in row)])
    else:
        w.writerow(["class", *r.features])
        for p, row in zip(r.classes, r.scores):
            w.writerow([p, *(repr(float(s)) for s in row)])
    return buf.getvalue()


# -- argument groups -------------------------------------------------------

def _add_data(p):
    p.add_argument("data", help="input CSV with a header row")
    p.add_argument("--label", default=None, help="label column name or index (default: last)")
    p.add_argument("--id", dest="id_column", default=None, help="example id column name or index")
    p.add_argument("--impute", choices=["mean"], default=None, help="fill missing cells with the column mean")


def _add_measure(p):
    p.add_argument("--measure", choices=["su", "nig"], default="nig")
    p.add_argument("--bins", type=int, default=5)
    p.add_argument("--binning", choices=["ew", "ef"], default="ef")
    p.add_argument("--global-bins", action="store_true", help="bin each feature once over the whole dataset")


def _add_scheme(p):
    p.add_argument("--topology", choices=TOPOLOGIES, default=THREE_LAYER)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--base", choices=["gnb", "centroid"], default="gnb")
    p.add_argument("--smoothing", type=float, default=1e-9)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--empty-node", choices=["neutral", "omit"], default="neutral")
    p.add_argument("--diag-weight", type=float, default=1.0)
    p.add_argument("--strategy", choices=["ova", "ove"], default="ova", help="selection for one-layer-ova")
    p.add_argument("--aggregate", choices=sorted(AGGREGATES), default="mean")


def _add_common(p):
    p.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csfs", description="Class-specific feature selection and ensemble schemes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", help="score features globally or per class")
    _add_data(p)
    _add_measure(p)
    _add_common(p)
    p.add_argument("--strategy", choices=["global", "ova", "ove", "dove"], default="ova")
    p.add_argument("--aggregate", choices=sorted(AGGREGATES), default="mean")
    p.add_argument("--collapse", choices=sorted(AGGREGATES), default=None,
                   help="reduce a class-specific ranking to a global one")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("dove", help="pairwise relevance table (same as 'rank --strategy dove')")
    _add_data(p)
    _add_measure(p)
    _add_common(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(strategy="dove", aggregate="mean", collapse=None)

    p = sub.add_parser("matrix", help="relevance matrix from a dove table")
    p.add_argument("table", help="JSON written by 'rank --strategy dove'")
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("train", help="train an ensemble scheme")
    _add_data(p)
    _add_measure(p)
    _add_scheme(p)
    _add_common(p)
    p.add_argument("--artifact", default=None, help="selection JSON (ranking, dove table or matrix)")

    p = sub.add_parser("predict", help="predict with a trained scheme")
    p.add_argument("scheme", help="scheme manifest written by 'train'")
    p.add_argument("data", help="CSV holding at least the scheme's feature columns")
    p.add_argument("--id", dest="id_column", default=None)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("evaluate", help="stratified k-fold evaluation")
    _add_data(p)
    _add_measure(p)
    _add_scheme(p)
    _add_common(p)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dump-artifacts", default=None, metavar="DIR")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    p = sub.add_parser("synth", help="write a seeded synthetic dataset")
    p.add_argument("--kind", choices=["planted", "blobs"], default="planted")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--features", type=int, default=5, help="blobs only")
    p.add_argument("--noise", type=int, default=6, help="planted only")
    p.add_argument("--shift", type=float, default=4.0, help="planted only")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    return parser


def _measure_spec(a) -> MeasureSpec:
    if a.bins < 2:
        raise UsageError("--bins must be at least 2")
    return MeasureSpec(a.measure, DiscretizationSpec(a.binning, a.bins), a.global_bins)


def _scheme_spec(a) -> SchemeSpec:
    if not 0 <= a.tau < 1:
        raise UsageError("--tau must lie in [0, 1)")
    for flag, v in (("--smoothing", a.smoothing), ("--temperature", a.temperature), ("--diag-weight", a.diag_weight)):
        if not v > 0:
            raise UsageError(f"{flag} must be positive")
    return SchemeSpec(
        topology=a.topology,
        threshold=RelevanceThreshold(a.tau),
        base=BaseClassifierSpec(a.base, a.smoothing, a.temperature),
        empty_node=a.empty_node,
        diag_weight=a.diag_weight,
    )


def _check_threads(a) -> int:
    if a.threads < 1:
        raise UsageError("--threads must be at least 1")
    return a.threads


def _load(a):
    return load_csv(a.data, a.label, id_spec=a.id_column, impute=a.impute)


# -- subcommands -----------------------------------------------------------

def cmd_rank(a) -> None:
    spec, threads = _measure_spec(a), _check_threads(a)
    if a.collapse and a.strategy not in ("ova", "ove"):
        raise UsageError("--collapse applies to --strategy ova or ove")
    d = _load(a)
    if a.strategy == "global":
        r = rank_global(d, spec, threads=threads)
    elif a.strategy == "ova":
        r = ova(d, spec, threads=threads)
    elif a.strategy == "ove":
        r = ove(d, spec, AggregateSpec(a.aggregate), threads=threads)
    else:
        r = dove(d, spec, threads=threads)
    if a.collapse:
        r = collapse(r, AggregateSpec(a.collapse))
    out = _ranking_csv(r) if a.format == "csv" else _dumps(r.to_json())
    _emit(out, a.output)


def cmd_matrix(a) -> None:
    if not 0 <= a.tau < 1:
        raise UsageError("--tau must lie in [0, 1)")
    table = ranking_from_json(_read_json(a.table))
    if not isinstance(table, PairwiseRelevanceTable):
        raise DataError(f"{a.table}: expected a dove table, got strategy {table.to_json()['strategy']!r}")
    _emit(_dumps(build_matrix(table, RelevanceThreshold(a.tau)).to_json()), a.output)


def cmd_train(a) -> None:
    spec, scheme_spec, threads = _measure_spec(a), _scheme_spec(a), _check_threads(a)
    pipeline = Pipeline(spec, a.strategy, AggregateSpec(a.aggregate), scheme_spec)
    d = _load(a)
    if a.artifact:
        artifact = _load_artifact(a.artifact)
        if a.topology == THREE_LAYER and isinstance(artifact, PairwiseRelevanceTable):
            artifact = build_matrix(artifact, scheme_spec.threshold)
    else:
        artifact = select(d, pipeline, threads=threads)
    scheme = build_scheme(d, scheme_spec, artifact)
    _emit(_dumps(scheme.to_json()), a.output)


def cmd_predict(a) -> None:
    scheme = TrainedScheme.from_json(_read_json(a.scheme))
    ids, X = read_feature_rows(a.data, scheme.features, id_spec=a.id_column)
    labels, scores = scheme.predict_many(X) if len(X) else ([], [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["example_id", "predicted", *(f"score_{c}" for c in scheme.classes)])
    for i, label, row in zip(ids, labels, scores):
        w.writerow([i, label, *(repr(float(s)) for s in row)])
    _emit(buf.getvalue(), a.output)


def cmd_evaluate(a) -> None:
    spec, scheme_spec, threads = _measure_spec(a), _scheme_spec(a), _check_threads(a)
    if a.k < 2:
        raise UsageError("--k must be at least 2")
    pipeline = Pipeline(spec, a.strategy, AggregateSpec(a.aggregate), scheme_spec)
    d = _load(a)
    report = evaluate(d, pipeline, a.k, a.seed, threads)
    if a.dump_artifacts:
        root = Path(a.dump_artifacts)
        for f, artifact in enumerate(report.artifacts):
            kind = "matrix" if isinstance(artifact, RelevanceMatrix) else artifact.to_json()["strategy"]
            _emit(_dumps(artifact.to_json()), str(root / f"fold{f}_{kind}.json"))
    _emit(_dumps(report.to_json(timing=a.timing)), a.output)
    if a.output not in (None, "-"):
        print(report.table())


def cmd_synth(a) -> None:
    if a.n < 1 or a.classes < 2:
        raise UsageError("--n must be positive and --classes at least 2")
    if a.kind == "planted":
        d = synth.planted(a.n, a.classes, a.noise, a.shift, seed=a.seed)
    else:
        d = synth.blobs(a.n, a.classes, a.features, seed=a.seed)
    buf = io.StringIO()
    write_csv(d, buf)
    _emit(buf.getvalue(), a.output)


COMMANDS = {
    "rank": cmd_rank,
    "dove": cmd_rank,
    "matrix": cmd_matrix,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "synth": cmd_synth,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
