"""Command-line front end.

Every subcommand reads the dataset CSV given with ``--input`` and writes
CSV tables, JSON summaries or DOT graphs.  Without ``--out`` the main table
goes to standard output; with ``--out`` a file (or, for ``report``,
``simulate`` and ``score``, a directory) is written.  Output is fully
deterministic for a given input and set of flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from . import __version__
from .dataset import ChoiceDataError, Dataset, check_symmetry, generate_menu_collection, parse_csv, write_csv
from .graph import to_dot
from .metrics import (
    CHOOSE_EVERYTHING_CUTOFF,
    FIRST_ITEM_CUTOFF,
    POSITION_CUTOFF,
    adjusted_choice_size_frequencies,
    randomization_screen,
    satisficing_screen,
    subject_metrics,
)
from .models import ModelKind, ScoreResult, admissible_array, pick_best, score_datasets
from .relations import RelationClass, count_relations, enumerate_relations, from_text, to_text
from .revealed import AXIOMS, WITNESS_CAP, check_axioms, rationalize_dominant, rationalize_undominated, richter_rationalize
from .separation import (
    PairClassification,
    classify_from_relation,
    has_nontrivial_indifference,
    separate_dominant,
    separate_eliaz_ok,
    summarize,
)
from .simulation import SimConfig, calibrate, simulate_uniform

JOBS_ENV = "CHOICEFIT_JOBS"
EXIT_DATA = 2


# ---------------------------------------------------------------------------
# emitters


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if v != v else f"{v:.6g}"
    return v


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None, default_name: str | None = None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if default_name is not None and (path.is_dir() or out.endswith(os.sep)):
        path = path / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write(directory: Path, name: str, text: str) -> None:
    path = directory / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# shared pipeline pieces


def _load(args) -> list[Dataset]:
    if args.input is None:
        raise ChoiceDataError("--input is required")
    datasets = parse_csv(Path(args.input), forced=args.forced)
    if not datasets:
        raise ChoiceDataError(f"{args.input}: no observations")
    return datasets


def _kinds(args) -> list[ModelKind]:
    kinds = [ModelKind.parse(t) for t in args.models.split(",") if t.strip()]
    if not kinds:
        raise ValueError("--models must name at least one model")
    return list(dict.fromkeys(kinds))


def _score(datasets, args, kinds=None, permissive=None):
    kinds = _kinds(args) if kinds is None else kinds
    permissive = args.permissive if permissive is None else permissive
    return score_datasets(datasets, kinds, permissive=permissive, jobs=args.jobs)


def score_rows(datasets, results, kinds) -> list[list]:
    """One row per (subject, model): score, optimal count, tie with RC, best flag."""
    rows = []
    for d, res in zip(datasets, results):
        best = pick_best(res, kinds)
        for k in kinds:
            r = res[k]
            tie = k is not ModelKind.RATIONAL and ModelKind.RATIONAL in res and res[ModelKind.RATIONAL].score == r.score
            rows.append([d.subject_id, k.value, r.score, r.n_optimal, tie, k is best.kind])
    return rows


SCORE_HEADER = ["subject", "model", "score", "n_optimal_relations", "tie_with_rc", "best"]


def _mean_median(values) -> dict:
    if not values:
        return {"mean": None, "median": None}
    return {"mean": round(statistics.fmean(values), 4), "median": statistics.median(values)}


def cohort_table(datasets, results, kinds, threshold: int, simulated_cutoffs: dict | None = None) -> dict:
    """Classification summary with one column per model plus ``all``.

    Subjects are assigned to their best model (rational choice wins ties);
    a subject counts as classified when that score is at most ``threshold``.
    """
    n = len(datasets)
    best = [pick_best(res, kinds) for res in results]
    columns = {}
    for col in [k.value for k in kinds] + ["all"]:
        members = [b for b in best if col == "all" or b.kind.value == col]
        classified = [b for b in members if b.score <= threshold]
        zero = [b for b in members if b.score == 0]
        entry = {
            "subjects_score_0": len(zero),
            "subjects_score_0_pct": round(100 * len(zero) / n, 1),
            "subjects_score_le_threshold": len(classified),
            "subjects_score_le_threshold_pct": round(100 * len(classified) / n, 1),
            "best_model_score": _mean_median([b.score for b in classified]),
            "best_model_orderings": _mean_median([b.result.n_optimal for b in classified]),
        }
        if simulated_cutoffs and col in simulated_cutoffs:
            entry["simulation_min_p2.5"] = simulated_cutoffs[col]
        columns[col] = entry
    gaps = [b.scores[ModelKind.RATIONAL].score - b.score for b in best if ModelKind.RATIONAL in b.scores and b.kind is not ModelKind.RATIONAL]
    return {
        "subjects": n,
        "threshold": threshold,
        "columns": columns,
        "ties_with_rc": sum(1 for b in best if b.kind is ModelKind.RATIONAL and b.tie),
        "mean_rc_gap_when_not_best": round(statistics.fmean(gaps), 4) if gaps else None,
    }


def admissible_counts(n: int, kinds) -> dict:
    """Size of each model's search space, under the strict and permissive class."""
    out = {}
    for k in kinds:
        out[k.value] = {
            "strict": int(admissible_array(k, n, False).shape[0]),
            "permissive": int(admissible_array(k, n, True).shape[0]),
        }
    return out


def axiom_rows(datasets, cap) -> list[list]:
    rows = []
    for d in datasets:
        for name, rep in check_axioms(d, AXIOMS, cap).items():
            rows.append([d.subject_id, name, rep.holds, len(rep.witnesses), rep.truncated, "|".join(rep.describe_witnesses())])
    return rows


AXIOM_HEADER = ["subject", "axiom", "holds", "n_witnesses", "truncated", "witnesses"]


def separation_for(d: Dataset, res: dict[ModelKind, ScoreResult], kinds, criterion: str):
    """Pair classifications for one subject plus a regularity flag (None when
    it does not apply)."""
    best = pick_best(res, kinds)
    chosen = criterion
    if chosen == "auto":
        chosen = {"rc": "relation", "uc": "eliaz_ok", "dc": "dominant"}[best.kind.value]
    if chosen == "dominant":
        relation = None
        if ModelKind.DOMINANT in res and res[ModelKind.DOMINANT].optimal_relations:
            relation = res[ModelKind.DOMINANT].optimal_relations[0]
        return separate_dominant(d, relation), None, relation
    if chosen == "eliaz_ok":
        if ModelKind.UNDOMINATED not in res:
            raise ValueError("the eliaz_ok criterion needs the uc model")
        r = res[ModelKind.UNDOMINATED].optimal_relations[0]
        sep = separate_eliaz_ok(d, r)
        return list(sep.pairs), sep.regular, sep.preorder
    r = best.result.optimal_relations[0]
    if best.kind is ModelKind.UNDOMINATED:
        r = r.with_diagonal()
    return classify_from_relation(r), None, r


def _pair_rows(subject: str, pairs: Sequence[PairClassification], regular) -> list[list]:
    return [
        [subject, p.pair_label, p.status.value, p.criterion.value, p.supported, "" if regular is None else regular]
        for p in pairs
    ]


PAIR_HEADER = ["subject", "pair", "status", "criterion", "supported", "regular"]


def metric_rows(datasets, results, kinds, threshold, require_unclassified=True) -> tuple[list[dict], dict]:
    rows = []
    flagged = {"first_item": [], "position": [], "randomization": []}
    for i, d in enumerate(datasets):
        m = subject_metrics(d)
        row = m.as_row()
        classified = False
        if results is not None:
            best = pick_best(results[i], kinds)
            row["best_model"] = best.kind.value
            row["best_score"] = best.score
            classified = best.score <= threshold
        eligible = not (require_unclassified and classified)
        sat = satisficing_screen(d)
        rnd = randomization_screen(d)
        row["first_item_flag"] = eligible and sat.first_item_flag
        row["position_flag"] = eligible and sat.position_flag
        row["randomization_flag"] = eligible and rnd
        row["uninformative"] = d.uninformative
        for key, flag in (("first_item", row["first_item_flag"]), ("position", row["position_flag"]), ("randomization", row["randomization_flag"])):
            if flag:
                flagged[key].append(d.subject_id)
        rows.append(row)
    sat_ids = set(flagged["first_item"]) | set(flagged["position"])
    summary = {
        "subjects": len(datasets),
        "require_unclassified": require_unclassified,
        "cutoffs": {
            "first_item_frequency": FIRST_ITEM_CUTOFF,
            "average_position": POSITION_CUTOFF,
            "choose_everything": CHOOSE_EVERYTHING_CUTOFF,
        },
        "flagged": flagged,
        "satisficing_randomization_overlap": sorted(sat_ids & set(flagged["randomization"])),
        "adjusted_choice_size_frequencies": {str(k): round(v, 6) for k, v in adjusted_choice_size_frequencies(datasets).items()},
        "mean_choice_proportion": round(statistics.fmean(r["avg_choice_proportion"] for r in rows), 6),
    }
    return rows, summary


def _rows_table(rows: list[dict]) -> str:
    header: list[str] = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    return _csv_text(header, [[r.get(k, "") for k in header] for r in rows])


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    datasets = _load(args)
    summary = {
        "subjects": len(datasets),
        "observations": sum(len(d) for d in datasets),
        "universe": max(d.n for d in datasets),
        "forced": args.forced,
        "uninformative": [d.subject_id for d in datasets if d.uninformative],
        "symmetry": {d.subject_id: check_symmetry(d.menus, d.n).value for d in datasets},
    }
    _emit(_json_text(summary), args.out)
    return 0


_CLASS_NAMES = {c.value: c for c in RelationClass}


def cmd_enumerate(args) -> int:
    names = sorted(_CLASS_NAMES) if args.relation_class == "all" else [args.relation_class]
    if args.list:
        if len(names) != 1:
            raise ValueError("--list needs a single --class")
        cls = _CLASS_NAMES[names[0]]
        text = "\n".join(to_text(r) for r in enumerate_relations(cls, args.n))
        _emit(text, args.out)
        return 0
    counts = {name: count_relations(_CLASS_NAMES[name], args.n) for name in names}
    _emit(_json_text({"n": args.n, "counts": counts}), args.out)
    return 0


def cmd_score(args) -> int:
    datasets = _load(args)
    kinds = _kinds(args)
    t0 = time.perf_counter()
    results = _score(datasets, args, kinds)
    elapsed = time.perf_counter() - t0
    table = _csv_text(SCORE_HEADER, score_rows(datasets, results, kinds))
    if args.out is None:
        sys.stdout.write(table)
        return 0
    out = Path(args.out)
    cohort = cohort_table(datasets, results, kinds, args.threshold)
    cohort["admissible_relations"] = admissible_counts(max(d.n for d in datasets), kinds)
    cohort["permissive"] = args.permissive
    _write(out, "scores.csv", table)
    _write(out, "cohort.json", _json_text(cohort))
    print(f"scored {len(datasets)} subjects x {len(kinds)} models in {elapsed:.2f} s", file=sys.stderr)
    return 0


def cmd_recover(args) -> int:
    datasets = _load(args)
    kinds = _kinds(args)
    results = _score(datasets, args, kinds)
    out = []
    for d, res in zip(datasets, results):
        best = pick_best(res, kinds)
        entry = {"subject": d.subject_id, "best_model": best.kind.value, "models": {}}
        for k in kinds:
            r = res[k]
            entry["models"][k.value] = {
                "score": r.score,
                "n_optimal_relations": r.n_optimal,
                "relations": [to_text(rel) for rel in r.optimal_relations[: args.max_relations]],
            }
        out.append(entry)
    _emit(_json_text(out), args.out)
    return 0


def cmd_axioms(args) -> int:
    datasets = _load(args)
    cap = None if args.no_cap else WITNESS_CAP
    rows = axiom_rows(datasets, cap)
    if args.format == "json":
        text = _json_text([dict(zip(AXIOM_HEADER, r)) for r in rows])
    else:
        text = _csv_text(AXIOM_HEADER, rows)
    _emit(text, args.out)
    return 0


def cmd_rationalize(args) -> int:
    datasets = _load(args)
    test = {"rc": richter_rationalize, "uc": rationalize_undominated, "dc": rationalize_dominant}[args.model]
    out = []
    for d in datasets:
        res = test(d)
        if res.ok:
            out.append({"subject": d.subject_id, "model": args.model, "rationalizable": True, "relation": to_text(res.relation)})
        else:
            out.append({
                "subject": d.subject_id,
                "model": args.model,
                "rationalizable": False,
                "failed_axioms": {f.axiom: f.describe_witnesses() for f in res.failures},
            })
    _emit(_json_text(out), args.out)
    return 0


def cmd_separate(args) -> int:
    datasets = _load(args)
    kinds = _kinds(args)
    results = _score(datasets, args, kinds)
    rows = []
    summary = {"subjects": len(datasets), "criterion": args.criterion, "per_subject": {}}
    nontrivial = []
    for d, res in zip(datasets, results):
        pairs, regular, relation = separation_for(d, res, kinds, args.criterion)
        rows += _pair_rows(d.subject_id, pairs, regular)
        summary["per_subject"][d.subject_id] = summarize(pairs)
        if relation is not None and relation.matrix.diagonal().all() and has_nontrivial_indifference(relation):
            nontrivial.append(d.subject_id)
    summary["subjects_with_nontrivial_indifference"] = nontrivial
    table = _csv_text(PAIR_HEADER, rows)
    if args.out is None:
        sys.stdout.write(table)
    else:
        out = Path(args.out)
        _write(out, "separation.csv", table)
        _write(out, "separation_summary.json", _json_text(summary))
    return 0


def cmd_metrics(args) -> int:
    datasets = _load(args)
    kinds = _kinds(args)
    require = not args.ignore_classification
    results = _score(datasets, args, kinds) if require else None
    rows, summary = metric_rows(datasets, results, kinds, args.threshold, require)
    table = _rows_table(rows)
    if args.out is None:
        sys.stdout.write(table)
    else:
        out = Path(args.out)
        _write(out, "metrics.csv", table)
        _write(out, "metrics_summary.json", _json_text(summary))
    return 0


def _sim_config(args) -> SimConfig:
    sizes = tuple(int(s) for s in args.sizes.split(","))
    mc = generate_menu_collection(args.n, sizes)
    return SimConfig(mc, args.subjects, args.forced, args.seed)


def cmd_simulate(args) -> int:
    cfg = _sim_config(args)
    if args.out is None:
        raise ValueError("simulate needs --out DIRECTORY")
    out = Path(args.out)
    meta = cfg.metadata()
    if not args.no_datasets:
        _write(out, "simulated.csv", write_csv(simulate_uniform(cfg)))
    if args.calibrate:
        kinds = _kinds(args)
        cal = calibrate(cfg, kinds)
        meta["calibration"] = cal.summary()
    _write(out, "metadata.json", _json_text(meta))
    return 0


def cmd_graph(args) -> int:
    if args.relation is None:
        raise ValueError("graph needs --relation FILE in the relation text form")
    rel = from_text(Path(args.relation).read_text(encoding="utf-8"))
    annotations = dict(a.split("=", 1) for a in args.annotate)
    _emit(to_dot(rel, annotations=annotations), args.out)
    return 0


def _safe_name(s: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in s)


def cmd_report(args) -> int:
    if args.out is None:
        raise ValueError("report needs --out DIRECTORY")
    out = Path(args.out)
    datasets = _load(args)
    kinds = _kinds(args)

    validation = {
        "subjects": len(datasets),
        "observations": sum(len(d) for d in datasets),
        "uninformative": [d.subject_id for d in datasets if d.uninformative],
    }
    _write(out, "validate.json", _json_text(validation))

    results = _score(datasets, args, kinds)
    cohort = cohort_table(datasets, results, kinds, args.threshold)
    cohort["admissible_relations"] = admissible_counts(max(d.n for d in datasets), kinds)
    _write(out, "scores.csv", _csv_text(SCORE_HEADER, score_rows(datasets, results, kinds)))
    _write(out, "cohort.json", _json_text(cohort))

    _write(out, "axioms.csv", _csv_text(AXIOM_HEADER, axiom_rows(datasets, WITNESS_CAP)))

    pair_rows = []
    for d, res in zip(datasets, results):
        pairs, regular, relation = separation_for(d, res, kinds, "auto")
        pair_rows += _pair_rows(d.subject_id, pairs, regular)
        best = pick_best(res, kinds)
        rel = best.result.optimal_relations[0]
        dot = to_dot(rel, name=d.subject_id, annotations={
            "label": f"{d.subject_id} {best.kind.value} score={best.score} optimal={best.result.n_optimal}",
        })
        _write(out, f"graphs/{_safe_name(d.subject_id)}.dot", dot)
        if best.kind is ModelKind.UNDOMINATED and regular is not None:
            weak = to_dot(relation, name=d.subject_id, annotations={
                "label": f"{d.subject_id} weak reading regular={str(regular).lower()}",
            })
            _write(out, f"graphs/{_safe_name(d.subject_id)}_weak.dot", weak)
    _write(out, "separation.csv", _csv_text(PAIR_HEADER, pair_rows))

    rows, summary = metric_rows(datasets, results, kinds, args.threshold, not args.ignore_classification)
    _write(out, "metrics.csv", _rows_table(rows))
    _write(out, "metrics_summary.json", _json_text(summary))

    if args.simulate:
        n = max(d.n for d in datasets)
        mc = generate_menu_collection(n, sorted({len(m) for d in datasets for m in d.menus}))
        cal = calibrate(SimConfig(mc, args.simulate, args.forced, args.seed), kinds)
        _write(out, "simulation.json", _json_text(cal.summary()))
    return 0


# ---------------------------------------------------------------------------
# parser


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="dataset CSV (subject,menu,choice[,order])")
    common.add_argument("--forced", action="store_true", help="forced-choice data: blank choices are errors")
    common.add_argument("--models", default="rc,uc,dc", help="comma-separated subset of rc,uc,dc")
    common.add_argument("--threshold", type=_nonnegative, default=10, help="classification threshold on the best score")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file or directory")
    common.add_argument("--jobs", type=int, default=_default_jobs(), help=f"worker threads (default ${JOBS_ENV} or 1)")
    common.add_argument("--permissive", action="store_true", help="let uc/dc use complete relations too")

    p = argparse.ArgumentParser(prog="choicefit", description="Fit rational, undominated and dominant choice models to choice data.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="parse and summarise a dataset file").set_defaults(func=cmd_validate)

    s = sub.add_parser("enumerate", parents=[common], help="count or list relations")
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--class", dest="relation_class", default="all", choices=["all", *sorted(_CLASS_NAMES)])
    s.add_argument("--list", action="store_true", help="print every relation in text form")
    s.set_defaults(func=cmd_enumerate)

    sub.add_parser("score", parents=[common], help="distance scores per subject and model").set_defaults(func=cmd_score)

    s = sub.add_parser("recover", parents=[common], help="optimal relations per subject and model")
    s.add_argument("--max-relations", type=int, default=None)
    s.set_defaults(func=cmd_recover)

    s = sub.add_parser("axioms", parents=[common], help="revealed-preference axiom checks")
    s.add_argument("--no-cap", action="store_true", help=f"report every witness, not just the first {WITNESS_CAP}")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("rationalize", parents=[common], help="constructive rationalizability test")
    s.add_argument("--model", choices=["rc", "uc", "dc"], default="dc")
    s.set_defaults(func=cmd_rationalize)

    s = sub.add_parser("separate", parents=[common], help="indifference versus indecisiveness per pair")
    s.add_argument("--criterion", choices=["auto", "dominant", "eliaz_ok", "relation"], default="auto")
    s.set_defaults(func=cmd_separate)

    s = sub.add_parser("metrics", parents=[common], help="descriptive statistics and behavioural screens")
    s.add_argument("--ignore-classification", action="store_true", help="screen every subject, classified or not")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("simulate", parents=[common], help="uniform-random subjects and cut-offs")
    s.add_argument("--subjects", type=int, default=10_000)
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--sizes", default="2,3,4")
    s.add_argument("--calibrate", action="store_true", help="also score the cohort and report cut-offs")
    s.add_argument("--no-datasets", action="store_true", help="skip writing the simulated CSV")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("graph", parents=[common], help="DOT graph of a relation")
    s.add_argument("--relation", help="relation text file")
    s.add_argument("--annotate", action="append", default=[], metavar="KEY=VALUE")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("report", parents=[common], help="full pipeline into a directory")
    s.add_argument("--ignore-classification", action="store_true")
    s.add_argument("--simulate", type=int, default=0, metavar="N", help="also calibrate on N simulated subjects")
    s.set_defaults(func=cmd_report)
    return p


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChoiceDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
