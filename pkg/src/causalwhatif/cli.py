"""Command-line entry point.

Exit codes: 0 success, 1 internal error, 2 usage or validation error.
Diagnostics go to stderr; results go to stdout. Every subcommand accepts
--json for machine-readable output. A JSON config file (--config) supplies
defaults; explicit flags override it.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .bench import bias_experiment, emit_report, robustness_experiment
from .dataset import binarize_by_median, load_csv, one_hot_encode, save_csv
from .discovery import ParentSet, find_parents
from .errors import CausalWhatifError
from .models import (
    DECISION_TREE,
    LINEAR_REGRESSION,
    LOGISTIC_REGRESSION,
    RANDOM_FOREST,
    ModelSpec,
    load_model,
    model_metadata,
    save_model,
    train,
)
from .scm import make_g1, make_g2, make_wine, sample
from .whatif import apply_intervention, build_report, report_to_dict

MODEL_ALIASES = {
    "lr": LINEAR_REGRESSION,
    "logreg": LOGISTIC_REGRESSION,
    "dt": DECISION_TREE,
    "rf": RANDOM_FOREST,
}

DEFAULTS = {"alpha": 0.05, "k": 3, "delta": 1.0, "max_cond": 3, "seed": 0,
            "class_of_interest": 1.0}


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalwhatif", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file with per-flag defaults")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="sample a synthetic dataset to CSV")
    gen.add_argument("--scm", required=True, choices=("g1", "g2", "wine"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--env", type=int, choices=(0, 1))
    gen.add_argument("--binarize-outcome", action="store_true")
    gen.add_argument("--out", required=True)
    gen.add_argument("--json", action="store_true")

    disc = sub.add_parser("discover", help="find the outcome's direct causes")
    disc.add_argument("--data", required=True)
    disc.add_argument("--outcome", required=True)
    disc.add_argument("--alpha", type=float)
    disc.add_argument("--max-cond", type=int)
    disc.add_argument("--json", action="store_true")

    tr = sub.add_parser("train", help="discover causes and fit a model")
    tr.add_argument("--data", required=True)
    tr.add_argument("--outcome", required=True)
    tr.add_argument("--model", required=True, choices=tuple(MODEL_ALIASES))
    tr.add_argument("--trees", type=int)
    tr.add_argument("--max-depth", type=int)
    tr.add_argument("--min-leaf", type=int)
    tr.add_argument("--alpha", type=float)
    tr.add_argument("--max-cond", type=int)
    tr.add_argument("--seed", type=int)
    tr.add_argument("--all-features", action="store_true",
                    help="skip discovery and use every feature")
    tr.add_argument("--out", required=True)
    tr.add_argument("--json", action="store_true")

    wi = sub.add_parser("whatif", help="prediction and ranked interventions")
    wi.add_argument("--model", required=True)
    wi.add_argument("--instance", required=True,
                    help="JSON file path or inline name=value,name=value")
    wi.add_argument("--k", type=int)
    wi.add_argument("--delta", type=float)
    wi.add_argument("--class-of-interest", type=float)
    wi.add_argument("--rank-by", choices=("signed", "abs"))
    wi.add_argument("--json", action="store_true")

    iv = sub.add_parser("intervene", help="apply one intervention and re-rank")
    iv.add_argument("--model", required=True)
    iv.add_argument("--instance", required=True)
    iv.add_argument("--feature", required=True)
    iv.add_argument("--value", type=float, required=True)
    iv.add_argument("--k", type=int)
    iv.add_argument("--delta", type=float)
    iv.add_argument("--class-of-interest", type=float)
    iv.add_argument("--json", action="store_true")

    be = sub.add_parser("bench", help="run the synthetic experiments")
    be.add_argument("experiment", choices=("bias", "robust"))
    be.add_argument("--scm", choices=("g1", "g2"), default="g1")
    be.add_argument("--sizes", default="2000,20000",
                    help="comma-separated dataset sizes (bias)")
    be.add_argument("--n", type=int, default=10000, help="per-environment size (robust)")
    be.add_argument("--reps", type=int, default=30)
    be.add_argument("--models", default="lr,dt,rf")
    be.add_argument("--trees", type=int, help="forest size override")
    be.add_argument("--min-leaf", type=int)
    be.add_argument("--seed", type=int)
    be.add_argument("--scale100", action="store_true",
                    help="display bias tables in hundredths")
    be.add_argument("--out", required=True, help="output directory")
    be.add_argument("--json", action="store_true")

    sv = sub.add_parser("serve", help="serve registered models over HTTP")
    sv.add_argument("--model-dir")
    sv.add_argument("--port", type=int, default=8765)
    sv.add_argument("--bind", default="127.0.0.1")
    sv.add_argument("--cors", default="*", help="comma-separated allowed origins")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    config = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    for key, fallback in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, config.get(key, fallback))


def _parse_instance(text: str) -> dict[str, float]:
    if "=" in text:
        out = {}
        for pair in text.split(","):
            name, _, value = pair.partition("=")
            if not name or not value:
                raise UsageError(f"bad instance fragment {pair!r}")
            try:
                out[name.strip()] = float(value)
            except ValueError:
                raise UsageError(f"instance value {value!r} is not numeric") from None
        return out
    with open(text, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return {str(k): float(v) for k, v in raw.items()}


def _validate_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise UsageError("--alpha must be strictly between 0 and 1")


def _spec_from_args(args) -> ModelSpec:
    kind = MODEL_ALIASES[args.model]
    kw = {"kind": kind, "seed": args.seed}
    if kind == RANDOM_FOREST and args.trees:
        kw["n_trees"] = args.trees
    if kind in (DECISION_TREE, RANDOM_FOREST):
        if args.max_depth:
            kw["max_depth"] = args.max_depth
        if args.min_leaf:
            kw["min_leaf"] = args.min_leaf
    return ModelSpec(**kw)


def _load_table(path: str, outcome: str):
    table = load_csv(path, outcome)
    if any(c.kind == "categorical" for c in table.columns if c.name != outcome):
        table = one_hot_encode(table)
    return table


# -- subcommand handlers --------------------------------------------------------


def _cmd_gen(args) -> int:
    if args.scm == "wine":
        if args.env is None:
            raise UsageError("--env is required when --scm wine")
        scm = make_wine(args.env)
    else:
        if args.env is not None:
            raise UsageError("--env only applies to --scm wine")
        scm = make_g1() if args.scm == "g1" else make_g2()
    table = sample(scm, args.n, args.seed)
    if args.binarize_outcome:
        table = binarize_by_median(table, [table.outcome])
    save_csv(table, args.out)
    payload = {"path": args.out, "rows": table.n_rows,
               "columns": list(table.column_names), "outcome": table.outcome}
    _emit(args, payload, f"wrote {table.n_rows} rows to {args.out}")
    return 0


def _cmd_discover(args) -> int:
    _validate_alpha(args.alpha)
    table = _load_table(args.data, args.outcome)
    result = find_parents(table, alpha=args.alpha, max_cond=args.max_cond)
    payload = {
        "parents": list(result.parents),
        "alpha": args.alpha,
        "max_cond": args.max_cond,
        "n_tests": len(result.trace),
    }
    if args.verbose:
        payload["trace"] = [
            {"feature": t.feature, "conditioning": list(t.conditioning),
             "p_value": t.p_value, "independent": t.independent}
            for t in result.trace
        ]
    _emit(args, payload, " ".join(result.parents))
    if args.verbose and not args.json:
        for t in result.trace:
            print(f"  {t.feature} | {','.join(t.conditioning) or '-'} "
                  f"p={t.p_value:.4g} {'indep' if t.independent else 'dep'}",
                  file=sys.stderr)
    return 0


def _cmd_train(args) -> int:
    _validate_alpha(args.alpha)
    table = _load_table(args.data, args.outcome)
    if args.all_features:
        parents = table.feature_names
        trace_len = 0
    else:
        result = find_parents(table, alpha=args.alpha, max_cond=args.max_cond)
        parents = result.parents
        trace_len = len(result.trace)
    if not parents:
        raise UsageError("discovery found no direct causes; nothing to train on "
                         "(rerun with --all-features to bypass discovery)")
    from .dataset import project

    spec = _spec_from_args(args)
    model = train(spec, project(table, parents))
    save_model(model, args.out, metadata={
        "parents": list(parents),
        "alpha": args.alpha,
        "all_features": bool(args.all_features),
        "source": args.data,
    })
    payload = {"model_path": args.out, "kind": spec.kind,
               "parents": list(parents), "n_tests": trace_len,
               "warnings": list(model.warnings)}
    _emit(args, payload, f"trained {spec.kind} on [{' '.join(parents)}] -> {args.out}")
    return 0


def _load_model_with_parents(path: str):
    model = load_model(path)
    meta = model_metadata(path) or {}
    parents = tuple(meta.get("parents", model.feature_names))
    return model, ParentSet(parents, ())


def _cmd_whatif(args) -> int:
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    model, parent_set = _load_model_with_parents(args.model)
    instance = _parse_instance(args.instance)
    report = build_report(
        model, instance, parent_set, k=args.k, delta=args.delta,
        class_of_interest=args.class_of_interest,
        rank_by=args.rank_by or "signed", model_ref=args.model,
    )
    payload = report_to_dict(report)
    _emit(args, payload, _human_report(payload))
    return 0


def _cmd_intervene(args) -> int:
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    model, parent_set = _load_model_with_parents(args.model)
    instance = _parse_instance(args.instance)
    result = apply_intervention(
        model, instance, args.feature, args.value,
        class_of_interest=args.class_of_interest, k=args.k,
        delta=args.delta, parent_set=parent_set, model_ref=args.model,
    )
    payload = {"new_prediction": result.new_prediction,
               "report": report_to_dict(result.report)}
    _emit(args, payload,
          f"do({args.feature}={args.value}) -> prediction {result.new_prediction:.6f}")
    return 0


def _cmd_bench(args) -> int:
    import os

    os.makedirs(args.out, exist_ok=True)
    kinds = []
    for alias in args.models.split(","):
        alias = alias.strip()
        if alias not in MODEL_ALIASES:
            raise UsageError(f"unknown model alias {alias!r}")
        kinds.append(MODEL_ALIASES[alias])
    specs = []
    for kind in kinds:
        kw = {"kind": kind}
        if kind == RANDOM_FOREST:
            if args.trees:
                kw["n_trees"] = args.trees
            if args.min_leaf:
                kw["min_leaf"] = args.min_leaf
        elif kind == DECISION_TREE and args.min_leaf:
            kw["min_leaf"] = args.min_leaf
        specs.append(ModelSpec(**kw))

    if args.experiment == "bias":
        sizes = [int(s) for s in args.sizes.split(",")]
        rows = bias_experiment(args.scm, sizes, args.reps, specs, args.seed)
        stem = f"bias_{args.scm}"
    else:
        rows = robustness_experiment(args.n, args.reps, specs, args.seed)
        stem = "robust_wine"
    md = f"{args.out}/{stem}.md"
    cs = f"{args.out}/{stem}.csv"
    emit_report(rows, "markdown", md, scale=100.0 if args.scale100 else 1.0)
    emit_report(rows, "csv", cs)
    payload = {"markdown": md, "csv": cs, "rows": len(rows)}
    _emit(args, payload, f"wrote {md} and {cs}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    origins = [o.strip() for o in args.cors.split(",")] if args.cors else ["*"]
    app = create_app(model_dir=args.model_dir, cors_origins=origins)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    return 0


def _human_report(payload: dict) -> str:
    lines = [f"prediction: {payload['prediction']:.6f}"]
    if payload.get("class_of_interest") is not None:
        lines[0] += f" (probability of class {payload['class_of_interest']:g})"
    for e in payload["entries"]:
        lines.append(
            f"  #{e['rank']} {e['feature']}: cde {e['cde']:+.6f} "
            f"(set {e['control']:g} -> {e['treated']:g})"
        )
    for w in payload.get("warnings", []):
        lines.append(f"  warning: {w}")
    return "\n".join(lines)


def _emit(args, payload: dict, human: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


_HANDLERS = {
    "gen": _cmd_gen,
    "discover": _cmd_discover,
    "train": _cmd_train,
    "whatif": _cmd_whatif,
    "intervene": _cmd_intervene,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CausalWhatifError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
