"""End-to-end what-if pipeline: discover direct causes, fit a model on them,
read controlled direct effects off the model's predictions, rank the top-k
intervention candidates for an instance.

The effect of flipping (or nudging) one feature while holding the model's
other inputs at the instance's values is read directly from the fitted
conditional: probability contrasts for binary outcomes, prediction contrasts
for continuous ones. The control value is always the instance's current
value; the treated value is the flipped value for binary features and
value + delta for continuous ones.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Mapping

from .dataset import BINARY, DataTable, project
from .discovery import ParentSet, find_parents
from .errors import (
    LeafDistributionUnavailableError,
    MissingFeatureValueError,
    UnknownFeatureError,
)
from .models import ModelSpec, TrainedModel, train

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CdeEstimate:
    """Controlled direct effect of one feature at a concrete instance context.

    rank is 0 for standalone estimates and 1-based inside a report.
    """

    feature: str
    control_value: float
    treated_value: float
    cde: float
    rank: int = 0


@dataclass(frozen=True)
class WhatIfReport:
    instance: dict[str, float]
    predicted: float
    class_of_interest: float | None
    top_k: tuple[CdeEstimate, ...]
    parents_used: ParentSet
    model_ref: str = ""
    warnings: tuple[str, ...] = ()
    excluded: tuple[str, ...] = ()
    exceedance: dict | None = None


def _oriented_prediction(model: TrainedModel, vector, class_of_interest) -> float:
    raw = float(model.predict_batch(vector)[0])
    if model.outcome_kind == BINARY and class_of_interest == 0.0:
        return 1.0 - raw
    return raw


Delta = float | Mapping[str, float]


def _delta_for(delta: Delta, feature: str) -> float:
    if isinstance(delta, Mapping):
        return float(delta.get(feature, 1.0))
    return float(delta)


def estimate_cde(model: TrainedModel, instance: Mapping[str, float], feature: str,
                 delta: Delta = 1.0, class_of_interest: float = 1.0) -> CdeEstimate:
    """Model-based controlled direct effect of one feature for one instance.

    Binary features contrast the flipped value against the current one;
    continuous features contrast value + delta against the current value.
    delta may be a single step or a per-feature mapping (missing entries
    fall back to 1.0).
    """
    if feature not in model.feature_names:
        raise UnknownFeatureError(f"feature {feature!r} is not a model input")
    for name in model.feature_names:
        if name not in instance:
            raise MissingFeatureValueError(f"instance is missing feature {name!r}")
    j = model.feature_names.index(feature)
    control = float(instance[feature])
    if model.feature_kinds[j] == BINARY:
        if control not in (0.0, 1.0):
            raise MissingFeatureValueError(
                f"binary feature {feature!r} has non-binary value {control!r}"
            )
        treated = 1.0 - control
    else:
        treated = control + _delta_for(delta, feature)

    base = model._vector(instance)
    treated_vec = base.copy()
    treated_vec[0, j] = treated
    p_control = _oriented_prediction(model, base, class_of_interest)
    p_treated = _oriented_prediction(model, treated_vec, class_of_interest)
    return CdeEstimate(feature, control, treated, p_treated - p_control)


def _ranked(estimates: list[CdeEstimate], model: TrainedModel, k: int,
            rank_by: str) -> tuple[CdeEstimate, ...]:
    index = {name: i for i, name in enumerate(model.feature_names)}
    if rank_by == "abs":
        key = lambda e: (-abs(e.cde), index[e.feature])
    else:
        key = lambda e: (-e.cde, index[e.feature])
    ordered = sorted(estimates, key=key)[: max(k, 0)]
    return tuple(replace(e, rank=i + 1) for i, e in enumerate(ordered))


def _rank_all(model: TrainedModel, instance: Mapping[str, float], k: int,
              delta: Delta, class_of_interest: float, rank_by: str):
    estimates = [
        estimate_cde(model, instance, f, delta, class_of_interest)
        for f in model.feature_names
    ]
    return _ranked(estimates, model, k, rank_by)


def run_whatif(table: DataTable, instance: Mapping[str, float], k: int = 3,
               delta: Delta = 1.0, alpha: float = 0.05,
               spec: ModelSpec | None = None, class_of_interest: float = 1.0,
               max_cond: int = 3, rank_by: str = "signed",
               include_excluded: bool = False,
               exceedance_threshold: float | None = None,
               model_ref: str = "") -> tuple[WhatIfReport, TrainedModel | None]:
    """Full pipeline on a table: discovery, projection, training, prediction
    and top-k ranked effects for the given instance.

    The effect estimates are causal only when the table contains every direct
    cause of the outcome and no variables affected by it; that precondition
    is the caller's responsibility. Returns the report together with the
    fitted model (None when discovery found no direct causes and the
    prediction fell back to the base rate).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if rank_by not in ("signed", "abs"):
        raise ValueError("rank_by must be 'signed' or 'abs'")
    if spec is None:
        spec = ModelSpec("random_forest")
    parent_set = find_parents(table, alpha=alpha, max_cond=max_cond)
    excluded = tuple(f for f in table.feature_names if f not in parent_set.parents)

    if not parent_set.parents:
        outcome = table.outcome_column()
        if outcome.kind == BINARY:
            base = float((outcome.values == class_of_interest).mean())
        else:
            base = float(outcome.values.mean())
        report = WhatIfReport(
            instance=dict(instance), predicted=base,
            class_of_interest=class_of_interest if outcome.kind == BINARY else None,
            top_k=(), parents_used=parent_set, model_ref=model_ref,
            warnings=("empty_parent_set: prediction is the outcome base rate",),
            excluded=excluded if include_excluded else (),
        )
        return report, None

    projected = project(table, parent_set.parents)
    model = train(spec, projected)
    report = build_report(
        model, instance, parent_set, k=k, delta=delta,
        class_of_interest=class_of_interest, rank_by=rank_by,
        include_excluded=include_excluded, excluded=excluded,
        exceedance_threshold=exceedance_threshold, model_ref=model_ref,
    )
    return report, model


def build_report(model: TrainedModel, instance: Mapping[str, float],
                 parent_set: ParentSet, k: int = 3, delta: Delta = 1.0,
                 class_of_interest: float = 1.0, rank_by: str = "signed",
                 include_excluded: bool = False, excluded: tuple[str, ...] = (),
                 exceedance_threshold: float | None = None,
                 model_ref: str = "") -> WhatIfReport:
    """Assemble a what-if report from an already-fitted model."""
    for name in model.feature_names:
        if name not in instance:
            raise MissingFeatureValueError(f"instance is missing feature {name!r}")
    coi = class_of_interest if model.outcome_kind == BINARY else None
    predicted = _oriented_prediction(model, model._vector(instance), class_of_interest)
    top = _rank_all(model, instance, k, delta, class_of_interest, rank_by)
    exceedance = None
    if exceedance_threshold is not None:
        # only defined for regression trees/forests retaining leaf samples
        if not hasattr(model, "exceedance_proba"):
            raise LeafDistributionUnavailableError(
                "exceedance reporting needs a tree or forest model with leaf "
                "value retention; refusing to fabricate probabilities"
            )
        prob = model.exceedance_proba(instance, exceedance_threshold)
        exceedance = {"threshold": float(exceedance_threshold), "probability": prob}
    return WhatIfReport(
        instance={name: float(v) for name, v in instance.items()},
        predicted=predicted, class_of_interest=coi, top_k=top,
        parents_used=parent_set, model_ref=model_ref,
        excluded=excluded if include_excluded else (),
        exceedance=exceedance,
    )


@dataclass(frozen=True)
class InterventionResult:
    new_prediction: float
    report: WhatIfReport


def apply_intervention(model: TrainedModel, instance: Mapping[str, float],
                       feature: str, new_value: float,
                       class_of_interest: float = 1.0, k: int = 3,
                       delta: Delta = 1.0, rank_by: str = "signed",
                       parent_set: ParentSet | None = None,
                       model_ref: str = "") -> InterventionResult:
    """Set one feature to a new value and re-evaluate prediction and ranking.

    The returned report is a fresh what-if report at the modified instance,
    which makes chained interventions equal a single call at the final
    instance.
    """
    if feature not in model.feature_names:
        raise UnknownFeatureError(f"feature {feature!r} is not a model input")
    for name in model.feature_names:
        if name not in instance:
            raise MissingFeatureValueError(f"instance is missing feature {name!r}")
    modified = {name: float(v) for name, v in instance.items()}
    modified[feature] = float(new_value)
    if parent_set is None:
        parent_set = ParentSet(tuple(model.feature_names), ())
    report = build_report(
        model, modified, parent_set, k=k, delta=delta,
        class_of_interest=class_of_interest, rank_by=rank_by, model_ref=model_ref,
    )
    return InterventionResult(report.predicted, report)


# -- report serialization --------------------------------------------------------


def report_to_dict(report: WhatIfReport) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "instance": report.instance,
        "prediction": report.predicted,
        "class_of_interest": report.class_of_interest,
        "entries": [
            {
                "feature": e.feature,
                "control": e.control_value,
                "treated": e.treated_value,
                "cde": e.cde,
                "rank": e.rank,
            }
            for e in report.top_k
        ],
        "parents": list(report.parents_used.parents),
        "warnings": list(report.warnings),
        # discovery-eliminated features have zero direct effect by construction
        "excluded": [
            {"feature": f, "cde": 0.0, "reason": "excluded-by-discovery"}
            for f in report.excluded
        ],
        "exceedance": report.exceedance,
        "model_ref": report.model_ref,
    }


def report_to_json(report: WhatIfReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True)
