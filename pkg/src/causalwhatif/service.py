"""HTTP/JSON facade over trained models for the what-if UI.

The registry is insert-once: a model becomes visible atomically at
registration and is never mutated afterwards, so concurrent readers need no
coordination. Request bodies are parsed by hand so every failure maps to the
documented {error, detail} shape instead of a framework-specific body.
"""
from __future__ import annotations

import glob
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import lru_cache

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .dataset import BINARY, DataTable, binarize_by_median, load_csv_text, one_hot_encode, project
from .discovery import ParentSet, find_parents
from .errors import CausalWhatifError
from .models import (
    MODEL_KINDS,
    ModelSpec,
    TrainedModel,
    load_model,
    model_metadata,
    train,
)
from .scm import make_g1, make_g2, make_wine, sample
from .whatif import apply_intervention, build_report, report_to_dict

MAX_INLINE_CSV_BYTES = 10 * 1024 * 1024

_SPEC_ALIASES = {"lr": "linear_regression", "logreg": "logistic_regression",
                 "dt": "decision_tree", "rf": "random_forest"}

FIXTURE_SEED = 988011
_FIXTURE_DEFS = {
    "g1-2k": ("g1", 2000, False),
    "g1-10k": ("g1", 10000, False),
    "g1b-10k": ("g1", 10000, True),
    "g2-2k": ("g2", 2000, False),
    "g2-10k": ("g2", 10000, False),
    "g2b-10k": ("g2", 10000, True),
    "wine0-10k": ("wine0", 10000, False),
    "wine1-10k": ("wine1", 10000, False),
}


@lru_cache(maxsize=None)
def fixture_table(fixture_id: str) -> DataTable:
    scm_id, n, binarize = _FIXTURE_DEFS[fixture_id]
    if scm_id == "g1":
        scm = make_g1()
    elif scm_id == "g2":
        scm = make_g2()
    else:
        scm = make_wine(int(scm_id[-1]))
    table = sample(scm, n, FIXTURE_SEED)
    if binarize:
        table = binarize_by_median(table, [table.outcome])
    return table


def fixture_ids() -> list[str]:
    return sorted(_FIXTURE_DEFS)


@dataclass(frozen=True)
class RegistryEntry:
    model_id: str
    name: str
    created_at: str
    model: TrainedModel
    parents: ParentSet
    class_of_interest: float
    feature_ranges: dict[str, tuple[float, float]]


class ModelRegistry:
    """Insert-once map of model_id -> immutable entry."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, RegistryEntry] = {}
        self._counter = 0

    def add(self, name: str, model: TrainedModel, parents: ParentSet,
            class_of_interest: float,
            feature_ranges: dict[str, tuple[float, float]],
            model_id: str | None = None) -> RegistryEntry:
        with self._lock:
            if model_id is None:
                self._counter += 1
                model_id = f"m{self._counter}"
            if model_id in self._entries:
                raise ValueError(f"model id {model_id!r} already registered")
            entry = RegistryEntry(
                model_id=model_id, name=name,
                created_at=datetime.now(timezone.utc).isoformat(),
                model=model, parents=parents,
                class_of_interest=class_of_interest,
                feature_ranges=dict(feature_ranges),
            )
            self._entries[model_id] = entry
            return entry

    def get(self, model_id: str) -> RegistryEntry | None:
        return self._entries.get(model_id)

    def list(self) -> list[RegistryEntry]:
        return sorted(self._entries.values(), key=lambda e: e.model_id)


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def _feature_ranges(table: DataTable, names) -> dict[str, tuple[float, float]]:
    out = {}
    for name in names:
        col = table.column(name)
        out[name] = (float(col.values.min()), float(col.values.max()))
    return out


def _entry_metadata(entry: RegistryEntry) -> dict:
    model = entry.model
    features = []
    for name, kind in zip(model.feature_names, model.feature_kinds):
        lo, hi = entry.feature_ranges.get(name, (0.0, 1.0))
        features.append({"name": name, "kind": kind, "min": lo, "max": hi})
    return {
        "model_id": entry.model_id,
        "name": entry.name,
        "created_at": entry.created_at,
        "model_kind": model.spec.kind,
        "outcome": {"name": model.outcome_name, "kind": model.outcome_kind},
        "class_of_interest": entry.class_of_interest
        if model.outcome_kind == BINARY else None,
        "parents": list(entry.parents.parents),
        "features": features,
        "n_train": model.n_train,
        "warnings": list(model.warnings),
    }


def _parse_spec(raw: dict) -> ModelSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ValueError("model_spec must be an object with a 'kind' field")
    kind = _SPEC_ALIASES.get(raw["kind"], raw["kind"])
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {raw['kind']!r}")
    kw = {"kind": kind}
    for key in ("seed", "max_depth", "min_leaf", "n_trees", "max_iters",
                "l2_penalty", "smoothing", "store_leaf_values"):
        if key in raw and raw[key] is not None:
            kw[key] = raw[key]
    return ModelSpec(**kw)


def _load_models_from_dir(registry: ModelRegistry, model_dir: str) -> None:
    for path in sorted(glob.glob(os.path.join(model_dir, "*.json"))):
        model = load_model(path)
        meta = model_metadata(path) or {}
        parents = ParentSet(tuple(meta.get("parents", model.feature_names)), ())
        ranges = {name: (0.0, 1.0) if kind == BINARY else (float("-inf"), float("inf"))
                  for name, kind in zip(model.feature_names, model.feature_kinds)}
        if "feature_ranges" in meta:
            ranges.update({k: tuple(v) for k, v in meta["feature_ranges"].items()})
        registry.add(
            name=os.path.splitext(os.path.basename(path))[0],
            model=model, parents=parents,
            class_of_interest=float(meta.get("class_of_interest", 1.0)),
            feature_ranges=ranges,
            model_id=os.path.splitext(os.path.basename(path))[0],
        )


def create_app(model_dir: str | None = None,
               cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="causalwhatif", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = ModelRegistry()
    app.state.registry = registry
    if model_dir:
        _load_models_from_dir(registry, model_dir)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/fixtures")
    def fixtures():
        return {"fixtures": fixture_ids()}

    @app.get("/api/models")
    def list_models():
        return {"models": [_entry_metadata(e) for e in registry.list()]}

    @app.get("/api/models/{model_id}")
    def get_model(model_id: str):
        entry = registry.get(model_id)
        if entry is None:
            return _error(404, "unknown_model", f"no model {model_id!r}")
        return _entry_metadata(entry)

    @app.post("/api/models", status_code=201)
    async def register_model(request: Request):
        body, err = await _body(request)
        if err:
            return err
        try:
            if "fixture_id" in body:
                fid = body["fixture_id"]
                if fid not in _FIXTURE_DEFS:
                    return _error(404, "unknown_fixture", f"no fixture {fid!r}")
                table = fixture_table(fid)
                name = fid
            elif "csv" in body:
                text = body["csv"]
                if not isinstance(text, str):
                    return _error(400, "bad_request", "csv must be a string")
                if len(text.encode("utf-8")) > MAX_INLINE_CSV_BYTES:
                    return _error(413, "payload_too_large",
                                  "inline csv exceeds 10 MB; use the CLI for large data")
                if "outcome" not in body:
                    return _error(400, "bad_request", "csv ingestion needs 'outcome'")
                table = load_csv_text(text, body["outcome"])
                if any(c.kind == "categorical" for c in table.columns):
                    table = one_hot_encode(table)
                name = body.get("name", "inline-csv")
            else:
                return _error(400, "bad_request", "provide 'csv' or 'fixture_id'")

            spec = _parse_spec(body.get("model_spec", {"kind": "random_forest"}))
            alpha = float(body.get("alpha", 0.05))
            if not 0.0 < alpha < 1.0:
                return _error(400, "bad_request", "alpha must be in (0, 1)")
            max_cond = int(body.get("max_cond", 3))
            class_of_interest = float(body.get("class_of_interest", 1.0))

            warnings: list[str] = []
            if body.get("all_features"):
                parents = ParentSet(table.feature_names, ())
            else:
                parents = find_parents(table, alpha=alpha, max_cond=max_cond)
                if not parents.parents:
                    return _error(400, "empty_parent_set",
                                  "discovery found no direct causes; "
                                  "register with all_features=true to bypass")
            projected = project(table, parents.parents)
            model = train(spec, projected)
            warnings.extend(model.warnings)
            entry = registry.add(
                name=name, model=model, parents=parents,
                class_of_interest=class_of_interest,
                feature_ranges=_feature_ranges(table, model.feature_names),
            )
        except (CausalWhatifError, ValueError) as exc:
            return _error(400, "bad_request", str(exc))
        return JSONResponse(status_code=201, content={
            "model_id": entry.model_id,
            "parents": list(parents.parents),
            "warnings": warnings,
        })

    @app.post("/api/models/{model_id}/whatif")
    async def whatif(model_id: str, request: Request):
        entry = registry.get(model_id)
        if entry is None:
            return _error(404, "unknown_model", f"no model {model_id!r}")
        body, err = await _body(request)
        if err:
            return err
        instance = body.get("instance")
        if not isinstance(instance, dict):
            return _error(400, "bad_request", "body needs an 'instance' object")
        try:
            report = build_report(
                entry.model, {k: float(v) for k, v in instance.items()},
                entry.parents,
                k=int(body.get("k", 3)),
                delta=float(body.get("delta", 1.0)),
                class_of_interest=entry.class_of_interest,
                rank_by=body.get("rank_by", "signed"),
                model_ref=entry.model_id,
            )
        except (CausalWhatifError, ValueError) as exc:
            return _error(400, "bad_request", str(exc))
        return report_to_dict(report)

    @app.post("/api/models/{model_id}/intervene")
    async def intervene(model_id: str, request: Request):
        entry = registry.get(model_id)
        if entry is None:
            return _error(404, "unknown_model", f"no model {model_id!r}")
        body, err = await _body(request)
        if err:
            return err
        instance = body.get("instance")
        if not isinstance(instance, dict):
            return _error(400, "bad_request", "body needs an 'instance' object")
        if "feature" not in body or "new_value" not in body:
            return _error(400, "bad_request", "body needs 'feature' and 'new_value'")
        try:
            result = apply_intervention(
                entry.model, {k: float(v) for k, v in instance.items()},
                body["feature"], float(body["new_value"]),
                class_of_interest=entry.class_of_interest,
                k=int(body.get("k", 3)),
                delta=float(body.get("delta", 1.0)),
                parent_set=entry.parents,
                model_ref=entry.model_id,
            )
        except (CausalWhatifError, ValueError) as exc:
            return _error(400, "bad_request", str(exc))
        return {
            "new_prediction": result.new_prediction,
            "report": report_to_dict(result.report),
        }

    return app


async def _body(request: Request):
    raw = await request.body()
    if len(raw) > MAX_INLINE_CSV_BYTES + 1024:
        return None, _error(413, "payload_too_large", "request body exceeds the limit")
    try:
        body = json.loads(raw)
    except json.JSONDecodeError as exc:
        return None, _error(400, "malformed_json", str(exc))
    if not isinstance(body, dict):
        return None, _error(400, "bad_request", "body must be a JSON object")
    return body, None
