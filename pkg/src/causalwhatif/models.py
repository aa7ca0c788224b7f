"""Native predictive models: linear and logistic regression, CART trees, and
bagged forests, exposing conditional expectations / class-1 probabilities.

All fits are deterministic functions of (spec, data): linear regression uses
normal equations with a ridge fallback on singular designs, logistic
regression a step-halving damped Newton iteration, trees an exact CART search
with a fixed tie-break (lowest feature index, then lowest threshold), and
forests draw per-tree seeds from a seed sequence fixed by the spec seed.
Continuous split candidates come from a per-fit quantile grid (at most 64
bins) so split search stays linear in the node size.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .dataset import BINARY, CATEGORICAL, CONTINUOUS, DataTable
from .errors import (
    CorruptFileError,
    IncompatibleOutcomeError,
    LeafDistributionUnavailableError,
    MissingFeatureError,
    SchemaVersionMismatchError,
    WrongOutcomeKindError,
)
from .scm import sigmoid

MODEL_SCHEMA_VERSION = 1

LINEAR_REGRESSION = "linear_regression"
LOGISTIC_REGRESSION = "logistic_regression"
DECISION_TREE = "decision_tree"
RANDOM_FOREST = "random_forest"

MODEL_KINDS = (LINEAR_REGRESSION, LOGISTIC_REGRESSION, DECISION_TREE, RANDOM_FOREST)

_TREE_PARAMS = {"max_depth", "min_leaf", "smoothing", "store_leaf_values"}
_APPLICABLE = {
    LINEAR_REGRESSION: set(),
    LOGISTIC_REGRESSION: {"max_iters", "l2_penalty"},
    DECISION_TREE: set(_TREE_PARAMS),
    RANDOM_FOREST: _TREE_PARAMS | {"n_trees"},
}

_MAX_CONTINUOUS_BINS = 64
_DEPTH_CAP = 64


@dataclass(frozen=True)
class ModelSpec:
    """Model kind, seed, and kind-appropriate hyperparameters.

    Unset fields take per-kind defaults at train time; setting a field that
    the kind does not use is rejected.
    """

    kind: str
    seed: int = 0
    max_depth: int | None = None
    min_leaf: int | None = None
    n_trees: int | None = None
    max_iters: int | None = None
    l2_penalty: float | None = None
    smoothing: bool | None = None
    store_leaf_values: bool | None = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        allowed = _APPLICABLE[self.kind]
        for name in ("max_depth", "min_leaf", "n_trees", "max_iters",
                     "l2_penalty", "smoothing", "store_leaf_values"):
            value = getattr(self, name)
            if value is not None and name not in allowed:
                raise ValueError(f"{name} does not apply to {self.kind}")
        for name in ("max_depth", "min_leaf", "n_trees", "max_iters"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.l2_penalty is not None and self.l2_penalty < 0:
            raise ValueError("l2_penalty must be >= 0")

    def resolved(self) -> "ModelSpec":
        """Fill unset hyperparameters with their per-kind defaults."""
        out = self
        if self.kind == LOGISTIC_REGRESSION:
            out = replace(out,
                          max_iters=self.max_iters or 100,
                          l2_penalty=1e-6 if self.l2_penalty is None else self.l2_penalty)
        if self.kind in (DECISION_TREE, RANDOM_FOREST):
            out = replace(out,
                          min_leaf=self.min_leaf or 5,
                          smoothing=True if self.smoothing is None else self.smoothing)
            store_default = self.kind == DECISION_TREE
            out = replace(out, store_leaf_values=store_default
                          if self.store_leaf_values is None else self.store_leaf_values)
        if self.kind == RANDOM_FOREST:
            out = replace(out, n_trees=self.n_trees or 500)
        return out


# -- feature/outcome extraction -----------------------------------------------


def _design(table: DataTable):
    features = [c for c in table.columns if c.name != table.outcome]
    if not features:
        raise IncompatibleOutcomeError("table has no feature columns")
    for c in features:
        if c.kind == CATEGORICAL:
            raise IncompatibleOutcomeError(
                f"feature {c.name!r} is categorical; one-hot encode before training"
            )
    outcome = table.outcome_column()
    if outcome.kind == CATEGORICAL:
        raise IncompatibleOutcomeError("categorical outcomes are not supported")
    X = np.column_stack([c.values for c in features])
    y = outcome.values.astype(np.float64)
    names = tuple(c.name for c in features)
    kinds = tuple(c.kind for c in features)
    return X, y, names, kinds, outcome.kind


class TrainedModel:
    """Immutable fitted predictor over a fixed, ordered feature list."""

    def __init__(self, spec: ModelSpec, feature_names: tuple[str, ...],
                 feature_kinds: tuple[str, ...], outcome_kind: str,
                 outcome_name: str, n_train: int, warnings: tuple[str, ...] = ()):
        self.spec = spec
        self.feature_names = tuple(feature_names)
        self.feature_kinds = tuple(feature_kinds)
        self.outcome_kind = outcome_kind
        self.outcome_name = outcome_name
        self.n_train = n_train
        self.warnings = tuple(warnings)

    # subclasses implement raw batch prediction
    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _vector(self, instance: Mapping[str, float]) -> np.ndarray:
        row = np.empty((1, len(self.feature_names)))
        for j, name in enumerate(self.feature_names):
            if name not in instance:
                raise MissingFeatureError(f"instance is missing feature {name!r}")
            row[0, j] = float(instance[name])
        return row

    def predict_proba(self, instance: Mapping[str, float]) -> float:
        """Probability of class 1 for a binary outcome."""
        if self.outcome_kind != BINARY:
            raise WrongOutcomeKindError("predict_proba needs a binary outcome model")
        return float(self.predict_batch(self._vector(instance))[0])

    def predict_value(self, instance: Mapping[str, float]) -> float:
        """Conditional expectation for a continuous outcome."""
        if self.outcome_kind != CONTINUOUS:
            raise WrongOutcomeKindError("predict_value needs a continuous outcome model")
        return float(self.predict_batch(self._vector(instance))[0])

    def predict(self, instance: Mapping[str, float]) -> float:
        """Kind-appropriate prediction (probability or expectation)."""
        if self.outcome_kind == BINARY:
            return self.predict_proba(instance)
        return self.predict_value(instance)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _header(self) -> dict:
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "kind": self.spec.kind,
            "spec": _spec_to_dict(self.spec),
            "feature_names": list(self.feature_names),
            "feature_kinds": list(self.feature_kinds),
            "outcome_kind": self.outcome_kind,
            "outcome_name": self.outcome_name,
            "n_train": self.n_train,
            "warnings": list(self.warnings),
        }


# -- linear regression ---------------------------------------------------------


class LinearRegressionModel(TrainedModel):
    def __init__(self, coefficients: np.ndarray, intercept: float, **kw):
        super().__init__(**kw)
        self.coefficients = np.asarray(coefficients, dtype=np.float64)
        self.intercept = float(intercept)

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        return self.intercept + X @ self.coefficients

    def to_dict(self) -> dict:
        d = self._header()
        d["params"] = {
            "intercept": self.intercept,
            "coefficients": self.coefficients.tolist(),
        }
        return d


def _fit_linear(spec, X, y, names, kinds, outcome_name):
    n, m = X.shape
    design = np.column_stack([np.ones(n), X])
    gram = design.T @ design
    rhs = design.T @ y
    warnings: list[str] = []
    solution = None
    try:
        if np.linalg.cond(gram) < 1e12:
            solution = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        solution = None
    if solution is None or not np.isfinite(solution).all():
        gram = gram + 1e-8 * np.eye(m + 1)
        solution = np.linalg.solve(gram, rhs)
        warnings.append("singular_design_ridge_fallback")
    return LinearRegressionModel(
        solution[1:], solution[0], spec=spec, feature_names=names,
        feature_kinds=kinds, outcome_kind=CONTINUOUS, outcome_name=outcome_name,
        n_train=n, warnings=tuple(warnings),
    )


# -- logistic regression ---------------------------------------------------------


class LogisticRegressionModel(TrainedModel):
    def __init__(self, coefficients: np.ndarray, intercept: float,
                 loss_trace: tuple[float, ...] = (), converged: bool = True, **kw):
        super().__init__(**kw)
        self.coefficients = np.asarray(coefficients, dtype=np.float64)
        self.intercept = float(intercept)
        self.loss_trace = tuple(loss_trace)
        self.converged = converged

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.intercept + X @ self.coefficients)

    def to_dict(self) -> dict:
        d = self._header()
        d["params"] = {
            "intercept": self.intercept,
            "coefficients": self.coefficients.tolist(),
            "converged": self.converged,
        }
        return d


def _log_loss(z: np.ndarray, y: np.ndarray, w: np.ndarray, l2: float) -> float:
    # -sum[y log p + (1-y) log(1-p)] = sum[softplus(z) - y*z], stable for large |z|
    loss = float(np.sum(np.logaddexp(0.0, z) - y * z))
    return loss + 0.5 * l2 * float(w[1:] @ w[1:])


def _fit_logistic(spec, X, y, names, kinds, outcome_name):
    n, m = X.shape
    design = np.column_stack([np.ones(n), X])
    l2 = spec.l2_penalty
    penalty_mask = np.ones(m + 1)
    penalty_mask[0] = 0.0  # intercept unpenalized
    w = np.zeros(m + 1)
    trace: list[float] = []
    converged = False
    for _ in range(spec.max_iters):
        z = design @ w
        p = sigmoid(z)
        grad = design.T @ (p - y) + l2 * penalty_mask * w
        trace.append(_log_loss(z, y, w, l2))
        if np.max(np.abs(grad)) <= 1e-8:
            converged = True
            break
        weights = p * (1.0 - p)
        hessian = design.T @ (design * weights[:, None]) + l2 * np.diag(penalty_mask)
        hessian += 1e-12 * np.eye(m + 1)
        step = np.linalg.solve(hessian, grad)
        current = trace[-1]
        eta = 1.0
        for _ in range(30):
            candidate = w - eta * step
            if _log_loss(design @ candidate, y, candidate, l2) < current:
                break
            eta *= 0.5
        w = w - eta * step
    else:
        z = design @ w
        trace.append(_log_loss(z, y, w, l2))
    return LogisticRegressionModel(
        w[1:], w[0], tuple(trace), converged, spec=spec, feature_names=names,
        feature_kinds=kinds, outcome_kind=BINARY, outcome_name=outcome_name, n_train=n,
    )


# -- CART trees -------------------------------------------------------------------


class _Tree:
    """Flat-array CART tree; classification leaves hold (count1, count),
    regression leaves hold the mean (plus raw values when retained)."""

    __slots__ = ("feature", "threshold", "left", "right", "is_leaf",
                 "leaf_value", "leaf_n1", "leaf_n", "leaf_values", "task")

    def __init__(self, task: str):
        self.task = task
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.is_leaf: list[bool] = []
        self.leaf_value: list[float] = []
        self.leaf_n1: list[float] = []
        self.leaf_n: list[int] = []
        self.leaf_values: list[list[float] | None] = []

    def _new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.is_leaf.append(False)
        self.leaf_value.append(0.0)
        self.leaf_n1.append(0.0)
        self.leaf_n.append(0)
        self.leaf_values.append(None)
        return len(self.feature) - 1

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index for each row."""
        n = X.shape[0]
        out = np.empty(n, dtype=np.int64)
        stack = [(0, np.arange(n))]
        while stack:
            nid, rows = stack.pop()
            if rows.size == 0:
                continue
            if self.is_leaf[nid]:
                out[rows] = nid
                continue
            go_left = X[rows, self.feature[nid]] <= self.threshold[nid]
            stack.append((self.left[nid], rows[go_left]))
            stack.append((self.right[nid], rows[~go_left]))
        return out

    def predict(self, X: np.ndarray, smoothing: bool) -> np.ndarray:
        leaves = self.apply(X)
        if self.task == "classification":
            n1 = np.array(self.leaf_n1)[leaves]
            n = np.array(self.leaf_n, dtype=np.float64)[leaves]
            if smoothing:
                return (n1 + 1.0) / (n + 2.0)
            return n1 / np.maximum(n, 1.0)
        return np.array(self.leaf_value)[leaves]

    def to_payload(self) -> dict:
        return {
            "task": self.task,
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "is_leaf": self.is_leaf,
            "leaf_value": self.leaf_value,
            "leaf_n1": self.leaf_n1,
            "leaf_n": self.leaf_n,
            "leaf_values": self.leaf_values,
        }

    @classmethod
    def from_payload(cls, d: dict) -> "_Tree":
        tree = cls(d["task"])
        tree.feature = list(d["feature"])
        tree.threshold = [float(t) for t in d["threshold"]]
        tree.left = list(d["left"])
        tree.right = list(d["right"])
        tree.is_leaf = list(d["is_leaf"])
        tree.leaf_value = [float(v) for v in d["leaf_value"]]
        tree.leaf_n1 = [float(v) for v in d["leaf_n1"]]
        tree.leaf_n = list(d["leaf_n"])
        tree.leaf_values = [list(v) if v is not None else None for v in d["leaf_values"]]
        return tree


def _split_candidates(X: np.ndarray, kinds) -> list[np.ndarray]:
    """Per-feature ascending threshold arrays (quantile-binned for dense
    continuous features, exact midpoints otherwise)."""
    out = []
    for j, kind in enumerate(kinds):
        col = X[:, j]
        if kind == BINARY:
            out.append(np.array([0.5]))
            continue
        uniq = np.unique(col)
        if uniq.size <= 1:
            out.append(np.empty(0))
        elif uniq.size <= _MAX_CONTINUOUS_BINS + 1:
            out.append((uniq[:-1] + uniq[1:]) / 2.0)
        else:
            edges = np.unique(np.quantile(col, np.linspace(0, 1, _MAX_CONTINUOUS_BINS + 1)))
            out.append((edges[:-1] + edges[1:]) / 2.0)
    return out


def _grow_tree(X, y, kinds, task, max_depth, min_leaf, mtry, rng,
               store_leaf_values) -> _Tree:
    n, m = X.shape
    thresholds = _split_candidates(X, kinds)
    # bin index per row and feature: number of thresholds strictly below x
    bins = np.empty((n, m), dtype=np.int64)
    for j in range(m):
        bins[:, j] = np.searchsorted(thresholds[j], X[:, j], side="left")
    y2 = y * y if task == "regression" else None

    tree = _Tree(task)
    depth_cap = min(max_depth or _DEPTH_CAP, _DEPTH_CAP)
    root = tree._new_node()
    stack = [(root, np.arange(n), 0)]
    while stack:
        nid, rows, depth = stack.pop()
        ys = y[rows]
        total1 = float(ys.sum())
        count = rows.size
        pure = total1 in (0.0, float(count)) if task == "classification" \
            else bool(np.all(ys == ys[0]))
        if depth >= depth_cap or count < 2 * min_leaf or pure:
            _seal_leaf(tree, nid, ys, task, store_leaf_values)
            continue

        # Forests examine features in a seeded random order and stop once mtry
        # splittable ones were scored; they fall through to the rest when the
        # preferred draw has no valid split. Single trees scan all features in
        # index order, which realizes the lowest-index tie-break.
        if mtry is not None and mtry < m:
            feature_order = rng.permutation(m)
        else:
            feature_order = np.arange(m)

        best = None  # (score, feature, threshold_index)
        splittable_seen = 0
        for j in feature_order:
            if mtry is not None and splittable_seen >= mtry:
                break
            tj = thresholds[j]
            if tj.size == 0:
                continue
            b = bins[rows, j]
            k = tj.size + 1
            ctot = np.bincount(b, minlength=k).astype(np.float64)
            left_n = np.cumsum(ctot)[:-1]
            right_n = count - left_n
            valid = (left_n >= min_leaf) & (right_n >= min_leaf)
            if not valid.any():
                continue
            splittable_seen += 1
            if task == "classification":
                c1 = np.bincount(b, weights=ys, minlength=k)
                left_1 = np.cumsum(c1)[:-1]
                right_1 = total1 - left_1
                with np.errstate(divide="ignore", invalid="ignore"):
                    score = (2.0 * left_1 * (left_n - left_1) / left_n
                             + 2.0 * right_1 * (right_n - right_1) / right_n)
            else:
                cs = np.bincount(b, weights=ys, minlength=k)
                cq = np.bincount(b, weights=y2[rows], minlength=k)
                left_s = np.cumsum(cs)[:-1]
                left_q = np.cumsum(cq)[:-1]
                right_s = float(ys.sum()) - left_s
                right_q = float(y2[rows].sum()) - left_q
                with np.errstate(divide="ignore", invalid="ignore"):
                    score = ((left_q - left_s * left_s / left_n)
                             + (right_q - right_s * right_s / right_n))
            score = np.where(valid, score, np.inf)
            ti = int(np.argmin(score))
            if math.isfinite(score[ti]) and (best is None or score[ti] < best[0]):
                best = (float(score[ti]), int(j), ti)

        if best is None:
            _seal_leaf(tree, nid, ys, task, store_leaf_values)
            continue
        _, j, ti = best
        go_left = bins[rows, j] <= ti
        left_rows = rows[go_left]
        right_rows = rows[~go_left]
        tree.feature[nid] = j
        tree.threshold[nid] = float(thresholds[j][ti])
        left_id = tree._new_node()
        right_id = tree._new_node()
        tree.left[nid] = left_id
        tree.right[nid] = right_id
        stack.append((right_id, right_rows, depth + 1))
        stack.append((left_id, left_rows, depth + 1))
    return tree


def _seal_leaf(tree: _Tree, nid: int, ys: np.ndarray, task: str,
               store_leaf_values: bool) -> None:
    tree.is_leaf[nid] = True
    tree.leaf_n[nid] = ys.size
    if task == "classification":
        tree.leaf_n1[nid] = float(ys.sum())
    else:
        tree.leaf_value[nid] = float(ys.mean()) if ys.size else 0.0
        if store_leaf_values:
            tree.leaf_values[nid] = [float(v) for v in ys]


class DecisionTreeModel(TrainedModel):
    def __init__(self, tree: _Tree, **kw):
        super().__init__(**kw)
        self.tree = tree

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        return self.tree.predict(np.asarray(X, dtype=np.float64), self.spec.smoothing)

    def exceedance_proba(self, instance: Mapping[str, float], threshold: float) -> float:
        """Fraction of the matched leaf's training outcomes above threshold."""
        return _leaf_exceedance([self.tree], self._vector(instance), threshold)

    def to_dict(self) -> dict:
        d = self._header()
        d["params"] = {"tree": self.tree.to_payload()}
        return d


class RandomForestModel(TrainedModel):
    def __init__(self, trees: list[_Tree], **kw):
        super().__init__(**kw)
        self.trees = list(trees)

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree.predict(X, self.spec.smoothing)
        return total / len(self.trees)

    def exceedance_proba(self, instance: Mapping[str, float], threshold: float) -> float:
        return _leaf_exceedance(self.trees, self._vector(instance), threshold)

    def to_dict(self) -> dict:
        d = self._header()
        d["params"] = {"trees": [t.to_payload() for t in self.trees]}
        return d


def _leaf_exceedance(trees: list[_Tree], row: np.ndarray, threshold: float) -> float:
    fractions = []
    for tree in trees:
        if tree.task != "regression":
            raise LeafDistributionUnavailableError(
                "exceedance probabilities need a regression tree or forest"
            )
        leaf = int(tree.apply(row)[0])
        values = tree.leaf_values[leaf]
        if values is None:
            raise LeafDistributionUnavailableError(
                "model was trained without leaf value retention "
                "(set store_leaf_values=True)"
            )
        arr = np.asarray(values)
        fractions.append(float((arr > threshold).mean()))
    return float(np.mean(fractions))


def _fit_tree(spec, X, y, names, kinds, outcome_kind, outcome_name):
    task = "classification" if outcome_kind == BINARY else "regression"
    tree = _grow_tree(X, y, kinds, task, spec.max_depth, spec.min_leaf,
                      mtry=None, rng=None, store_leaf_values=spec.store_leaf_values)
    return DecisionTreeModel(
        tree, spec=spec, feature_names=names, feature_kinds=kinds,
        outcome_kind=outcome_kind, outcome_name=outcome_name, n_train=X.shape[0],
    )


def _fit_forest(spec, X, y, names, kinds, outcome_kind, outcome_name):
    task = "classification" if outcome_kind == BINARY else "regression"
    n, m = X.shape
    mtry = max(1, math.ceil(math.sqrt(m)))
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.n_trees)
    trees = []
    for ss in seeds:
        rng = np.random.Generator(np.random.PCG64(ss))
        boot = rng.integers(0, n, size=n)
        trees.append(_grow_tree(X[boot], y[boot], kinds, task, spec.max_depth,
                                spec.min_leaf, mtry=mtry, rng=rng,
                                store_leaf_values=spec.store_leaf_values))
    return RandomForestModel(
        trees, spec=spec, feature_names=names, feature_kinds=kinds,
        outcome_kind=outcome_kind, outcome_name=outcome_name, n_train=n,
    )


# -- training entry point -----------------------------------------------------------


def train(spec: ModelSpec, table: DataTable) -> TrainedModel:
    """Fit spec.kind on the table's features against its outcome column."""
    if table.n_rows < 2:
        raise IncompatibleOutcomeError("need at least 2 rows to train")
    spec = spec.resolved()
    X, y, names, kinds, outcome_kind = _design(table)
    outcome_name = table.outcome

    if spec.kind == LINEAR_REGRESSION:
        if outcome_kind != CONTINUOUS:
            raise IncompatibleOutcomeError("linear regression needs a continuous outcome")
        return _fit_linear(spec, X, y, names, kinds, outcome_name)
    if spec.kind == LOGISTIC_REGRESSION:
        if outcome_kind != BINARY:
            raise IncompatibleOutcomeError("logistic regression needs a binary outcome")
        return _fit_logistic(spec, X, y, names, kinds, outcome_name)
    if spec.kind == DECISION_TREE:
        return _fit_tree(spec, X, y, names, kinds, outcome_kind, outcome_name)
    return _fit_forest(spec, X, y, names, kinds, outcome_kind, outcome_name)


# -- persistence ----------------------------------------------------------------------


def _spec_to_dict(spec: ModelSpec) -> dict:
    return {
        "kind": spec.kind,
        "seed": spec.seed,
        "max_depth": spec.max_depth,
        "min_leaf": spec.min_leaf,
        "n_trees": spec.n_trees,
        "max_iters": spec.max_iters,
        "l2_penalty": spec.l2_penalty,
        "smoothing": spec.smoothing,
        "store_leaf_values": spec.store_leaf_values,
    }


def _spec_from_dict(d: dict) -> ModelSpec:
    return ModelSpec(**d)


def save_model(model: TrainedModel, path, metadata: dict | None = None) -> None:
    """Write the model as JSON; floats round-trip exactly through repr."""
    payload = model.to_dict()
    if metadata:
        payload["metadata"] = metadata
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path) -> TrainedModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFileError(f"cannot parse model file {path}: {exc}") from exc
    return model_from_dict(payload)


def model_from_dict(payload: dict) -> TrainedModel:
    if not isinstance(payload, dict) or "schema_version" not in payload:
        raise CorruptFileError("model file lacks a schema_version field")
    if payload["schema_version"] != MODEL_SCHEMA_VERSION:
        raise SchemaVersionMismatchError(
            f"model schema_version {payload['schema_version']!r} is not supported "
            f"(expected {MODEL_SCHEMA_VERSION})"
        )
    try:
        spec = _spec_from_dict(payload["spec"])
        common = dict(
            spec=spec,
            feature_names=tuple(payload["feature_names"]),
            feature_kinds=tuple(payload["feature_kinds"]),
            outcome_kind=payload["outcome_kind"],
            outcome_name=payload["outcome_name"],
            n_train=payload["n_train"],
            warnings=tuple(payload.get("warnings", ())),
        )
        params = payload["params"]
        kind = payload["kind"]
        if kind == LINEAR_REGRESSION:
            return LinearRegressionModel(
                np.asarray(params["coefficients"]), params["intercept"], **common)
        if kind == LOGISTIC_REGRESSION:
            return LogisticRegressionModel(
                np.asarray(params["coefficients"]), params["intercept"],
                converged=params.get("converged", True), **common)
        if kind == DECISION_TREE:
            return DecisionTreeModel(_Tree.from_payload(params["tree"]), **common)
        if kind == RANDOM_FOREST:
            trees = [_Tree.from_payload(t) for t in params["trees"]]
            return RandomForestModel(trees, **common)
        raise CorruptFileError(f"unknown model kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"model file is malformed: {exc}") from exc


def model_metadata(payload_path) -> dict | None:
    """Read only the optional metadata section of a saved model file."""
    with open(payload_path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return payload.get("metadata")
