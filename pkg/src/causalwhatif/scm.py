"""Structural causal models: representation, sampling, graph queries, oracles.

An Scm is an ordered list of nodes, each with a parent list and a mechanism;
the node order is a topological order (parents must be defined before use).
Sampling is ancestral and fully deterministic given an integer seed: uniforms
come from a PCG64 stream and normal variates are produced by applying the
inverse normal CDF (Wichura's AS241 rational approximation) to that stream,
so results are reproducible across platforms and library versions.

The module also provides the synthetic generators used by the benchmark
experiments and exact/Monte-Carlo interventional oracles.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .dataset import BINARY, CONTINUOUS, Column, DataTable
from .errors import EmptySupportError, UnknownNodeError

SCM_SCHEMA_VERSION = 1

# -- normal inverse CDF (AS241, double precision) -----------------------------

_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coefs, r):
    out = np.full_like(r, coefs[-1])
    for c in coefs[-2::-1]:
        out = out * r + c
    return out


def norm_ppf(p: np.ndarray) -> np.ndarray:
    """Inverse standard normal CDF, vectorized (AS241, ~1e-16 relative)."""
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    if central.any():
        r = 0.180625 - q[central] ** 2
        out[central] = q[central] * _poly(_A, r) / _poly(_B, r)

    tails = ~central
    if tails.any():
        qt = q[tails]
        pt = np.where(qt < 0.0, p[tails], 1.0 - p[tails])
        pt = np.clip(pt, 1e-300, None)
        r = np.sqrt(-np.log(pt))
        near = r <= 5.0
        val = np.empty_like(r)
        if near.any():
            rn = r[near] - 1.6
            val[near] = _poly(_C, rn) / _poly(_D, rn)
        if (~near).any():
            rf = r[~near] - 5.0
            val[~near] = _poly(_E, rf) / _poly(_F, rf)
        out[tails] = np.where(qt < 0.0, -val, val)
    return out


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _standard_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.random(n)
    return norm_ppf(np.clip(u, 1e-300, None))


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


# -- mechanisms ----------------------------------------------------------------

@dataclass(frozen=True)
class LinearGaussian:
    """value = intercept + sum(coefficients[p] * parent p) + Normal(0, noise_sd)."""

    intercept: float
    coefficients: Mapping[str, float]
    noise_sd: float

    def __post_init__(self):
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be >= 0")
        object.__setattr__(self, "coefficients", dict(self.coefficients))


@dataclass(frozen=True)
class LogisticBernoulli:
    """Bernoulli(sigmoid(intercept + sum(coef * product(parent values)))).

    Each term is (coefficient, tuple of parent names); product terms let a
    node's success odds depend on parent interactions.
    """

    terms: tuple[tuple[float, tuple[str, ...]], ...]
    intercept: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((float(c), tuple(ps)) for c, ps in self.terms)
        )


@dataclass(frozen=True)
class BernoulliConst:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")


@dataclass(frozen=True)
class GaussianConst:
    mean: float
    sd: float

    def __post_init__(self):
        if self.sd < 0:
            raise ValueError("sd must be >= 0")


@dataclass(frozen=True)
class Constant:
    """Fixed assignment; produced by mutilation, draws nothing from the stream."""

    value: float


Mechanism = LinearGaussian | LogisticBernoulli | BernoulliConst | GaussianConst | Constant

InterventionSpec = Mapping[str, float]


def _mechanism_parents(mech: Mechanism) -> set[str]:
    if isinstance(mech, LinearGaussian):
        return set(mech.coefficients)
    if isinstance(mech, LogisticBernoulli):
        return {p for _, ps in mech.terms for p in ps}
    return set()


def _mechanism_kind(mech: Mechanism) -> str:
    if isinstance(mech, (LogisticBernoulli, BernoulliConst)):
        return BINARY
    if isinstance(mech, Constant):
        return BINARY if mech.value in (0.0, 1.0) else CONTINUOUS
    return CONTINUOUS


@dataclass(frozen=True)
class Node:
    name: str
    parents: tuple[str, ...]
    mechanism: Mechanism
    observed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        used = _mechanism_parents(self.mechanism)
        if not used <= set(self.parents):
            raise ValueError(
                f"node {self.name!r}: mechanism references non-parents {used - set(self.parents)}"
            )


@dataclass(frozen=True)
class Scm:
    """A DAG of nodes in topological order (parents defined before use)."""

    nodes: tuple[Node, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        seen: set[str] = set()
        for node in self.nodes:
            if node.name in seen:
                raise ValueError(f"duplicate node {node.name!r}")
            for p in node.parents:
                if p not in seen:
                    raise ValueError(
                        f"node {node.name!r}: parent {p!r} not defined before use"
                    )
            seen.add(node.name)
        if not any(n.observed for n in self.nodes):
            raise ValueError("at least one node must be observed")

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise UnknownNodeError(f"no node named {name!r}")

    def has_node(self, name: str) -> bool:
        return any(n.name == name for n in self.nodes)

    @property
    def node_names(self) -> tuple[str, ...]:
        return tuple(n.name for n in self.nodes)

    @property
    def observed_names(self) -> tuple[str, ...]:
        return tuple(n.name for n in self.nodes if n.observed)

    def children(self, name: str) -> tuple[str, ...]:
        return tuple(n.name for n in self.nodes if name in n.parents)

    def descendants(self, name: str) -> set[str]:
        out: set[str] = set()
        frontier = [name]
        while frontier:
            current = frontier.pop()
            for child in self.children(current):
                if child not in out:
                    out.add(child)
                    frontier.append(child)
        return out


# -- sampling ------------------------------------------------------------------

def _draw(mech: Mechanism, values: dict[str, np.ndarray], n: int,
          rng: np.random.Generator) -> np.ndarray:
    if isinstance(mech, Constant):
        return np.full(n, float(mech.value))
    if isinstance(mech, BernoulliConst):
        return (rng.random(n) < mech.p).astype(np.float64)
    if isinstance(mech, GaussianConst):
        noise = _standard_normal(rng, n) if mech.sd > 0 else np.zeros(n)
        return mech.mean + mech.sd * noise
    if isinstance(mech, LogisticBernoulli):
        logit = np.full(n, float(mech.intercept))
        for coef, parents in mech.terms:
            term = np.full(n, coef)
            for p in parents:
                term = term * values[p]
            logit += term
        return (rng.random(n) < sigmoid(logit)).astype(np.float64)
    if isinstance(mech, LinearGaussian):
        out = np.full(n, float(mech.intercept))
        for p, coef in mech.coefficients.items():
            out += coef * values[p]
        if mech.noise_sd > 0:
            out += mech.noise_sd * _standard_normal(rng, n)
        return out
    raise TypeError(f"unknown mechanism {mech!r}")


def sample(scm: Scm, n: int, seed: int, outcome: str | None = None) -> DataTable:
    """Ancestral sampling in node order; returns the observed columns only.

    The outcome column defaults to "Y" when the model has an observed node of
    that name, otherwise to the last observed node.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(seed)
    values = sample_all(scm, n, rng)
    observed = [node for node in scm.nodes if node.observed]
    columns = tuple(
        Column(node.name, _mechanism_kind(node.mechanism), values[node.name])
        for node in observed
    )
    if outcome is None:
        names = {node.name for node in observed}
        outcome = "Y" if "Y" in names else observed[-1].name
    return DataTable(columns, outcome)


def sample_all(scm: Scm, n: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Sample every node (observed or not); helper for the oracles."""
    values: dict[str, np.ndarray] = {}
    for node in scm.nodes:
        values[node.name] = _draw(node.mechanism, values, n, rng)
    return values


# -- mutilation ------------------------------------------------------------------

def _check_value(node: Node, value: float) -> None:
    if _mechanism_kind(node.mechanism) == BINARY and value not in (0.0, 1.0):
        raise ValueError(
            f"node {node.name!r} is binary; intervention value {value!r} must be 0 or 1"
        )


def mutilate(scm: Scm, interventions: InterventionSpec) -> Scm:
    """Return the intervened model: assigned nodes become parentless constants."""
    for name in interventions:
        _check_value(scm.node(name), float(interventions[name]))
    new_nodes = tuple(
        Node(n.name, (), Constant(float(interventions[n.name])), n.observed)
        if n.name in interventions
        else n
        for n in scm.nodes
    )
    return Scm(new_nodes)


# -- d-separation -----------------------------------------------------------------

def d_separated(scm: Scm, x: str, y: str, s) -> bool:
    """True iff every path between x and y is blocked given conditioning set s.

    Reachability formulation (Bayes-ball): y is d-connected to x given s iff
    y is reachable from x along some active trail.
    """
    s = set(s)
    for name in (x, y, *s):
        scm.node(name)
    if x == y:
        raise ValueError("x and y must differ")
    if x in s or y in s:
        raise ValueError("x and y must not be in the conditioning set")

    parents = {n.name: set(n.parents) for n in scm.nodes}
    children: dict[str, set[str]] = {n.name: set() for n in scm.nodes}
    for n in scm.nodes:
        for p in n.parents:
            children[p].add(n.name)

    # ancestors of the conditioning set, including the set itself
    anc = set(s)
    frontier = list(s)
    while frontier:
        current = frontier.pop()
        for p in parents[current]:
            if p not in anc:
                anc.add(p)
                frontier.append(p)

    # traverse (node, direction); "up" = arrived from a child, "down" = from a parent
    visited: set[tuple[str, str]] = set()
    frontier2 = [(x, "up")]
    while frontier2:
        node, direction = frontier2.pop()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in s and node == y:
            return False
        if direction == "up" and node not in s:
            for p in parents[node]:
                frontier2.append((p, "up"))
            for c in children[node]:
                frontier2.append((c, "down"))
        elif direction == "down":
            if node not in s:
                for c in children[node]:
                    frontier2.append((c, "down"))
            if node in anc:
                for p in parents[node]:
                    frontier2.append((p, "up"))
    return True


# -- interventional oracles --------------------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    value: float
    support: int
    se: float


@dataclass(frozen=True)
class EffectEstimate:
    value: float
    se: float
    exact: bool


def _conditional_rows(values: dict[str, np.ndarray], condition: Mapping[str, float],
                      scm: Scm) -> np.ndarray:
    n = len(next(iter(values.values())))
    mask = np.ones(n, dtype=bool)
    for name, v in condition.items():
        node = scm.node(name)
        if not node.observed:
            raise ValueError(f"cannot condition on unobserved node {name!r}")
        mask &= values[name] == float(v)
    return mask


def interventional_mean(scm: Scm, interventions: InterventionSpec,
                        condition: Mapping[str, float], node: str,
                        n_mc: int, seed: int) -> McEstimate:
    """E[node | do(interventions), condition] by Monte Carlo on the mutilated model."""
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    scm.node(node)
    cut = mutilate(scm, interventions)
    values = sample_all(cut, n_mc, _rng(seed))
    mask = _conditional_rows(values, condition, scm)
    support = int(mask.sum())
    if support == 0:
        raise EmptySupportError(f"no sampled row matches condition {dict(condition)!r}")
    sel = values[node][mask]
    se = float(sel.std(ddof=1) / math.sqrt(support)) if support > 1 else math.inf
    return McEstimate(float(sel.mean()), support, se)


def interventional_prob(scm: Scm, interventions: InterventionSpec,
                        condition: Mapping[str, float], node: str,
                        event: Callable[[np.ndarray], np.ndarray],
                        n_mc: int, seed: int) -> McEstimate:
    """P(event(node) | do(interventions), condition) by Monte Carlo."""
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    scm.node(node)
    cut = mutilate(scm, interventions)
    values = sample_all(cut, n_mc, _rng(seed))
    mask = _conditional_rows(values, condition, scm)
    support = int(mask.sum())
    if support == 0:
        raise EmptySupportError(f"no sampled row matches condition {dict(condition)!r}")
    hits = np.asarray(event(values[node][mask]), dtype=bool)
    p = float(hits.mean())
    se = math.sqrt(max(p * (1.0 - p), 0.0) / support)
    return McEstimate(p, support, se)


def true_cde(scm: Scm, feature: str, outcome: str, context: Mapping[str, float],
             treated_value: float, control_value: float,
             n_mc: int = 200_000, seed: int = 0) -> EffectEstimate:
    """Controlled direct effect of `feature` on `outcome` with every other
    observed feature forced to its context value.

    Exact (coefficient * value delta for parents, 0 for non-parents) when the
    outcome mechanism is linear-Gaussian with all parents observed; Monte
    Carlo with a reported standard error otherwise.
    """
    feat_node = scm.node(feature)
    out_node = scm.node(outcome)
    if not feat_node.observed:
        raise UnknownNodeError(f"feature {feature!r} is not observed")
    expected_context = set(scm.observed_names) - {feature, outcome}
    if set(context) != expected_context:
        raise ValueError(
            f"context must cover exactly the remaining observed features; "
            f"expected {sorted(expected_context)}, got {sorted(context)}"
        )

    mech = out_node.mechanism
    parents_observed = all(scm.node(p).observed for p in out_node.parents)
    if isinstance(mech, LinearGaussian) and parents_observed:
        coef = mech.coefficients.get(feature, 0.0)
        return EffectEstimate(coef * (treated_value - control_value), 0.0, True)

    seeds = np.random.SeedSequence(seed).spawn(2)
    results = []
    for arm_value, arm_seed in ((treated_value, seeds[0]), (control_value, seeds[1])):
        spec = dict(context)
        spec[feature] = arm_value
        cut = mutilate(scm, spec)
        values = sample_all(cut, n_mc, _rng(arm_seed))
        col = values[outcome]
        results.append((float(col.mean()), float(col.std(ddof=1) / math.sqrt(n_mc))))
    (mt, st), (mc_, sc) = results
    return EffectEstimate(mt - mc_, math.hypot(st, sc), False)


def true_cate(scm: Scm, feature: str, outcome: str, condition: Mapping[str, float],
              treated_value: float, control_value: float,
              n_mc: int = 200_000, seed: int = 0) -> EffectEstimate:
    """Conditional treatment effect: intervene on the feature only, condition
    observationally on the given context, contrast outcome means."""
    scm.node(feature)
    scm.node(outcome)
    seeds = np.random.SeedSequence(seed).spawn(2)
    arms = []
    for arm_value, arm_seed in ((treated_value, seeds[0]), (control_value, seeds[1])):
        est = interventional_mean(
            scm, {feature: arm_value}, condition, outcome, n_mc, arm_seed
        )
        arms.append(est)
    treated, control = arms
    se = math.hypot(treated.se, control.se)
    return EffectEstimate(treated.value - control.value, se, False)


# -- exact enumeration (finite-support models) --------------------------------------

def _support_and_prob(mech: Mechanism, assignment: dict[str, float]):
    if isinstance(mech, Constant):
        return ((mech.value, 1.0),)
    if isinstance(mech, BernoulliConst):
        return ((1.0, mech.p), (0.0, 1.0 - mech.p))
    if isinstance(mech, LogisticBernoulli):
        logit = mech.intercept
        for coef, parents in mech.terms:
            term = coef
            for p in parents:
                term *= assignment[p]
            logit += term
        p = 1.0 / (1.0 + math.exp(-logit)) if logit >= 0 else math.exp(logit) / (1.0 + math.exp(logit))
        return ((1.0, p), (0.0, 1.0 - p))
    raise ValueError(f"mechanism {type(mech).__name__} has no finite support")


def enumerate_joint(scm: Scm) -> dict[tuple[float, ...], float]:
    """Exact joint over all nodes for finite-support (discrete) models."""
    joint: dict[tuple[float, ...], float] = {(): 1.0}
    names: list[str] = []
    for node in scm.nodes:
        names.append(node.name)
        nxt: dict[tuple[float, ...], float] = {}
        for prefix, prob in joint.items():
            assignment = dict(zip(names[:-1], prefix))
            for value, p in _support_and_prob(node.mechanism, assignment):
                if p == 0.0:
                    continue
                nxt[prefix + (value,)] = nxt.get(prefix + (value,), 0.0) + prob * p
        joint = nxt
    return joint


# -- generators ----------------------------------------------------------------------

def _sigmoid_of(parents: tuple[str, ...]) -> LogisticBernoulli:
    return LogisticBernoulli(terms=((1.0, parents),))


def make_g1() -> Scm:
    """Five binary features driven by a shared hidden cause; linear outcome.

    X1..X4 are direct causes of Y with coefficient 1.5 each; X5 is a spurious
    sibling (correlated with Y only through the hidden U).
    """
    nodes = [Node("U", (), GaussianConst(0.0, 1.0), observed=False)]
    for i in range(1, 6):
        nodes.append(Node(f"X{i}", ("U",), _sigmoid_of(("U",))))
    nodes.append(Node(
        "Y", ("X1", "X2", "X3", "X4"),
        LinearGaussian(1.0, {"X1": 1.5, "X2": 1.5, "X3": 1.5, "X4": 1.5}, 1.0),
    ))
    return Scm(tuple(nodes))


def make_g2() -> Scm:
    """Like make_g1 but with edges X1->X2 and (X2, X4)->X3 via product logits."""
    nodes = [
        Node("U", (), GaussianConst(0.0, 1.0), observed=False),
        Node("X1", ("U",), _sigmoid_of(("U",))),
        Node("X4", ("U",), _sigmoid_of(("U",))),
        Node("X2", ("U", "X1"), _sigmoid_of(("U", "X1"))),
        Node("X3", ("U", "X2", "X4"), _sigmoid_of(("U", "X2", "X4"))),
        Node("X5", ("U",), _sigmoid_of(("U",))),
        Node("Y", ("X1", "X2", "X3", "X4"),
             LinearGaussian(1.0, {"X1": 1.5, "X2": 1.5, "X3": 1.5, "X4": 1.5}, 1.0)),
    ]
    return Scm(tuple(nodes))


def make_wine(env: int) -> Scm:
    """Three binary causes of a continuous outcome plus a price-like child.

    P is a descendant of Y shifted by the hidden environment flag; only P's
    distribution changes between env=0 and env=1.
    """
    if env not in (0, 1):
        raise ValueError("env must be 0 or 1")
    nodes = [
        Node("U1", (), GaussianConst(0.0, 1.0), observed=False),
        Node("U2", (), Constant(float(env)), observed=False),
        Node("X1", ("U1",), _sigmoid_of(("U1",))),
        Node("X2", ("U1",), _sigmoid_of(("U1",))),
        Node("X3", ("U1",), _sigmoid_of(("U1",))),
        Node("Y", ("X1", "X2", "X3"),
             LinearGaussian(1.0, {"X1": 10.0, "X2": 10.0, "X3": 10.0}, 1.0)),
        Node("P", ("Y", "U2"), LinearGaussian(1.0, {"Y": 0.8, "U2": 2.0}, 1.0)),
    ]
    return Scm(tuple(nodes))


GENERATORS: dict[str, Callable[..., Scm]] = {
    "g1": make_g1,
    "g2": make_g2,
    "wine": make_wine,
}


# -- serialization ---------------------------------------------------------------------

_MECH_TAGS = {
    LinearGaussian: "linear_gaussian",
    LogisticBernoulli: "logistic_bernoulli",
    BernoulliConst: "bernoulli_const",
    GaussianConst: "gaussian_const",
    Constant: "constant",
}


def _mechanism_to_dict(mech: Mechanism) -> dict:
    tag = _MECH_TAGS[type(mech)]
    if isinstance(mech, LinearGaussian):
        return {"tag": tag, "intercept": mech.intercept,
                "coefficients": dict(mech.coefficients), "noise_sd": mech.noise_sd}
    if isinstance(mech, LogisticBernoulli):
        return {"tag": tag, "intercept": mech.intercept,
                "terms": [[c, list(ps)] for c, ps in mech.terms]}
    if isinstance(mech, BernoulliConst):
        return {"tag": tag, "p": mech.p}
    if isinstance(mech, GaussianConst):
        return {"tag": tag, "mean": mech.mean, "sd": mech.sd}
    return {"tag": tag, "value": mech.value}


def _mechanism_from_dict(d: dict) -> Mechanism:
    tag = d["tag"]
    if tag == "linear_gaussian":
        return LinearGaussian(d["intercept"], d["coefficients"], d["noise_sd"])
    if tag == "logistic_bernoulli":
        return LogisticBernoulli(
            tuple((c, tuple(ps)) for c, ps in d["terms"]), d.get("intercept", 0.0)
        )
    if tag == "bernoulli_const":
        return BernoulliConst(d["p"])
    if tag == "gaussian_const":
        return GaussianConst(d["mean"], d["sd"])
    if tag == "constant":
        return Constant(d["value"])
    raise ValueError(f"unknown mechanism tag {tag!r}")


def scm_to_dict(scm: Scm) -> dict:
    return {
        "schema_version": SCM_SCHEMA_VERSION,
        "nodes": [
            {
                "name": n.name,
                "parents": list(n.parents),
                "mechanism": _mechanism_to_dict(n.mechanism),
                "observed": n.observed,
            }
            for n in scm.nodes
        ],
    }


def scm_from_dict(d: dict) -> Scm:
    if d.get("schema_version") != SCM_SCHEMA_VERSION:
        raise ValueError(f"unsupported scm schema_version {d.get('schema_version')!r}")
    nodes = tuple(
        Node(nd["name"], tuple(nd["parents"]), _mechanism_from_dict(nd["mechanism"]),
             nd.get("observed", True))
        for nd in d["nodes"]
    )
    return Scm(nodes)


def save_scm(scm: Scm, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scm_to_dict(scm), fh, indent=2, sort_keys=True)


def load_scm(path) -> Scm:
    with open(path, "r", encoding="utf-8") as fh:
        return scm_from_dict(json.load(fh))
