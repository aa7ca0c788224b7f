import math

import numpy as np
import pytest

from causalwhatif.dataset import BINARY, CONTINUOUS, Column, DataTable
from causalwhatif.scm import (
    BernoulliConst,
    LogisticBernoulli,
    Node,
    Scm,
    make_g1,
    sample,
)


def logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def table_from_columns(outcome: str, **cols) -> DataTable:
    """Build a numeric table from name -> values; {0,1} vectors become binary."""
    columns = []
    for name, values in cols.items():
        arr = np.asarray(values, dtype=np.float64)
        kind = BINARY if np.isin(arr, (0.0, 1.0)).all() else CONTINUOUS
        columns.append(Column(name, kind, arr))
    return DataTable(tuple(columns), outcome)


def chain_scm(p_a: float = 0.5, p_b: tuple[float, float] = (0.2, 0.8),
              p_y: tuple[float, float] = (0.3, 0.7)) -> Scm:
    """Binary chain A -> B -> Y with exact conditional probability tables."""
    return Scm((
        Node("A", (), BernoulliConst(p_a)),
        Node("B", ("A",), LogisticBernoulli(
            terms=(((logit(p_b[1]) - logit(p_b[0])), ("A",)),),
            intercept=logit(p_b[0]))),
        Node("Y", ("B",), LogisticBernoulli(
            terms=(((logit(p_y[1]) - logit(p_y[0])), ("B",)),),
            intercept=logit(p_y[0]))),
    ))


@pytest.fixture(scope="session")
def g1_table_10k() -> DataTable:
    return sample(make_g1(), 10_000, 424242)
