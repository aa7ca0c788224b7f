"""Direct-cause discovery, causally interpretable models, what-if effects."""

from .dataset import (
    BINARY,
    CATEGORICAL,
    CONTINUOUS,
    Column,
    DataTable,
    binarize_by_median,
    load_csv,
    load_csv_text,
    one_hot_encode,
    project,
    save_csv,
    split,
)
from .citest import CiResult, ci_test, fisher_z_test, g_test
from .discovery import ParentSet, TraceRecord, find_parents
from .models import (
    DECISION_TREE,
    LINEAR_REGRESSION,
    LOGISTIC_REGRESSION,
    RANDOM_FOREST,
    ModelSpec,
    TrainedModel,
    load_model,
    save_model,
    train,
)
from .scm import (
    BernoulliConst,
    Constant,
    EffectEstimate,
    GaussianConst,
    InterventionSpec,
    LinearGaussian,
    LogisticBernoulli,
    McEstimate,
    Node,
    Scm,
    d_separated,
    enumerate_joint,
    interventional_mean,
    interventional_prob,
    load_scm,
    make_g1,
    make_g2,
    make_wine,
    mutilate,
    sample,
    save_scm,
    true_cate,
    true_cde,
)
from .whatif import (
    CdeEstimate,
    InterventionResult,
    WhatIfReport,
    apply_intervention,
    build_report,
    estimate_cde,
    report_to_dict,
    report_to_json,
    run_whatif,
)
from .bench import (
    BiasRow,
    RobustRow,
    bias_experiment,
    emit_report,
    robustness_experiment,
)

__version__ = "0.1.0"
