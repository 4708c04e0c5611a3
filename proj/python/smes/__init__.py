"""Second-moment exponential-scaling optimizers.

A single first-order update rule theta <- theta - eta * m_hat /
(v_hat**alpha + epsilon) whose balance coefficient alpha recovers SGD at 0
and Adam at 0.5, plus a small dense-network engine, benchmark objectives,
synthetic datasets, and a reproducible alpha-sweep harness. The heavy
lifting lives in the compiled extension; this package re-exports it.
"""

from smes._core import (  # noqa: F401
    Activation,
    DataKind,
    DataSpec,
    Dataset,
    DecayMode,
    GradientReport,
    Loss,
    ModelSpec,
    Network,
    Objective,
    RngStream,
    RunRecord,
    SmesConfig,
    SmesState,
    SplitPair,
    SuiteResult,
    SummaryRow,
    SweepResult,
    SweepSpec,
    SweepSummary,
    Tensor,
    activation_apply,
    activation_derivative,
    add,
    clip_global_norm,
    derive_seed,
    div,
    gen_blobs,
    gen_sparse_manyclass,
    init_network,
    load_tabular,
    loss_eval,
    matvec,
    max_scalar,
    mul,
    pow_scalar,
    preset,
    quadratic,
    read_records,
    rosenbrock,
    run_selfcheck,
    run_sweep,
    save_tabular,
    smes_init,
    smes_step,
    sub,
    summarize,
    train_one,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
