"""Python bindings for the gswb C++ core.

Signals are 1-D numpy arrays on the probability simplex; stacks of signals
are 2-D arrays with one signal per row.
"""

import json

from ._gswb import (
    Graph,
    GswbError,
    IoError,
    NumericalError,
    ValidationError,
    barycenter,
    cost_matrix,
    default_experiment_config,
    euclidean_mean,
    exact_w1,
    gft,
    heat_kernel,
    high_frequency_energy,
    laplacian,
    metric_report,
    participation_ratio,
    render_svg,
    ring_graph,
    sensor_graph,
    shannon_entropy,
    sinkhorn_w1,
    spectrum,
    svd_baseline,
    verify_run,
    wdl_fit,
)
from ._gswb import run_experiment as _run_experiment


def run_experiment(kind, out_dir, **overrides):
    """Run an experiment into out_dir and return its summary as a dict.

    Keyword arguments override fields of the default config for `kind`
    (same names as in config.json).
    """
    config = json.loads(default_experiment_config(kind))
    config.update(overrides)
    config["out_dir"] = str(out_dir)
    return json.loads(_run_experiment(json.dumps(config)))


__all__ = [
    "Graph",
    "GswbError",
    "IoError",
    "NumericalError",
    "ValidationError",
    "barycenter",
    "cost_matrix",
    "default_experiment_config",
    "euclidean_mean",
    "exact_w1",
    "gft",
    "heat_kernel",
    "high_frequency_energy",
    "laplacian",
    "metric_report",
    "participation_ratio",
    "render_svg",
    "ring_graph",
    "run_experiment",
    "sensor_graph",
    "shannon_entropy",
    "sinkhorn_w1",
    "spectrum",
    "svd_baseline",
    "verify_run",
    "wdl_fit",
]
