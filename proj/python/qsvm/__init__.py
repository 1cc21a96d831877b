"""Linear SVM training through a QUBO reformulation of the dual, solved by
simulated annealing or exhaustive search, with a classical dual solver for
comparison."""

import json
import os

from ._core import *  # noqa: F401,F403
from ._core import Error, _run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]


def _spec_text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def _run(kind, spec, grid=(), base_dir="", timings=True, threads=0):
    text = _run_experiment(kind, _spec_text(spec), os.fspath(base_dir), list(grid), timings, threads)
    return json.loads(text)


def load_spec(path):
    """Read an experiment config; returns (spec dict, directory for relative paths)."""
    with open(path) as f:
        return json.load(f), os.path.dirname(os.path.abspath(path))


def run_accuracy_experiment(spec, base_dir="", timings=True, threads=0):
    return _run("accuracy", spec, (), base_dir, timings, threads)


def run_sweep_sensitivity(spec, sweep_grid, base_dir="", timings=True, threads=0):
    return _run("sweeps", spec, sweep_grid, base_dir, timings, threads)


def run_feature_scaling(spec, feature_grid, timings=True, threads=0):
    return _run("features", spec, feature_grid, "", timings, threads)


def run_point_scaling(spec, point_grid, timings=True, threads=0):
    return _run("points", spec, point_grid, "", timings, threads)
