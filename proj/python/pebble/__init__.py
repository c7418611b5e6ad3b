"""Perturbation bootstrap (PEBBLE) inference for logistic regression."""

import json

import numpy as np

from . import _core
from ._core import PebbleError, default_bn, parse_seed, quantile, sample_weights

__all__ = [
    "PebbleError",
    "ci",
    "default_bn",
    "fit",
    "load_csv",
    "parse_seed",
    "quantile",
    "region",
    "sample_weights",
    "simulate",
]


def _xy(x, y):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    return x, np.ascontiguousarray(y, dtype=np.float64)


def _dvar(dvar):
    if dvar is None:
        return None
    return np.atleast_1d(np.asarray(dvar, dtype=np.float64))


def _seed(seed):
    return parse_seed(seed) if isinstance(seed, str) else int(seed)


def fit(x, y, level=0.9):
    """Maximum-likelihood fit with Wald intervals."""
    return json.loads(_core.fit_report(*_xy(x, y), level=level))


def ci(x, y, level=0.9, boot=1000, seed=1, bn=None, dvar=None, threads=1):
    """Smoothed perturbation-bootstrap confidence intervals."""
    return json.loads(_core.ci_report(*_xy(x, y), level=level, boot=boot, seed=_seed(seed),
                                      bn=bn, dvar=_dvar(dvar), threads=threads))


def region(x, y, beta0, level=0.9, boot=1000, seed=1, bn=None, dvar=None, threads=1):
    """Whether beta0 lies in the bootstrap confidence region."""
    beta0 = np.atleast_1d(np.asarray(beta0, dtype=np.float64))
    return json.loads(_core.region_report(*_xy(x, y), beta0, level=level, boot=boot,
                                          seed=_seed(seed), bn=bn, dvar=_dvar(dvar),
                                          threads=threads))


def simulate(n=100, p=3, reps=1000, boot=1000, level=0.9, seed=1, threads=1):
    """Monte Carlo coverage study of PEBBLE against the normal approximation."""
    return json.loads(_core.simulate_report(n=n, p=p, reps=reps, boot=boot, level=level,
                                            seed=_seed(seed), threads=threads))


def load_csv(path, response, intercept=False):
    """Returns (x, y, names) from a CSV file with a header row."""
    x, y, names = _core.load_csv(str(path), response, intercept)
    return np.asarray(x), np.asarray(y), list(names)
