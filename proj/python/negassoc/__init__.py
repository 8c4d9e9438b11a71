"""Negative dependence checks for finite point processes.

Laws are plain Python values: a count law is a list of probabilities, a
subset measure is ``{"n": n, "entries": [[mask, weight], ...]}``, a joint law
is ``{"dim": d, "atoms": [[point, p], ...]}`` and a process is the
``process`` object of an experiment config.
"""

import json

from . import _negassoc
from ._negassoc import NegassocError, binomial, poisson_binomial

__all__ = [
    "NegassocError",
    "binomial",
    "poisson_binomial",
    "tau",
    "is_ulc",
    "is_pf2",
    "cx_dominates",
    "polarize",
    "product_measure",
    "is_rayleigh",
    "is_strongly_rayleigh",
    "is_na",
    "is_sna",
    "count_law",
    "dominate",
    "run",
]


def _dump(value):
    return json.dumps(value)


def tau(spec):
    """Expand a tau spec (list or ``{"kind", "params"}``) into a truncated law."""
    return json.loads(_negassoc.tau(_dump(spec)))


def is_ulc(pmf):
    return json.loads(_negassoc.is_ulc(_dump(pmf)))


def is_pf2(pmf):
    return json.loads(_negassoc.is_pf2(_dump(pmf)))


def cx_dominates(p, q):
    """Whether p is below q in the convex order."""
    return json.loads(_negassoc.cx_dominates(_dump(p), _dump(q)))


def polarize(pmf):
    return json.loads(_negassoc.polarize(_dump(pmf)))


def product_measure(ps):
    return json.loads(_negassoc.product_measure(list(ps)))


def is_rayleigh(measure, points_per_pair=10_000, lines=1_000, tol=1e-10, seed=0):
    return json.loads(_negassoc.is_rayleigh(_dump(measure), points_per_pair, lines, tol, seed))


def is_strongly_rayleigh(measure, points_per_pair=10_000, lines=1_000, tol=1e-10, seed=0):
    return json.loads(_negassoc.is_strongly_rayleigh(_dump(measure), points_per_pair, lines, tol, seed))


def is_na(law, tol=1e-10):
    return json.loads(_negassoc.is_na(_dump(law), tol))


def is_sna(law, tol=1e-10):
    return json.loads(_negassoc.is_sna(_dump(law), tol))


def count_law(process):
    return json.loads(_negassoc.count_law(_dump(process)))


def dominate(process):
    return json.loads(_negassoc.dominate(_dump(process)))


def run(config):
    """Run an experiment config.

    Returns a dict with the parsed ``report``, the exact report text as
    ``json``, the ``csv`` summary and the CLI-style ``exit_status``.
    """
    text, csv, status = _negassoc.run(_dump(config))
    return {"report": json.loads(text), "json": text, "csv": csv, "exit_status": status}
