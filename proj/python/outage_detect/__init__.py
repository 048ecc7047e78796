"""Outage detection and sensor placement on radial distribution feeders."""

import json

from ._core import (
    CapExceeded,
    Indistinguishable,
    Infeasible,
    InvalidInput,
    Tree,
    kappa_of_load,
    load_feeder,
    missed_detection,
    parse_feeder,
    random_tree,
)
from . import _core

__all__ = [
    "CapExceeded",
    "Indistinguishable",
    "Infeasible",
    "InvalidInput",
    "Tree",
    "detect",
    "enumerate_hypotheses",
    "evaluate",
    "kappa_of_load",
    "load_feeder",
    "missed_detection",
    "parse_feeder",
    "place",
    "random_tree",
    "simulate",
]


def enumerate_hypotheses(tree, max_outages=None):
    """Unique outage hypotheses as lists of edge ids."""
    return json.loads(_core._enumerate(tree, max_outages))


def detect(tree, sensors, flows, forecasts=None, max_outages=2, prior_rho=None):
    """Detected outage for sensor readings given as {edge id: flow}."""
    obs = {"flows": flows}
    if forecasts is not None:
        obs["forecasts"] = forecasts
    return json.loads(_core._detect(tree, list(sensors), json.dumps(obs), max_outages, prior_rho))


def evaluate(tree, sensors, max_outages=2, prior_rho=None):
    """Worst missed-detection probability of every area of a placement."""
    return json.loads(_core._evaluate(tree, list(sensors), max_outages, prior_rho))


def place(tree, target=None, budget=None, mode="greedy", max_outages=2, prior_rho=None):
    """Sensor placement meeting an error target, or the best one within a budget."""
    return json.loads(_core._place(tree, target, budget, mode, max_outages, prior_rho))


def simulate(tree, sensors, outage, trials, seed=0, max_outages=2, threads=1):
    """Empirical rate at which the detector misses the given outage."""
    return json.loads(_core._simulate(tree, list(sensors), list(outage), trials, seed, max_outages, threads))
