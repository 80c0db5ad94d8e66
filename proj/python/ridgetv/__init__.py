"""Sparse ridge networks with total-variation regularization on the cylinder."""

import json

from . import _ridgetv
from ._ridgetv import Network, RidgeTVError, ValidationError, fbp_lizorkin, green_check, set_max_threads, sigma

__all__ = [
    "Network",
    "RidgeTVError",
    "ValidationError",
    "fbp_lizorkin",
    "green_check",
    "set_max_threads",
    "sigma",
    "solve",
    "verify",
]


def solve(X, y, m=2, lam=1e-3, loss="squared", **kwargs):
    """Fit a network to (X, y). Returns (network, report dict)."""
    net, report = _ridgetv.solve(X, y, m, lam, loss, **kwargs)
    return net, json.loads(report)


def verify(suite="types"):
    """Run a verification suite and return its summary dict."""
    return json.loads(_ridgetv.verify(suite))
