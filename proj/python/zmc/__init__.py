"""Python bindings for the zmc core library."""

import json as _json

from . import _core
from ._core import *  # noqa: F401,F403


def audit():
    """Run the claim audit and return it as a dict."""
    return _json.loads(_core.audit_json())


def sweep(equation, family, T=1.0, k=1.0, per_axis=100):
    """Residual sweep of a closed-form family; returns the JSON report as a dict."""
    return _json.loads(_core.sweep_json(equation, family, T, k, per_axis))
