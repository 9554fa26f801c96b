"""Numerical checks of mean value formulae and monotone quantities."""

import json

from ._core import *  # noqa: F401,F403
from ._core import run_suite_json as _run_suite_json

__version__ = "0.1.0"


def run_suite(suite, **settings):
    """Run a check suite and return the report as a dict."""
    text = _run_suite_json(suite, {k.replace("_", "-"): str(v) for k, v in settings.items()})
    return json.loads(text)
