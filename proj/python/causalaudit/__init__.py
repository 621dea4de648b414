"""Causal fairness auditing on three-variable categorical data.

Thin Python surface over the C++ core: CSV ingestion, the instrumental
inequality checks (maximum-likelihood, Bayesian and per-inequality
association forms), direct-effect bounds, and the finite-SCM oracle used
to validate them.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
