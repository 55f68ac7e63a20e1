"""Maturity assessment toolkit for research software projects.

Ships the RSMM v1.0 focus-area maturity grid, evaluates a project's practice
adoption from manual answers and automated repository probes, and computes
maturity profiles, gap analyses, and what-if scenarios.
"""

from .model import bundled_rsmm, parse_model

__version__ = "0.1.0"

__all__ = ["bundled_rsmm", "parse_model", "__version__"]
