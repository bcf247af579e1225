"""Verification workbench for strategy-proof social choice rules on the
Non-Paretian domain: domain construction, rule analysis, manipulation
detection, decisive-coalition reports, alternative-fusion machinery, and a
SAT-backed scenario catalogue for the range theorems."""

from . import (  # noqa: F401
    cnf,
    collapse,
    decisiveness,
    orders,
    profiles,
    rules,
    solver,
    strategyproof,
    verify,
)

__version__ = "0.1.0"
