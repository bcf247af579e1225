"""Solver backend selection and the external differential check.

The compiled CDCL core (`npverify._satcore`, Cython) is preferred when
importable; otherwise the pure-Python `npverify.satcore` is used.  Both
implement the same deterministic algorithm and produce identical models.
Set ``NPVERIFY_SOLVER=pure`` or ``compiled`` to force a backend.

For differential acceptance an independent external solver can re-check
exported DIMACS files.  Any binary speaking the conventional interface
(``solver FILE.cnf`` printing ``s SATISFIABLE``/``s UNSATISFIABLE`` and
``v``-lines) works; ``tools/extsolver`` in this repository builds one from
the varisat library.  Discovery order: ``NPVERIFY_EXT_SOLVER``, an
``extsolver`` on PATH, then the in-repo build location.
"""

from __future__ import annotations

import os
import random
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import cnf, satcore
from .errors import ParameterError, TextFormatError

try:
    from . import _satcore  # type: ignore[attr-defined]
except ImportError:
    _satcore = None

PURE = "pure"
COMPILED = "compiled"


def available_backends() -> tuple[str, ...]:
    return (PURE, COMPILED) if _satcore is not None else (PURE,)


def default_backend() -> str:
    forced = os.environ.get("NPVERIFY_SOLVER")
    if forced:
        if forced not in (PURE, COMPILED):
            raise ParameterError(f"unknown solver backend {forced!r}")
        if forced == COMPILED and _satcore is None:
            raise ParameterError("compiled solver backend is not built")
        return forced
    return COMPILED if _satcore is not None else PURE


@dataclass(frozen=True)
class SolveResult:
    status: bool
    model: cnf.Model | None
    stats: dict[str, int]
    backend: str


def branching_order(num_vars: int, seed: int | None) -> list[int]:
    """Variable branching priority: identity, or a seeded shuffle."""
    order = list(range(1, num_vars + 1))
    if seed:
        random.Random(seed).shuffle(order)
    return order


def solve_clauses(num_vars: int, clauses, seed: int | None = None,
                  max_conflicts: int = 5_000_000,
                  backend: str | None = None) -> SolveResult:
    backend = default_backend() if backend is None else backend
    order = branching_order(num_vars, seed)
    if backend == COMPILED:
        if _satcore is None:
            raise ParameterError("compiled solver backend is not built")
        solver = _satcore.Solver(num_vars, clauses, order, max_conflicts)
    elif backend == PURE:
        solver = satcore.Solver(num_vars, clauses, order=order,
                                max_conflicts=max_conflicts)
    else:
        raise ParameterError(f"unknown solver backend {backend!r}")
    status = solver.solve()
    model = None
    if status:
        values = solver.model()
        model = {var: values[var] for var in range(1, num_vars + 1)}
    return SolveResult(status=status, model=model, stats=solver.stats(),
                       backend=backend)


def solve_formula(formula: cnf.CnfFormula, seed: int | None = None,
                  max_conflicts: int = 5_000_000,
                  backend: str | None = None) -> SolveResult:
    return solve_clauses(formula.num_vars, formula.clauses, seed=seed,
                         max_conflicts=max_conflicts, backend=backend)


# -- external solver -------------------------------------------------------

_REPO_BUILD = Path(__file__).resolve().parents[2] / "tools" / "extsolver" \
    / "target" / "release" / "extsolver"


def find_external_solver() -> str | None:
    env = os.environ.get("NPVERIFY_EXT_SOLVER")
    if env and Path(env).exists():
        return env
    on_path = shutil.which("extsolver")
    if on_path:
        return on_path
    if _REPO_BUILD.exists():
        return str(_REPO_BUILD)
    return None


def solve_external(formula: cnf.CnfFormula, binary: str,
                   timeout: float = 600.0) -> SolveResult:
    """Run an external DIMACS solver on the exported formula."""
    text = cnf.export_dimacs(formula)
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as fh:
        fh.write(text)
        path = fh.name
    try:
        proc = subprocess.run([binary, path], capture_output=True, text=True,
                              timeout=timeout)
    finally:
        os.unlink(path)
    out = proc.stdout
    if "s UNSATISFIABLE" in out:
        return SolveResult(status=False, model=None, stats={},
                           backend=f"external:{binary}")
    if "s SATISFIABLE" in out:
        model = cnf.import_model(out, formula)
        return SolveResult(status=True, model=model, stats={},
                           backend=f"external:{binary}")
    raise TextFormatError(
        f"external solver produced no verdict (exit {proc.returncode}): "
        f"{out[:200]!r} {proc.stderr[:200]!r}")
