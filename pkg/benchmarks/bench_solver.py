#!/usr/bin/env python3
"""Benchmark the compiled CDCL core against the pure-Python fallback on
the workbench's own formulas.

Usage: python benchmarks/bench_solver.py [--repeat N]

Both backends run the same deterministic algorithm, so the comparison is
pure implementation overhead; results are checked for equality as a side
effect.
"""

from __future__ import annotations

import argparse
import statistics
import time

from npverify import cnf, solver, verify


def scenario_formulas():
    out = []
    for name in ("sanity_sat", "gs_np", "nrange_part1"):
        scn = verify.scenario(name)
        out.append((f"{name}(n={scn.n})",
                    next(iter(scn.instances())).formula))
    part2 = verify.scenario("nrange_part2")
    out.append(("nrange_part2(n=4)", next(iter(part2.instances())).formula))
    lemma = verify.scenario("lemma4_2")
    for instance in lemma.instances():
        out.append(("lemma4_2(n=4, one profile)", instance.formula))
        break
    return out


def bench(formula: cnf.CnfFormula, backend: str, repeat: int):
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = solver.solve_formula(formula, backend=backend)
        times.append(time.perf_counter() - start)
    return min(times), statistics.mean(times), result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = solver.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; showing pure numbers only")

    header = (f"{'formula':34s} {'vars':>6s} {'clauses':>8s} "
              + "".join(f"{b + ' best':>14s}" for b in backends)
              + ("  speedup" if len(backends) == 2 else ""))
    print(header)
    print("-" * len(header))
    for name, formula in scenario_formulas():
        row = f"{name:34s} {formula.num_vars:6d} {len(formula.clauses):8d}"
        best = {}
        outcome = {}
        for backend in backends:
            t_best, _, result = bench(formula, backend, args.repeat)
            best[backend] = t_best
            outcome[backend] = (result.status, result.stats.get("conflicts"))
            row += f"{t_best * 1000:12.2f}ms"
        if len(backends) == 2:
            assert outcome["pure"] == outcome["compiled"], name
            row += f"  {best['pure'] / best['compiled']:6.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
