"""Acceptance criteria 1-12, each with its time limit and a one-line verdict.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

import time

import pytest

from herbrand import suites

CRITERIA = [
    (1, "Heyting laws, 200 random atom pairs", 120,
     lambda: suites.heyting_laws(pairs=200, seed=0)),
    (2, "exponential iso, all codes of length <= 3", 30,
     lambda: suites.exponential_iso(max_len=3)),
    (3, "quantifier transposes and exact exists, all maps between sets <= 3", 180,
     lambda: suites.quantifier_adjunctions(max_size=3, predicates=50, seed=0)),
    (4, "Beck-Chevalley, 20 random pullback squares", None,
     lambda: suites.beck_chevalley(squares=20, seed=0)),
    (5, "universal properties on carriers <= 3", 300,
     lambda: suites.universal_properties(instances=10, seed=0)),
    (6, "double negation, every atom with |A1| <= 2", None, suites.double_negation),
    (7, "indiscrete preservation, |X|, |Y| <= 3", 180, lambda: suites.pretopos(max_size=3)),
    (8, "sections of 50 super epis onto partitioned assemblies", None,
     lambda: suites.projectivity(instances=50, seed=0)),
    (9, "bound <-> tracking round trip, values <= 16, n <= 16", None,
     lambda: suites.bounded(tables=60, seed=0, n_max=16)),
    (10, "weak excluded middle, every atom with |A1| <= 2", None, suites.wlem),
    (11, "fan extraction on the full binary tree of depth 3", None, lambda: suites.fan(3)),
    (12, "natural number recursion up to 64", None, lambda: suites.nno_recursion(64)),
]


def evaluate(number, title, limit, run):
    start = time.perf_counter()
    report = run()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    ok = report.ok and in_time
    budget = f" / {limit}s" if limit else ""
    line = (f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}: "
            f"{report.passed} passed, {report.failed} failed, {elapsed:.1f}s{budget}")
    return ok, line, report


@pytest.mark.parametrize("number,title,limit,run", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, limit, run, capsys):
    ok, line, report = evaluate(number, title, limit, run)
    with capsys.disabled():
        print("\n" + line)
    assert ok, [(c.name, c.detail) for c in report.failures()[:5]]


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line, _ in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _, _ in results) else 1)
