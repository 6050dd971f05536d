"""Acceptance criteria, each run at full scale with its stated tolerance.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary so they show up even when output is captured.
"""

import pytest

from homconn.suites import ACCEPTANCE, run_suite

TITLES = {
    1: "orbit invariance of the canonical chart",
    2: "boundary identification P ~ -P",
    3: "chart bijection and boundary gluing",
    4: "stratum correspondence",
    5: "rank-one sextic identity",
    6: "double cover properties",
    7: "differential of the cover",
    8: "solution-space dimension table",
    9: "axial moduli",
    10: "su(2) to so(3) orbit bijection",
    11: "CLI determinism",
}

LINES = []


@pytest.mark.parametrize("criterion", sorted(ACCEPTANCE))
def test_criterion(criterion):
    result = run_suite(ACCEPTANCE[criterion], seed=0, scale="full")
    line = f"[{'PASS' if result.passed else 'FAIL'}] criterion {criterion:2d} ({TITLES[criterion]}): {result.line()}"
    LINES.append(line)
    print(line)
    assert result.passed, line
