"""Terminal summary: one verdict line per acceptance criterion."""

import re

CRITERIA = {
    1: "golden pill structure",
    2: "golden weights",
    3: "oracle equivalence",
    4: "invariant battery",
    5: "linear-time scaling",
    6: "synthetic boundary recovery",
    7: "tolerant-delay monotonicity",
    8: "evaluator brute-force agreement",
    9: "proprietary dataset reproduction",
}

_NODE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts = {}
    for outcome, label in (("failed", "FAIL"), ("error", "FAIL"),
                           ("skipped", "WAIVED"), ("passed", "PASS")):
        for report in terminalreporter.stats.get(outcome, []):
            found = _NODE.search(getattr(report, "nodeid", ""))
            if found:
                number = int(found.group(1))
                # failures win over passes from other phases of the same test
                if verdicts.get(number) != "FAIL":
                    verdicts[number] = label
    if not verdicts:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(verdicts):
        title = CRITERIA.get(number, "")
        terminalreporter.write_line(
            f"criterion {number} ({title}): {verdicts[number]}"
        )
