from __future__ import annotations

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion that ran in this session."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if not m or (rep.when != "call" and outcome == "passed"):
                continue
            detail = dict(getattr(rep, "user_properties", [])).get("detail", "")
            status = "PASS" if outcome == "passed" else "FAIL"
            rows[int(m.group(1))] = (status, m.group(2).replace("_", " "), detail)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows):
        status, name, detail = rows[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}  {name}" + (f" - {detail}" if detail else ""))
