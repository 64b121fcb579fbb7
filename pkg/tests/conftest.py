import inspect
import sys
from pathlib import Path

import pytest

from superbubble import detector as D
from superbubble._accel import HAS_NUMBA
from superbubble.graph import load_edge_list

DATA = Path(__file__).parent / "data"

GOLDEN_RANKS = dict(zip([f"v{i}" for i in range(1, 16)], [1, 2, 3, 11, 6, 8, 10, 12, 7, 9, 4, 5, 13, 15, 14]))


@pytest.fixture(scope="session")
def golden():
    g, dups = load_edge_list((DATA / "golden15.txt").read_bytes())
    assert dups == 0
    return g


def mutant_detect(*edits):
    """A ``detect`` whose scan kernel has the given source edits applied."""
    src = inspect.getsource(getattr(D._scan, "py_func", D._scan))
    src = "\n".join(line for line in src.splitlines() if not line.startswith("@"))
    for old, new in edits:
        assert old in src, old
        src = src.replace(old, new)
    ns = dict(vars(D))
    exec(src, ns)
    kernel = ns["_scan"]
    if HAS_NUMBA:
        import numba

        kernel = numba.njit(kernel)

    def detect_fn(g):
        p = D.prepare(g)
        rep_s, rep_t, calls, _ = D._run_scan(p, False, kernel)
        return D._assemble(p.aug, rep_s, rep_t, calls)

    return detect_fn


SKIP_ALT_WRITES = (("alt[s] = valid", "pass"),)
LITERAL_VALID_CHECK = (
    ("found = False", "found = False\n                    valid = NO_BUBBLE"),
    ("if found:", "if valid == s:"),
)
NO_NESTED_CALLS = (("elif role[tail] == EXIT:", "elif False:"),)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[k])
