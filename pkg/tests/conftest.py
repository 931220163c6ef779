import sys
import textwrap
from pathlib import Path

import numpy as np
import pytest

from absa.sim_harness import RunRecord, SimulatorSpec


def stub_records(requests, outputs, fn):
    """Records for ``requests`` whose outputs come from ``fn(rng, parameters)``.

    The generator is seeded from each request's own seed, so a stub behaves
    like a simulator that honours the seeding contract.
    """
    records = []
    for req in requests:
        rng = np.random.default_rng(req.seed)
        values = fn(rng, req.parameters)
        records.append(RunRecord(req, dict(zip(outputs, values))))
    return records


def iid_normal(rng, _params):
    return rng.normal(size=2).tolist()


@pytest.fixture
def fake_sim(tmp_path):
    """Write a scripted external simulator and return a factory of specs for it.

    Behaviour is chosen per run by the ``mode`` parameter:
    0 ok, 1 nonzero exit, 2 malformed output, 3 sleep past the timeout.
    """
    script = tmp_path / "fake_sim.py"
    script.write_text(
        textwrap.dedent(
            """
            import sys, time
            mode, x, seed = int(float(sys.argv[1])), float(sys.argv[2]), int(sys.argv[3])
            if mode == 1:
                sys.exit(4)
            if mode == 2:
                print("X1")
                print("abc")
                sys.exit(0)
            if mode == 3:
                time.sleep(5)
            print("X1,X2")
            print(f"{x * 2},{seed % 1000}")
            """
        )
    )

    def make(timeout=None):
        return SimulatorSpec(
            "external",
            ("X1", "X2"),
            ("mode", "x"),
            command=f"{sys.executable} {script} {{param:mode}} {{param:x}} {{seed}}",
            workdir=str(tmp_path),
            timeout=timeout,
        )

    return make


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number, ok, title, detail, seconds):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title} ({detail}; {seconds:.1f}s)"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
