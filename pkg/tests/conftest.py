import sys
from pathlib import Path

import hypothesis
import pytest

from eiscong.newform import FIXTURE_CURVES, WeierstrassCurve, newform_from_curve

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=25, deadline=None)
hypothesis.settings.load_profile("ci")

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "scripts"))

BOUND = 200


@pytest.fixture(scope="session")
def curves():
    return {label: WeierstrassCurve.fixture(label) for label in FIXTURE_CURVES}


@pytest.fixture(scope="session")
def newforms(curves):
    """Newform data regenerated from the curve models by point counting."""
    return {
        label: newform_from_curve(c, BOUND, allow_additive=(label == "99d1"), optimal=True)
        for label, c in curves.items()
    }


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    from make_fixtures import make_fixtures

    d = tmp_path_factory.mktemp("fixtures")
    make_fixtures(d, BOUND)
    return d


@pytest.fixture
def acceptance_line(request):
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
