import pytest

from errors import UnknownSuiteError
from suites import (
    CATALOG,
    INFO,
    RuntimeClass,
    SuiteContext,
    SuiteStep,
    TheoremSuite,
    get_suite,
    run_suite,
    select_suites,
)

SECONDS = ["example-2.2", "example-joined-6-cycles", "thm-3.5", "prop-2.11"]


def test_select_by_runtime_class():
    assert [s.id for s in select_suites(RuntimeClass.SECONDS)] == SECONDS
    minutes = [s.id for s in select_suites(RuntimeClass.MINUTES)]
    assert "remark-9cycle" not in minutes
    assert set(SECONDS) < set(minutes)
    assert len(select_suites(RuntimeClass.EXTENDED)) == len(CATALOG)


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        get_suite("thm-9.9")


@pytest.mark.parametrize("suite_id", SECONDS)
def test_fast_suites_verify(suite_id):
    report = run_suite(get_suite(suite_id), SuiteContext())
    failed = [step.name for step in report.steps if not step.passed]
    assert failed == []
    assert report.to_json()["status"] == "verified"


def test_failing_and_raising_steps_refute():
    def boom():
        raise ValueError("bad input")

    steps = [
        SuiteStep("wrong value", lambda: 1, 2, "PAPER"),
        SuiteStep("raises", boom, True, "PAPER"),
        SuiteStep("informational", lambda: 5, None, INFO),
    ]
    report = run_suite(TheoremSuite("demo", "demo", RuntimeClass.SECONDS, lambda ctx: steps))
    assert [step.passed for step in report.steps] == [False, False, True]
    assert report.steps[1].error == "ValueError: bad input"
    doc = report.to_json()
    assert doc["status"] == "refuted"
    assert doc["steps"][2]["actual"] == 5


@pytest.mark.slow
@pytest.mark.parametrize("suite_id", ["prop-4.3", "prop-4.10", "prop-4.9", "remark-2.12"])
def test_minutes_suites_verify(suite_id):
    assert run_suite(get_suite(suite_id), SuiteContext(jobs=2)).verified


def test_variable_cube_is_searched_only_when_extended():
    suite = get_suite("prop-4.9")
    quick = suite.build_steps(SuiteContext())[-1]
    full = suite.build_steps(SuiteContext(extended=True))[-1]
    assert quick.provenance == INFO
    assert quick.action() == 10
    assert full.provenance == "PAPER"
    assert full.expected == "exhausted_negative"
    assert full.name.startswith("(x1,x2,x3)^3")
