import random
from collections import OrderedDict

import pytest

from assurkit import corpus
from assurkit.rigidity import is_pinned_isostatic

_criteria: "OrderedDict[str, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            cid, title = m.args
            _criteria.setdefault(cid, {"title": title, "outcomes": []})


def pytest_runtest_logreport(report):
    cid = getattr(report, "criterion", None)
    if cid is None:
        return
    # record the call phase, or a setup/teardown phase that went wrong
    if report.when == "call" or report.outcome != "passed":
        _criteria[cid]["outcomes"].append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid, info in sorted(_criteria.items(), key=lambda kv: int(kv[0][2:])):
        outs = info["outcomes"]
        ok = bool(outs) and all(o == "passed" for o in outs)
        status = "PASS" if ok else ("NOT RUN" if not outs else "FAIL")
        terminalreporter.write_line(f"{cid}: {status}  {info['title']}")


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def corpus_graphs():
    return {name: corpus.load(name) for name in corpus.names()}


@pytest.fixture(scope="session")
def isostatic_corpus(corpus_graphs):
    return {n: g for n, g in corpus_graphs.items() if is_pinned_isostatic(g).isostatic}
