import pytest

from termweight import _accel
from termweight.corpus import Corpus, Document, Label

BACKENDS = [False, True] if _accel.HAVE_NUMBA else [False]


@pytest.fixture(params=BACKENDS, ids=lambda b: "numba" if b else "numpy")
def use_numba(request):
    return request.param


def make_corpus(pairs):
    """Corpus from (label, text) pairs with label 'pos'/'neg'."""
    return Corpus(tuple(
        Document(f"d{i}", Label.POSITIVE if lab == "pos" else Label.NEGATIVE, text)
        for i, (lab, text) in enumerate(pairs)))


def planted_corpus(n_per_class=20, seed=0):
    """Classes separated by a single keyword; everything else is shared filler."""
    import numpy as np

    rng = np.random.default_rng(seed)
    filler = [f"f{i}" for i in range(30)]
    pairs = []
    for i in range(n_per_class):
        for lab, key in (("pos", "alpha"), ("neg", "omega")):
            words = list(rng.choice(filler, size=8)) + [key]
            rng.shuffle(words)
            pairs.append((lab, " ".join(words)))
    return make_corpus(pairs)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the outcome comes from the test result."""
    info = {}
    yield info
    ACCEPTANCE_LINES.append((request.node.nodeid, info))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and "criterion" in item.fixturenames:
        item.funcargs["criterion"]["outcome"] = (
            "SKIP" if rep.skipped else "PASS" if rep.passed else "FAIL")
    elif rep.when == "setup" and rep.skipped and "criterion" in item.fixturenames:
        reason = rep.longrepr[2] if isinstance(rep.longrepr, tuple) else ""
        ACCEPTANCE_LINES.append((item.nodeid, {"outcome": "SKIP", "name": item.name,
                                               "detail": reason}))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, info in ACCEPTANCE_LINES:
        outcome = info.get("outcome", "SKIP")
        terminalreporter.write_line(
            f"[{outcome}] {info.get('name', nodeid)}: {info.get('detail', '')}")
