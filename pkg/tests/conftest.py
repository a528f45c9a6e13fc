import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weightlab.double_complex import PAIRS, build_pair  # noqa: E402
from weightlab.io import bundled_models, bundled_path, load_model  # noqa: E402

NCD_NAMES = [n for n in bundled_models() if not n.startswith("plumbing_")]
PLUMBING_NAMES = [n for n in bundled_models() if n.startswith("plumbing_")]
GEOMETRIC = [n for n in NCD_NAMES if n != "sphere_empty_divisor"]


@lru_cache(maxsize=None)
def model(name: str):
    return load_model(bundled_path(name))


@lru_cache(maxsize=None)
def pair_complex(name: str, pair: str):
    return build_pair(model(name), pair)


def pairs_of(name: str) -> tuple:
    return PAIRS if model(name).X is not None else ("Y",)


def model_pairs(names=NCD_NAMES, exclude=()):
    return [(n, p) for n in names for p in pairs_of(n) if p not in exclude]


@pytest.fixture
def cached_model():
    return model


@pytest.fixture
def cached_pair():
    return pair_complex


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
