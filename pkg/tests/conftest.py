from pathlib import Path

import pytest

from vptkit.fileformat import load_machine

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load(name: str):
    return load_machine(FIXTURES / name)


def fig1_word(m, n: int):
    return m.alphabet.word(["c1"] + ["c2"] * n + ["c3", "r3"] + ["r2"] * n + ["r1"])


def fig1_formulas(n: int) -> tuple[str, str]:
    """The two closed forms for the fig1.vpt output, one per branch."""
    return "dfcab" + "cabcab" * n + "gh", "dfc" + "abc" * n + "ab" + "cab" * n + "gh"


@pytest.fixture(scope="session")
def fig1():
    return load("fig1.vpt")


@pytest.fixture(scope="session")
def fig1_mutated():
    return load("fig1_mutated.vpt")
