import json
from pathlib import Path

import pytest

import abstracta
from abstracta.abstraction import load_json

EXAMPLES = Path(abstracta.__file__).parent / "examples"


@pytest.fixture(scope="session")
def examples_dir() -> Path:
    return EXAMPLES


@pytest.fixture(scope="session")
def comp_counter():
    return load_json((EXAMPLES / "comp_counter_dual.json").read_text())


def load_example(name: str):
    return load_json((EXAMPLES / name).read_text())
