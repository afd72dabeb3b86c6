from __future__ import annotations

import os

import pytest

from src.arraycode import paper_example
from src.constructions import construction1, construction2
from src.designs import load_steiner
from src.verifier import load_certificate

DATA = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


@pytest.fixture
def paper_code():
    return paper_example()


@pytest.fixture
def paper_cert():
    with open(data_path("example_7x4.cert.json"), "rb") as f:
        return load_certificate(f.read())


@pytest.fixture
def fano():
    with open(data_path("fano_s2_3_7.json"), "rb") as f:
        return load_steiner(f.read())


@pytest.fixture(scope="session")
def c1_small():
    return construction1(2, 1)


@pytest.fixture(scope="session")
def c2_small():
    return construction2(3, 1)
