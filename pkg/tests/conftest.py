"""Test fixtures: FastAPI TestClient, seeded RNG, term factories."""
import os
import random
from pathlib import Path
from typing import Callable, Generator

import pytest

# Lift the rate limit BEFORE the app is imported; the limiter reads it at import time
os.environ["NOMDIAG_RATE_LIMIT"] = "100000/minute"
os.environ.setdefault("LOG_LEVEL", "WARNING")

from fastapi.testclient import TestClient

from nomdiag import nmt, smt
from nomdiag.constants import DEFAULT_SEED
from nomdiag.main import app
from nomdiag.parser import parse_nmt, parse_smt


@pytest.fixture()
def client() -> Generator[TestClient, None, None]:
    """Provide a TestClient instance."""
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def rng() -> random.Random:
    """A freshly seeded random source."""
    return random.Random(DEFAULT_SEED)


@pytest.fixture()
def term_file(tmp_path: Path) -> Callable[[str], str]:
    """Factory: write a term to a file and return its path."""
    counter = iter(range(1_000))

    def write(text: str) -> str:
        path = tmp_path / f"term{next(counter)}.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def nom(text: str) -> nmt.NmtTerm:
    """Parse a nominal term, machine names allowed."""
    return parse_nmt(text, allow_machine=True)


def ordered(text: str) -> smt.SmtTerm:
    """Parse an ordered term."""
    return parse_smt(text)
