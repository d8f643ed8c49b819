from pathlib import Path

import pytest

from loopbench import oeis

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def sequences():
    return oeis.load_stripped(FIXTURES / "stripped")


@pytest.fixture(scope="session")
def solutions():
    return oeis.load_solutions(FIXTURES / "solutions.tsv")


@pytest.fixture
def problems(solutions, sequences):
    # Rebuilt per test: problem records are mutated by verify/classify.
    return oeis.build_problems(solutions, sequences)


@pytest.fixture
def problems_by_id(problems):
    return {p.id: p for p in problems}
