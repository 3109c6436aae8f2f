import pytest

from roughmetric import EpSequence, build_space, paper_example_spec


@pytest.fixture(scope="session")
def paper4():
    return build_space(paper_example_spec(4))


@pytest.fixture(scope="session")
def paper6():
    return build_space(paper_example_spec(6))


@pytest.fixture(scope="session")
def paper10():
    return build_space(paper_example_spec(10))


@pytest.fixture(scope="session")
def xi():
    """The alternating 2,3,2,3,... sequence."""
    return EpSequence(cycle=(2, 3))
