import pytest

import uncstat as u


def load(name):
    data_path, config_path = u.dataset_paths(name)
    return u.ingest(data_path, config_path)


@pytest.fixture(scope="session")
def example1():
    return load("example1")


@pytest.fixture(scope="session")
def example2():
    return load("example2")


@pytest.fixture(scope="session")
def example3():
    return load("example3")


@pytest.fixture(scope="session")
def toothmarks():
    return load("toothmarks")


@pytest.fixture(scope="session")
def example1_report(example1):
    samples, config = example1
    return u.run_pipeline(samples, config)


@pytest.fixture(scope="session")
def example2_report(example2):
    samples, config = example2
    return u.run_pipeline(samples, config)


@pytest.fixture(scope="session")
def example3_report(example3):
    samples, config = example3
    return u.run_pipeline(samples, config)


@pytest.fixture(scope="session")
def toothmarks_report(toothmarks):
    samples, config = toothmarks
    return u.run_pipeline(samples, config)
